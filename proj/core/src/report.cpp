#include "wearauth/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "wearauth/error.hpp"

namespace wearauth {

std::string format_fixed2(double value) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return buf;
}

std::string format_fcd2(std::size_t n_t, std::size_t n) {
  if (n_t == 0 || n > n_t) {
    throw DomainError("fcd requires 0 <= n <= n_t");
  }
  // (n_t - n)/n_t * 100, rounded half-up at the second decimal.
  const std::size_t numerator = (n_t - n) * 10000;
  std::size_t scaled = numerator / n_t;
  if ((numerator % n_t) * 2 >= n_t) {
    ++scaled;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%zu.%02zu", scaled / 100, scaled % 100);
  return buf;
}

namespace {

std::string mean_sd_cell(double mean, double sd) {
  return format_fixed2(mean) + " (" + format_fixed2(sd) + ")";
}

std::string best_cell(const SummaryRow& row) {
  std::ostringstream out;
  out << format_fixed2(row.best_acc) << " (" << row.best_combo << ','
      << row.best_n << ',' << row.best_subjects << ',' << row.best_windows
      << ')';
  return out.str();
}

}  // namespace

std::string render_summary_table(const std::vector<SummaryRow>& rows) {
  const std::vector<std::string> header = {
      "l", "Approach", "mean (SD) ACC", "mean (SD) FCD",
      "Best biometric's mean ACC (b,n,N,|W|)"};
  std::vector<std::vector<std::string>> cells;
  for (const SummaryRow& row : rows) {
    cells.push_back({std::to_string(row.period_code), row.approach_label,
                     mean_sd_cell(row.mean_acc, row.sd_acc),
                     mean_sd_cell(row.mean_fcd, row.sd_fcd), best_cell(row)});
  }

  std::vector<std::size_t> widths(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    widths[c] = header[c].size();
    for (const auto& row : cells) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }

  auto emit_row = [&](const std::vector<std::string>& row,
                      std::ostringstream& out) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c == 0 ? "" : " | ");
      out << row[c];
      if (c + 1 < row.size()) {
        out << std::string(widths[c] - row[c].size(), ' ');
      }
    }
    out << '\n';
  };

  std::ostringstream out;
  emit_row(header, out);
  for (std::size_t c = 0; c < widths.size(); ++c) {
    out << (c == 0 ? "" : "-+-") << std::string(widths[c], '-');
  }
  out << '\n';
  for (const auto& row : cells) {
    emit_row(row, out);
  }
  return out.str();
}

SummaryRow summarize(const std::vector<ComboOutcome>& outcomes,
                     PeriodKind period, Approach approach) {
  SummaryRow row;
  row.period_code = code(period);
  row.approach_label = approach == Approach::kKs ? "KS" : "COV";

  std::vector<double> accs;
  std::vector<double> fcds;
  const CohortReport* best = nullptr;
  for (const ComboOutcome& outcome : outcomes) {
    if (!outcome.ok) {
      continue;
    }
    accs.push_back(outcome.report.mean_acc);
    fcds.push_back(outcome.report.fcd);
    if (best == nullptr || outcome.report.mean_acc > best->mean_acc) {
      best = &outcome.report;
    }
  }
  auto mean_sd = [](const std::vector<double>& values) {
    std::pair<double, double> out{0.0, 0.0};
    if (values.empty()) {
      return out;
    }
    for (double v : values) {
      out.first += v;
    }
    out.first /= static_cast<double>(values.size());
    if (values.size() > 1) {
      double ss = 0.0;
      for (double v : values) {
        ss += (v - out.first) * (v - out.first);
      }
      out.second = std::sqrt(ss / (static_cast<double>(values.size()) - 1.0));
    }
    return out;
  };
  std::tie(row.mean_acc, row.sd_acc) = mean_sd(accs);
  std::tie(row.mean_fcd, row.sd_fcd) = mean_sd(fcds);
  if (best != nullptr) {
    row.best_acc = best->mean_acc;
    row.best_combo = best->combo.str();
    row.best_n = best->n_features;
    row.best_subjects = best->eligible;
    row.best_windows = best->mean_windows;
  }
  return row;
}

void write_subject_csv(const std::vector<ComboOutcome>& outcomes,
                       std::ostream& out, const std::string& manifest_digest) {
  if (!manifest_digest.empty()) {
    out << "# manifest: " << manifest_digest << '\n';
  }
  out << "combo,subject,evaluated,skip_reason,windows,tp,tn,fp,fn,acc,gar,"
         "far,n,n_t,fcd\n";
  for (const ComboOutcome& outcome : outcomes) {
    if (!outcome.ok) {
      out << outcome.combo.str() << ",,0," << outcome.failure
          << ",0,0,0,0,0,,,,,," << '\n';
      continue;
    }
    for (const SubjectRow& row : outcome.report.rows) {
      out << outcome.combo.str() << ',' << row.subject << ','
          << (row.evaluated ? 1 : 0) << ',' << row.skip_reason << ','
          << row.metrics.windows << ',' << row.counts.tp << ','
          << row.counts.tn << ',' << row.counts.fp << ',' << row.counts.fn
          << ',';
      if (row.evaluated) {
        char rate[16];
        std::snprintf(rate, sizeof(rate), "%.4f", row.metrics.gar);
        out << format_fixed2(row.metrics.acc) << ',' << rate << ',';
        std::snprintf(rate, sizeof(rate), "%.4f", row.metrics.far);
        out << rate << ',' << row.metrics.n << ',' << row.metrics.n_t << ','
            << format_fcd2(row.metrics.n_t, row.metrics.n);
      } else {
        out << ",,,,,";
      }
      out << '\n';
    }
  }
}

void write_sweep_csv(const SweepReport& report, std::ostream& out,
                     const std::string& manifest_digest) {
  if (!manifest_digest.empty()) {
    out << "# manifest: " << manifest_digest << '\n';
  }
  out << "x_sigma_t,mean_acc,sd_acc,mean_fcd,sd_fcd\n";
  for (const SweepRow& row : report.rows) {
    out << row.x_sigma_t << ',' << format_fixed2(row.mean_acc) << ','
        << format_fixed2(row.sd_acc) << ',' << format_fixed2(row.mean_fcd)
        << ',' << format_fixed2(row.sd_fcd) << '\n';
  }
  out << "# chosen_threshold: " << report.chosen_threshold << '\n';
}

}  // namespace wearauth
