#include "wearauth/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <json.hpp>

#include "wearauth/error.hpp"

namespace wearauth {

namespace {

// Survival function of the Kolmogorov distribution. The alternating series
// converges fast for large lambda; for small lambda the Jacobi-theta
// transform of the same sum is used, where the direct series loses
// precision.
double kolmogorov_q(double lambda) {
  if (lambda <= 1e-10) {
    return 1.0;
  }
  if (lambda < 1.18) {
    const double t = std::numbers::pi * std::numbers::pi /
                     (8.0 * lambda * lambda);
    double cdf = 0.0;
    for (int j = 1; j <= 19; j += 2) {
      cdf += std::exp(-static_cast<double>(j) * j * t);
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
    return 1.0 - cdf;
  }
  double q = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term =
        std::exp(-2.0 * static_cast<double>(j) * j * lambda * lambda);
    q += sign * term;
    if (term < 1e-16) {
      break;
    }
    sign = -sign;
  }
  return 2.0 * q;
}

// Subject pairs to test, all of them or a seeded sample of max_pairs.
std::vector<std::pair<std::size_t, std::size_t>> sample_pairs(
    std::size_t n_subjects, const KsConfig& cfg) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n_subjects; ++i) {
    for (std::size_t j = i + 1; j < n_subjects; ++j) {
      pairs.emplace_back(i, j);
    }
  }
  if (pairs.size() > cfg.max_pairs) {
    std::mt19937_64 rng(cfg.seed);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    pairs.resize(cfg.max_pairs);
    std::sort(pairs.begin(), pairs.end());
  }
  return pairs;
}

}  // namespace

std::string approach_str(Approach approach) {
  return approach == Approach::kKs ? "ks" : "ks-cov";
}

Approach approach_parse(std::string_view text) {
  if (text == "ks" || text == "KS") {
    return Approach::kKs;
  }
  if (text == "ks-cov" || text == "ks_cov" || text == "KS_COV" ||
      text == "cov" || text == "COV") {
    return Approach::kKsCov;
  }
  throw DomainError("unknown approach '" + std::string(text) + "'");
}

SubjectVectors group_by_subject(const std::vector<WindowFeatures>& features,
                                BiometricCombo combo) {
  SubjectVectors out;
  for (const WindowFeatures& wf : features) {
    out[wf.subject].push_back(slice_vector(wf, combo));
  }
  for (auto& [subject, vectors] : out) {
    std::sort(vectors.begin(), vectors.end(),
              [](const FeatureVector& a, const FeatureVector& b) {
                return a.start < b.start;
              });
  }
  return out;
}

namespace {

// Sup-difference of empirical CDFs over pre-sorted samples.
double ks_statistic_sorted(std::span<const double> sa,
                           std::span<const double> sb) {
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  double d = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= x) {
      ++i;
    }
    while (j < sb.size() && sb[j] <= x) {
      ++j;
    }
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

KsResult ks_from_sorted(std::span<const double> sa,
                        std::span<const double> sb) {
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  const double d = ks_statistic_sorted(sa, sb);
  const double ne = na * nb / (na + nb);
  // Plain sqrt(ne)*D tracks the exact permutation tail to well under 0.01
  // at n=50 per side; the small-sample additive corrections found in older
  // references overshoot the mid-p region by 3-4 percentage points.
  const double lambda = std::sqrt(ne) * d;
  const double p = std::clamp(kolmogorov_q(lambda), 0.0, 1.0);
  return KsResult{d, p};
}

}  // namespace

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 5 || b.size() < 5) {
    throw DomainError("ks_two_sample requires at least 5 samples per side");
  }
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  return ks_from_sorted(sa, sb);
}

std::vector<FeatureId> ks_screen(const SubjectVectors& vectors,
                                 const KsConfig& cfg) {
  if (cfg.alpha <= 0.0 || cfg.alpha >= 1.0) {
    throw DomainError("alpha must be in (0,1)");
  }
  if (cfg.reject_fraction <= 0.0 || cfg.reject_fraction > 1.0) {
    throw DomainError("reject_fraction must be in (0,1]");
  }
  std::vector<const std::vector<FeatureVector>*> testable;
  BiometricCombo combo;
  PeriodKind period = PeriodKind::kSedentary;
  for (const auto& [subject, vs] : vectors) {
    if (vs.size() < 5) {
      continue;
    }
    combo = vs.front().combo;
    period = vs.front().period;
    testable.push_back(&vs);
  }
  if (testable.size() < 2) {
    throw DomainError("ks_screen requires >= 2 subjects with >= 5 vectors");
  }

  const auto candidates = candidate_features(combo, period);
  const auto pairs = sample_pairs(testable.size(), cfg);

  std::vector<FeatureId> kept;
  std::vector<std::vector<double>> columns(testable.size());
  for (std::size_t f = 0; f < candidates.size(); ++f) {
    // One sort per subject per feature; the pair loop reuses them.
    for (std::size_t s = 0; s < testable.size(); ++s) {
      columns[s].clear();
      for (const FeatureVector& v : *testable[s]) {
        columns[s].push_back(v.values[f]);
      }
      std::sort(columns[s].begin(), columns[s].end());
    }
    std::size_t rejections = 0;
    for (const auto& [i, j] : pairs) {
      if (ks_from_sorted(columns[i], columns[j]).p_value <= cfg.alpha) {
        ++rejections;
      }
    }
    const double fraction =
        static_cast<double>(rejections) / static_cast<double>(pairs.size());
    if (fraction >= cfg.reject_fraction) {
      kept.push_back(candidates[f]);
    }
  }
  return kept;
}

std::map<FeatureId, double> cov_rank(const SubjectVectors& vectors,
                                     std::span<const FeatureId> candidates,
                                     CovMode mode) {
  if (candidates.empty()) {
    throw DomainError("cov_rank requires a non-empty candidate list");
  }
  if (vectors.size() < 2) {
    throw DomainError("cov_rank requires >= 2 subjects");
  }
  const FeatureVector& first = vectors.begin()->second.front();
  const auto all = candidate_features(first.combo, first.period);
  auto index_of = [&](const FeatureId& id) {
    const auto it = std::find(all.begin(), all.end(), id);
    if (it == all.end()) {
      throw DomainError("candidate " + id.str() + " not in feature space");
    }
    return static_cast<std::size_t>(it - all.begin());
  };

  auto cov_of = [](const std::vector<double>& values) {
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) {
      mean += v;
    }
    mean /= n;
    if (mean == 0.0) {
      return 0.0;
    }
    double ss = 0.0;
    for (double v : values) {
      ss += (v - mean) * (v - mean);
    }
    const double sd = n > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    return sd / std::abs(mean);
  };

  std::map<FeatureId, double> covs;
  std::vector<double> spread;
  for (const FeatureId& id : candidates) {
    const std::size_t f = index_of(id);
    spread.clear();
    if (mode == CovMode::kSubjectMeans) {
      for (const auto& [subject, vs] : vectors) {
        double mean = 0.0;
        for (const FeatureVector& v : vs) {
          mean += v.values[f];
        }
        spread.push_back(mean / static_cast<double>(vs.size()));
      }
    } else {
      for (const auto& [subject, vs] : vectors) {
        for (const FeatureVector& v : vs) {
          spread.push_back(v.values[f]);
        }
      }
    }
    covs[id] = cov_of(spread);
  }
  return covs;
}

SelectionResult cov_select(const std::map<FeatureId, double>& covs,
                           const CovConfig& cfg, PeriodKind period,
                           BiometricCombo combo) {
  if (covs.empty()) {
    throw DomainError("cov_select requires a non-empty cov map");
  }
  if (std::find(kXSigmaTGrid.begin(), kXSigmaTGrid.end(), cfg.x_sigma_t) ==
      kXSigmaTGrid.end()) {
    throw DomainError("x_sigma_t must be in {10,20,...,90}");
  }
  double max_cov = 0.0;
  for (const auto& [id, cov] : covs) {
    max_cov = std::max(max_cov, cov);
  }
  const double threshold = static_cast<double>(cfg.x_sigma_t) / 100.0 *
                           max_cov;

  SelectionResult result;
  result.period = period;
  result.combo = combo;
  result.approach = Approach::kKsCov;
  result.x_sigma_t = cfg.x_sigma_t;
  result.per_feature_cov = covs;
  for (const auto& [id, cov] : covs) {
    if (cov > threshold) {
      result.kept.push_back(id);
    }
  }
  std::sort(result.kept.begin(), result.kept.end(),
            [&](const FeatureId& a, const FeatureId& b) {
              const double ca = covs.at(a);
              const double cb = covs.at(b);
              if (ca != cb) {
                return ca > cb;
              }
              return a < b;
            });
  return result;
}

SelectionResult select(Approach approach, PeriodKind period,
                       BiometricCombo combo, const SubjectVectors& vectors,
                       const KsConfig& ks_cfg, const CovConfig& cov_cfg,
                       CovMode cov_mode) {
  std::vector<FeatureId> survivors = ks_screen(vectors, ks_cfg);
  if (survivors.empty()) {
    throw EmptySelectionError("no significant feature");
  }
  if (approach == Approach::kKs) {
    SelectionResult result;
    result.period = period;
    result.combo = combo;
    result.approach = Approach::kKs;
    result.kept = std::move(survivors);
    return result;
  }
  const auto covs = cov_rank(vectors, survivors, cov_mode);
  SelectionResult result = cov_select(covs, cov_cfg, period, combo);
  if (result.kept.empty()) {
    throw EmptySelectionError("no feature above cov threshold");
  }
  return result;
}

void write_selection(const SelectionResult& result, std::ostream& out) {
  nlohmann::json doc;
  doc["approach"] = approach_str(result.approach);
  doc["period"] = code(result.period);
  doc["combo"] = result.combo.str();
  if (result.x_sigma_t) {
    doc["x_sigma_t"] = *result.x_sigma_t;
  }
  doc["n"] = result.kept.size();
  nlohmann::json kept = nlohmann::json::array();
  for (const FeatureId& id : result.kept) {
    kept.push_back(id.str());
  }
  doc["kept"] = kept;
  if (!result.per_feature_cov.empty()) {
    nlohmann::json covs = nlohmann::json::object();
    for (const auto& [id, cov] : result.per_feature_cov) {
      covs[id.str()] = cov;
    }
    doc["per_feature_cov"] = covs;
  }
  out << doc.dump(2) << '\n';
}

SelectionResult read_selection(std::istream& in) {
  nlohmann::json doc = nlohmann::json::parse(in);
  SelectionResult result;
  result.approach = approach_parse(doc.at("approach").get<std::string>());
  result.period = period_kind_from_code(doc.at("period").get<int>());
  result.combo = BiometricCombo::parse(doc.at("combo").get<std::string>());
  if (doc.contains("x_sigma_t")) {
    result.x_sigma_t = doc.at("x_sigma_t").get<int>();
  }
  for (const auto& entry : doc.at("kept")) {
    result.kept.push_back(FeatureId::parse(entry.get<std::string>()));
  }
  if (doc.contains("per_feature_cov")) {
    for (const auto& [key, value] : doc.at("per_feature_cov").items()) {
      result.per_feature_cov[FeatureId::parse(key)] = value.get<double>();
    }
  }
  return result;
}

}  // namespace wearauth
