#include "wearauth/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <random>
#include <thread>

#include "wearauth/error.hpp"

namespace wearauth {

namespace {

std::uint64_t mix64(std::uint64_t state) {
  state += 0x9e3779b97f4a7c15ULL;
  state = (state ^ (state >> 30)) * 0xbf58476d1ce4e5b9ULL;
  state = (state ^ (state >> 27)) * 0x94d049bb133111ebULL;
  return state ^ (state >> 31);
}

std::uint64_t subject_seed(std::uint64_t seed, const std::string& subject) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : subject) {
    h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
  }
  return mix64(seed ^ h);
}

std::pair<double, double> mean_sd(const std::vector<double>& values) {
  if (values.empty()) {
    return {0.0, 0.0};
  }
  double mean = 0.0;
  for (double v : values) {
    mean += v;
  }
  mean /= static_cast<double>(values.size());
  if (values.size() < 2) {
    return {mean, 0.0};
  }
  double ss = 0.0;
  for (double v : values) {
    ss += (v - mean) * (v - mean);
  }
  return {mean, std::sqrt(ss / (static_cast<double>(values.size()) - 1.0))};
}

// Index-based worker pool; exceptions are rethrown on the caller thread.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()),
                            n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      fn(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) {
            error = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& thread : pool) {
    thread.join();
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

std::vector<std::size_t> kept_indices(const SelectionResult& selection) {
  const auto all = candidate_features(selection.combo, selection.period);
  std::vector<std::size_t> indices;
  indices.reserve(selection.kept.size());
  for (const FeatureId& id : selection.kept) {
    const auto it = std::find(all.begin(), all.end(), id);
    if (it == all.end()) {
      throw DomainError("kept feature " + id.str() + " not in feature space");
    }
    indices.push_back(static_cast<std::size_t>(it - all.begin()));
  }
  return indices;
}

std::vector<double> project(const FeatureVector& vector,
                            const std::vector<std::size_t>& indices) {
  std::vector<double> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) {
    out.push_back(vector.values[i]);
  }
  return out;
}

}  // namespace

std::size_t max_feature_count(PeriodKind period) {
  return kFeatureCount * 4 + (period == PeriodKind::kNonSedentary ? 1 : 0);
}

double fcd_percent(std::size_t n_t, std::size_t n) {
  return 100.0 * static_cast<double>(n_t - n) / static_cast<double>(n_t);
}

MetricsReport compute_metrics(const ConfusionCounts& counts, std::size_t n,
                              PeriodKind period) {
  MetricsReport report;
  report.n = n;
  report.n_t = max_feature_count(period);
  report.fcd = fcd_percent(report.n_t, n);
  const std::size_t total = counts.total();
  report.acc = total == 0 ? 0.0
                          : 100.0 * static_cast<double>(counts.tp + counts.tn) /
                                static_cast<double>(total);
  const std::size_t genuine = counts.tp + counts.fn;
  const std::size_t impostor = counts.fp + counts.tn;
  report.gar = genuine == 0 ? 0.0
                            : static_cast<double>(counts.tp) /
                                  static_cast<double>(genuine);
  report.far = impostor == 0 ? 0.0
                             : static_cast<double>(counts.fp) /
                                   static_cast<double>(impostor);
  report.windows = total;
  return report;
}

BuildOutcome build_dataset(const SubjectVectors& vectors,
                           const std::string& target,
                           const SelectionResult& selection,
                           const ExperimentConfig& cfg) {
  if (cfg.split <= 0.0 || cfg.split >= 1.0) {
    throw DomainError("split must be in (0,1)");
  }
  if (cfg.min_window_multiple < 1) {
    throw DomainError("min_window_multiple must be >= 1");
  }
  BuildOutcome outcome;
  const auto target_it = vectors.find(target);
  if (target_it == vectors.end() || target_it->second.empty()) {
    outcome.skip_reason = "no windows for subject";
    return outcome;
  }

  const std::vector<ActivityLevel> levels = levels_of(cfg.period);
  std::map<ActivityLevel, std::vector<const FeatureVector*>> genuine_by_level;
  for (const FeatureVector& v : target_it->second) {
    genuine_by_level[v.level].push_back(&v);
  }

  // Equal genuine counts per level, capped by the per-subject budget.
  std::size_t per_level = cfg.windows_per_subject_cap / levels.size();
  for (ActivityLevel level : levels) {
    per_level = std::min(per_level, genuine_by_level[level].size());
  }
  if (per_level == 0) {
    outcome.skip_reason = "missing windows at some activity level";
    return outcome;
  }

  const std::size_t n = selection.n();
  const std::size_t total = 2 * per_level * levels.size();
  if (total < static_cast<std::size_t>(cfg.min_window_multiple) * n) {
    outcome.skip_reason =
        "window floor not met (" + std::to_string(total) + " < " +
        std::to_string(cfg.min_window_multiple) + "x" + std::to_string(n) +
        ")";
    return outcome;
  }

  std::mt19937_64 rng(subject_seed(cfg.seed, target));
  const auto indices = kept_indices(selection);

  std::vector<const FeatureVector*> genuine;
  std::vector<const FeatureVector*> impostor;
  for (ActivityLevel level : levels) {
    auto& candidates = genuine_by_level[level];
    std::shuffle(candidates.begin(), candidates.end(), rng);
    genuine.insert(genuine.end(), candidates.begin(),
                   candidates.begin() + static_cast<std::ptrdiff_t>(per_level));

    std::vector<const FeatureVector*> pool;
    for (const auto& [subject, vs] : vectors) {
      if (subject == target) {
        continue;
      }
      for (const FeatureVector& v : vs) {
        if (v.level == level) {
          pool.push_back(&v);
        }
      }
    }
    if (pool.size() < per_level) {
      outcome.skip_reason = "insufficient impostor windows";
      return outcome;
    }
    std::shuffle(pool.begin(), pool.end(), rng);
    impostor.insert(impostor.end(), pool.begin(),
                    pool.begin() + static_cast<std::ptrdiff_t>(per_level));
  }

  // 75/25 split, stratified by class.
  SubjectDataset dataset;
  auto split_class = [&](std::vector<const FeatureVector*>& members,
                         int label) {
    std::shuffle(members.begin(), members.end(), rng);
    const std::size_t train_count = static_cast<std::size_t>(
        std::llround(cfg.split * static_cast<double>(members.size())));
    for (std::size_t i = 0; i < members.size(); ++i) {
      DatasetSplit& side = i < train_count ? dataset.train : dataset.test;
      side.x.push_back(project(*members[i], indices));
      side.y.push_back(label);
    }
  };
  split_class(genuine, +1);
  split_class(impostor, -1);
  outcome.dataset = std::move(dataset);
  return outcome;
}

SubjectEvaluation evaluate_subject(const SubjectDataset& dataset,
                                   const std::string& subject,
                                   const SelectionResult& selection,
                                   const ExperimentConfig& cfg) {
  TrainConfig train_cfg = cfg.train;
  train_cfg.seed = subject_seed(cfg.seed ^ 0x7261696eULL, subject);

  SubjectEvaluation evaluation;
  evaluation.model =
      train_standardized(dataset.train.x, dataset.train.y, train_cfg);
  evaluation.model.subject = subject;
  evaluation.model.feature_ids = selection.kept;
  evaluation.model.combo = selection.combo;
  evaluation.model.period = selection.period;
  evaluation.model.approach = selection.approach;
  evaluation.model.x_sigma_t = selection.x_sigma_t;

  for (std::size_t i = 0; i < dataset.test.x.size(); ++i) {
    const bool genuine = predict_genuine(evaluation.model, dataset.test.x[i]);
    if (dataset.test.y[i] > 0) {
      genuine ? ++evaluation.counts.tp : ++evaluation.counts.fn;
    } else {
      genuine ? ++evaluation.counts.fp : ++evaluation.counts.tn;
    }
  }
  evaluation.metrics =
      compute_metrics(evaluation.counts, selection.n(), selection.period);
  evaluation.metrics.windows = dataset.total_windows();
  return evaluation;
}

CohortReport run_cohort(const SubjectVectors& vectors,
                        const ExperimentConfig& cfg) {
  KsConfig ks_cfg = cfg.ks;
  ks_cfg.seed = cfg.seed;
  const SelectionResult selection =
      select(cfg.approach, cfg.period, cfg.combo, vectors, ks_cfg, cfg.cov,
             cfg.cov_mode);
  return run_cohort_with_selection(vectors, selection, cfg);
}

CohortReport run_cohort_with_selection(const SubjectVectors& vectors,
                                       const SelectionResult& selection,
                                       const ExperimentConfig& cfg) {
  CohortReport report;
  report.period = selection.period;
  report.combo = selection.combo;
  report.approach = selection.approach;
  report.x_sigma_t = selection.x_sigma_t;
  report.selection = selection;
  report.n_features = selection.n();
  report.n_t = max_feature_count(selection.period);
  report.fcd = fcd_percent(report.n_t, report.n_features);

  std::vector<std::string> subjects;
  for (const auto& [subject, vs] : vectors) {
    subjects.push_back(subject);
  }
  std::vector<SubjectRow> rows(subjects.size());
  std::vector<std::optional<SvmModel>> models(subjects.size());
  parallel_for(subjects.size(), [&](std::size_t i) {
    SubjectRow row;
    row.subject = subjects[i];
    BuildOutcome outcome =
        build_dataset(vectors, subjects[i], selection, cfg);
    if (!outcome.dataset) {
      row.skip_reason = outcome.skip_reason;
    } else {
      SubjectEvaluation evaluation =
          evaluate_subject(*outcome.dataset, subjects[i], selection, cfg);
      row.evaluated = true;
      row.counts = evaluation.counts;
      row.metrics = evaluation.metrics;
      models[i] = std::move(evaluation.model);
    }
    rows[i] = std::move(row);
  });

  std::vector<double> accs;
  std::size_t window_sum = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].evaluated) {
      accs.push_back(rows[i].metrics.acc);
      window_sum += rows[i].metrics.windows;
      report.models.push_back(std::move(*models[i]));
    }
    report.rows.push_back(std::move(rows[i]));
  }
  report.eligible = accs.size();
  if (report.eligible < 2) {
    throw DomainError("fewer than 2 eligible subjects (" +
                      std::to_string(report.eligible) + ")");
  }
  const auto [mean, sd] = mean_sd(accs);
  report.mean_acc = mean;
  report.sd_acc = sd;
  report.mean_windows = static_cast<std::size_t>(std::llround(
      static_cast<double>(window_sum) / static_cast<double>(report.eligible)));
  for (SubjectRow& row : report.rows) {
    if (row.evaluated) {
      row.metrics.subjects = report.eligible;
    }
  }
  return report;
}

SweepReport sweep_threshold(const std::vector<WindowFeatures>& features,
                            const ExperimentConfig& base) {
  SweepReport report;
  report.acc_slack = base.acc_slack;

  struct ComboState {
    BiometricCombo combo;
    SubjectVectors vectors;
    std::map<FeatureId, double> covs;
  };
  std::vector<ComboState> states;
  for (const BiometricCombo& combo : BiometricCombo::all()) {
    ComboState state;
    state.combo = combo;
    state.vectors = group_by_subject(features, combo);
    KsConfig ks_cfg = base.ks;
    ks_cfg.seed = base.seed;
    std::vector<FeatureId> survivors;
    try {
      survivors = ks_screen(state.vectors, ks_cfg);
    } catch (const DomainError& e) {
      report.failures.push_back(combo.str() + ": " + e.what());
      continue;
    }
    if (survivors.empty()) {
      report.failures.push_back(combo.str() + ": no significant feature");
      continue;
    }
    state.covs = cov_rank(state.vectors, survivors, base.cov_mode);
    states.push_back(std::move(state));
  }

  for (int x : kXSigmaTGrid) {
    SweepRow row;
    row.x_sigma_t = x;
    std::vector<double> combo_accs;
    std::vector<double> combo_fcds;
    for (ComboState& state : states) {
      SelectionResult selection = cov_select(
          state.covs, CovConfig{x}, base.period, state.combo);
      if (selection.kept.empty()) {
        continue;
      }
      combo_fcds.push_back(fcd_percent(max_feature_count(base.period),
                                       selection.n()));
      ExperimentConfig cfg = base;
      cfg.combo = state.combo;
      cfg.approach = Approach::kKsCov;
      cfg.cov.x_sigma_t = x;
      try {
        const CohortReport cohort =
            run_cohort_with_selection(state.vectors, selection, cfg);
        combo_accs.push_back(cohort.mean_acc);
      } catch (const DomainError&) {
        // Too few eligible subjects at this threshold; FCD still counts.
      }
    }
    const auto [acc_mean, acc_sd] = mean_sd(combo_accs);
    const auto [fcd_mean, fcd_sd] = mean_sd(combo_fcds);
    row.mean_acc = acc_mean;
    row.sd_acc = acc_sd;
    row.mean_fcd = fcd_mean;
    row.sd_fcd = fcd_sd;
    report.rows.push_back(row);
  }

  double best_acc = 0.0;
  for (const SweepRow& row : report.rows) {
    best_acc = std::max(best_acc, row.mean_acc);
  }
  report.chosen_threshold = kXSigmaTGrid.front();
  for (const SweepRow& row : report.rows) {
    if (row.mean_acc >= best_acc - base.acc_slack) {
      report.chosen_threshold = row.x_sigma_t;
    }
  }
  return report;
}

std::vector<ComboOutcome> run_all_combos(
    const std::vector<WindowFeatures>& features, const ExperimentConfig& cfg,
    const std::vector<BiometricCombo>& combos) {
  std::vector<ComboOutcome> outcomes;
  for (const BiometricCombo& combo : combos) {
    ComboOutcome outcome;
    outcome.combo = combo;
    ExperimentConfig combo_cfg = cfg;
    combo_cfg.combo = combo;
    try {
      outcome.report =
          run_cohort(group_by_subject(features, combo), combo_cfg);
      outcome.ok = true;
    } catch (const EmptySelectionError& e) {
      outcome.failure = e.what();
    } catch (const DomainError& e) {
      outcome.failure = e.what();
    }
    outcomes.push_back(std::move(outcome));
  }
  return outcomes;
}

}  // namespace wearauth
