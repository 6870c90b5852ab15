#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wearauth/selection.hpp"
#include "wearauth/svm.hpp"
#include "wearauth/types.hpp"

namespace wearauth {

/// Everything one authentication experiment needs: the slice under test,
/// selection settings, dataset rules, and the seed that makes reruns
/// byte-identical. The top-level seed also seeds KS pair sampling and
/// per-subject dataset draws and training.
struct ExperimentConfig {
  PeriodKind period = PeriodKind::kNonSedentary;
  BiometricCombo combo = BiometricCombo::parse("CSMH");
  Approach approach = Approach::kKsCov;
  CovConfig cov;
  KsConfig ks;
  TrainConfig train;
  CovMode cov_mode = CovMode::kSubjectMeans;
  std::size_t windows_per_subject_cap = 480;  // genuine windows per subject
  int min_window_multiple = 10;               // dataset >= multiple * n
  double split = 0.75;                        // train fraction
  double acc_slack = 2.0;  // pp below max ACC tolerated when picking x
  std::uint64_t seed = 0;
};

/// Positive class is the genuine subject.
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t total() const { return tp + tn + fp + fn; }
};

struct MetricsReport {
  double acc = 0.0;       // percent
  double gar = 0.0;       // TP / (TP + FN)
  double far = 0.0;       // FP / (FP + TN)
  double fcd = 0.0;       // percent, (n_t - n)/n_t * 100
  std::size_t n = 0;      // selected feature count
  std::size_t n_t = 0;    // 124 sedentary / 125 non-sedentary
  std::size_t subjects = 0;  // N, filled at cohort level
  std::size_t windows = 0;   // |W|, dataset windows for this classifier
};

/// Maximal feature count of a period: all four biometrics, plus the
/// activity-level feature when non-sedentary.
std::size_t max_feature_count(PeriodKind period);
MetricsReport compute_metrics(const ConfusionCounts& counts, std::size_t n,
                              PeriodKind period);
double fcd_percent(std::size_t n_t, std::size_t n);

struct DatasetSplit {
  std::vector<std::vector<double>> x;  // projected onto kept features
  std::vector<int> y;                  // +1 genuine, -1 impostor
};

struct SubjectDataset {
  DatasetSplit train;
  DatasetSplit test;
  std::size_t total_windows() const {
    return train.y.size() + test.y.size();
  }
};

struct BuildOutcome {
  std::optional<SubjectDataset> dataset;
  std::string skip_reason;  // set when no dataset was built
};

/// Builds the balanced train/test split for one genuine subject: equal
/// genuine window counts per activity level (capped), an equal-sized
/// impostor draw pooled over the other subjects and stratified by level,
/// a window-count floor of min_window_multiple * n, and a 75/25 split
/// stratified by class. Seeded per subject, so outcomes are independent of
/// evaluation order. Failing a rule yields a skip reason, not an error.
BuildOutcome build_dataset(const SubjectVectors& vectors,
                           const std::string& target,
                           const SelectionResult& selection,
                           const ExperimentConfig& cfg);

struct SubjectEvaluation {
  ConfusionCounts counts;
  MetricsReport metrics;
  SvmModel model;
};

/// Trains on the train split (standardized) and scores the test split.
SubjectEvaluation evaluate_subject(const SubjectDataset& dataset,
                                   const std::string& subject,
                                   const SelectionResult& selection,
                                   const ExperimentConfig& cfg);

struct SubjectRow {
  std::string subject;
  bool evaluated = false;
  std::string skip_reason;
  ConfusionCounts counts;
  MetricsReport metrics;
};

struct CohortReport {
  PeriodKind period = PeriodKind::kSedentary;
  BiometricCombo combo;
  Approach approach = Approach::kKs;
  std::optional<int> x_sigma_t;
  SelectionResult selection;
  std::vector<SubjectRow> rows;       // one per subject, skipped or not
  std::vector<SvmModel> models;       // one per evaluated subject
  double mean_acc = 0.0;              // over evaluated subjects
  double sd_acc = 0.0;
  double fcd = 0.0;                   // one value per run
  std::size_t n_features = 0;
  std::size_t n_t = 0;
  std::size_t eligible = 0;           // N
  std::size_t mean_windows = 0;       // |W|, mean dataset size, rounded
};

/// Selects features, then builds and evaluates every subject's
/// authenticator. Throws EmptySelectionError when selection keeps nothing
/// and DomainError when fewer than two subjects are eligible.
CohortReport run_cohort(const SubjectVectors& vectors,
                        const ExperimentConfig& cfg);

/// run_cohort with a precomputed selection (the sweep reuses screening
/// results across thresholds).
CohortReport run_cohort_with_selection(const SubjectVectors& vectors,
                                       const SelectionResult& selection,
                                       const ExperimentConfig& cfg);

struct SweepRow {
  int x_sigma_t = 0;
  double mean_acc = 0.0;  // over combos with >= 2 eligible subjects
  double sd_acc = 0.0;
  double mean_fcd = 0.0;  // over combos passing KS screening
  double sd_fcd = 0.0;
};

struct SweepReport {
  std::vector<SweepRow> rows;  // one per grid value, ascending
  int chosen_threshold = 0;
  double acc_slack = 2.0;
  std::vector<std::string> failures;  // per-combo notes (e.g. empty KS)
};

/// Runs the KS+COV pipeline for every x in the grid across all 15 combos
/// and averages ACC/FCD per grid value. The chosen threshold is the
/// largest grid value whose mean ACC stays within acc_slack percentage
/// points of the grid maximum.
SweepReport sweep_threshold(const std::vector<WindowFeatures>& features,
                            const ExperimentConfig& base);

struct ComboOutcome {
  BiometricCombo combo;
  bool ok = false;
  std::string failure;  // set when !ok
  CohortReport report;  // valid when ok
};

/// One (period, approach) pass over a set of combos; empty-selection and
/// too-few-subjects failures become documented rows instead of aborting
/// the other combos.
std::vector<ComboOutcome> run_all_combos(
    const std::vector<WindowFeatures>& features, const ExperimentConfig& cfg,
    const std::vector<BiometricCombo>& combos);

}  // namespace wearauth
