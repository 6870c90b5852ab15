#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wearauth/features.hpp"
#include "wearauth/types.hpp"

namespace wearauth {

/// Pairwise KS screening parameters. A feature survives when at least
/// `reject_fraction` of the tested subject pairs reject the
/// same-distribution null at significance `alpha`. Pair count is capped at
/// `max_pairs` by seeded sampling.
struct KsConfig {
  double alpha = 0.05;
  double reject_fraction = 0.5;
  std::size_t max_pairs = 5000;
  std::uint64_t seed = 0;
};

/// COV threshold as a percent of the maximum cov over the candidate set.
struct CovConfig {
  int x_sigma_t = 30;  // one of {10,20,...,90}
};

inline constexpr std::array<int, 9> kXSigmaTGrid = {10, 20, 30, 40, 50,
                                                    60, 70, 80, 90};

enum class Approach {
  kKs,     // KS screening only
  kKsCov,  // KS screening, then COV threshold ranking
};
std::string approach_str(Approach approach);
Approach approach_parse(std::string_view text);

/// Whether cov spreads per-subject means across subjects, or pools every
/// window into one population.
enum class CovMode {
  kSubjectMeans,
  kPooled,
};

/// Feature vectors keyed by subject id; map order fixes iteration order.
using SubjectVectors = std::map<std::string, std::vector<FeatureVector>>;

/// Groups per-window slices of one combo out of precomputed features.
SubjectVectors group_by_subject(const std::vector<WindowFeatures>& features,
                                BiometricCombo combo);

struct KsResult {
  double statistic = 0.0;  // D = sup |F_a - F_b|
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test. D is the exact sup-difference of the
/// empirical CDFs; the p-value uses the asymptotic Kolmogorov distribution
/// Q(lambda) = 2 * sum_{j>=1} (-1)^(j-1) exp(-2 j^2 lambda^2) evaluated at
/// lambda = sqrt(ne) * D with ne = ab/(a+b). Requires at least five samples
/// on each side.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Survivors of a (period, combo, approach, threshold) selection run, in
/// their canonical reporting order.
struct SelectionResult {
  PeriodKind period = PeriodKind::kSedentary;
  BiometricCombo combo;
  Approach approach = Approach::kKs;
  std::optional<int> x_sigma_t;  // set for the KS+COV approach
  std::vector<FeatureId> kept;
  std::map<FeatureId, double> per_feature_cov;  // KS+COV only

  std::size_t n() const { return kept.size(); }
};

/// Keeps each candidate feature whose pairwise KS rejections reach the
/// configured fraction. Subjects with fewer than five vectors cannot be
/// tested and are skipped; at least two testable subjects are required.
std::vector<FeatureId> ks_screen(const SubjectVectors& vectors,
                                 const KsConfig& cfg);

/// cov of each candidate feature across subjects: std/|mean| of the
/// per-subject means (default), or of the pooled window population.
std::map<FeatureId, double> cov_rank(const SubjectVectors& vectors,
                                     std::span<const FeatureId> candidates,
                                     CovMode mode = CovMode::kSubjectMeans);

/// Keeps features with cov strictly above (x_sigma_t/100) * max cov,
/// ordered by descending cov (ties by canonical FeatureId order).
SelectionResult cov_select(const std::map<FeatureId, double>& covs,
                           const CovConfig& cfg, PeriodKind period,
                           BiometricCombo combo);

/// Full selection for one (approach, period, combo). Throws
/// EmptySelectionError when nothing survives.
SelectionResult select(Approach approach, PeriodKind period,
                       BiometricCombo combo, const SubjectVectors& vectors,
                       const KsConfig& ks_cfg, const CovConfig& cov_cfg,
                       CovMode cov_mode = CovMode::kSubjectMeans);

void write_selection(const SelectionResult& result, std::ostream& out);
SelectionResult read_selection(std::istream& in);

}  // namespace wearauth
