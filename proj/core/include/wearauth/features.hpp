#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wearauth/types.hpp"

namespace wearauth {

/// The 31 per-biometric statistics, in canonical order. Indices are stable;
/// feature vectors and CSV columns follow this order.
enum class FeatureName : int {
  kMu = 0,
  kSigma,
  kVar,
  kCov,
  kMax,
  kMin,
  kRan,
  kCoran,
  kP25,
  kP50,
  kP75,
  kP95,
  kIqr,
  kCoi,
  kMadMu,
  kMadMdn,
  kFMu,
  kFMdn,
  kPower,
  kNp,
  kEnergy,
  kRms,
  kP2Rms,
  kRss,
  kSnr,
  kSkew,
  kKurt,
  kAMain,
  kASec,
  kFMain,
  kFSec,
};

inline constexpr std::size_t kFeatureCount = 31;
std::string_view feature_name_str(FeatureName name);
FeatureName feature_name_parse(std::string_view text);

/// Identifies one feature of one biometric, or the activity-level feature
/// appended for non-sedentary windows (the only non-biometric feature).
struct FeatureId {
  bool is_level = false;
  BiometricKind biometric = BiometricKind::kCalories;  // unused when is_level
  FeatureName name = FeatureName::kMu;                 // unused when is_level

  static FeatureId level() { return FeatureId{true, {}, {}}; }
  static FeatureId of(BiometricKind kind, FeatureName name) {
    return FeatureId{false, kind, name};
  }

  std::string str() const;  // "C:mu", "H:f_main", "LEVEL:activity"
  static FeatureId parse(std::string_view text);

  auto operator<=>(const FeatureId&) const = default;
};

/// Candidate features of a (combo, period) pair: 31 per member biometric in
/// canonical C,S,M,H order, plus the level feature when non-sedentary.
std::vector<FeatureId> candidate_features(BiometricCombo combo,
                                          PeriodKind period);

/// One-sided DFT of a five-sample window: bins k = 0,1,2 at k/5
/// cycles per minute.
struct Spectrum {
  std::array<double, 3> magnitude{};  // |X[k]|
  std::array<double, 3> frequency{};  // k/5

  /// Real-signal amplitude convention for k >= 1: a(k) = 2|X[k]|/n.
  double amplitude(std::size_t k) const {
    return 2.0 * magnitude[k] / static_cast<double>(kWindowMinutes);
  }
};

/// X[k] = sum_j x_j e^(-2*pi*i*j*k/5). Throws DomainError unless given
/// exactly five finite samples.
Spectrum dft_onesided(std::span<const double> samples);

/// The 31 statistics of one five-sample biometric signal, indexed by
/// FeatureName. Degenerate denominators (zero mean, zero spread, zero
/// power) fall back to 0 so every output is finite.
std::array<double, kFeatureCount> compute_biometric_features(
    std::span<const double> samples);

/// Feature values for one window under one biometric combination; value
/// order matches candidate_features(combo, period).
struct FeatureVector {
  std::string subject;
  Minute start = 0;
  BiometricCombo combo;
  PeriodKind period = PeriodKind::kSedentary;
  ActivityLevel level = ActivityLevel::kSedentary;
  std::vector<double> values;
};

/// Concatenates compute_biometric_features over the combo's members and
/// appends the activity level code for non-sedentary windows.
FeatureVector assemble_vector(const Window& window, BiometricCombo combo);

/// All 31x4 per-biometric features of one window, computed once so any of
/// the 15 combos can be sliced out without re-featurizing.
struct WindowFeatures {
  std::string subject;
  Minute start = 0;
  ActivityLevel level = ActivityLevel::kSedentary;
  PeriodKind period = PeriodKind::kSedentary;
  std::array<std::array<double, kFeatureCount>, 4> per_biometric{};
};

WindowFeatures featurize_window(const Window& window);
std::vector<WindowFeatures> featurize_windows(
    const std::vector<Window>& windows);
FeatureVector slice_vector(const WindowFeatures& features,
                           BiometricCombo combo);

/// One row per window: subject,start,level then the canonical FeatureIds.
/// All vectors must share one (combo, period).
void write_feature_matrix_csv(const std::vector<FeatureVector>& vectors,
                              std::ostream& out);

}  // namespace wearauth
