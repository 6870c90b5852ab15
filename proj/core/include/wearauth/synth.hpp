#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wearauth/types.hpp"

namespace wearauth {

/// Per-subject physiology driving the simulated streams.
struct SubjectProfile {
  double resting_hr = 72.5;                          // bpm, within [45,100]
  double hr_gain = 18.0;                             // bpm per activity level
  std::array<double, 4> cadence_mean = {0.0, 45.0, 85.0, 125.0};  // steps/min
  double bmr_per_min = 1.15;                         // kcal/min at rest
  double met_gain = 1.3;                             // MET per activity level
  double noise_ar1 = 0.55;                           // AR(1) coefficient
  double hr_noise_sd = 3.2;
  double steps_noise_sd = 7.0;
  double met_noise_sd = 0.12;
  double cal_noise_sd = 0.16;
};

struct CohortConfig {
  std::size_t n_subjects = 20;
  int days = 14;
  /// Row-stochastic transitions between activity levels at dwell ends.
  std::array<std::array<double, 4>, 4> level_transition = {{
      {0.30, 0.45, 0.18, 0.07},
      {0.35, 0.25, 0.28, 0.12},
      {0.30, 0.28, 0.24, 0.18},
      {0.28, 0.26, 0.26, 0.20},
  }};
  std::array<double, 4> mean_dwell_minutes = {45.0, 14.0, 12.0, 10.0};
  double wear_gap_rate = 0.04;  // fraction of minutes without heart rate
  std::uint64_t seed = 0;
  /// 0 collapses every profile to the shared center; 1 spreads them over
  /// the full physiological ranges.
  double subject_separation = 0.8;
  Minute start = parse_minute("2026-01-05T00:00Z");  // first minute
};

CohortConfig default_cohort_config();

/// Deterministic profile for subject `index`; depends only on (seed, index,
/// separation), never on other subjects' draws.
SubjectProfile draw_profile(std::uint64_t seed, std::size_t index,
                            double separation);

/// Simulates the cohort: a semi-Markov activity chain with geometric dwell
/// per subject, AR(1)-noised biometrics per minute, and heart-rate gaps at
/// the configured rate. Byte-identical output for identical configs.
std::vector<SubjectStream> generate_cohort(const CohortConfig& cfg);

/// Writes the cohort in the ingest CSV schema (round-trips exactly).
void export_csv(const std::vector<SubjectStream>& streams, std::ostream& out);

/// JSON config interop for the CLI.
CohortConfig read_cohort_config(std::istream& in);
void write_cohort_config(const CohortConfig& cfg, std::ostream& out);

}  // namespace wearauth
