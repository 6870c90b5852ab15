#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wearauth/evaluation.hpp"

namespace wearauth {

/// Fixed two-decimal rendering ("78.40", "9.80").
std::string format_fixed2(double value);

/// FCD as exact rational arithmetic rounded half-up to two decimals.
std::string format_fcd2(std::size_t n_t, std::size_t n);

/// One summary-table line: a (period, approach) aggregate over its combos.
struct SummaryRow {
  int period_code = 0;
  std::string approach_label;  // "KS" or "COV"
  double mean_acc = 0.0;
  double sd_acc = 0.0;
  double mean_fcd = 0.0;
  double sd_fcd = 0.0;
  double best_acc = 0.0;
  std::string best_combo;
  std::size_t best_n = 0;
  std::size_t best_subjects = 0;  // N
  std::size_t best_windows = 0;   // |W|
};

/// Renders rows in the accuracy-summary layout:
///   l | Approach | mean (SD) ACC | mean (SD) FCD |
///   Best biometric's mean ACC (b,n,N,|W|)
std::string render_summary_table(const std::vector<SummaryRow>& rows);

/// Aggregates one (period, approach) pass over combos into a table row.
/// Combos that failed are excluded.
SummaryRow summarize(const std::vector<ComboOutcome>& outcomes,
                     PeriodKind period, Approach approach);

/// Per-subject results, one CSV row per (combo, subject).
void write_subject_csv(const std::vector<ComboOutcome>& outcomes,
                       std::ostream& out, const std::string& manifest_digest);

/// Sweep rows as CSV: x_sigma_t,mean_acc,sd_acc,mean_fcd,sd_fcd.
void write_sweep_csv(const SweepReport& report, std::ostream& out,
                     const std::string& manifest_digest);

}  // namespace wearauth
