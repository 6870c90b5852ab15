#pragma once

#include <optional>
#include <string>

#include "wearauth/evaluation.hpp"

namespace wearauth {

/// Process exit codes shared by the CLI and the command layer.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPipelineFailure = 1;
inline constexpr int kExitUsage = 2;

struct GenerateOptions {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;  // overrides the config seed
};

/// Experiment settings as read from the run/sweep config file, before flag
/// overrides.
struct RunOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> period;
  std::optional<std::string> combo;  // empty optional = all 15
  std::optional<std::string> approach;
  std::optional<int> x_sigma_t;
  std::optional<double> acc_slack;
};

/// `generate`: synthesize a cohort CSV plus its manifest.
int cmd_generate(const GenerateOptions& options, std::ostream& diagnostics);

/// `run`: one (period, approach) pass over the configured combos; writes
/// per-subject CSV, summary table, models, and a manifest.
int cmd_run(const RunOptions& options, std::ostream& diagnostics);

/// `sweep`: x_sigma_t grid sweep; writes sweep.csv and a manifest, prints
/// the chosen threshold.
int cmd_sweep(const RunOptions& options, std::ostream& diagnostics);

}  // namespace wearauth
