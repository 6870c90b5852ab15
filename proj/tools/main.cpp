#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wearauth/commands.hpp"
#include "wearauth/manifest.hpp"

namespace {

void add_run_flags(CLI::App* cmd, wearauth::RunOptions& options) {
  cmd->add_option("--config", options.config_path, "Run config (JSON)")
      ->required();
  cmd->add_option("--out-dir", options.out_dir, "Output directory");
  cmd->add_option("--seed", options.seed, "Override the config seed");
  cmd->add_option("--period", options.period, "Period: 0 sedentary, 1 non-sedentary")
      ->check(CLI::Range(0, 1));
  cmd->add_option("--combo", options.combo,
                  "Biometric combination, e.g. CM or CSMH (default: all 15)");
  cmd->add_option("--approach", options.approach, "ks or ks-cov");
  cmd->add_option("--x-sigma-t", options.x_sigma_t,
                  "COV threshold percent (10..90)");
  cmd->add_option("--acc-slack", options.acc_slack,
                  "ACC tolerance when picking the sweep threshold");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wearable-user authentication pipeline"};
  app.set_version_flag("--version", std::string(wearauth::kToolVersion));
  app.require_subcommand(1);

  wearauth::GenerateOptions generate_options;
  CLI::App* generate =
      app.add_subcommand("generate", "Synthesize a cohort CSV");
  generate->add_option("--config", generate_options.config_path,
                       "Cohort config (JSON)")
      ->required();
  generate->add_option("--out", generate_options.out_path, "Output CSV path")
      ->required();
  generate->add_option("--seed", generate_options.seed,
                       "Override the config seed");

  wearauth::RunOptions run_options;
  CLI::App* run = app.add_subcommand(
      "run", "Authenticate every subject for one (period, approach)");
  add_run_flags(run, run_options);

  wearauth::RunOptions sweep_options;
  CLI::App* sweep =
      app.add_subcommand("sweep", "Sweep the x_sigma_t grid and pick a value");
  add_run_flags(sweep, sweep_options);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return wearauth::kExitUsage;
  }

  if (generate->parsed()) {
    return wearauth::cmd_generate(generate_options, std::cerr);
  }
  if (run->parsed()) {
    return wearauth::cmd_run(run_options, std::cerr);
  }
  return wearauth::cmd_sweep(sweep_options, std::cerr);
}
