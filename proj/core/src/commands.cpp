#include "wearauth/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "wearauth/csv.hpp"
#include "wearauth/digest.hpp"
#include "wearauth/error.hpp"
#include "wearauth/manifest.hpp"
#include "wearauth/report.hpp"
#include "wearauth/selection.hpp"
#include "wearauth/synth.hpp"
#include "wearauth/windows.hpp"

namespace wearauth {

namespace {

namespace fs = std::filesystem;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void spill(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write '" + path.string() + "'");
  }
  out << content;
}

struct RunSettings {
  std::string input_csv;
  ExperimentConfig experiment;
  std::optional<BiometricCombo> single_combo;
};

RunSettings load_run_settings(const RunOptions& options) {
  const std::string text = slurp(options.config_path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad run config: ") + e.what());
  }

  RunSettings settings;
  try {
    settings.input_csv = doc.at("input_csv").get<std::string>();
    ExperimentConfig& cfg = settings.experiment;
    cfg.period = period_kind_from_code(doc.value("period", 1));
    cfg.approach = approach_parse(doc.value("approach", "ks-cov"));
    cfg.cov.x_sigma_t = doc.value("x_sigma_t", cfg.cov.x_sigma_t);
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.split = doc.value("split", cfg.split);
    cfg.acc_slack = doc.value("acc_slack", cfg.acc_slack);
    cfg.windows_per_subject_cap =
        doc.value("windows_per_subject_cap", cfg.windows_per_subject_cap);
    cfg.min_window_multiple =
        doc.value("min_window_multiple", cfg.min_window_multiple);
    if (doc.contains("cov_mode")) {
      const std::string mode = doc.at("cov_mode").get<std::string>();
      if (mode == "subject-means") {
        cfg.cov_mode = CovMode::kSubjectMeans;
      } else if (mode == "pooled") {
        cfg.cov_mode = CovMode::kPooled;
      } else {
        throw ConfigError("unknown cov_mode '" + mode + "'");
      }
    }
    if (doc.contains("ks")) {
      const auto& ks = doc.at("ks");
      cfg.ks.alpha = ks.value("alpha", cfg.ks.alpha);
      cfg.ks.reject_fraction =
          ks.value("reject_fraction", cfg.ks.reject_fraction);
      cfg.ks.max_pairs = ks.value("max_pairs", cfg.ks.max_pairs);
    }
    if (doc.contains("svm")) {
      const auto& svm = doc.at("svm");
      cfg.train.c = svm.value("c", cfg.train.c);
      cfg.train.kkt_tol = svm.value("kkt_tol", cfg.train.kkt_tol);
      cfg.train.max_passes = svm.value("max_passes", cfg.train.max_passes);
    }
    if (doc.contains("combo")) {
      settings.single_combo =
          BiometricCombo::parse(doc.at("combo").get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad run config: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("bad run config: ") + e.what());
  }

  try {
    // Flag overrides.
    if (options.seed) {
      settings.experiment.seed = *options.seed;
    }
    if (options.period) {
      settings.experiment.period = period_kind_from_code(*options.period);
    }
    if (options.approach) {
      settings.experiment.approach = approach_parse(*options.approach);
    }
    if (options.x_sigma_t) {
      settings.experiment.cov.x_sigma_t = *options.x_sigma_t;
    }
    if (options.acc_slack) {
      settings.experiment.acc_slack = *options.acc_slack;
    }
    if (options.combo) {
      settings.single_combo = BiometricCombo::parse(*options.combo);
    }
    if (settings.experiment.approach == Approach::kKsCov &&
        std::find(kXSigmaTGrid.begin(), kXSigmaTGrid.end(),
                  settings.experiment.cov.x_sigma_t) == kXSigmaTGrid.end()) {
      throw ConfigError("x_sigma_t must be one of {10,20,...,90}");
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return settings;
}

// Resolved-config snapshot for the manifest digest.
std::string snapshot(const RunSettings& settings) {
  const ExperimentConfig& cfg = settings.experiment;
  nlohmann::json doc;
  doc["input_csv"] = settings.input_csv;
  doc["period"] = code(cfg.period);
  doc["approach"] = approach_str(cfg.approach);
  doc["x_sigma_t"] = cfg.cov.x_sigma_t;
  doc["seed"] = cfg.seed;
  doc["split"] = cfg.split;
  doc["acc_slack"] = cfg.acc_slack;
  doc["windows_per_subject_cap"] = cfg.windows_per_subject_cap;
  doc["min_window_multiple"] = cfg.min_window_multiple;
  doc["cov_mode"] =
      cfg.cov_mode == CovMode::kSubjectMeans ? "subject-means" : "pooled";
  doc["ks"] = {{"alpha", cfg.ks.alpha},
               {"reject_fraction", cfg.ks.reject_fraction},
               {"max_pairs", cfg.ks.max_pairs}};
  doc["svm"] = {{"c", cfg.train.c},
                {"kkt_tol", cfg.train.kkt_tol},
                {"max_passes", cfg.train.max_passes}};
  if (settings.single_combo) {
    doc["combo"] = settings.single_combo->str();
  }
  return doc.dump();
}

std::vector<WindowFeatures> load_features(const std::string& csv_path,
                                          PeriodKind period) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open input CSV '" + csv_path + "'");
  }
  const IngestResult ingest = ingest_csv(in);
  std::vector<Window> windows;
  for (const SubjectStream& stream : ingest.streams) {
    const SubjectStream filtered = filter_invalid_wear(stream);
    std::vector<Window> segmented = segment_windows(filtered);
    windows.insert(windows.end(), segmented.begin(), segmented.end());
  }
  auto [sedentary, non_sedentary] = partition_by_period(windows);
  return featurize_windows(period == PeriodKind::kSedentary ? sedentary
                                                            : non_sedentary);
}

int run_pipeline(const RunOptions& options, std::ostream& diagnostics,
                 bool sweep_mode) {
  const RunSettings settings = load_run_settings(options);
  const ExperimentConfig& cfg = settings.experiment;

  RunManifest manifest;
  manifest.command = sweep_mode ? "sweep" : "run";
  manifest.config_snapshot = snapshot(settings);
  manifest.seed = cfg.seed;
  manifest.input_digests[settings.input_csv] =
      sha256_file(settings.input_csv);
  const std::string digest = manifest.digest();

  const std::vector<WindowFeatures> features =
      load_features(settings.input_csv, cfg.period);
  if (features.empty()) {
    diagnostics << "error: no windows for period " << code(cfg.period)
                << " in " << settings.input_csv << '\n';
    return kExitPipelineFailure;
  }

  const fs::path out_dir(options.out_dir);
  fs::create_directories(out_dir);

  if (sweep_mode) {
    const SweepReport sweep = sweep_threshold(features, cfg);
    std::ostringstream csv;
    write_sweep_csv(sweep, csv, digest);
    spill(out_dir / "sweep.csv", csv.str());
    manifest.outputs.push_back("sweep.csv");
    manifest.results["chosen_x_sigma_t"] =
        std::to_string(sweep.chosen_threshold);
    diagnostics << "chosen x_sigma_t: " << sweep.chosen_threshold << '\n';
    for (const std::string& failure : sweep.failures) {
      diagnostics << "combo failed: " << failure << '\n';
    }

    std::ostringstream manifest_text;
    write_manifest(manifest, manifest_text);
    spill(out_dir / "manifest.json", manifest_text.str());
    return kExitOk;
  }

  const std::vector<BiometricCombo> combos =
      settings.single_combo
          ? std::vector<BiometricCombo>{*settings.single_combo}
          : BiometricCombo::all();
  const std::vector<ComboOutcome> outcomes =
      run_all_combos(features, cfg, combos);

  bool any_ok = false;
  for (const ComboOutcome& outcome : outcomes) {
    if (outcome.ok) {
      any_ok = true;
    } else {
      diagnostics << "combo " << outcome.combo.str()
                  << " failed: " << outcome.failure << '\n';
    }
  }

  std::ostringstream subject_csv;
  write_subject_csv(outcomes, subject_csv, digest);
  spill(out_dir / "per_subject.csv", subject_csv.str());
  manifest.outputs.push_back("per_subject.csv");

  std::ostringstream summary;
  summary << "# manifest: " << digest << '\n';
  summary << "# period: " << code(cfg.period)
          << "  approach: " << approach_str(cfg.approach);
  if (cfg.approach == Approach::kKsCov) {
    summary << "  x_sigma_t: " << cfg.cov.x_sigma_t;
  }
  summary << '\n' << '\n';
  summary << render_summary_table(
      {summarize(outcomes, cfg.period, cfg.approach)});
  bool failures_header = false;
  for (const ComboOutcome& outcome : outcomes) {
    if (!outcome.ok) {
      if (!failures_header) {
        summary << '\n' << "failures:" << '\n';
        failures_header = true;
      }
      summary << "  " << outcome.combo.str() << ": " << outcome.failure
              << '\n';
    }
  }
  spill(out_dir / "summary.txt", summary.str());
  manifest.outputs.push_back("summary.txt");

  for (const ComboOutcome& outcome : outcomes) {
    if (!outcome.ok) {
      continue;
    }
    std::ostringstream selection_text;
    write_selection(outcome.report.selection, selection_text);
    const std::string selection_name =
        "selection_" + outcome.combo.str() + ".json";
    spill(out_dir / selection_name, selection_text.str());
    manifest.outputs.push_back(selection_name);
    for (const SvmModel& model : outcome.report.models) {
      std::ostringstream model_text;
      save_model(model, model_text, digest);
      const std::string model_name =
          "models/" + outcome.combo.str() + "_" + model.subject + ".json";
      spill(out_dir / model_name, model_text.str());
      manifest.outputs.push_back(model_name);
    }
  }

  std::ostringstream manifest_text;
  write_manifest(manifest, manifest_text);
  spill(out_dir / "manifest.json", manifest_text.str());

  if (!any_ok) {
    diagnostics << "error: every combo failed" << '\n';
    return kExitPipelineFailure;
  }
  return kExitOk;
}

}  // namespace

int cmd_generate(const GenerateOptions& options, std::ostream& diagnostics) {
  try {
    const std::string config_text = slurp(options.config_path);
    std::istringstream config_stream(config_text);
    CohortConfig cfg = read_cohort_config(config_stream);
    if (options.seed) {
      cfg.seed = *options.seed;
    }

    RunManifest manifest;
    manifest.command = "generate";
    std::ostringstream cfg_snapshot;
    write_cohort_config(cfg, cfg_snapshot);
    manifest.config_snapshot = cfg_snapshot.str();
    manifest.seed = cfg.seed;
    manifest.input_digests[options.config_path] = sha256_hex(config_text);

    const std::vector<SubjectStream> streams = generate_cohort(cfg);
    std::ostringstream csv;
    csv << "# manifest: " << manifest.digest() << '\n';
    export_csv(streams, csv);
    spill(options.out_path, csv.str());
    manifest.outputs.push_back(options.out_path);

    std::ostringstream manifest_text;
    write_manifest(manifest, manifest_text);
    spill(options.out_path + ".manifest.json", manifest_text.str());
    return kExitOk;
  } catch (const ConfigError& e) {
    diagnostics << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    diagnostics << "error: " << e.what() << '\n';
    return kExitPipelineFailure;
  }
}

int cmd_run(const RunOptions& options, std::ostream& diagnostics) {
  try {
    return run_pipeline(options, diagnostics, /*sweep_mode=*/false);
  } catch (const ConfigError& e) {
    diagnostics << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    diagnostics << "error: " << e.what() << '\n';
    return kExitPipelineFailure;
  }
}

int cmd_sweep(const RunOptions& options, std::ostream& diagnostics) {
  try {
    return run_pipeline(options, diagnostics, /*sweep_mode=*/true);
  } catch (const ConfigError& e) {
    diagnostics << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    diagnostics << "error: " << e.what() << '\n';
    return kExitPipelineFailure;
  }
}

}  // namespace wearauth
