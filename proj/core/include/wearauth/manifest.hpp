#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace wearauth {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Reproducibility record written next to every command's outputs. The
/// digest covers tool version, command, config snapshot, seed, and input
/// digests; artifacts embed it so results trace back to their run.
struct RunManifest {
  std::string tool_version = std::string(kToolVersion);
  std::string command;
  std::string config_snapshot;  // canonical JSON text
  std::uint64_t seed = 0;
  std::map<std::string, std::string> input_digests;  // path -> sha256
  std::vector<std::string> outputs;                  // relative paths
  std::map<std::string, std::string> results;  // e.g. the chosen threshold

  /// Digest over version, command, config, seed, and inputs; outputs and
  /// results are recorded but not digested, so artifacts can embed it.
  std::string digest() const;
};

void write_manifest(const RunManifest& manifest, std::ostream& out);
RunManifest read_manifest(std::istream& in);

}  // namespace wearauth
