#include "wearauth/manifest.hpp"

#include <json.hpp>

#include "wearauth/digest.hpp"
#include "wearauth/error.hpp"

namespace wearauth {

namespace {

nlohmann::json digest_fields(const RunManifest& manifest) {
  nlohmann::json doc;
  doc["tool_version"] = manifest.tool_version;
  doc["command"] = manifest.command;
  doc["config"] = manifest.config_snapshot;
  doc["seed"] = manifest.seed;
  doc["inputs"] = manifest.input_digests;
  return doc;
}

}  // namespace

std::string RunManifest::digest() const {
  return sha256_hex(digest_fields(*this).dump());
}

void write_manifest(const RunManifest& manifest, std::ostream& out) {
  nlohmann::json doc = digest_fields(manifest);
  doc["outputs"] = manifest.outputs;
  if (!manifest.results.empty()) {
    doc["results"] = manifest.results;
  }
  doc["digest"] = manifest.digest();
  out << doc.dump(2) << '\n';
}

RunManifest read_manifest(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(1, std::string("bad manifest: ") + e.what());
  }
  RunManifest manifest;
  manifest.tool_version = doc.at("tool_version").get<std::string>();
  manifest.command = doc.at("command").get<std::string>();
  manifest.config_snapshot = doc.at("config").get<std::string>();
  manifest.seed = doc.at("seed").get<std::uint64_t>();
  manifest.input_digests =
      doc.at("inputs").get<std::map<std::string, std::string>>();
  manifest.outputs = doc.at("outputs").get<std::vector<std::string>>();
  if (doc.contains("results")) {
    manifest.results =
        doc.at("results").get<std::map<std::string, std::string>>();
  }
  return manifest;
}

}  // namespace wearauth
