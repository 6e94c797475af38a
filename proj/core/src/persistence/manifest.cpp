#include "daaclab/persistence/manifest.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>

#include <nlohmann/json.hpp>

#include "daaclab/common/error.hpp"
#include "daaclab/persistence/checkpoint.hpp"

#ifndef DAACLAB_BUILD_ID
#define DAACLAB_BUILD_ID "unknown"
#endif

namespace daaclab::persistence {

void RunManifest::add_output(const std::string& path) {
  if (std::find(outputs.begin(), outputs.end(), path) == outputs.end()) {
    outputs.push_back(path);
  }
}

std::string manifest_to_json(const RunManifest& m) {
  const nlohmann::ordered_json j = {
      {"run_id", m.run_id},
      {"config_path", m.config_path},
      {"config_hash", m.config_hash},
      {"seed", m.seed},
      {"build_id", m.build_id},
      {"started_at", m.started_at},
      {"finished_at", m.finished_at},
      {"outputs", m.outputs},
  };
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    RunManifest m;
    m.run_id = j.at("run_id").get<std::string>();
    m.config_path = j.at("config_path").get<std::string>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.build_id = j.at("build_id").get<std::string>();
    m.started_at = j.at("started_at").get<std::string>();
    m.finished_at = j.at("finished_at").get<std::string>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(0, std::string("run manifest: ") + e.what());
  }
}

void save_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
  write_file_atomic(path, manifest_to_json(manifest));
}

std::string build_id() { return DAACLAB_BUILD_ID; }

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace daaclab::persistence
