#ifndef DAACLAB_PERSISTENCE_MANIFEST_HPP_
#define DAACLAB_PERSISTENCE_MANIFEST_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace daaclab::persistence {

struct RunManifest {
  std::string run_id;
  std::string config_path;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string build_id;
  std::string started_at;
  std::string finished_at;
  std::vector<std::string> outputs;

  // Appends a path unless it is already listed.
  void add_output(const std::string& path);
  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

std::string manifest_to_json(const RunManifest& manifest);
// Throws FormatError(0, ...) on malformed JSON or missing fields.
RunManifest manifest_from_json(const std::string& text);
void save_manifest(const RunManifest& manifest, const std::filesystem::path& path);

// Opaque identifier of this build (version plus source revision).
std::string build_id();
// UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

}  // namespace daaclab::persistence

#endif  // DAACLAB_PERSISTENCE_MANIFEST_HPP_
