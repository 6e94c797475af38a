#ifndef DAACLAB_PERSISTENCE_CONFIG_HPP_
#define DAACLAB_PERSISTENCE_CONFIG_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "daaclab/algos/config.hpp"

namespace daaclab::persistence {

// Flat "key = value" lines under [algo], [env] and [eval]; '#' starts a
// comment. Missing keys keep their defaults. Throws ConfigError carrying
// the 1-based line for syntax errors, unknown or duplicate keys, type
// mismatches and out-of-range values. Cross-field violations (for example
// min_length > max_length) are reported with line 0.
algos::ExperimentConfig parse_config(std::string_view text);
algos::ExperimentConfig load_config(const std::filesystem::path& path);

// Every key in a fixed order; parse_config(serialize_config(c)) == c.
std::string serialize_config(const algos::ExperimentConfig& config);

// FNV-1a 64 of the text as 16 lowercase hex digits.
std::string content_hash(std::string_view text);

}  // namespace daaclab::persistence

#endif  // DAACLAB_PERSISTENCE_CONFIG_HPP_
