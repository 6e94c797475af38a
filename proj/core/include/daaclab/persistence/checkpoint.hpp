#ifndef DAACLAB_PERSISTENCE_CHECKPOINT_HPP_
#define DAACLAB_PERSISTENCE_CHECKPOINT_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace daaclab::persistence {

inline constexpr std::string_view kCheckpointMagic = "DAACLAB1";
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct TensorRecord {
  std::string name;
  std::vector<std::uint64_t> shape;
  std::vector<double> values;
  friend bool operator==(const TensorRecord&, const TensorRecord&) = default;
};

struct RngRecord {
  std::string name;
  std::array<std::uint64_t, 4> state{};
  friend bool operator==(const RngRecord&, const RngRecord&) = default;
};

struct CounterRecord {
  std::string name;
  std::int64_t value = 0;
  friend bool operator==(const CounterRecord&, const CounterRecord&) = default;
};

// Layout (all integers little-endian):
//   "DAACLAB1"
//   u32 version
//   u64 n, n bytes       config echo
//   u32 count, then per tensor:
//     u32 n, n bytes name; u32 rank; rank x u64 dims; prod(dims) x f64
//   u32 count, then per rng: u32 n, n bytes name; 4 x u64 state
//   u32 count, then per counter: u32 n, n bytes name; i64 value
//   u64 FNV-1a 64 of every preceding byte
struct Checkpoint {
  std::uint32_t version = kCheckpointVersion;
  std::string config_text;
  std::vector<TensorRecord> tensors;
  std::vector<RngRecord> rngs;
  std::vector<CounterRecord> counters;

  // Lookups throw FormatError(0, ...) when the record is missing.
  const TensorRecord& tensor(std::string_view name) const;
  const RngRecord& rng(std::string_view name) const;
  std::int64_t counter(std::string_view name) const;
  bool has_tensor(std::string_view name) const;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

std::string encode_checkpoint(const Checkpoint& checkpoint);
// Throws FormatError naming the byte offset on truncation or an unsupported
// version, and IntegrityError on a bad magic or checksum mismatch.
Checkpoint decode_checkpoint(std::string_view bytes);

// Writes to "<path>.tmp" and renames over `path`. Throws IoError.
void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Whole-file helpers shared by the persistence code.
std::string read_file(const std::filesystem::path& path);
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace daaclab::persistence

#endif  // DAACLAB_PERSISTENCE_CHECKPOINT_HPP_
