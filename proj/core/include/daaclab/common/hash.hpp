#ifndef DAACLAB_COMMON_HASH_HPP_
#define DAACLAB_COMMON_HASH_HPP_

#include <cstdint>

namespace daaclab {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// The splitmix64 finalizer.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Combines a seed with a stream tag into a well-mixed 64-bit key.
constexpr std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64_mix(splitmix64_mix(seed + kGoldenGamma) ^
                        (tag * 0xD1B54A32D192ED03ULL));
}

// Counter-based splitmix64 stream:
//   state_0 = hash_combine(seed, tag)
//   state_k = state_{k-1} + 0x9E3779B97F4A7C15
//   output_k = splitmix64_mix(state_k)
// next_unit() maps the top 53 bits of an output to [0, 1).
class HashStream {
 public:
  constexpr HashStream(std::uint64_t seed, std::uint64_t tag)
      : state_(hash_combine(seed, tag)) {}

  constexpr std::uint64_t next_u64() {
    state_ += kGoldenGamma;
    return splitmix64_mix(state_);
  }

  constexpr double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// FNV-1a over a byte range.
constexpr std::uint64_t kFnvOffset = 0xCBF29CE484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001B3ULL;

inline std::uint64_t fnv1a64(const unsigned char* data, std::size_t size,
                             std::uint64_t hash = kFnvOffset) {
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= data[i];
    hash *= kFnvPrime;
  }
  return hash;
}

}  // namespace daaclab

#endif  // DAACLAB_COMMON_HASH_HPP_
