#ifndef DAACLAB_COMMON_RNG_HPP_
#define DAACLAB_COMMON_RNG_HPP_

#include <array>
#include <cstddef>
#include <cstdint>

namespace daaclab {

// xoshiro256** seeded through splitmix64. Every derived quantity (uniforms,
// indices, normals) is computed by hand so streams are bit-identical across
// standard libraries.
class Rng {
 public:
  using State = std::array<std::uint64_t, 4>;

  explicit Rng(std::uint64_t seed = 0);

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform();

  // floor(uniform() * n); n must be positive.
  std::size_t uniform_index(std::size_t n);

  // Standard normal via Box-Muller (no cached second variate).
  double normal();

  // Inverse-CDF draw from a probability vector. Falls back to the last index
  // with positive mass when rounding leaves u above the cumulative sum.
  std::size_t categorical(const double* probs, std::size_t n);

  const State& state() const { return state_; }
  void set_state(const State& state) { state_ = state; }

 private:
  State state_;
};

}  // namespace daaclab

#endif  // DAACLAB_COMMON_RNG_HPP_
