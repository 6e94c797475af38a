#ifndef DAACLAB_ENVS_FAMILY_HPP_
#define DAACLAB_ENVS_FAMILY_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace daaclab::envs {

enum class Family { kCorridor, kGapworld };

std::string_view to_string(Family family);
// Throws DomainError for an unknown tag.
Family parse_family(std::string_view text);

inline constexpr std::size_t kActionCount = 3;

// One-hot cell channels of the observation window.
inline constexpr std::size_t kChannels = 4;
enum Channel : std::size_t {
  kEmptyChannel = 0,
  kHazardChannel = 1,
  kGoalChannel = 2,
  kWallChannel = 3,
};

namespace corridor {
enum Action : std::size_t { kLeft = 0, kNoop = 1, kRight = 2 };
}  // namespace corridor

namespace gapworld {
enum Action : std::size_t { kLeft = 0, kRight = 1, kJump = 2 };
// Probability that an eligible column becomes a gap. Gaps never touch.
inline constexpr double kGapDensity = 0.25;
}  // namespace gapworld

// Stream tags of the per-seed hash streams.
inline constexpr std::uint64_t kLengthStream = 1;
inline constexpr std::uint64_t kLayoutStream = 2;
inline constexpr std::uint64_t kBackgroundStream = 3;
inline constexpr std::uint64_t kVariantStreamBase = 0x100;

struct FamilyParams {
  Family family = Family::kCorridor;
  int min_length = 8;
  int max_length = 48;
  // Half-width w of the agent-centred window (2w + 1 cells).
  int window = 2;
  int background_dim = 8;
  // When set the background leaks the level length.
  bool coupled = true;
  // Corridor only: per-cell hazard probability.
  double hazard_density = 0.15;
  double goal_reward = 10.0;
  double hazard_penalty = -1.0;
  int max_steps = 128;
  // Corridor hazards are lit for the first half of every period (offset by a
  // per-hazard phase). A period of 1 keeps them permanently lit.
  int hazard_period = 4;

  // Throws DomainError when an invariant is violated.
  void validate() const;
  std::size_t window_cells() const { return 2 * static_cast<std::size_t>(window) + 1; }
  std::size_t observation_size() const {
    return kChannels * window_cells() + static_cast<std::size_t>(background_dim);
  }

  friend bool operator==(const FamilyParams&, const FamilyParams&) = default;
};

}  // namespace daaclab::envs

#endif  // DAACLAB_ENVS_FAMILY_HPP_
