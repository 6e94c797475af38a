#ifndef DAACLAB_ENVS_LEVEL_HPP_
#define DAACLAB_ENVS_LEVEL_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "daaclab/envs/family.hpp"

namespace daaclab::envs {

// A level occupies cells 0 (start) .. length - 1 (goal). Cells outside that
// range are walls.
struct LevelSpec {
  std::int64_t seed = 0;
  Family family = Family::kCorridor;
  int length = 0;
  // Sorted hazard cells (corridor) or gap columns (gapworld).
  std::vector<int> hazards;
  // Blink phase of each hazard, parallel to `hazards` (corridor only).
  std::vector<int> hazard_phases;
  std::vector<double> background;

  int goal() const { return length - 1; }
  // Index into `hazards`, or -1.
  int hazard_index(int cell) const;

  friend bool operator==(const LevelSpec&, const LevelSpec&) = default;
};

// Deterministic expansion of a seed:
//   length      = min_length + next_u64(length stream) mod (max - min + 1)
//   corridor    : for cells 1..L-2, u = next_unit(layout) and the cell is a
//                 hazard when u < hazard_density; each hazard then draws its
//                 phase = next_u64(layout) mod hazard_period.
//   gapworld    : for columns 2..L-2, u = next_unit(layout); a gap when
//                 u < kGapDensity and the previous column is not a gap.
//   background  : u_i = next_unit(background stream), i < B. Uncoupled b = u.
//                 Coupled b_i = clamp(0.5 + s_i * 0.4 * (2z - 1)
//                 + 0.1 * (2u_i - 1), 0, 1) with z = (L - min)/(max - min)
//                 and s_i = +1 for even i, -1 for odd i.
// Streams are HashStream(seed, tag) with the tags in family.hpp.
// Throws DomainError for seed <= 0 or invalid params.
LevelSpec generate_level(std::int64_t seed, const FamilyParams& params);

// Background drawn from an independent stream (kVariantStreamBase + variant):
// b_i = next_unit(). Window contents are unaffected.
std::vector<double> background_variant(const LevelSpec& level,
                                       const FamilyParams& params,
                                       std::uint64_t variant);

// "seed\tL\thazards(csv)\tb(csv, 6 decimals)"
std::string level_dump_line(const LevelSpec& level);

// Whether a hazard at `cell` is dangerous at episode step `step`. Gaps are
// always dangerous.
bool hazard_lit(const LevelSpec& level, const FamilyParams& params, int cell,
                int step);

}  // namespace daaclab::envs

#endif  // DAACLAB_ENVS_LEVEL_HPP_
