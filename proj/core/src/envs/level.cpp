#include "daaclab/envs/level.hpp"

#include <algorithm>

#include "daaclab/common/error.hpp"
#include "daaclab/common/format.hpp"
#include "daaclab/common/hash.hpp"

namespace daaclab::envs {

int LevelSpec::hazard_index(int cell) const {
  const auto it = std::lower_bound(hazards.begin(), hazards.end(), cell);
  if (it == hazards.end() || *it != cell) return -1;
  return static_cast<int>(it - hazards.begin());
}

LevelSpec generate_level(std::int64_t seed, const FamilyParams& params) {
  if (seed <= 0) {
    throw DomainError("level seed must be positive, got " +
                      std::to_string(seed));
  }
  params.validate();
  const auto useed = static_cast<std::uint64_t>(seed);

  LevelSpec level;
  level.seed = seed;
  level.family = params.family;

  HashStream length_stream(useed, kLengthStream);
  const auto span =
      static_cast<std::uint64_t>(params.max_length - params.min_length + 1);
  level.length =
      params.min_length + static_cast<int>(length_stream.next_u64() % span);

  HashStream layout(useed, kLayoutStream);
  if (params.family == Family::kCorridor) {
    for (int cell = 1; cell <= level.length - 2; ++cell) {
      if (layout.next_unit() < params.hazard_density) {
        level.hazards.push_back(cell);
        level.hazard_phases.push_back(static_cast<int>(
            layout.next_u64() % static_cast<std::uint64_t>(params.hazard_period)));
      }
    }
  } else {
    int previous = -10;
    for (int cell = 2; cell <= level.length - 2; ++cell) {
      const double u = layout.next_unit();
      if (u < gapworld::kGapDensity && previous != cell - 1) {
        level.hazards.push_back(cell);
        level.hazard_phases.push_back(0);
        previous = cell;
      }
    }
  }

  HashStream background(useed, kBackgroundStream);
  const double z =
      params.max_length == params.min_length
          ? 0.0
          : static_cast<double>(level.length - params.min_length) /
                static_cast<double>(params.max_length - params.min_length);
  level.background.resize(static_cast<std::size_t>(params.background_dim));
  for (std::size_t i = 0; i < level.background.size(); ++i) {
    const double u = background.next_unit();
    if (params.coupled) {
      const double sign = (i % 2 == 0) ? 1.0 : -1.0;
      level.background[i] = std::clamp(
          0.5 + sign * 0.4 * (2.0 * z - 1.0) + 0.1 * (2.0 * u - 1.0), 0.0, 1.0);
    } else {
      level.background[i] = u;
    }
  }
  return level;
}

std::vector<double> background_variant(const LevelSpec& level,
                                       const FamilyParams& params,
                                       std::uint64_t variant) {
  HashStream stream(static_cast<std::uint64_t>(level.seed),
                    kVariantStreamBase + variant);
  std::vector<double> b(static_cast<std::size_t>(params.background_dim));
  for (double& v : b) v = stream.next_unit();
  return b;
}

std::string level_dump_line(const LevelSpec& level) {
  std::vector<std::string> hazards, background;
  for (const int h : level.hazards) hazards.push_back(std::to_string(h));
  for (const double b : level.background) background.push_back(format_fixed(b, 6));
  return std::to_string(level.seed) + "\t" + std::to_string(level.length) +
         "\t" + join(hazards, ",") + "\t" + join(background, ",");
}

bool hazard_lit(const LevelSpec& level, const FamilyParams& params, int cell,
                int step) {
  const int index = level.hazard_index(cell);
  if (index < 0) return false;
  if (level.family == Family::kGapworld || params.hazard_period == 1) {
    return true;
  }
  const int period = params.hazard_period;
  const int phase = level.hazard_phases[static_cast<std::size_t>(index)];
  return (step + phase) % period < (period + 1) / 2;
}

}  // namespace daaclab::envs
