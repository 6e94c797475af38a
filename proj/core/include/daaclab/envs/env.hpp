#ifndef DAACLAB_ENVS_ENV_HPP_
#define DAACLAB_ENVS_ENV_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "daaclab/envs/family.hpp"
#include "daaclab/envs/level.hpp"

namespace daaclab::envs {

struct LevelState {
  const LevelSpec* level = nullptr;
  int position = 0;
  int step = 0;
  bool done = false;
};

struct StepResult {
  std::vector<double> observation;
  double reward = 0.0;
  bool done = false;
  std::int64_t seed = 0;
  // Episode steps taken, including this one.
  int step = 0;
};

// Window one-hots (cell-major, kChannels per cell) followed by the
// background. Nothing else about position or time is encoded.
void observe_into(const LevelSpec& level, const FamilyParams& params,
                  int position, int step, std::span<double> out);
std::vector<double> observe(const LevelSpec& level, const FamilyParams& params,
                            int position, int step);

LevelState start(const LevelSpec& level);
std::vector<double> reset(const LevelSpec& level, const FamilyParams& params);

// Corridor: left/noop/right; entering a lit hazard ends the episode with the
// hazard penalty, entering the goal with the goal reward.
// Gapworld: left/right step one cell and die on a gap; jump moves two cells
// (clamped at the goal) and dies only when landing on a gap.
// Reaching max_steps ends the episode. Throws DomainError for an invalid
// action and UsageError when the episode is already over.
StepResult step(LevelState& state, const FamilyParams& params,
                std::size_t action);

// Length of the fastest route from (cell, step) to the goal.
// Throws DomainError when the goal cannot be reached.
int oracle_steps_to_goal(const LevelSpec& level, const FamilyParams& params,
                         int cell, int step = 0);

// Optimal-policy value R_goal * gamma^(d - 1) with d the fastest route; 0 at
// the goal. The episode horizon is not modelled.
double oracle_value(const LevelSpec& level, const FamilyParams& params,
                    int cell, double gamma, int step = 0);

// First action of a fastest route.
std::size_t oracle_action(const LevelSpec& level, const FamilyParams& params,
                          int cell, int step = 0);

}  // namespace daaclab::envs

#endif  // DAACLAB_ENVS_ENV_HPP_
