#include "daaclab/envs/env.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "daaclab/common/error.hpp"

namespace daaclab::envs {

void observe_into(const LevelSpec& level, const FamilyParams& params,
                  int position, int step, std::span<double> out) {
  if (out.size() != params.observation_size()) {
    throw DimensionError("observation buffer has wrong size");
  }
  std::fill(out.begin(), out.end(), 0.0);
  const int w = params.window;
  for (int k = 0; k <= 2 * w; ++k) {
    const int cell = position - w + k;
    std::size_t channel = kEmptyChannel;
    if (cell < 0 || cell > level.goal()) {
      channel = kWallChannel;
    } else if (cell == level.goal()) {
      channel = kGoalChannel;
    } else if (hazard_lit(level, params, cell, step)) {
      channel = kHazardChannel;
    }
    out[static_cast<std::size_t>(k) * kChannels + channel] = 1.0;
  }
  const std::size_t offset = kChannels * params.window_cells();
  std::copy(level.background.begin(), level.background.end(),
            out.begin() + static_cast<std::ptrdiff_t>(offset));
}

std::vector<double> observe(const LevelSpec& level, const FamilyParams& params,
                            int position, int step) {
  std::vector<double> out(params.observation_size());
  observe_into(level, params, position, step, out);
  return out;
}

LevelState start(const LevelSpec& level) {
  LevelState state;
  state.level = &level;
  return state;
}

std::vector<double> reset(const LevelSpec& level, const FamilyParams& params) {
  return observe(level, params, 0, 0);
}

StepResult step(LevelState& state, const FamilyParams& params,
                std::size_t action) {
  if (action >= kActionCount) {
    throw DomainError("invalid action index " + std::to_string(action));
  }
  if (state.level == nullptr) throw UsageError("step: state has no level");
  if (state.done) throw UsageError("step: episode already finished");
  const LevelSpec& level = *state.level;
  const int goal = level.goal();
  const int now = state.step;

  double reward = 0.0;
  bool terminal = false;
  int target = state.position;
  bool dies = false;
  if (level.family == Family::kCorridor) {
    if (action == corridor::kLeft) {
      target = std::max(0, state.position - 1);
    } else if (action == corridor::kRight) {
      target = state.position + 1;
      dies = hazard_lit(level, params, target, now);
    }
  } else {
    if (action == gapworld::kLeft) {
      target = std::max(0, state.position - 1);
    } else if (action == gapworld::kRight) {
      target = state.position + 1;
    } else {
      target = std::min(goal, state.position + 2);
    }
    dies = target != state.position && level.hazard_index(target) >= 0;
  }
  state.position = target;
  if (dies) {
    reward = params.hazard_penalty;
    terminal = true;
  } else if (target == goal) {
    reward = params.goal_reward;
    terminal = true;
  }
  state.step += 1;
  state.done = terminal || state.step >= params.max_steps;

  StepResult result;
  result.reward = reward;
  result.done = state.done;
  result.seed = level.seed;
  result.step = state.step;
  result.observation = observe(level, params, state.position, state.step);
  return result;
}

int oracle_steps_to_goal(const LevelSpec& level, const FamilyParams& params,
                         int cell, int step) {
  const int goal = level.goal();
  if (cell < 0 || cell > goal) throw DomainError("oracle: cell outside level");
  if (cell == goal) return 0;
  if (level.family == Family::kCorridor) {
    // Waiting in front of a lit hazard is the only choice that matters.
    int position = cell, now = step, taken = 0, waited = 0;
    while (position < goal) {
      if (!hazard_lit(level, params, position + 1, now)) {
        ++position;
        waited = 0;
      } else if (++waited >= params.hazard_period) {
        throw DomainError("oracle: permanently lit hazard blocks level " +
                          std::to_string(level.seed));
      }
      ++now;
      ++taken;
    }
    return taken;
  }
  // Gapworld: shortest path over moves +1 and +2 (clamped) avoiding gaps.
  std::vector<int> dist(static_cast<std::size_t>(goal + 1),
                        std::numeric_limits<int>::max());
  std::deque<int> frontier{cell};
  dist[static_cast<std::size_t>(cell)] = 0;
  while (!frontier.empty()) {
    const int p = frontier.front();
    frontier.pop_front();
    for (const int next : {p + 1, std::min(goal, p + 2)}) {
      if (next > goal || level.hazard_index(next) >= 0) continue;
      auto& d = dist[static_cast<std::size_t>(next)];
      if (d == std::numeric_limits<int>::max()) {
        d = dist[static_cast<std::size_t>(p)] + 1;
        frontier.push_back(next);
      }
    }
  }
  const int d = dist[static_cast<std::size_t>(goal)];
  if (d == std::numeric_limits<int>::max()) {
    throw DomainError("oracle: goal unreachable in level " +
                      std::to_string(level.seed));
  }
  return d;
}

double oracle_value(const LevelSpec& level, const FamilyParams& params,
                    int cell, double gamma, int step) {
  const int d = oracle_steps_to_goal(level, params, cell, step);
  if (d == 0) return 0.0;
  return params.goal_reward * std::pow(gamma, d - 1);
}

std::size_t oracle_action(const LevelSpec& level, const FamilyParams& params,
                          int cell, int step) {
  if (level.family == Family::kCorridor) {
    return hazard_lit(level, params, cell + 1, step) ? corridor::kNoop
                                                     : corridor::kRight;
  }
  const int goal = level.goal();
  const int landing = std::min(goal, cell + 2);
  if (level.hazard_index(landing) < 0) {
    // A jump is never slower than a step unless it strands the agent.
    if (landing == goal) return gapworld::kJump;
    try {
      const int via_jump = oracle_steps_to_goal(level, params, landing, step + 1);
      const int via_step =
          level.hazard_index(cell + 1) >= 0
              ? std::numeric_limits<int>::max()
              : oracle_steps_to_goal(level, params, cell + 1, step + 1);
      return via_jump <= via_step ? gapworld::kJump : gapworld::kRight;
    } catch (const DomainError&) {
      return gapworld::kRight;
    }
  }
  return gapworld::kRight;
}

}  // namespace daaclab::envs
