#ifndef DAACLAB_ENVS_VEC_ENV_HPP_
#define DAACLAB_ENVS_VEC_ENV_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "daaclab/envs/env.hpp"

namespace daaclab::envs {

// Seeds {first, first + 1, ..., first + count - 1}.
std::vector<std::int64_t> seed_range(std::int64_t first, std::size_t count);
// Train pool {1..n} and test pool {10001..10000+n}.
std::vector<std::int64_t> train_seeds(std::size_t count);
std::vector<std::int64_t> test_seeds(std::size_t count);

// N independent level states with auto-reset. Environment i starts on pool
// entry i mod P and advances to the next pool entry (round-robin) each time
// its episode ends.
class VecEnv {
 public:
  struct Snapshot {
    std::vector<std::int64_t> cursor;
    std::vector<std::int64_t> position;
    std::vector<std::int64_t> step;
    std::vector<double> episode_return;
    std::vector<double> completed_returns;
  };

  VecEnv(FamilyParams params, std::vector<std::int64_t> seed_pool,
         std::size_t num_envs);

  std::size_t size() const { return states_.size(); }
  std::size_t observation_size() const { return obs_size_; }
  const FamilyParams& params() const { return params_; }
  const std::vector<std::int64_t>& seed_pool() const { return pool_; }
  const std::vector<LevelSpec>& levels() const { return levels_; }

  // Current observations, row-major [N, observation_size].
  std::span<const double> observations() const { return observations_; }
  const LevelState& state(std::size_t env) const { return states_[env]; }
  std::int64_t current_seed(std::size_t env) const {
    return states_[env].level->seed;
  }

  // Steps every environment; done environments are reset immediately and
  // the returned observation is the first one of the new episode. Seed and
  // step in each result describe the episode the action belonged to.
  // Throws DimensionError when actions.size() != size().
  std::vector<StepResult> step(std::span<const std::size_t> actions);

  // Undiscounted returns of episodes finished since the last call.
  std::vector<double> take_completed_returns();

  Snapshot snapshot() const;
  void restore(const Snapshot& snapshot);

 private:
  void begin_episode(std::size_t env);

  FamilyParams params_;
  std::vector<std::int64_t> pool_;
  std::vector<LevelSpec> levels_;
  std::size_t obs_size_;
  std::vector<std::size_t> cursor_;
  std::vector<LevelState> states_;
  std::vector<double> episode_return_;
  std::vector<double> completed_returns_;
  std::vector<double> observations_;
};

}  // namespace daaclab::envs

#endif  // DAACLAB_ENVS_VEC_ENV_HPP_
