#ifndef DAACLAB_ROLLOUT_COLLECT_HPP_
#define DAACLAB_ROLLOUT_COLLECT_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "daaclab/common/rng.hpp"
#include "daaclab/envs/vec_env.hpp"
#include "daaclab/rollout/buffer.hpp"
#include "daaclab/rollout/normalizer.hpp"

namespace daaclab::rollout {

// Whatever produces action logits and state values for a batch of
// observations (a shared actor-critic or a policy paired with a critic).
class BehaviorModel {
 public:
  virtual ~BehaviorModel() = default;
  virtual std::size_t action_count() const = 0;
  // observations: [rows, obs_size]. Fills logits [rows, action_count] and
  // values [rows].
  virtual void evaluate(std::span<const double> observations, std::size_t rows,
                        std::vector<double>& logits,
                        std::vector<double>& values) const = 0;
};

// Runs T vectorized steps, sampling actions by inverse CDF from rng (one
// uniform per environment per step, in environment order). Rewards pass
// through `normalizer` when it is non-null.
RolloutBuffer collect_rollout(const BehaviorModel& model, envs::VecEnv& envs,
                              std::size_t num_steps, Rng& rng,
                              RunningRewardNormalizer* normalizer);

}  // namespace daaclab::rollout

#endif  // DAACLAB_ROLLOUT_COLLECT_HPP_
