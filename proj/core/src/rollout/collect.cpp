#include "daaclab/rollout/collect.hpp"

#include <cmath>

#include "daaclab/common/error.hpp"
#include "daaclab/diffcore/distributions.hpp"

namespace daaclab::rollout {

RolloutBuffer collect_rollout(const BehaviorModel& model, envs::VecEnv& envs,
                              std::size_t num_steps, Rng& rng,
                              RunningRewardNormalizer* normalizer) {
  if (num_steps == 0) throw DomainError("collect_rollout: T must be >= 1");
  const std::size_t n = envs.size();
  const std::size_t obs_size = envs.observation_size();
  const std::size_t num_actions = model.action_count();
  RolloutBuffer buffer(num_steps, n, obs_size);

  std::vector<double> logits, values;
  std::vector<std::size_t> actions(n);
  for (std::size_t t = 0; t < num_steps; ++t) {
    const auto obs = envs.observations();
    std::copy(obs.begin(), obs.end(),
              buffer.observations.begin() +
                  static_cast<std::ptrdiff_t>(t * n * obs_size));
    model.evaluate(obs, n, logits, values);
    for (std::size_t e = 0; e < n; ++e) {
      const std::size_t i = buffer.index(t, e);
      const auto probs = diff::categorical_from_logits(
          std::span<const double>(logits).subspan(e * num_actions, num_actions));
      actions[e] = rng.categorical(probs.data(), probs.size());
      buffer.actions[i] = actions[e];
      buffer.log_probs[i] = diff::log_prob(probs, actions[e]);
      buffer.values[i] = values[e];
      buffer.episode_steps[i] = envs.state(e).step;
      buffer.seeds[i] = envs.current_seed(e);
    }
    const auto results = envs.step(actions);
    for (std::size_t e = 0; e < n; ++e) {
      const std::size_t i = buffer.index(t, e);
      buffer.raw_rewards[i] = results[e].reward;
      buffer.dones[i] = results[e].done ? 1 : 0;
      buffer.rewards[i] = normalizer != nullptr
                              ? normalizer->normalize(e, results[e].reward,
                                                      results[e].done)
                              : results[e].reward;
    }
  }
  model.evaluate(envs.observations(), n, logits, values);
  buffer.bootstrap_values = values;
  return buffer;
}

}  // namespace daaclab::rollout
