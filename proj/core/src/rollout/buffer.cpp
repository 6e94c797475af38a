#include "daaclab/rollout/buffer.hpp"

#include <cmath>

#include "daaclab/common/format.hpp"

namespace daaclab::rollout {

RolloutBuffer::RolloutBuffer(std::size_t steps, std::size_t envs,
                             std::size_t obs_size)
    : num_steps(steps),
      num_envs(envs),
      observation_size(obs_size),
      observations(steps * envs * obs_size, 0.0),
      actions(steps * envs, 0),
      log_probs(steps * envs, 0.0),
      rewards(steps * envs, 0.0),
      raw_rewards(steps * envs, 0.0),
      dones(steps * envs, 0),
      values(steps * envs, 0.0),
      episode_steps(steps * envs, 0),
      seeds(steps * envs, 0),
      bootstrap_values(envs, 0.0) {}

Transition RolloutBuffer::transition(std::size_t t, std::size_t n) const {
  const std::size_t i = index(t, n);
  Transition tr;
  tr.observation = observation(i);
  tr.action = actions[i];
  tr.log_prob = log_probs[i];
  tr.reward = rewards[i];
  tr.raw_reward = raw_rewards[i];
  tr.done = dones[i] != 0;
  tr.value = values[i];
  tr.step = episode_steps[i];
  tr.seed = seeds[i];
  tr.env = n;
  return tr;
}

void write_trajectory_tsv(const RolloutBuffer& buffer, std::ostream& out) {
  out << "seed\tenv\tt\taction\treward\tdone\tvalue\tadvantage\tlogprob\n";
  for (std::size_t n = 0; n < buffer.num_envs; ++n) {
    for (std::size_t t = 0; t < buffer.num_steps; ++t) {
      const std::size_t i = buffer.index(t, n);
      const double adv =
          buffer.advantages ? (*buffer.advantages)[i] : std::nan("");
      out << buffer.seeds[i] << '\t' << n << '\t' << buffer.episode_steps[i]
          << '\t' << buffer.actions[i] << '\t'
          << format_double(buffer.raw_rewards[i]) << '\t'
          << static_cast<int>(buffer.dones[i]) << '\t'
          << format_double(buffer.values[i]) << '\t' << format_double(adv)
          << '\t' << format_double(buffer.log_probs[i]) << '\n';
    }
  }
}

}  // namespace daaclab::rollout
