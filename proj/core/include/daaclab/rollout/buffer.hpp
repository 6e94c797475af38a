#ifndef DAACLAB_ROLLOUT_BUFFER_HPP_
#define DAACLAB_ROLLOUT_BUFFER_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace daaclab::rollout {

struct Transition {
  std::span<const double> observation;
  std::size_t action = 0;
  // log pi_old(a|s) at collection time.
  double log_prob = 0.0;
  // Reward used for learning (normalized when enabled).
  double reward = 0.0;
  double raw_reward = 0.0;
  bool done = false;
  // V(s) at collection time.
  double value = 0.0;
  // Episode step at which the action was taken (0 at reset).
  int step = 0;
  std::int64_t seed = 0;
  std::size_t env = 0;
};

// T x N grid of transitions stored column-by-field; cell (t, n) lives at
// index t * N + n.
struct RolloutBuffer {
  std::size_t num_steps = 0;
  std::size_t num_envs = 0;
  std::size_t observation_size = 0;

  std::vector<double> observations;
  std::vector<std::size_t> actions;
  std::vector<double> log_probs;
  std::vector<double> rewards;
  std::vector<double> raw_rewards;
  std::vector<std::uint8_t> dones;
  std::vector<double> values;
  std::vector<int> episode_steps;
  std::vector<std::int64_t> seeds;
  // V(s_T) per environment.
  std::vector<double> bootstrap_values;

  std::optional<std::vector<double>> advantages;
  std::optional<std::vector<double>> targets;

  RolloutBuffer() = default;
  RolloutBuffer(std::size_t steps, std::size_t envs, std::size_t obs_size);

  std::size_t size() const { return num_steps * num_envs; }
  std::size_t index(std::size_t t, std::size_t n) const {
    return t * num_envs + n;
  }
  std::span<const double> observation(std::size_t cell) const {
    return {observations.data() + cell * observation_size, observation_size};
  }
  Transition transition(std::size_t t, std::size_t n) const;
};

// Tab-separated rows "seed env t action reward done value advantage logprob"
// with a header line; advantage is "nan" before GAE.
void write_trajectory_tsv(const RolloutBuffer& buffer, std::ostream& out);

}  // namespace daaclab::rollout

#endif  // DAACLAB_ROLLOUT_BUFFER_HPP_
