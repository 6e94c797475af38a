#ifndef DAACLAB_ALGOS_TRAINER_HPP_
#define DAACLAB_ALGOS_TRAINER_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "daaclab/algos/config.hpp"
#include "daaclab/algos/losses.hpp"
#include "daaclab/algos/networks.hpp"
#include "daaclab/common/rng.hpp"
#include "daaclab/diffcore/adam.hpp"
#include "daaclab/envs/vec_env.hpp"
#include "daaclab/invariance/discriminator.hpp"
#include "daaclab/invariance/pairs.hpp"
#include "daaclab/persistence/checkpoint.hpp"
#include "daaclab/rollout/buffer.hpp"
#include "daaclab/rollout/normalizer.hpp"

namespace daaclab::algos {

// One training-log row per update.
struct LogRow {
  int update = 0;
  std::uint64_t env_steps = 0;
  // Mean undiscounted return of the episodes that finished during this
  // update's rollout; the previous value when none did.
  double mean_episode_return_train = 0.0;
  double policy_loss = 0.0;
  // Shared J_V or separate-critic L_V; carried over on updates without a
  // value phase.
  double value_loss = 0.0;
  double advantage_loss = 0.0;
  double encoder_loss = 0.0;
  double discriminator_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double wall_ms = 0.0;
};

std::string log_header();
std::string format_log_row(const LogRow& row);

// Rng stream tags derived from the run seed.
inline constexpr std::uint64_t kActionStream = 11;
inline constexpr std::uint64_t kMinibatchStream = 12;
inline constexpr std::uint64_t kPairStream = 13;

class Trainer {
 public:
  Trainer(ExperimentConfig config, std::uint64_t seed);

  // Collects one rollout and runs the algorithm's optimization phases.
  LogRow update();
  // Runs until config.algo.updates are done. `on_row` sees every row.
  void train(const std::function<void(const LogRow&)>& on_row = {});
  bool finished() const { return updates_done_ >= config_.algo.updates; }

  const ExperimentConfig& config() const { return config_; }
  std::uint64_t seed() const { return seed_; }
  int updates_done() const { return updates_done_; }
  std::uint64_t env_steps() const { return env_steps_; }
  Agent& agent() { return agent_; }
  const Agent& agent() const { return agent_; }
  // Null unless the algorithm is idaac.
  const invariance::Discriminator* discriminator() const { return discriminator_.get(); }
  const std::vector<LogRow>& log() const { return log_; }
  const rollout::RolloutBuffer& last_rollout() const { return last_rollout_; }

  // Full optimizer, environment and rng state; `config_text` is echoed.
  persistence::Checkpoint checkpoint(const std::string& config_text) const;
  // Throws FormatError when a record is missing or mis-shaped.
  void restore(const persistence::Checkpoint& checkpoint);

 private:
  void shared_phase(const rollout::RolloutBuffer& buffer, LogRow& row);
  void policy_phase(const rollout::RolloutBuffer& buffer, LogRow& row);
  void value_phase(const rollout::RolloutBuffer& buffer, LogRow& row);
  void discriminator_step(const rollout::RolloutBuffer& buffer,
                          const invariance::PairBatch& pairs, double& loss);
  double clip_and_step(diff::ParameterStore& store, diff::AdamState& state);

  ExperimentConfig config_;
  std::uint64_t seed_;
  envs::VecEnv envs_;
  Agent agent_;
  std::unique_ptr<invariance::Discriminator> discriminator_;
  diff::AdamState policy_adam_;
  diff::AdamState critic_adam_;
  diff::AdamState discriminator_adam_;
  rollout::RunningRewardNormalizer normalizer_;
  Rng action_rng_;
  Rng minibatch_rng_;
  Rng pair_rng_;
  int updates_done_ = 0;
  std::uint64_t env_steps_ = 0;
  double last_return_ = 0.0;
  double last_value_loss_ = 0.0;
  std::vector<LogRow> log_;
  rollout::RolloutBuffer last_rollout_;
};

// Rows `cells` of a buffer that carries advantages and targets.
LossBatch make_batch(const rollout::RolloutBuffer& buffer,
                     std::span<const std::size_t> cells);

}  // namespace daaclab::algos

#endif  // DAACLAB_ALGOS_TRAINER_HPP_
