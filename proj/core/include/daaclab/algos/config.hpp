#ifndef DAACLAB_ALGOS_CONFIG_HPP_
#define DAACLAB_ALGOS_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "daaclab/envs/family.hpp"
#include "daaclab/rollout/returns.hpp"

namespace daaclab::algos {

enum class Algorithm { kPpo, kDaac, kIdaac, kDvac, kAac, kNaiveDecoupled };

std::string_view to_string(Algorithm algo);
// Throws DomainError for an unknown tag.
Algorithm parse_algorithm(std::string_view text);

// Separate policy and value networks.
bool is_decoupled(Algorithm algo);

struct AlgoConfig {
  Algorithm algorithm = Algorithm::kPpo;
  double gamma = 0.999;
  double lambda = 0.95;
  double clip = 0.2;
  double entropy_coef = 0.01;
  // Shared-network value weight (ppo, aac).
  double value_coef = 0.5;
  double advantage_coef = 0.25;
  double invariance_coef = 0.001;
  // Shared-network epochs per update (ppo, aac).
  int ppo_epochs = 3;
  // Policy epochs, value epochs and policy updates per value update for the
  // decoupled algorithms.
  int policy_epochs = 1;
  int value_epochs = 9;
  int value_freq = 1;
  int minibatches = 8;
  double learning_rate = 5e-4;
  int updates = 500;
  double grad_clip = 0.5;
  bool reward_norm = true;
  // Bound on the normalized reward magnitude; 0 disables.
  double reward_clip = 10.0;
  rollout::ValueTarget value_target = rollout::ValueTarget::kGae;
  int num_envs = 64;
  int num_steps = 256;
  int hidden = 64;
  int discriminator_hidden = 64;
  // Apply both log terms of the discriminator loss to every pair, ignoring
  // the order label.
  bool lit_discriminator_loss = false;

  std::size_t batch_size() const {
    return static_cast<std::size_t>(num_envs) * static_cast<std::size_t>(num_steps);
  }
  std::size_t minibatch_size() const {
    return batch_size() / static_cast<std::size_t>(minibatches);
  }
  // Throws ConfigError(0, ...) naming the first violated constraint.
  void validate() const;
  friend bool operator==(const AlgoConfig&, const AlgoConfig&) = default;
};

// naive_decoupled runs with the degenerate schedule E_pi = E_V = N_pi = 1 and
// no advantage term regardless of the configured values; other algorithms
// are returned unchanged.
AlgoConfig effective_config(AlgoConfig config);

struct EvalConfig {
  // Greedy evaluation episodes per pool.
  int episodes = 200;
  int test_levels = 200;
  std::uint64_t seed = 1;
  int runs = 1;
  // Record wall-clock time in the training log. Off by default so logs are
  // byte-reproducible.
  bool wall_time = false;
  friend bool operator==(const EvalConfig&, const EvalConfig&) = default;
};

struct ExperimentConfig {
  AlgoConfig algo;
  envs::FamilyParams env;
  // Size of the training pool {1..n}.
  int train_levels = 8;
  EvalConfig eval;

  void validate() const;
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Seed of member run k in a multi-seed study.
constexpr std::uint64_t run_seed(std::uint64_t master, std::uint64_t k) {
  return master + k * 10007ULL;
}

// Updates needed to collect at least `steps` environment steps.
int updates_for_budget(const AlgoConfig& config, std::uint64_t steps);

}  // namespace daaclab::algos

#endif  // DAACLAB_ALGOS_CONFIG_HPP_
