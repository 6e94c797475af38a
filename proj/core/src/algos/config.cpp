#include "daaclab/algos/config.hpp"

#include <array>
#include <string>
#include <utility>

#include "daaclab/common/error.hpp"

namespace daaclab::algos {

namespace {

constexpr std::array<std::pair<Algorithm, std::string_view>, 6> kNames{{
    {Algorithm::kPpo, "ppo"},
    {Algorithm::kDaac, "daac"},
    {Algorithm::kIdaac, "idaac"},
    {Algorithm::kDvac, "dvac"},
    {Algorithm::kAac, "aac"},
    {Algorithm::kNaiveDecoupled, "naive_decoupled"},
}};

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(0, message);
}

}  // namespace

std::string_view to_string(Algorithm algo) {
  for (const auto& [a, name] : kNames) {
    if (a == algo) return name;
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view text) {
  for (const auto& [a, name] : kNames) {
    if (name == text) return a;
  }
  throw DomainError("unknown algorithm '" + std::string(text) + "'");
}

bool is_decoupled(Algorithm algo) {
  return algo != Algorithm::kPpo && algo != Algorithm::kAac;
}

void AlgoConfig::validate() const {
  require(gamma >= 0.0 && gamma <= 1.0, "gamma must lie in [0, 1]");
  require(lambda >= 0.0 && lambda <= 1.0, "lambda must lie in [0, 1]");
  require(clip > 0.0, "clip must be positive");
  require(entropy_coef >= 0.0 && value_coef >= 0.0 && advantage_coef >= 0.0 &&
              invariance_coef >= 0.0,
          "loss weights must be non-negative");
  require(ppo_epochs >= 1 && policy_epochs >= 1 && value_epochs >= 1 &&
              value_freq >= 1,
          "epoch counts and value_freq must be >= 1");
  require(minibatches >= 1, "minibatches must be >= 1");
  require(learning_rate > 0.0, "learning_rate must be positive");
  require(updates >= 1, "updates must be >= 1");
  require(grad_clip >= 0.0, "grad_clip must be non-negative");
  require(num_envs >= 1 && num_steps >= 1, "num_envs and num_steps must be >= 1");
  require(hidden >= 1 && discriminator_hidden >= 1, "hidden sizes must be >= 1");
  require(batch_size() % static_cast<std::size_t>(minibatches) == 0,
          "minibatches must divide num_envs * num_steps");
}

void ExperimentConfig::validate() const {
  algo.validate();
  try {
    env.validate();
  } catch (const DomainError& e) {
    throw ConfigError(0, e.what());
  }
  require(train_levels >= 1, "train_levels must be >= 1");
  require(eval.episodes >= 1, "episodes must be >= 1");
  require(eval.test_levels >= 1, "test_levels must be >= 1");
  require(eval.runs >= 1, "runs must be >= 1");
}

int updates_for_budget(const AlgoConfig& config, std::uint64_t steps) {
  const std::uint64_t per_update = config.batch_size();
  const std::uint64_t n = (steps + per_update - 1) / per_update;
  return static_cast<int>(n < 1 ? 1 : n);
}

AlgoConfig effective_config(AlgoConfig config) {
  if (config.algorithm == Algorithm::kNaiveDecoupled) {
    config.advantage_coef = 0.0;
    config.policy_epochs = 1;
    config.value_epochs = 1;
    config.value_freq = 1;
  }
  return config;
}

}  // namespace daaclab::algos
