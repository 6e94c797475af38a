#ifndef DAACLAB_ALGOS_NETWORKS_HPP_
#define DAACLAB_ALGOS_NETWORKS_HPP_

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "daaclab/algos/config.hpp"
#include "daaclab/common/rng.hpp"
#include "daaclab/diffcore/mlp.hpp"
#include "daaclab/diffcore/parameter_store.hpp"
#include "daaclab/rollout/collect.hpp"

namespace daaclab::algos {

// Extra regression head on the policy network.
enum class AuxHead {
  kNone,
  // One output per action, read at the taken action.
  kAdvantage,
  // Scalar state value (DVAC).
  kValue,
};

struct PolicyLayout {
  std::size_t observation_size = 0;
  std::size_t action_count = 0;
  std::size_t hidden = 64;
  // Shared-network value head (ppo, aac).
  bool value_head = false;
  AuxHead aux = AuxHead::kNone;
};

PolicyLayout policy_layout(Algorithm algo, std::size_t observation_size,
                           std::size_t action_count, std::size_t hidden);

// Invalid Vars mark heads the network does not have.
struct PolicyOutput {
  diff::Var features;   // [n, hidden]
  diff::Var logits;     // [n, actions]
  diff::Var value;      // [n]
  diff::Var advantage;  // [n, actions]
  diff::Var aux_value;  // [n]
};

// Two-layer tanh encoder followed by linear heads. The features are the
// encoder output that every head reads.
class PolicyNetwork {
 public:
  PolicyNetwork(PolicyLayout layout, Rng& rng);

  PolicyOutput forward(diff::Tape& tape, diff::Var observations);
  // Parameters enter the tape as constants.
  PolicyOutput forward(diff::Tape& tape, diff::Var observations) const;
  diff::Var encode(diff::Tape& tape, diff::Var observations);
  diff::Var encode(diff::Tape& tape, diff::Var observations) const;

  const PolicyLayout& layout() const { return layout_; }
  diff::ParameterStore& params() { return params_; }
  const diff::ParameterStore& params() const { return params_; }

 private:
  template <typename Store>
  static PolicyOutput run(const PolicyNetwork& net, Store& store,
                          diff::Tape& tape, diff::Var observations);

  PolicyLayout layout_;
  diff::MlpSpec encoder_;
  diff::MlpSpec policy_head_;
  diff::MlpSpec scalar_head_;
  diff::MlpSpec advantage_head_;
  diff::ParameterStore params_;
};

// Independent critic: its own encoder and a scalar head.
class ValueNetwork {
 public:
  ValueNetwork(std::size_t observation_size, std::size_t hidden, Rng& rng);

  diff::Var forward(diff::Tape& tape, diff::Var observations);
  diff::Var forward(diff::Tape& tape, diff::Var observations) const;

  diff::ParameterStore& params() { return params_; }
  const diff::ParameterStore& params() const { return params_; }

 private:
  diff::MlpSpec encoder_;
  diff::MlpSpec head_;
  diff::ParameterStore params_;
};

// Everything a trained model reports for a batch of observations.
struct Prediction {
  std::size_t rows = 0;
  std::size_t action_count = 0;
  std::vector<double> features;
  std::vector<double> logits;
  std::vector<double> probabilities;
  // The critic (decoupled) or the shared value head.
  std::vector<double> values;
  // Per-action advantage head output; empty without one.
  std::vector<double> advantages;
  // DVAC's auxiliary value head; empty otherwise.
  std::vector<double> aux_values;
};

// Policy network plus, for decoupled algorithms, the separate critic.
class Agent : public rollout::BehaviorModel {
 public:
  Agent(Algorithm algo, std::size_t observation_size, std::size_t action_count,
        std::size_t hidden, std::uint64_t seed);

  std::size_t action_count() const override {
    return policy_.layout().action_count;
  }
  void evaluate(std::span<const double> observations, std::size_t rows,
                std::vector<double>& logits,
                std::vector<double>& values) const override;
  Prediction predict(std::span<const double> observations,
                     std::size_t rows) const;

  Algorithm algorithm() const { return algo_; }
  std::size_t observation_size() const { return observation_size_; }
  PolicyNetwork& policy() { return policy_; }
  const PolicyNetwork& policy() const { return policy_; }
  bool has_critic() const { return critic_.has_value(); }
  ValueNetwork& critic() { return *critic_; }
  const ValueNetwork& critic() const { return *critic_; }

 private:
  Algorithm algo_;
  std::size_t observation_size_;
  PolicyNetwork policy_;
  std::optional<ValueNetwork> critic_;
};

// Init stream tags derived from the run seed.
inline constexpr std::uint64_t kPolicyInitStream = 21;
inline constexpr std::uint64_t kCriticInitStream = 22;
inline constexpr std::uint64_t kDiscriminatorInitStream = 23;

}  // namespace daaclab::algos

#endif  // DAACLAB_ALGOS_NETWORKS_HPP_
