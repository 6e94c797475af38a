#include "daaclab/algos/networks.hpp"

#include <cmath>

#include "daaclab/common/hash.hpp"
#include "daaclab/diffcore/distributions.hpp"
#include "daaclab/diffcore/ops.hpp"

namespace daaclab::algos {

namespace {

const double kSqrt2 = std::sqrt(2.0);

diff::MlpSpec head(std::size_t in, std::size_t out) {
  return {{in, out}, diff::Activation::kTanh, false};
}

diff::Var flatten(diff::Var v) { return diff::reshape(v, {v.rows()}); }

}  // namespace

PolicyLayout policy_layout(Algorithm algo, std::size_t observation_size,
                           std::size_t action_count, std::size_t hidden) {
  PolicyLayout layout{observation_size, action_count, hidden, false,
                      AuxHead::kNone};
  switch (algo) {
    case Algorithm::kPpo:
      layout.value_head = true;
      break;
    case Algorithm::kAac:
      layout.value_head = true;
      layout.aux = AuxHead::kAdvantage;
      break;
    case Algorithm::kDaac:
    case Algorithm::kIdaac:
    case Algorithm::kNaiveDecoupled:
      // naive_decoupled keeps the head so its trajectory matches DAAC with a
      // zero advantage weight; the head is never trained.
      layout.aux = AuxHead::kAdvantage;
      break;
    case Algorithm::kDvac:
      layout.aux = AuxHead::kValue;
      break;
  }
  return layout;
}

PolicyNetwork::PolicyNetwork(PolicyLayout layout, Rng& rng)
    : layout_(layout),
      encoder_{{layout.observation_size, layout.hidden, layout.hidden},
               diff::Activation::kTanh, true},
      policy_head_(head(layout.hidden, layout.action_count)),
      scalar_head_(head(layout.hidden, 1)),
      advantage_head_(head(layout.hidden, layout.action_count)),
      params_("policy") {
  diff::init_mlp(params_, "encoder", encoder_, rng, {kSqrt2, kSqrt2});
  diff::init_mlp(params_, "policy", policy_head_, rng, {0.01});
  if (layout_.value_head) diff::init_mlp(params_, "value", scalar_head_, rng, {1.0});
  if (layout_.aux == AuxHead::kAdvantage) {
    diff::init_mlp(params_, "advantage", advantage_head_, rng, {1.0});
  } else if (layout_.aux == AuxHead::kValue) {
    diff::init_mlp(params_, "aux_value", scalar_head_, rng, {1.0});
  }
}

template <typename Store>
PolicyOutput PolicyNetwork::run(const PolicyNetwork& net, Store& store,
                                diff::Tape& tape, diff::Var observations) {
  PolicyOutput out;
  out.features = diff::forward_mlp(tape, store, "encoder", net.encoder_, observations);
  out.logits = diff::forward_mlp(tape, store, "policy", net.policy_head_, out.features);
  if (net.layout_.value_head) {
    out.value = flatten(
        diff::forward_mlp(tape, store, "value", net.scalar_head_, out.features));
  }
  if (net.layout_.aux == AuxHead::kAdvantage) {
    out.advantage =
        diff::forward_mlp(tape, store, "advantage", net.advantage_head_, out.features);
  } else if (net.layout_.aux == AuxHead::kValue) {
    out.aux_value = flatten(
        diff::forward_mlp(tape, store, "aux_value", net.scalar_head_, out.features));
  }
  return out;
}

PolicyOutput PolicyNetwork::forward(diff::Tape& tape, diff::Var observations) {
  return run(*this, params_, tape, observations);
}

PolicyOutput PolicyNetwork::forward(diff::Tape& tape,
                                    diff::Var observations) const {
  return run(*this, params_, tape, observations);
}

diff::Var PolicyNetwork::encode(diff::Tape& tape, diff::Var observations) {
  return diff::forward_mlp(tape, params_, "encoder", encoder_, observations);
}

diff::Var PolicyNetwork::encode(diff::Tape& tape, diff::Var observations) const {
  return diff::forward_mlp(tape, params_, "encoder", encoder_, observations);
}

ValueNetwork::ValueNetwork(std::size_t observation_size, std::size_t hidden,
                           Rng& rng)
    : encoder_{{observation_size, hidden, hidden}, diff::Activation::kTanh, true},
      head_(head(hidden, 1)),
      params_("critic") {
  diff::init_mlp(params_, "encoder", encoder_, rng, {kSqrt2, kSqrt2});
  diff::init_mlp(params_, "value", head_, rng, {1.0});
}

diff::Var ValueNetwork::forward(diff::Tape& tape, diff::Var observations) {
  const diff::Var h = diff::forward_mlp(tape, params_, "encoder", encoder_, observations);
  return flatten(diff::forward_mlp(tape, params_, "value", head_, h));
}

diff::Var ValueNetwork::forward(diff::Tape& tape, diff::Var observations) const {
  const diff::Var h = diff::forward_mlp(tape, params_, "encoder", encoder_, observations);
  return flatten(diff::forward_mlp(tape, params_, "value", head_, h));
}

namespace {

Rng init_rng(std::uint64_t seed, std::uint64_t stream) {
  return Rng(hash_combine(seed, stream));
}

PolicyNetwork make_policy(Algorithm algo, std::size_t obs, std::size_t actions,
                          std::size_t hidden, std::uint64_t seed) {
  Rng rng = init_rng(seed, kPolicyInitStream);
  return PolicyNetwork(policy_layout(algo, obs, actions, hidden), rng);
}

}  // namespace

Agent::Agent(Algorithm algo, std::size_t observation_size,
             std::size_t action_count, std::size_t hidden, std::uint64_t seed)
    : algo_(algo),
      observation_size_(observation_size),
      policy_(make_policy(algo, observation_size, action_count, hidden, seed)) {
  if (is_decoupled(algo)) {
    Rng rng = init_rng(seed, kCriticInitStream);
    critic_.emplace(observation_size, hidden, rng);
  }
}

void Agent::evaluate(std::span<const double> observations, std::size_t rows,
                     std::vector<double>& logits,
                     std::vector<double>& values) const {
  diff::Tape tape;
  const diff::Var obs = tape.constant(
      {rows, observation_size_},
      std::vector<double>(observations.begin(), observations.end()));
  const PolicyOutput out = policy_.forward(tape, obs);
  logits.assign(out.logits.values().begin(), out.logits.values().end());
  const diff::Var v = critic_ ? critic_->forward(tape, obs) : out.value;
  values.assign(v.values().begin(), v.values().end());
}

Prediction Agent::predict(std::span<const double> observations,
                          std::size_t rows) const {
  diff::Tape tape;
  const diff::Var obs = tape.constant(
      {rows, observation_size_},
      std::vector<double>(observations.begin(), observations.end()));
  const PolicyOutput out = policy_.forward(tape, obs);
  Prediction p;
  p.rows = rows;
  p.action_count = action_count();
  p.features.assign(out.features.values().begin(), out.features.values().end());
  p.logits.assign(out.logits.values().begin(), out.logits.values().end());
  p.probabilities.reserve(p.logits.size());
  for (std::size_t r = 0; r < rows; ++r) {
    const auto probs = diff::categorical_from_logits(
        std::span<const double>(p.logits).subspan(r * p.action_count, p.action_count));
    p.probabilities.insert(p.probabilities.end(), probs.begin(), probs.end());
  }
  const diff::Var v = critic_ ? critic_->forward(tape, obs) : out.value;
  p.values.assign(v.values().begin(), v.values().end());
  if (out.advantage.valid()) {
    p.advantages.assign(out.advantage.values().begin(), out.advantage.values().end());
  }
  if (out.aux_value.valid()) {
    p.aux_values.assign(out.aux_value.values().begin(), out.aux_value.values().end());
  }
  return p;
}

}  // namespace daaclab::algos
