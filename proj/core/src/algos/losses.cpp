#include "daaclab/algos/losses.hpp"

#include <cmath>

#include "daaclab/common/error.hpp"
#include "daaclab/diffcore/ops.hpp"

namespace daaclab::algos {

namespace {

diff::Var observations_of(diff::Tape& tape, const LossBatch& batch) {
  return tape.constant({batch.rows, batch.observation_size}, batch.observations);
}

diff::Var taken(diff::Var per_action, std::span<const std::size_t> actions) {
  return diff::gather_cols(per_action, actions);
}

// Accumulates a signed composite, skipping terms that were not built.
struct Composite {
  diff::Var total;
  void add(diff::Var term, double weight) {
    const diff::Var scaled = weight == 1.0 ? term : diff::scale(term, weight);
    total = total.valid() ? diff::add(total, scaled) : scaled;
  }
};

}  // namespace

std::vector<double> normalize_advantages(std::span<const double> advantages) {
  const std::size_t n = advantages.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  double mean = 0.0;
  for (const double a : advantages) mean += a;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (const double a : advantages) var += (a - mean) * (a - mean);
  const double std = std::sqrt(var / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) out[i] = (advantages[i] - mean) / (std + 1e-8);
  return out;
}

diff::Var clipped_surrogate(diff::Var log_probs, std::span<const double> old_log_probs,
                            std::span<const double> advantages, double clip) {
  const std::size_t n = log_probs.size();
  if (old_log_probs.size() != n || advantages.size() != n) {
    throw DimensionError("clipped_surrogate: batch length mismatch");
  }
  diff::Tape& tape = log_probs.tape();
  const diff::Var old = tape.constant({n}, {old_log_probs.begin(), old_log_probs.end()});
  const diff::Var adv = tape.constant({n}, {advantages.begin(), advantages.end()});
  const diff::Var ratio = diff::exp(diff::sub(log_probs, old));
  const diff::Var unclipped = diff::mul(ratio, adv);
  const diff::Var clipped = diff::mul(diff::clamp(ratio, 1.0 - clip, 1.0 + clip), adv);
  return diff::mean(diff::minimum(unclipped, clipped));
}

double clip_fraction(std::span<const double> ratios, double clip) {
  if (ratios.empty()) return 0.0;
  std::size_t count = 0;
  for (const double r : ratios) {
    if (std::abs(r - 1.0) > clip) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(ratios.size());
}

diff::Var mean_squared_error(diff::Var prediction, std::span<const double> targets) {
  if (prediction.size() != targets.size()) {
    throw DimensionError("mean_squared_error: " + std::to_string(prediction.size()) +
                         " predictions for " + std::to_string(targets.size()) +
                         " targets");
  }
  const diff::Var t = prediction.tape().constant(
      {targets.size()}, {targets.begin(), targets.end()});
  return diff::mean(diff::square(diff::sub(prediction, t)));
}

diff::Var mean_entropy(diff::Var log_probs_all) {
  const diff::Var p = diff::exp(log_probs_all);
  const diff::Var neg = diff::row_sum(diff::mul(p, log_probs_all));
  return diff::scale(diff::mean(neg), -1.0);
}

namespace {

struct PolicyCore {
  PolicyOutput out;
  diff::Var surrogate;
  diff::Var entropy;
  double clip_fraction = 0.0;
};

PolicyCore policy_core(diff::Tape& tape, PolicyNetwork& net,
                       const LossBatch& batch, double clip) {
  PolicyCore core;
  core.out = net.forward(tape, observations_of(tape, batch));
  const diff::Var logp_all = diff::log_softmax(core.out.logits);
  const diff::Var logp = taken(logp_all, batch.actions);
  core.surrogate = clipped_surrogate(logp, batch.old_log_probs,
                                     normalize_advantages(batch.advantages), clip);
  core.entropy = mean_entropy(logp_all);
  std::vector<double> ratios(batch.rows);
  for (std::size_t i = 0; i < batch.rows; ++i) {
    ratios[i] = std::exp(logp.values()[i] - batch.old_log_probs[i]);
  }
  core.clip_fraction = clip_fraction(ratios, clip);
  return core;
}

}  // namespace

PolicyLosses ppo_losses(diff::Tape& tape, PolicyNetwork& net,
                        const LossBatch& batch, const AlgoConfig& config,
                        LossTerms terms) {
  if (!net.layout().value_head) {
    throw UsageError("ppo_losses: network has no shared value head");
  }
  PolicyCore core = policy_core(tape, net, batch, config.clip);
  const diff::Var jv = mean_squared_error(core.out.value, batch.targets);

  PolicyLosses losses;
  losses.features = core.out.features;
  losses.surrogate = core.surrogate.item();
  losses.entropy = core.entropy.item();
  losses.value = jv.item();
  losses.clip_fraction = core.clip_fraction;

  Composite c;
  if (terms.surrogate) c.add(core.surrogate, -1.0);
  if (terms.value && config.value_coef != 0.0) c.add(jv, config.value_coef);
  if (terms.entropy && config.entropy_coef != 0.0) c.add(core.entropy, -config.entropy_coef);
  if (core.out.advantage.valid()) {
    const diff::Var la = mean_squared_error(taken(core.out.advantage, batch.actions),
                                            batch.advantages);
    losses.auxiliary = la.item();
    if (terms.advantage && config.advantage_coef != 0.0) c.add(la, config.advantage_coef);
  }
  losses.loss = c.total.valid() ? c.total : tape.constant({1}, {0.0});
  return losses;
}

PolicyLosses daac_policy_loss(diff::Tape& tape, PolicyNetwork& net,
                              const LossBatch& batch, const AlgoConfig& config,
                              LossTerms terms) {
  if (!is_decoupled(config.algorithm)) {
    throw UsageError("daac_policy_loss: '" + std::string(to_string(config.algorithm)) +
                     "' uses a shared network");
  }
  PolicyCore core = policy_core(tape, net, batch, config.clip);

  PolicyLosses losses;
  losses.features = core.out.features;
  losses.surrogate = core.surrogate.item();
  losses.entropy = core.entropy.item();
  losses.clip_fraction = core.clip_fraction;

  Composite c;
  if (terms.surrogate) c.add(core.surrogate, -1.0);
  if (terms.entropy && config.entropy_coef != 0.0) c.add(core.entropy, -config.entropy_coef);

  diff::Var aux;
  if (config.algorithm == Algorithm::kDvac) {
    aux = mean_squared_error(core.out.aux_value, batch.targets);
  } else if (config.algorithm != Algorithm::kNaiveDecoupled) {
    aux = mean_squared_error(taken(core.out.advantage, batch.actions), batch.advantages);
  }
  if (aux.valid()) {
    losses.auxiliary = aux.item();
    if (terms.advantage && config.advantage_coef != 0.0) c.add(aux, config.advantage_coef);
  }
  losses.loss = c.total.valid() ? c.total : tape.constant({1}, {0.0});
  return losses;
}

diff::Var value_loss(diff::Tape& tape, ValueNetwork& critic, const LossBatch& batch) {
  return mean_squared_error(critic.forward(tape, observations_of(tape, batch)),
                            batch.targets);
}

}  // namespace daaclab::algos
