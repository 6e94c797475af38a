#ifndef DAACLAB_ALGOS_LOSSES_HPP_
#define DAACLAB_ALGOS_LOSSES_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "daaclab/algos/config.hpp"
#include "daaclab/algos/networks.hpp"
#include "daaclab/diffcore/tape.hpp"

namespace daaclab::algos {

// One minibatch of rollout cells.
struct LossBatch {
  std::size_t rows = 0;
  std::size_t observation_size = 0;
  std::vector<double> observations;
  std::vector<std::size_t> actions;
  std::vector<double> old_log_probs;
  // Raw GAE advantages; the surrogate normalizes its own copy.
  std::vector<double> advantages;
  std::vector<double> targets;
};

// (A - mean) / (std + 1e-8), population std. A single element maps to 0.
std::vector<double> normalize_advantages(std::span<const double> advantages);

// mean min(r A, clip(r, 1 - eps, 1 + eps) A) with r = exp(logp - old).
diff::Var clipped_surrogate(diff::Var log_probs, std::span<const double> old_log_probs,
                            std::span<const double> advantages, double clip);

// Fraction of samples with |r - 1| > eps.
double clip_fraction(std::span<const double> ratios, double clip);

// mean (prediction - target)^2 over a [n] prediction.
diff::Var mean_squared_error(diff::Var prediction, std::span<const double> targets);

// mean over rows of -sum_a pi log pi.
diff::Var mean_entropy(diff::Var log_probs_all);

// Which terms enter the composite. A term that is excluded is not built on
// the gradient path at all.
struct LossTerms {
  bool surrogate = true;
  bool value = true;
  bool entropy = true;
  bool advantage = true;
};

// The composite to minimize and the individual term values.
struct PolicyLosses {
  diff::Var loss;
  diff::Var features;
  double surrogate = 0.0;      // J_pi
  double value = 0.0;          // J_V (shared network) or 0
  double entropy = 0.0;        // S_pi
  double auxiliary = 0.0;      // L_A or the DVAC value regression
  double clip_fraction = 0.0;
};

// Shared network (ppo, aac):
//   loss = -(J_pi - c_v J_V + c_s S_pi - c_a L_A)
// L_A only for networks with an advantage head (aac). A zero weight drops
// its term from the composite.
PolicyLosses ppo_losses(diff::Tape& tape, PolicyNetwork& net,
                        const LossBatch& batch, const AlgoConfig& config,
                        LossTerms terms = {});

// Decoupled policy (daac, idaac, dvac, naive_decoupled):
//   loss = -(J_pi + c_s S_pi - c_a L_aux)
// L_aux regresses the advantage head at the taken action onto A (daac,
// idaac) or the aux value head onto V_hat (dvac); naive_decoupled has none.
// Throws UsageError for a shared-network algorithm.
PolicyLosses daac_policy_loss(diff::Tape& tape, PolicyNetwork& net,
                              const LossBatch& batch, const AlgoConfig& config,
                              LossTerms terms = {});

// L_V = mean (V_phi - V_hat)^2 for the separate critic.
diff::Var value_loss(diff::Tape& tape, ValueNetwork& critic, const LossBatch& batch);

}  // namespace daaclab::algos

#endif  // DAACLAB_ALGOS_LOSSES_HPP_
