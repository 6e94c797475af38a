#ifndef DAACLAB_INVARIANCE_DISCRIMINATOR_HPP_
#define DAACLAB_INVARIANCE_DISCRIMINATOR_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "daaclab/common/rng.hpp"
#include "daaclab/diffcore/mlp.hpp"
#include "daaclab/diffcore/parameter_store.hpp"

namespace daaclab::invariance {

// D(f_i, f_j): probability that the first observation came first. The MLP
// maps [f_i, f_j] through two relu layers to a single logit.
class Discriminator {
 public:
  Discriminator(std::size_t feature_size, std::size_t hidden, Rng& rng);

  // Logits [n] on the tape. Parameters are trainable leaves.
  diff::Var logits(diff::Tape& tape, diff::Var first, diff::Var second);
  // Same computation with the parameters entering as constants.
  diff::Var frozen_logits(diff::Tape& tape, diff::Var first,
                          diff::Var second) const;

  // sigmoid(logit) for row-major feature matrices [n, feature_size].
  std::vector<double> probabilities(std::span<const double> first,
                                    std::span<const double> second,
                                    std::size_t rows) const;

  diff::ParameterStore& params() { return params_; }
  const diff::ParameterStore& params() const { return params_; }
  std::size_t feature_size() const { return feature_size_; }

 private:
  std::size_t feature_size_;
  diff::MlpSpec spec_;
  diff::ParameterStore params_;
};

// Binary cross-entropy over labeled pairs from logits:
//   mean -[y log D + (1 - y) log(1 - D)].
// With literal = true the label is ignored and both log terms are applied to
// every pair: mean -[log D + log(1 - D)].
// Returns nullopt for an empty batch (skip the adversarial step).
std::optional<diff::Var> discriminator_loss(diff::Var logits,
                                            std::span<const double> labels,
                                            bool literal = false);

// mean of -1/2 log D - 1/2 log(1 - D); nullopt for an empty batch.
std::optional<diff::Var> encoder_invariance_loss(diff::Var logits);

// Fraction of pairs where (D > 0.5) agrees with the label.
double discriminator_accuracy(std::span<const double> probabilities,
                              std::span<const double> labels);

}  // namespace daaclab::invariance

#endif  // DAACLAB_INVARIANCE_DISCRIMINATOR_HPP_
