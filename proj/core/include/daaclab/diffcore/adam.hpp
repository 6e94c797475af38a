#ifndef DAACLAB_DIFFCORE_ADAM_HPP_
#define DAACLAB_DIFFCORE_ADAM_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "daaclab/diffcore/parameter_store.hpp"

namespace daaclab::diff {

struct AdamOptions {
  double learning_rate = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Zero-initialized moment accumulators laid out like the store they serve.
struct AdamState {
  AdamOptions options;
  std::vector<std::vector<double>> first_moment;
  std::vector<std::vector<double>> second_moment;
  std::uint64_t step = 0;

  AdamState() = default;
  AdamState(const ParameterStore& store, AdamOptions options);
};

// One bias-corrected Adam update using the gradients held in the store.
// Throws DimensionError when the state does not match the store layout.
void adam_step(ParameterStore& store, AdamState& state);

// Global L2 norm of the gradients of all given stores.
double grad_norm(std::span<ParameterStore* const> stores);

// Rescales gradients so their global norm is at most max_norm; returns the
// norm before clipping. max_norm <= 0 disables clipping.
double clip_grad_norm(std::span<ParameterStore* const> stores,
                      double max_norm);

}  // namespace daaclab::diff

#endif  // DAACLAB_DIFFCORE_ADAM_HPP_
