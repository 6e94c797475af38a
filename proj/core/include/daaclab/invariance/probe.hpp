#ifndef DAACLAB_INVARIANCE_PROBE_HPP_
#define DAACLAB_INVARIANCE_PROBE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>

#include "daaclab/rollout/buffer.hpp"

namespace daaclab::invariance {

// Features for every cell of a rollout buffer, row-major [buffer.size(), width].
struct CellFeatures {
  const rollout::RolloutBuffer* buffer = nullptr;
  std::span<const double> values;
  std::size_t width = 0;
};

struct ProbeOptions {
  std::size_t steps = 500;
  std::size_t pairs_per_step = 256;
  std::size_t eval_pairs = 4000;
  std::size_t hidden = 64;
  double learning_rate = 1e-3;
  std::uint64_t seed = 1;
};

struct ProbeResult {
  double train_accuracy = 0.0;
  double heldout_accuracy = 0.0;
  // Pairs actually available; 0 when a buffer had no segment of length >= 2.
  std::size_t train_pairs = 0;
  std::size_t heldout_pairs = 0;
};

// Trains a fresh order discriminator on pairs drawn from `train` and reports
// its accuracy on pairs drawn from `heldout`. The features are fixed inputs.
ProbeResult train_order_probe(const CellFeatures& train, const CellFeatures& heldout,
                              const ProbeOptions& options = {});

}  // namespace daaclab::invariance

#endif  // DAACLAB_INVARIANCE_PROBE_HPP_
