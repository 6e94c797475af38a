#ifndef DAACLAB_INVARIANCE_PAIRS_HPP_
#define DAACLAB_INVARIANCE_PAIRS_HPP_

#include <cstddef>
#include <vector>

#include "daaclab/common/rng.hpp"
#include "daaclab/rollout/buffer.hpp"

namespace daaclab::invariance {

// A maximal run of consecutive steps of one environment's episode inside a
// rollout. Segments never cross a done flag or the rollout boundary.
struct EpisodeSegment {
  std::size_t env = 0;
  std::size_t first_step = 0;
  std::size_t length = 0;
};

std::vector<EpisodeSegment> episode_segments(const rollout::RolloutBuffer& buffer);

// Temporal-order pairs as buffer cell indices. label[i] = 1 when first[i]
// was observed before second[i] in the same episode.
struct PairBatch {
  std::vector<std::size_t> first;
  std::vector<std::size_t> second;
  std::vector<double> labels;

  std::size_t size() const { return labels.size(); }
  bool empty() const { return labels.empty(); }
};

// Each pair: a segment with probability proportional to its number of
// unordered index pairs, a uniform unordered pair {t1 != t2} inside it, and a
// fair coin for the argument order. Returns an empty batch when no segment
// has length >= 2.
PairBatch sample_order_pairs(const rollout::RolloutBuffer& buffer,
                             std::size_t n_pairs, Rng& rng);

}  // namespace daaclab::invariance

#endif  // DAACLAB_INVARIANCE_PAIRS_HPP_
