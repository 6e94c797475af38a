#include "daaclab/invariance/pairs.hpp"

#include <algorithm>

namespace daaclab::invariance {

std::vector<EpisodeSegment> episode_segments(
    const rollout::RolloutBuffer& buffer) {
  std::vector<EpisodeSegment> segments;
  for (std::size_t n = 0; n < buffer.num_envs; ++n) {
    std::size_t begin = 0;
    for (std::size_t t = 0; t < buffer.num_steps; ++t) {
      const bool last = t + 1 == buffer.num_steps;
      if (buffer.dones[buffer.index(t, n)] || last) {
        segments.push_back({n, begin, t + 1 - begin});
        begin = t + 1;
      }
    }
  }
  return segments;
}

PairBatch sample_order_pairs(const rollout::RolloutBuffer& buffer,
                             std::size_t n_pairs, Rng& rng) {
  PairBatch batch;
  std::vector<EpisodeSegment> usable;
  std::vector<double> cumulative;
  double total = 0.0;
  for (const EpisodeSegment& s : episode_segments(buffer)) {
    if (s.length < 2) continue;
    total += 0.5 * static_cast<double>(s.length) *
             static_cast<double>(s.length - 1);
    usable.push_back(s);
    cumulative.push_back(total);
  }
  if (usable.empty()) return batch;

  batch.first.reserve(n_pairs);
  batch.second.reserve(n_pairs);
  batch.labels.reserve(n_pairs);
  for (std::size_t k = 0; k < n_pairs; ++k) {
    const double u = rng.uniform() * total;
    const auto pick = std::min<std::size_t>(
        static_cast<std::size_t>(
            std::upper_bound(cumulative.begin(), cumulative.end(), u) -
            cumulative.begin()),
        usable.size() - 1);
    const EpisodeSegment& s = usable[pick];
    // Uniform ordered offsets t1 != t2; the order is then re-drawn fairly.
    const std::size_t a = rng.uniform_index(s.length);
    std::size_t b = rng.uniform_index(s.length - 1);
    if (b >= a) ++b;
    const std::size_t early = std::min(a, b), late = std::max(a, b);
    const std::size_t early_cell = buffer.index(s.first_step + early, s.env);
    const std::size_t late_cell = buffer.index(s.first_step + late, s.env);
    if (rng.uniform() < 0.5) {
      batch.first.push_back(early_cell);
      batch.second.push_back(late_cell);
      batch.labels.push_back(1.0);
    } else {
      batch.first.push_back(late_cell);
      batch.second.push_back(early_cell);
      batch.labels.push_back(0.0);
    }
  }
  return batch;
}

}  // namespace daaclab::invariance
