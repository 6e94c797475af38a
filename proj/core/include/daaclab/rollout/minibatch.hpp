#ifndef DAACLAB_ROLLOUT_MINIBATCH_HPP_
#define DAACLAB_ROLLOUT_MINIBATCH_HPP_

#include <cstddef>
#include <vector>

#include "daaclab/common/rng.hpp"

namespace daaclab::rollout {

// Fisher-Yates permutation of [0, total) (swap i with uniform_index(i + 1),
// i descending) cut into `count` equal consecutive sets. Throws ConfigError
// unless count divides total.
std::vector<std::vector<std::size_t>> minibatches(std::size_t total,
                                                  std::size_t count, Rng& rng);

}  // namespace daaclab::rollout

#endif  // DAACLAB_ROLLOUT_MINIBATCH_HPP_
