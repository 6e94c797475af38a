#include "daaclab/rollout/minibatch.hpp"

#include <numeric>
#include <utility>

#include "daaclab/common/error.hpp"

namespace daaclab::rollout {

std::vector<std::vector<std::size_t>> minibatches(std::size_t total,
                                                  std::size_t count, Rng& rng) {
  if (count == 0 || total % count != 0) {
    throw ConfigError(0, "minibatch count " + std::to_string(count) +
                             " does not divide " + std::to_string(total) +
                             " samples");
  }
  std::vector<std::size_t> perm(total);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = total; i-- > 1;) {
    std::swap(perm[i], perm[rng.uniform_index(i + 1)]);
  }
  const std::size_t size = total / count;
  std::vector<std::vector<std::size_t>> sets(count);
  for (std::size_t b = 0; b < count; ++b) {
    sets[b].assign(perm.begin() + static_cast<std::ptrdiff_t>(b * size),
                   perm.begin() + static_cast<std::ptrdiff_t>((b + 1) * size));
  }
  return sets;
}

}  // namespace daaclab::rollout
