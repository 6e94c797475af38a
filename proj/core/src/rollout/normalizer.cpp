#include "daaclab/rollout/normalizer.hpp"

#include <algorithm>
#include <cmath>

#include "daaclab/common/error.hpp"

namespace daaclab::rollout {

void RunningStat::push(double x) {
  count += 1.0;
  const double delta = x - mean;
  mean += delta / count;
  m2 += delta * (x - mean);
}

double RunningStat::variance() const { return count < 2.0 ? 1.0 : m2 / count; }

double RunningStat::std() const { return std::sqrt(variance()); }

RunningRewardNormalizer::RunningRewardNormalizer(std::size_t num_envs,
                                                 double gamma, double clip)
    : gamma_(gamma), clip_(clip), returns_(num_envs, 0.0) {}

double RunningRewardNormalizer::normalize(std::size_t env, double reward,
                                          bool done) {
  if (env >= returns_.size()) throw DimensionError("normalizer: env out of range");
  returns_[env] = gamma_ * returns_[env] + reward;
  stat_.push(returns_[env]);
  double scaled = reward / std::max(stat_.std(), 1e-8);
  if (clip_ > 0.0) scaled = std::clamp(scaled, -clip_, clip_);
  if (done) returns_[env] = 0.0;
  return scaled;
}

void RunningRewardNormalizer::restore(RunningStat stat,
                                      std::vector<double> returns) {
  if (returns.size() != returns_.size()) {
    throw DimensionError("normalizer: restore with wrong env count");
  }
  stat_ = stat;
  returns_ = std::move(returns);
}

}  // namespace daaclab::rollout
