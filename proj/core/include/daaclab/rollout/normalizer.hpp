#ifndef DAACLAB_ROLLOUT_NORMALIZER_HPP_
#define DAACLAB_ROLLOUT_NORMALIZER_HPP_

#include <cstddef>
#include <vector>

namespace daaclab::rollout {

// Welford accumulator. std() is the population standard deviation, taken as
// 1 until two samples have been seen.
struct RunningStat {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x);
  double variance() const;
  double std() const;
};

// Scales rewards by the running std of the per-environment discounted return
// R_t = gamma * R_{t-1} * (1 - done_{t-1}) + r_t.
class RunningRewardNormalizer {
 public:
  RunningRewardNormalizer() = default;
  // clip <= 0 disables clipping of the scaled reward.
  RunningRewardNormalizer(std::size_t num_envs, double gamma, double clip = 0.0);

  // Updates the statistics with this step's return, then returns
  // reward / max(std, 1e-8), clipped to [-clip, clip].
  double normalize(std::size_t env, double reward, bool done);

  const RunningStat& stat() const { return stat_; }
  const std::vector<double>& returns() const { return returns_; }
  double gamma() const { return gamma_; }
  double clip() const { return clip_; }

  void restore(RunningStat stat, std::vector<double> returns);

 private:
  double gamma_ = 0.99;
  double clip_ = 0.0;
  std::vector<double> returns_;
  RunningStat stat_;
};

}  // namespace daaclab::rollout

#endif  // DAACLAB_ROLLOUT_NORMALIZER_HPP_
