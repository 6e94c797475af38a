#ifndef DAACLAB_ROLLOUT_RETURNS_HPP_
#define DAACLAB_ROLLOUT_RETURNS_HPP_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "daaclab/rollout/buffer.hpp"

namespace daaclab::rollout {

enum class ValueTarget { kGae, kMonteCarlo };

std::string_view to_string(ValueTarget target);
ValueTarget parse_value_target(std::string_view text);

// A_t = delta_t + gamma * lambda * (1 - done_t) * A_{t+1}, with
// delta_t = r_t + gamma * (1 - done_t) * V(s_{t+1}) - V(s_t). Stores and
// returns the advantages.
const std::vector<double>& compute_gae(RolloutBuffer& buffer, double gamma,
                                       double lambda);

// kGae: V_hat = A + V (requires compute_gae first; UsageError otherwise).
// kMonteCarlo: discounted reward-to-go within each episode; segments cut off
// by the rollout end are completed with gamma^k * V(s_T).
const std::vector<double>& compute_value_targets(RolloutBuffer& buffer,
                                                 ValueTarget mode = ValueTarget::kGae,
                                                 double gamma = 0.999);

struct MonteCarloReturns {
  std::vector<double> returns;
  // False for steps of a trailing episode that never reached done.
  std::vector<std::uint8_t> complete;

  bool all_complete() const;
};

// V_t = sum_{k=t}^{end of episode} gamma^(k-t) r_k over one sequence.
MonteCarloReturns monte_carlo_return(std::span<const double> rewards,
                                     std::span<const std::uint8_t> dones,
                                     double gamma);

}  // namespace daaclab::rollout

#endif  // DAACLAB_ROLLOUT_RETURNS_HPP_
