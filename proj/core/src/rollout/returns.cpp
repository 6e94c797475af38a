#include "daaclab/rollout/returns.hpp"

#include "daaclab/common/error.hpp"

namespace daaclab::rollout {

std::string_view to_string(ValueTarget target) {
  return target == ValueTarget::kGae ? "gae" : "monte_carlo";
}

ValueTarget parse_value_target(std::string_view text) {
  if (text == "gae") return ValueTarget::kGae;
  if (text == "monte_carlo") return ValueTarget::kMonteCarlo;
  throw DomainError("unknown value target: " + std::string(text));
}

const std::vector<double>& compute_gae(RolloutBuffer& buffer, double gamma,
                                       double lambda) {
  const std::size_t T = buffer.num_steps, N = buffer.num_envs;
  std::vector<double> adv(T * N, 0.0);
  for (std::size_t n = 0; n < N; ++n) {
    double next_adv = 0.0;
    double next_value = buffer.bootstrap_values[n];
    for (std::size_t t = T; t-- > 0;) {
      const std::size_t i = buffer.index(t, n);
      const double live = buffer.dones[i] ? 0.0 : 1.0;
      const double delta =
          buffer.rewards[i] + gamma * live * next_value - buffer.values[i];
      next_adv = delta + gamma * lambda * live * next_adv;
      adv[i] = next_adv;
      next_value = buffer.values[i];
    }
  }
  buffer.advantages = std::move(adv);
  return *buffer.advantages;
}

const std::vector<double>& compute_value_targets(RolloutBuffer& buffer,
                                                 ValueTarget mode,
                                                 double gamma) {
  const std::size_t T = buffer.num_steps, N = buffer.num_envs;
  std::vector<double> targets(T * N, 0.0);
  if (mode == ValueTarget::kGae) {
    if (!buffer.advantages) {
      throw UsageError("compute_value_targets: run compute_gae first");
    }
    for (std::size_t i = 0; i < targets.size(); ++i) {
      targets[i] = (*buffer.advantages)[i] + buffer.values[i];
    }
  } else {
    for (std::size_t n = 0; n < N; ++n) {
      double ret = buffer.bootstrap_values[n];
      for (std::size_t t = T; t-- > 0;) {
        const std::size_t i = buffer.index(t, n);
        ret = buffer.rewards[i] + (buffer.dones[i] ? 0.0 : gamma * ret);
        targets[i] = ret;
      }
    }
  }
  buffer.targets = std::move(targets);
  return *buffer.targets;
}

bool MonteCarloReturns::all_complete() const {
  for (const auto c : complete) {
    if (!c) return false;
  }
  return true;
}

MonteCarloReturns monte_carlo_return(std::span<const double> rewards,
                                     std::span<const std::uint8_t> dones,
                                     double gamma) {
  if (rewards.size() != dones.size()) {
    throw DimensionError("monte_carlo_return: rewards and dones differ in length");
  }
  MonteCarloReturns out;
  out.returns.assign(rewards.size(), 0.0);
  out.complete.assign(rewards.size(), 0);
  double ret = 0.0;
  bool complete = false;
  for (std::size_t t = rewards.size(); t-- > 0;) {
    if (dones[t]) {
      ret = 0.0;
      complete = true;
    }
    ret = rewards[t] + gamma * ret;
    out.returns[t] = ret;
    out.complete[t] = complete ? 1 : 0;
  }
  return out;
}

}  // namespace daaclab::rollout
