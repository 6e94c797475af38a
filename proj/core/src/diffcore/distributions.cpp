#include "daaclab/diffcore/distributions.hpp"

#include <algorithm>
#include <cmath>

#include "daaclab/common/error.hpp"

namespace daaclab::diff {

std::vector<double> categorical_from_logits(std::span<const double> logits) {
  if (logits.empty()) throw DimensionError("categorical: no logits");
  for (const double z : logits) {
    if (!std::isfinite(z)) throw NumericError("categorical: non-finite logit");
  }
  const double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> probs(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - mx);
    total += probs[i];
  }
  for (double& p : probs) p /= total;
  return probs;
}

double log_prob(std::span<const double> probs, std::size_t action) {
  if (action >= probs.size()) {
    throw DomainError("log_prob: action " + std::to_string(action) +
                      " outside " + std::to_string(probs.size()) + " actions");
  }
  if (!(probs[action] > 0.0)) {
    throw NumericError("log_prob: zero probability for action " +
                       std::to_string(action));
  }
  return std::log(probs[action]);
}

double entropy(std::span<const double> probs) {
  double h = 0.0;
  for (const double p : probs) {
    if (p < 0.0) throw DomainError("entropy: negative probability");
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

std::size_t argmax(std::span<const double> values) {
  if (values.empty()) throw DimensionError("argmax: empty input");
  return static_cast<std::size_t>(
      std::max_element(values.begin(), values.end()) - values.begin());
}

}  // namespace daaclab::diff
