#include "daaclab/diffcore/adam.hpp"

#include <cmath>

#include "daaclab/common/error.hpp"

namespace daaclab::diff {

AdamState::AdamState(const ParameterStore& store, AdamOptions opts)
    : options(opts) {
  for (const auto& [name, tensor] : store) {
    first_moment.emplace_back(tensor.size(), 0.0);
    second_moment.emplace_back(tensor.size(), 0.0);
  }
}

void adam_step(ParameterStore& store, AdamState& state) {
  if (state.first_moment.size() != store.size() ||
      state.second_moment.size() != store.size()) {
    throw DimensionError("adam_step: state tracks " +
                         std::to_string(state.first_moment.size()) +
                         " tensors, store has " + std::to_string(store.size()));
  }
  const AdamOptions& o = state.options;
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(o.beta1, t);
  const double correction2 = 1.0 - std::pow(o.beta2, t);
  for (std::size_t k = 0; k < store.size(); ++k) {
    Tensor& param = store.at(k);
    auto& m = state.first_moment[k];
    auto& v = state.second_moment[k];
    if (m.size() != param.size() || v.size() != param.size()) {
      throw DimensionError("adam_step: moment size mismatch for " +
                           store.name_of(k));
    }
    const auto& g = *param.grad;
    for (std::size_t i = 0; i < param.size(); ++i) {
      m[i] = o.beta1 * m[i] + (1.0 - o.beta1) * g[i];
      v[i] = o.beta2 * v[i] + (1.0 - o.beta2) * g[i] * g[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      param.values[i] -= o.learning_rate * m_hat / (std::sqrt(v_hat) + o.epsilon);
    }
  }
}

double grad_norm(std::span<ParameterStore* const> stores) {
  double total = 0.0;
  for (const ParameterStore* store : stores) {
    for (const auto& [name, tensor] : *store) {
      for (const double g : *tensor.grad) total += g * g;
    }
  }
  return std::sqrt(total);
}

double clip_grad_norm(std::span<ParameterStore* const> stores,
                      double max_norm) {
  const double norm = grad_norm(stores);
  if (max_norm > 0.0 && norm > max_norm) {
    const double factor = max_norm / (norm + 1e-6);
    for (ParameterStore* store : stores) {
      for (auto& [name, tensor] : *store) {
        for (double& g : *tensor.grad) g *= factor;
      }
    }
  }
  return norm;
}

}  // namespace daaclab::diff
