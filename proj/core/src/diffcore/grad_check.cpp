#include "daaclab/diffcore/grad_check.hpp"

#include <algorithm>
#include <cmath>

namespace daaclab::diff {
namespace {

double evaluate(const LossBuilder& build) {
  Tape tape;
  return build(tape).item();
}

}  // namespace

GradCheckResult check_gradients(std::span<ParameterStore* const> stores,
                                const LossBuilder& build,
                                GradCheckOptions options) {
  std::vector<std::vector<std::vector<double>>> analytic;
  {
    Tape tape;
    const Var loss = build(tape);
    for (ParameterStore* store : stores) store->zero_grad();
    tape.backward(loss);
    for (ParameterStore* store : stores) {
      auto& per_store = analytic.emplace_back();
      for (const auto& [name, tensor] : *store) per_store.push_back(*tensor.grad);
    }
  }

  GradCheckResult result;
  for (std::size_t s = 0; s < stores.size(); ++s) {
    ParameterStore& store = *stores[s];
    for (std::size_t k = 0; k < store.size(); ++k) {
      auto& values = store.at(k).values;
      for (std::size_t i = 0; i < values.size(); ++i) {
        const double original = values[i];
        values[i] = original + options.step;
        const double plus = evaluate(build);
        values[i] = original - options.step;
        const double minus = evaluate(build);
        values[i] = original;
        const double numeric = (plus - minus) / (2.0 * options.step);
        const double a = analytic[s][k][i];
        const double denom =
            std::max({std::abs(a), std::abs(numeric), options.floor});
        const double error = std::abs(a - numeric) / denom;
        if (error > result.max_error || result.checked == 0) {
          result.max_error = std::max(result.max_error, error);
          result.worst_parameter = store.name_of(k) + "[" + std::to_string(i) + "]";
        }
        ++result.checked;
      }
    }
  }
  return result;
}

GradCheckResult check_gradients(ParameterStore& store, const LossBuilder& build,
                                GradCheckOptions options) {
  ParameterStore* stores[] = {&store};
  return check_gradients(std::span<ParameterStore* const>(stores), build,
                         options);
}

}  // namespace daaclab::diff
