#ifndef DAACLAB_DIFFCORE_GRAD_CHECK_HPP_
#define DAACLAB_DIFFCORE_GRAD_CHECK_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "daaclab/diffcore/tape.hpp"

namespace daaclab::diff {

struct GradCheckOptions {
  double step = 1e-5;
  // Denominator floor: error = |analytic - numeric| / max(|analytic|,
  // |numeric|, floor).
  double floor = 1e-3;
};

struct GradCheckResult {
  double max_error = 0.0;
  std::size_t checked = 0;
  std::string worst_parameter;
};

// Builds a scalar loss over the given stores on a fresh tape.
using LossBuilder = std::function<Var(Tape&)>;

// Compares backward() gradients against central finite differences of the
// forward pass for every element of every store.
GradCheckResult check_gradients(std::span<ParameterStore* const> stores,
                                const LossBuilder& build,
                                GradCheckOptions options = {});

GradCheckResult check_gradients(ParameterStore& store, const LossBuilder& build,
                                GradCheckOptions options = {});

}  // namespace daaclab::diff

#endif  // DAACLAB_DIFFCORE_GRAD_CHECK_HPP_
