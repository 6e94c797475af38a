#ifndef DAACLAB_ANALYSIS_GRADIENT_SUITE_HPP_
#define DAACLAB_ANALYSIS_GRADIENT_SUITE_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "daaclab/diffcore/grad_check.hpp"

namespace daaclab::analysis {

// Finite-difference results for one operation or composite loss, aggregated
// over its random trials.
struct GradientCase {
  std::string name;
  std::size_t trials = 0;
  std::size_t checked = 0;
  double max_error = 0.0;
  std::string worst_parameter;
};

struct GradientSuiteReport {
  std::vector<GradientCase> cases;
  double step = 0.0;

  std::size_t trials() const;
  double max_error() const;
  bool passed(double tolerance) const { return max_error() <= tolerance; }
};

// Every differentiable diffcore op plus the composite training losses
// (ppo, aac, daac, dvac, idaac, naive_decoupled policy losses, the value loss,
// the discriminator loss and the encoder invariance loss) on random small
// instances, `trials_per_case` each.
GradientSuiteReport run_gradient_suite(std::uint64_t seed,
                                       std::size_t trials_per_case = 4,
                                       diff::GradCheckOptions options = {});

}  // namespace daaclab::analysis

#endif  // DAACLAB_ANALYSIS_GRADIENT_SUITE_HPP_
