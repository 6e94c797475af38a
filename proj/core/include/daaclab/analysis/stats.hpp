#ifndef DAACLAB_ANALYSIS_STATS_HPP_
#define DAACLAB_ANALYSIS_STATS_HPP_

#include <span>
#include <vector>

namespace daaclab::analysis {

double mean(std::span<const double> x);
// Population standard deviation; 0 for fewer than two values.
double stddev(std::span<const double> x);
// Midpoint of the two central values for even counts. Throws DomainError on
// an empty input.
double median(std::span<const double> x);

// Sample Pearson coefficient. Throws DimensionError on mismatched or short
// input and DomainError when either side has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);
// Pearson over average ranks (ties share the mean rank).
double spearman(std::span<const double> x, std::span<const double> y);
std::vector<double> average_ranks(std::span<const double> x);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  // Coefficient of determination; 0 when y has zero variance.
  double r2 = 0.0;
};

// Least squares y ~ slope * x + intercept. Throws DomainError when x has
// zero variance.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

// H(m) - H(p)/2 - H(q)/2 in nats with m = (p + q)/2.
double jsd(std::span<const double> p, std::span<const double> q);

}  // namespace daaclab::analysis

#endif  // DAACLAB_ANALYSIS_STATS_HPP_
