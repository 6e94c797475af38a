#ifndef DAACLAB_DIFFCORE_DISTRIBUTIONS_HPP_
#define DAACLAB_DIFFCORE_DISTRIBUTIONS_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace daaclab::diff {

// Max-shifted softmax. Throws NumericError on a non-finite logit.
std::vector<double> categorical_from_logits(std::span<const double> logits);

// ln probs[action]. Throws DomainError for an out-of-range index and
// NumericError when the selected probability is zero.
double log_prob(std::span<const double> probs, std::size_t action);

// -sum p ln p, with 0 ln 0 = 0.
double entropy(std::span<const double> probs);

// Lowest index among the maxima.
std::size_t argmax(std::span<const double> values);

}  // namespace daaclab::diff

#endif  // DAACLAB_DIFFCORE_DISTRIBUTIONS_HPP_
