#ifndef DAACLAB_COMMON_FORMAT_HPP_
#define DAACLAB_COMMON_FORMAT_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace daaclab {

// Shortest round-trip decimal form ("%.17g" trimmed), used wherever text
// output must be byte-stable.
std::string format_double(double value);

// Fixed-point with the given number of decimals.
std::string format_fixed(double value, int decimals);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::vector<std::string> split(std::string_view text, char sep);

std::string_view trim(std::string_view text);

}  // namespace daaclab

#endif  // DAACLAB_COMMON_FORMAT_HPP_
