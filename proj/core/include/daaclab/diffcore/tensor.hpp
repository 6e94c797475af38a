#ifndef DAACLAB_DIFFCORE_TENSOR_HPP_
#define DAACLAB_DIFFCORE_TENSOR_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace daaclab::diff {

using Shape = std::vector<std::size_t>;

std::size_t element_count(const Shape& shape);
std::string shape_string(const Shape& shape);

// Dense row-major tensor of doubles. Rank-2 tensors are [rows, cols]; a
// scalar is shape {1}.
struct Tensor {
  Shape shape;
  std::vector<double> values;
  bool requires_grad = false;
  std::optional<std::vector<double>> grad;

  Tensor() = default;
  // Throws DimensionError when product(shape) != values.size() or any
  // dimension is zero.
  Tensor(Shape shape, std::vector<double> values, bool requires_grad = false);

  static Tensor zeros(Shape shape);
  static Tensor scalar(double value);

  std::size_t size() const { return values.size(); }
  std::size_t rows() const { return shape.empty() ? 0 : shape.front(); }
  // Product of every dimension after the first.
  std::size_t cols() const;

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
};

}  // namespace daaclab::diff

#endif  // DAACLAB_DIFFCORE_TENSOR_HPP_
