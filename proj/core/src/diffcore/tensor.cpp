#include "daaclab/diffcore/tensor.hpp"

#include "daaclab/common/error.hpp"

namespace daaclab::diff {

std::size_t element_count(const Shape& shape) {
  std::size_t count = 1;
  for (const std::size_t dim : shape) count *= dim;
  return shape.empty() ? 0 : count;
}

std::string shape_string(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

Tensor::Tensor(Shape shape_in, std::vector<double> values_in,
               bool requires_grad_in)
    : shape(std::move(shape_in)),
      values(std::move(values_in)),
      requires_grad(requires_grad_in) {
  for (const std::size_t dim : shape) {
    if (dim == 0) throw DimensionError("tensor shape has a zero dimension");
  }
  if (element_count(shape) != values.size()) {
    throw DimensionError("tensor shape " + shape_string(shape) + " holds " +
                         std::to_string(element_count(shape)) +
                         " values, got " + std::to_string(values.size()));
  }
  if (requires_grad) grad.emplace(values.size(), 0.0);
}

Tensor Tensor::zeros(Shape shape) {
  const std::size_t n = element_count(shape);
  return Tensor(std::move(shape), std::vector<double>(n, 0.0));
}

Tensor Tensor::scalar(double value) { return Tensor({1}, {value}); }

std::size_t Tensor::cols() const {
  std::size_t c = 1;
  for (std::size_t i = 1; i < shape.size(); ++i) c *= shape[i];
  return c;
}

}  // namespace daaclab::diff
