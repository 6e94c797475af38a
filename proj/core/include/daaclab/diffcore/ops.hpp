#ifndef DAACLAB_DIFFCORE_OPS_HPP_
#define DAACLAB_DIFFCORE_OPS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "daaclab/diffcore/tape.hpp"

namespace daaclab::diff {

// Recorded operations. Binary operations require both operands on the same
// tape and throw DimensionError on shape disagreement.

// [n,k] x [k,m] -> [n,m]
Var matmul(Var a, Var b);
// x [n,k] * w [k,m] + bias [m] -> [n,m]
Var affine(Var x, Var w, Var bias);
// x [n,m] + bias [m] broadcast over rows.
Var add_bias(Var x, Var bias);

Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
// Elementwise minimum; ties route the gradient to a.
Var minimum(Var a, Var b);
Var scale(Var a, double factor);
Var add_scalar(Var a, double offset);

Var tanh(Var a);
Var relu(Var a);
Var sigmoid(Var a);
// log(sigmoid(a)), stable for large |a|.
Var log_sigmoid(Var a);
Var exp(Var a);
// Throws NumericError on a non-positive input.
Var log(Var a);
Var square(Var a);
// Gradient passes where lo <= a <= hi.
Var clamp(Var a, double lo, double hi);

// Row-wise, max-shifted. Input [n,m].
Var log_softmax(Var logits);
Var softmax(Var logits);

// y[i] = x[i, index[i]] for x [n,m] -> [n].
Var gather_cols(Var x, std::span<const std::size_t> index);
// Rows of x [n,m] in the given order -> [k,m].
Var select_rows(Var x, std::span<const std::size_t> rows);
// [n,p] ++ [n,q] -> [n,p+q]
Var concat_cols(Var a, Var b);
// [n,m] -> [n]
Var row_sum(Var x);

Var sum(Var a);
Var mean(Var a);
Var reshape(Var a, Shape shape);
Var detach(Var a);

}  // namespace daaclab::diff

#endif  // DAACLAB_DIFFCORE_OPS_HPP_
