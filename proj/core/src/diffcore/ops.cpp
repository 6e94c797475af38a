#include "daaclab/diffcore/ops.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>

#include "daaclab/common/error.hpp"

namespace daaclab::diff {
namespace {

// Plain loops rather than Eigen products: Eigen peels vectorized loops by
// address alignment, so the rounding of a product depended on where the
// allocator happened to place each buffer and identical runs drifted apart.
// Here every output entry accumulates in a fixed order.

// c[n,m] += a[n,k] * b[k,m]. Four output rows share each load of b; every
// entry still sums over p in order.
void gemm_nn(const double* a, const double* b, double* c, std::size_t n,
             std::size_t k, std::size_t m) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    double* c0 = c + i * m;
    double* c1 = c0 + m;
    double* c2 = c1 + m;
    double* c3 = c2 + m;
    const double* a0 = a + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const double x0 = a0[p], x1 = a0[k + p], x2 = a0[2 * k + p], x3 = a0[3 * k + p];
      const double* bp = b + p * m;
      for (std::size_t j = 0; j < m; ++j) {
        const double y = bp[j];
        c0[j] += x0 * y;
        c1[j] += x1 * y;
        c2[j] += x2 * y;
        c3[j] += x3 * y;
      }
    }
  }
  for (; i < n; ++i) {
    double* ci = c + i * m;
    for (std::size_t p = 0; p < k; ++p) {
      const double x = a[i * k + p];
      const double* bp = b + p * m;
      for (std::size_t j = 0; j < m; ++j) ci[j] += x * bp[j];
    }
  }
}

// c[k,m] += a[n,k]^T * g[n,m], summing over i in order.
void gemm_tn(const double* a, const double* g, double* c, std::size_t n,
             std::size_t k, std::size_t m) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* gi = g + i * m;
    const double* ai = a + i * k;
    std::size_t p = 0;
    for (; p + 4 <= k; p += 4) {
      const double x0 = ai[p], x1 = ai[p + 1], x2 = ai[p + 2], x3 = ai[p + 3];
      double* c0 = c + p * m;
      double* c1 = c0 + m;
      double* c2 = c1 + m;
      double* c3 = c2 + m;
      for (std::size_t j = 0; j < m; ++j) {
        const double y = gi[j];
        c0[j] += x0 * y;
        c1[j] += x1 * y;
        c2[j] += x2 * y;
        c3[j] += x3 * y;
      }
    }
    for (; p < k; ++p) {
      const double x = ai[p];
      double* cp = c + p * m;
      for (std::size_t j = 0; j < m; ++j) cp[j] += x * gi[j];
    }
  }
}

// c[n,k] += g[n,m] * b[k,m]^T
void gemm_nt(const double* g, const double* b, double* c, std::size_t n,
             std::size_t k, std::size_t m) {
  std::vector<double> bt(m * k);
  for (std::size_t p = 0; p < k; ++p) {
    for (std::size_t j = 0; j < m; ++j) bt[j * k + p] = b[p * m + j];
  }
  gemm_nn(g, bt.data(), c, n, m, k);
}

Tape& same_tape(Var a, Var b, const char* op) {
  if (!a.valid() || !b.valid() || &a.tape() != &b.tape()) {
    throw UsageError(std::string(op) + ": operands on different tapes");
  }
  return a.tape();
}

void require_same_shape(Var a, Var b, const char* op) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shape " +
                         shape_string(a.shape()) + " vs " +
                         shape_string(b.shape()));
  }
}

void require_rank2(Var a, const char* op) {
  if (a.shape().size() != 2) {
    throw DimensionError(std::string(op) + ": expected a matrix, got " +
                         shape_string(a.shape()));
  }
}

// y = f(x) elementwise; dy/dx = df(x, y).
template <typename F, typename DF>
Var unary(Var a, F f, DF df) {
  Tape& tape = a.tape();
  const auto& x = tape.value(a.id());
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = f(x[i]);
  const std::uint32_t ia = a.id();
  return tape.record(a.shape(), std::move(y), {ia},
                     [ia, df](Tape& t, std::uint32_t self) {
                       const auto& x = t.value(ia);
                       const auto& y = t.value(self);
                       const auto& g = t.grad(self);
                       auto& ga = t.grad(ia);
                       for (std::size_t i = 0; i < g.size(); ++i) {
                         ga[i] += g[i] * df(x[i], y[i]);
                       }
                     });
}

double stable_sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

Var matmul(Var a, Var b) {
  Tape& tape = same_tape(a, b, "matmul");
  require_rank2(a, "matmul");
  require_rank2(b, "matmul");
  const std::size_t n = a.shape()[0], k = a.shape()[1], m = b.shape()[1];
  if (b.shape()[0] != k) {
    throw DimensionError("matmul: " + shape_string(a.shape()) + " x " +
                         shape_string(b.shape()));
  }
  std::vector<double> out(n * m, 0.0);
  gemm_nn(tape.value(a.id()).data(), tape.value(b.id()).data(), out.data(), n,
          k, m);
  const std::uint32_t ia = a.id(), ib = b.id();
  return tape.record({n, m}, std::move(out), {ia, ib},
                     [ia, ib, n, k, m](Tape& t, std::uint32_t self) {
                       const double* g = t.grad(self).data();
                       if (t.needs_grad(ia)) {
                         gemm_nt(g, t.value(ib).data(), t.grad(ia).data(), n,
                                 k, m);
                       }
                       if (t.needs_grad(ib)) {
                         gemm_tn(t.value(ia).data(), g, t.grad(ib).data(), n,
                                 k, m);
                       }
                     });
}

Var affine(Var x, Var w, Var bias) {
  Tape& tape = same_tape(x, w, "affine");
  same_tape(x, bias, "affine");
  require_rank2(x, "affine");
  require_rank2(w, "affine");
  const std::size_t n = x.shape()[0], k = x.shape()[1], m = w.shape()[1];
  if (w.shape()[0] != k || bias.size() != m) {
    throw DimensionError("affine: " + shape_string(x.shape()) + " x " +
                         shape_string(w.shape()) + " + " +
                         shape_string(bias.shape()));
  }
  std::vector<double> out(n * m);
  const auto& b = tape.value(bias.id());
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(b.begin(), b.end(), out.begin() + static_cast<std::ptrdiff_t>(i * m));
  }
  gemm_nn(tape.value(x.id()).data(), tape.value(w.id()).data(), out.data(), n,
          k, m);
  const std::uint32_t ix = x.id(), iw = w.id(), ib = bias.id();
  return tape.record(
      {n, m}, std::move(out), {ix, iw, ib},
      [ix, iw, ib, n, k, m](Tape& t, std::uint32_t self) {
        const double* g = t.grad(self).data();
        if (t.needs_grad(ix)) {
          gemm_nt(g, t.value(iw).data(), t.grad(ix).data(), n, k, m);
        }
        if (t.needs_grad(iw)) {
          gemm_tn(t.value(ix).data(), g, t.grad(iw).data(), n, k, m);
        }
        if (t.needs_grad(ib)) {
          double* gb = t.grad(ib).data();
          for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < m; ++j) gb[j] += g[i * m + j];
          }
        }
      });
}

Var add_bias(Var x, Var bias) {
  Tape& tape = same_tape(x, bias, "add_bias");
  require_rank2(x, "add_bias");
  const std::size_t n = x.shape()[0], m = x.shape()[1];
  if (bias.size() != m) {
    throw DimensionError("add_bias: " + shape_string(x.shape()) + " + " +
                         shape_string(bias.shape()));
  }
  std::vector<double> out = tape.value(x.id());
  const auto& b = tape.value(bias.id());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) out[i * m + j] += b[j];
  }
  const std::uint32_t ix = x.id(), ib = bias.id();
  return tape.record({n, m}, std::move(out), {ix, ib},
                     [ix, ib, n, m](Tape& t, std::uint32_t self) {
                       const auto& g = t.grad(self);
                       if (t.needs_grad(ix)) {
                         auto& gx = t.grad(ix);
                         for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
                       }
                       if (t.needs_grad(ib)) {
                         auto& gb = t.grad(ib);
                         for (std::size_t i = 0; i < n; ++i) {
                           for (std::size_t j = 0; j < m; ++j) {
                             gb[j] += g[i * m + j];
                           }
                         }
                       }
                     });
}

Var add(Var a, Var b) {
  Tape& tape = same_tape(a, b, "add");
  require_same_shape(a, b, "add");
  std::vector<double> out = tape.value(a.id());
  const auto& vb = tape.value(b.id());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += vb[i];
  const std::uint32_t ia = a.id(), ib = b.id();
  return tape.record(a.shape(), std::move(out), {ia, ib},
                     [ia, ib](Tape& t, std::uint32_t self) {
                       const auto& g = t.grad(self);
                       for (const std::uint32_t p : {ia, ib}) {
                         if (!t.needs_grad(p)) continue;
                         auto& gp = t.grad(p);
                         for (std::size_t i = 0; i < g.size(); ++i) gp[i] += g[i];
                       }
                     });
}

Var sub(Var a, Var b) {
  Tape& tape = same_tape(a, b, "sub");
  require_same_shape(a, b, "sub");
  std::vector<double> out = tape.value(a.id());
  const auto& vb = tape.value(b.id());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= vb[i];
  const std::uint32_t ia = a.id(), ib = b.id();
  return tape.record(a.shape(), std::move(out), {ia, ib},
                     [ia, ib](Tape& t, std::uint32_t self) {
                       const auto& g = t.grad(self);
                       if (t.needs_grad(ia)) {
                         auto& ga = t.grad(ia);
                         for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
                       }
                       if (t.needs_grad(ib)) {
                         auto& gb = t.grad(ib);
                         for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
                       }
                     });
}

Var mul(Var a, Var b) {
  Tape& tape = same_tape(a, b, "mul");
  require_same_shape(a, b, "mul");
  const auto& va = tape.value(a.id());
  const auto& vb = tape.value(b.id());
  std::vector<double> out(va.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = va[i] * vb[i];
  const std::uint32_t ia = a.id(), ib = b.id();
  return tape.record(a.shape(), std::move(out), {ia, ib},
                     [ia, ib](Tape& t, std::uint32_t self) {
                       const auto& g = t.grad(self);
                       if (t.needs_grad(ia)) {
                         const auto& vb = t.value(ib);
                         auto& ga = t.grad(ia);
                         for (std::size_t i = 0; i < g.size(); ++i) {
                           ga[i] += g[i] * vb[i];
                         }
                       }
                       if (t.needs_grad(ib)) {
                         const auto& va = t.value(ia);
                         auto& gb = t.grad(ib);
                         for (std::size_t i = 0; i < g.size(); ++i) {
                           gb[i] += g[i] * va[i];
                         }
                       }
                     });
}

Var minimum(Var a, Var b) {
  Tape& tape = same_tape(a, b, "minimum");
  require_same_shape(a, b, "minimum");
  const auto& va = tape.value(a.id());
  const auto& vb = tape.value(b.id());
  std::vector<double> out(va.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = va[i] <= vb[i] ? va[i] : vb[i];
  }
  const std::uint32_t ia = a.id(), ib = b.id();
  return tape.record(a.shape(), std::move(out), {ia, ib},
                     [ia, ib](Tape& t, std::uint32_t self) {
                       const auto& g = t.grad(self);
                       const auto& va = t.value(ia);
                       const auto& vb = t.value(ib);
                       const bool na = t.needs_grad(ia), nb = t.needs_grad(ib);
                       for (std::size_t i = 0; i < g.size(); ++i) {
                         if (va[i] <= vb[i]) {
                           if (na) t.grad(ia)[i] += g[i];
                         } else if (nb) {
                           t.grad(ib)[i] += g[i];
                         }
                       }
                     });
}

Var scale(Var a, double factor) {
  return unary(
      a, [factor](double x) { return factor * x; },
      [factor](double, double) { return factor; });
}

Var add_scalar(Var a, double offset) {
  return unary(
      a, [offset](double x) { return x + offset; },
      [](double, double) { return 1.0; });
}

Var tanh(Var a) {
  Tape& tape = a.tape();
  const auto& x = tape.value(a.id());
  const auto n = static_cast<Eigen::Index>(x.size());
  // Vectorized exp; near zero 1 - e cancels, so those entries use std::tanh.
  // Evaluated into owned (aligned) storage so the packet/scalar split of
  // exp depends on the size only.
  Eigen::ArrayXd e = (-2.0 * Eigen::Map<const Eigen::ArrayXd>(x.data(), n).abs()).exp();
  e = (1.0 - e) / (1.0 + e);
  std::vector<double> y(e.data(), e.data() + n);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) < 0.01) {
      y[i] = std::tanh(x[i]);
    } else if (x[i] < 0.0) {
      y[i] = -y[i];
    }
  }
  const std::uint32_t ia = a.id();
  return tape.record(a.shape(), std::move(y), {ia},
                     [ia](Tape& t, std::uint32_t self) {
                       const auto& y = t.value(self);
                       const auto& g = t.grad(self);
                       auto& ga = t.grad(ia);
                       for (std::size_t i = 0; i < g.size(); ++i) {
                         ga[i] += g[i] * (1.0 - y[i] * y[i]);
                       }
                     });
}

Var relu(Var a) {
  return unary(
      a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Var sigmoid(Var a) {
  return unary(
      a, [](double x) { return stable_sigmoid(x); },
      [](double, double y) { return y * (1.0 - y); });
}

Var log_sigmoid(Var a) {
  return unary(
      a,
      [](double x) {
        return std::min(x, 0.0) - std::log1p(std::exp(-std::abs(x)));
      },
      [](double x, double) { return stable_sigmoid(-x); });
}

Var exp(Var a) {
  return unary(
      a, [](double x) { return std::exp(x); },
      [](double, double y) { return y; });
}

Var log(Var a) {
  for (const double x : a.values()) {
    if (!(x > 0.0)) throw NumericError("log of a non-positive value");
  }
  return unary(
      a, [](double x) { return std::log(x); },
      [](double x, double) { return 1.0 / x; });
}

Var square(Var a) {
  return unary(
      a, [](double x) { return x * x; },
      [](double x, double) { return 2.0 * x; });
}

Var clamp(Var a, double lo, double hi) {
  return unary(
      a, [lo, hi](double x) { return std::clamp(x, lo, hi); },
      [lo, hi](double x, double) {
        return (x >= lo && x <= hi) ? 1.0 : 0.0;
      });
}

Var log_softmax(Var logits) {
  require_rank2(logits, "log_softmax");
  Tape& tape = logits.tape();
  const std::size_t n = logits.shape()[0], m = logits.shape()[1];
  const auto& x = tape.value(logits.id());
  std::vector<double> out(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = x.data() + i * m;
    const double mx = *std::max_element(row, row + m);
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) total += std::exp(row[j] - mx);
    const double lse = mx + std::log(total);
    for (std::size_t j = 0; j < m; ++j) out[i * m + j] = row[j] - lse;
  }
  const std::uint32_t ix = logits.id();
  return tape.record({n, m}, std::move(out), {ix},
                     [ix, n, m](Tape& t, std::uint32_t self) {
                       const auto& y = t.value(self);
                       const auto& g = t.grad(self);
                       auto& gx = t.grad(ix);
                       for (std::size_t i = 0; i < n; ++i) {
                         double gsum = 0.0;
                         for (std::size_t j = 0; j < m; ++j) gsum += g[i * m + j];
                         for (std::size_t j = 0; j < m; ++j) {
                           gx[i * m + j] +=
                               g[i * m + j] - std::exp(y[i * m + j]) * gsum;
                         }
                       }
                     });
}

Var softmax(Var logits) {
  require_rank2(logits, "softmax");
  Tape& tape = logits.tape();
  const std::size_t n = logits.shape()[0], m = logits.shape()[1];
  const auto& x = tape.value(logits.id());
  std::vector<double> out(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = x.data() + i * m;
    const double mx = *std::max_element(row, row + m);
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      out[i * m + j] = std::exp(row[j] - mx);
      total += out[i * m + j];
    }
    for (std::size_t j = 0; j < m; ++j) out[i * m + j] /= total;
  }
  const std::uint32_t ix = logits.id();
  return tape.record({n, m}, std::move(out), {ix},
                     [ix, n, m](Tape& t, std::uint32_t self) {
                       const auto& s = t.value(self);
                       const auto& g = t.grad(self);
                       auto& gx = t.grad(ix);
                       for (std::size_t i = 0; i < n; ++i) {
                         double dot = 0.0;
                         for (std::size_t j = 0; j < m; ++j) {
                           dot += g[i * m + j] * s[i * m + j];
                         }
                         for (std::size_t j = 0; j < m; ++j) {
                           gx[i * m + j] += s[i * m + j] * (g[i * m + j] - dot);
                         }
                       }
                     });
}

Var gather_cols(Var x, std::span<const std::size_t> index) {
  require_rank2(x, "gather_cols");
  Tape& tape = x.tape();
  const std::size_t n = x.shape()[0], m = x.shape()[1];
  if (index.size() != n) {
    throw DimensionError("gather_cols: " + std::to_string(index.size()) +
                         " indices for " + std::to_string(n) + " rows");
  }
  std::vector<std::size_t> idx(index.begin(), index.end());
  const auto& v = tape.value(x.id());
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (idx[i] >= m) throw DimensionError("gather_cols: index out of range");
    out[i] = v[i * m + idx[i]];
  }
  const std::uint32_t ix = x.id();
  return tape.record({n}, std::move(out), {ix},
                     [ix, m, idx = std::move(idx)](Tape& t, std::uint32_t self) {
                       const auto& g = t.grad(self);
                       auto& gx = t.grad(ix);
                       for (std::size_t i = 0; i < idx.size(); ++i) {
                         gx[i * m + idx[i]] += g[i];
                       }
                     });
}

Var select_rows(Var x, std::span<const std::size_t> rows) {
  if (x.shape().empty()) throw DimensionError("select_rows: empty shape");
  Tape& tape = x.tape();
  const std::size_t n = x.shape()[0], m = x.cols();
  std::vector<std::size_t> idx(rows.begin(), rows.end());
  if (idx.empty()) throw DimensionError("select_rows: no rows selected");
  const auto& v = tape.value(x.id());
  std::vector<double> out(idx.size() * m);
  for (std::size_t r = 0; r < idx.size(); ++r) {
    if (idx[r] >= n) throw DimensionError("select_rows: row out of range");
    std::copy_n(v.begin() + static_cast<std::ptrdiff_t>(idx[r] * m), m,
                out.begin() + static_cast<std::ptrdiff_t>(r * m));
  }
  Shape shape = x.shape();
  shape[0] = idx.size();
  const std::uint32_t ix = x.id();
  return tape.record(std::move(shape), std::move(out), {ix},
                     [ix, m, idx = std::move(idx)](Tape& t, std::uint32_t self) {
                       const auto& g = t.grad(self);
                       auto& gx = t.grad(ix);
                       for (std::size_t r = 0; r < idx.size(); ++r) {
                         for (std::size_t j = 0; j < m; ++j) {
                           gx[idx[r] * m + j] += g[r * m + j];
                         }
                       }
                     });
}

Var concat_cols(Var a, Var b) {
  Tape& tape = same_tape(a, b, "concat_cols");
  require_rank2(a, "concat_cols");
  require_rank2(b, "concat_cols");
  const std::size_t n = a.shape()[0], p = a.shape()[1], q = b.shape()[1];
  if (b.shape()[0] != n) {
    throw DimensionError("concat_cols: row counts differ");
  }
  const auto& va = tape.value(a.id());
  const auto& vb = tape.value(b.id());
  std::vector<double> out(n * (p + q));
  for (std::size_t i = 0; i < n; ++i) {
    std::copy_n(va.begin() + static_cast<std::ptrdiff_t>(i * p), p,
                out.begin() + static_cast<std::ptrdiff_t>(i * (p + q)));
    std::copy_n(vb.begin() + static_cast<std::ptrdiff_t>(i * q), q,
                out.begin() + static_cast<std::ptrdiff_t>(i * (p + q) + p));
  }
  const std::uint32_t ia = a.id(), ib = b.id();
  return tape.record({n, p + q}, std::move(out), {ia, ib},
                     [ia, ib, n, p, q](Tape& t, std::uint32_t self) {
                       const auto& g = t.grad(self);
                       if (t.needs_grad(ia)) {
                         auto& ga = t.grad(ia);
                         for (std::size_t i = 0; i < n; ++i) {
                           for (std::size_t j = 0; j < p; ++j) {
                             ga[i * p + j] += g[i * (p + q) + j];
                           }
                         }
                       }
                       if (t.needs_grad(ib)) {
                         auto& gb = t.grad(ib);
                         for (std::size_t i = 0; i < n; ++i) {
                           for (std::size_t j = 0; j < q; ++j) {
                             gb[i * q + j] += g[i * (p + q) + p + j];
                           }
                         }
                       }
                     });
}

Var row_sum(Var x) {
  require_rank2(x, "row_sum");
  Tape& tape = x.tape();
  const std::size_t n = x.shape()[0], m = x.shape()[1];
  const auto& v = tape.value(x.id());
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) out[i] += v[i * m + j];
  }
  const std::uint32_t ix = x.id();
  return tape.record({n}, std::move(out), {ix},
                     [ix, n, m](Tape& t, std::uint32_t self) {
                       const auto& g = t.grad(self);
                       auto& gx = t.grad(ix);
                       for (std::size_t i = 0; i < n; ++i) {
                         for (std::size_t j = 0; j < m; ++j) gx[i * m + j] += g[i];
                       }
                     });
}

Var sum(Var a) {
  Tape& tape = a.tape();
  double total = 0.0;
  for (const double v : tape.value(a.id())) total += v;
  const std::uint32_t ia = a.id();
  return tape.record({1}, {total}, {ia}, [ia](Tape& t, std::uint32_t self) {
    const double g = t.grad(self)[0];
    for (double& gi : t.grad(ia)) gi += g;
  });
}

Var mean(Var a) {
  Tape& tape = a.tape();
  const auto& v = tape.value(a.id());
  double total = 0.0;
  for (const double x : v) total += x;
  const double inv = 1.0 / static_cast<double>(v.size());
  const std::uint32_t ia = a.id();
  return tape.record({1}, {total * inv}, {ia},
                     [ia, inv](Tape& t, std::uint32_t self) {
                       const double g = t.grad(self)[0] * inv;
                       for (double& gi : t.grad(ia)) gi += g;
                     });
}

Var reshape(Var a, Shape shape) {
  if (element_count(shape) != a.size()) {
    throw DimensionError("reshape: " + shape_string(a.shape()) + " to " +
                         shape_string(shape));
  }
  Tape& tape = a.tape();
  const std::uint32_t ia = a.id();
  return tape.record(std::move(shape), tape.value(ia), {ia},
                     [ia](Tape& t, std::uint32_t self) {
                       const auto& g = t.grad(self);
                       auto& ga = t.grad(ia);
                       for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
                     });
}

Var detach(Var a) {
  return a.tape().constant(a.shape(),
                           std::vector<double>(a.values().begin(),
                                               a.values().end()));
}

}  // namespace daaclab::diff
