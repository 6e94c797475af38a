#include "daaclab/diffcore/mlp.hpp"

#include <Eigen/Dense>

#include "daaclab/common/error.hpp"

namespace daaclab::diff {

std::string weight_name(std::string_view prefix, std::size_t layer) {
  return std::string(prefix) + "." + std::to_string(layer) + ".weight";
}

std::string bias_name(std::string_view prefix, std::size_t layer) {
  return std::string(prefix) + "." + std::to_string(layer) + ".bias";
}

std::vector<double> orthogonal_matrix(std::size_t rows, std::size_t cols,
                                      double gain, Rng& rng) {
  // QR of a Gaussian matrix with the sign of diag(R) folded into Q.
  const bool transpose = rows < cols;
  const auto r = static_cast<Eigen::Index>(transpose ? cols : rows);
  const auto c = static_cast<Eigen::Index>(transpose ? rows : cols);
  Eigen::MatrixXd gaussian(r, c);
  for (Eigen::Index j = 0; j < c; ++j) {
    for (Eigen::Index i = 0; i < r; ++i) gaussian(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(r, c);
  const Eigen::MatrixXd upper = qr.matrixQR();
  for (Eigen::Index j = 0; j < c; ++j) {
    if (upper(j, j) < 0) q.col(j) *= -1.0;
  }
  std::vector<double> out(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double v =
          transpose ? q(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i))
                    : q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      out[i * cols + j] = gain * v;
    }
  }
  return out;
}

void init_mlp(ParameterStore& store, std::string_view prefix,
              const MlpSpec& spec, Rng& rng, std::vector<double> gains) {
  if (spec.widths.size() < 2) {
    throw UsageError("init_mlp: need at least input and output widths");
  }
  if (gains.empty()) gains.push_back(1.0);
  for (std::size_t l = 0; l < spec.layer_count(); ++l) {
    const std::size_t in = spec.widths[l], out = spec.widths[l + 1];
    const double gain = gains[std::min(l, gains.size() - 1)];
    store.add(weight_name(prefix, l), {in, out},
              orthogonal_matrix(in, out, gain, rng));
    store.add(bias_name(prefix, l), {out}, std::vector<double>(out, 0.0));
  }
}

namespace {

template <typename Fetch>
Var run_mlp(const MlpSpec& spec, std::string_view prefix, Var input,
            Fetch fetch) {
  if (input.shape().size() != 2 || spec.widths.empty() ||
      input.shape()[1] != spec.widths.front()) {
    throw DimensionError(
        "forward_mlp: input " + shape_string(input.shape()) +
        " does not match first width " +
        (spec.widths.empty() ? std::string("<none>")
                             : std::to_string(spec.widths.front())));
  }
  Var h = input;
  for (std::size_t l = 0; l < spec.layer_count(); ++l) {
    h = affine(h, fetch(weight_name(prefix, l)), fetch(bias_name(prefix, l)));
    const bool last = l + 1 == spec.layer_count();
    if (!last || spec.activate_output) {
      h = spec.activation == Activation::kTanh ? tanh(h) : relu(h);
    }
  }
  return h;
}

}  // namespace

Var forward_mlp(Tape& tape, ParameterStore& store, std::string_view prefix,
                const MlpSpec& spec, Var input, bool frozen) {
  return run_mlp(spec, prefix, input, [&](const std::string& name) {
    return frozen ? tape.frozen(store, name) : tape.parameter(store, name);
  });
}

Var forward_mlp(Tape& tape, const ParameterStore& store, std::string_view prefix,
                const MlpSpec& spec, Var input) {
  return run_mlp(spec, prefix, input, [&](const std::string& name) {
    return tape.frozen(store, name);
  });
}

Var forward_mlp(Tape& tape, ParameterStore& store, const MlpSpec& spec,
                Var input) {
  return forward_mlp(tape, store, "mlp", spec, input, false);
}

}  // namespace daaclab::diff
