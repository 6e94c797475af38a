#ifndef DAACLAB_DIFFCORE_MLP_HPP_
#define DAACLAB_DIFFCORE_MLP_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "daaclab/common/rng.hpp"
#include "daaclab/diffcore/ops.hpp"
#include "daaclab/diffcore/parameter_store.hpp"

namespace daaclab::diff {

enum class Activation { kTanh, kRelu };

// widths = {input, hidden..., output}. The activation follows every layer
// unless activate_output is false, in which case the final layer is affine.
struct MlpSpec {
  std::vector<std::size_t> widths;
  Activation activation = Activation::kTanh;
  bool activate_output = true;

  std::size_t layer_count() const {
    return widths.empty() ? 0 : widths.size() - 1;
  }
};

// Parameter names: "<prefix>.<layer>.weight" [in, out] and
// "<prefix>.<layer>.bias" [out].
std::string weight_name(std::string_view prefix, std::size_t layer);
std::string bias_name(std::string_view prefix, std::size_t layer);

// Orthogonal weights with per-layer gains (the last entry of `gains` applies
// to every later layer), zero biases.
void init_mlp(ParameterStore& store, std::string_view prefix,
              const MlpSpec& spec, Rng& rng, std::vector<double> gains);

// Orthogonal [rows, cols] matrix scaled by gain, row-major.
std::vector<double> orthogonal_matrix(std::size_t rows, std::size_t cols,
                                      double gain, Rng& rng);

// Records the network on the tape. With frozen = true the parameters enter as
// constants and receive no gradient.
Var forward_mlp(Tape& tape, ParameterStore& store, std::string_view prefix,
                const MlpSpec& spec, Var input, bool frozen = false);

// Frozen evaluation of a const store: every parameter enters as a constant.
Var forward_mlp(Tape& tape, const ParameterStore& store, std::string_view prefix,
                const MlpSpec& spec, Var input);

// Convenience overload for a spec whose layers are named "mlp.<l>".
Var forward_mlp(Tape& tape, ParameterStore& store, const MlpSpec& spec,
                Var input);

}  // namespace daaclab::diff

#endif  // DAACLAB_DIFFCORE_MLP_HPP_
