#ifndef DAACLAB_DIFFCORE_TAPE_HPP_
#define DAACLAB_DIFFCORE_TAPE_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "daaclab/diffcore/parameter_store.hpp"
#include "daaclab/diffcore/tensor.hpp"

namespace daaclab::diff {

class Tape;

// Handle to a node on a Tape. Cheap to copy; valid while the tape lives.
class Var {
 public:
  Var() = default;

  bool valid() const { return tape_ != nullptr; }
  Tape& tape() const { return *tape_; }
  std::uint32_t id() const { return id_; }

  const Shape& shape() const;
  std::span<const double> values() const;
  std::size_t size() const { return values().size(); }
  std::size_t rows() const { return shape().front(); }
  std::size_t cols() const;
  // Value of a single-element node.
  double item() const;

 private:
  friend class Tape;
  Var(Tape* tape, std::uint32_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::uint32_t id_ = 0;
};

struct ParameterRef {
  const ParameterStore* store = nullptr;
  std::size_t index = 0;

  friend bool operator==(const ParameterRef&, const ParameterRef&) = default;
};

// Append-only computation record for reverse-mode differentiation. Nodes are
// appended after their parents, so reverse insertion order is a valid
// topological order.
//
// A node "needs grad" when some ancestor is a parameter leaf; backward work is
// skipped elsewhere, and reachable_parameters() reports exactly those
// ancestors. Constants, frozen parameters and detached values cut the graph.
class Tape {
 public:
  // Receives the tape and the id of the node whose gradient is complete; adds
  // into the gradients of the node's parents.
  using BackwardFn = std::function<void(Tape&, std::uint32_t)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor value);
  Var constant(Shape shape, std::vector<double> values);

  // Leaf bound to a trainable tensor. Repeated calls return the same node.
  Var parameter(ParameterStore& store, std::string_view name);
  Var parameter(ParameterStore& store, std::size_t index);

  // Copy of a parameter's current value with no gradient path back to it.
  Var frozen(const ParameterStore& store, std::string_view name);

  // Populates grad of every parameter in every store bound on this tape:
  // d(loss)/d(param) where reachable, zero elsewhere. Throws UsageError when
  // loss is not a single element.
  void backward(Var loss);

  // Parameter leaves with a recorded path to loss.
  std::vector<ParameterRef> reachable_parameters(Var loss) const;
  bool depends_on(Var loss, const ParameterStore& store) const;

  std::size_t size() const { return nodes_.size(); }

  // Interface for operation implementations.
  Var record(Shape shape, std::vector<double> value,
             std::vector<std::uint32_t> parents, BackwardFn backward);
  const Shape& shape(std::uint32_t id) const { return nodes_[id].shape; }
  const std::vector<double>& value(std::uint32_t id) const {
    return nodes_[id].value;
  }
  bool needs_grad(std::uint32_t id) const { return nodes_[id].needs_grad; }
  // Gradient buffer of a node, zero-allocated on first access.
  std::vector<double>& grad(std::uint32_t id);

 private:
  struct Node {
    Shape shape;
    std::vector<double> value;
    std::vector<double> grad;
    std::vector<std::uint32_t> parents;
    BackwardFn backward;
    ParameterStore* store = nullptr;
    std::size_t param_index = 0;
    bool needs_grad = false;
  };

  Var push(Node node);

  std::vector<Node> nodes_;
  std::map<std::pair<const ParameterStore*, std::size_t>, std::uint32_t>
      param_nodes_;
};

}  // namespace daaclab::diff

#endif  // DAACLAB_DIFFCORE_TAPE_HPP_
