#include "daaclab/diffcore/tape.hpp"

#include <algorithm>
#include <set>

#include "daaclab/common/error.hpp"

namespace daaclab::diff {

const Shape& Var::shape() const { return tape_->shape(id_); }

std::span<const double> Var::values() const { return tape_->value(id_); }

std::size_t Var::cols() const {
  const Shape& s = shape();
  std::size_t c = 1;
  for (std::size_t i = 1; i < s.size(); ++i) c *= s[i];
  return c;
}

double Var::item() const {
  const auto v = values();
  if (v.size() != 1) {
    throw UsageError("item() on a tensor of shape " + shape_string(shape()));
  }
  return v[0];
}

Var Tape::push(Node node) {
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(std::move(node));
  return Var(this, id);
}

Var Tape::constant(Tensor value) {
  Node node;
  node.shape = std::move(value.shape);
  node.value = std::move(value.values);
  return push(std::move(node));
}

Var Tape::constant(Shape shape, std::vector<double> values) {
  return constant(Tensor(std::move(shape), std::move(values)));
}

Var Tape::parameter(ParameterStore& store, std::size_t index) {
  const auto key = std::make_pair(static_cast<const ParameterStore*>(&store),
                                  index);
  if (const auto it = param_nodes_.find(key); it != param_nodes_.end()) {
    return Var(this, it->second);
  }
  const Tensor& tensor = store.at(index);
  Node node;
  node.shape = tensor.shape;
  node.value = tensor.values;
  node.store = &store;
  node.param_index = index;
  node.needs_grad = true;
  Var var = push(std::move(node));
  param_nodes_.emplace(key, var.id());
  return var;
}

Var Tape::parameter(ParameterStore& store, std::string_view name) {
  return parameter(store, store.index_of(name));
}

Var Tape::frozen(const ParameterStore& store, std::string_view name) {
  const Tensor& tensor = store.at(name);
  return constant(tensor.shape, tensor.values);
}

Var Tape::record(Shape shape, std::vector<double> value,
                 std::vector<std::uint32_t> parents, BackwardFn backward) {
  Node node;
  node.shape = std::move(shape);
  node.value = std::move(value);
  node.needs_grad = std::any_of(parents.begin(), parents.end(),
                                [this](std::uint32_t p) {
                                  return nodes_[p].needs_grad;
                                });
  node.parents = std::move(parents);
  if (node.needs_grad) node.backward = std::move(backward);
  return push(std::move(node));
}

std::vector<double>& Tape::grad(std::uint32_t id) {
  Node& node = nodes_[id];
  if (node.grad.empty()) node.grad.assign(node.value.size(), 0.0);
  return node.grad;
}

void Tape::backward(Var loss) {
  if (loss.tape_ != this) throw UsageError("backward: loss is on another tape");
  if (nodes_[loss.id()].value.size() != 1) {
    throw UsageError("backward: loss must be a scalar, got shape " +
                     shape_string(nodes_[loss.id()].shape));
  }
  for (Node& node : nodes_) node.grad.clear();
  std::set<ParameterStore*> stores;
  for (const Node& node : nodes_) {
    if (node.store != nullptr) stores.insert(node.store);
  }
  for (ParameterStore* store : stores) store->zero_grad();

  grad(loss.id())[0] = 1.0;
  for (std::uint32_t id = loss.id() + 1; id-- > 0;) {
    Node& node = nodes_[id];
    if (!node.needs_grad || node.grad.empty()) continue;
    if (node.backward) node.backward(*this, id);
  }
  for (Node& node : nodes_) {
    if (node.store == nullptr || node.grad.empty()) continue;
    auto& target = *node.store->at(node.param_index).grad;
    for (std::size_t i = 0; i < target.size(); ++i) target[i] += node.grad[i];
  }
}

std::vector<ParameterRef> Tape::reachable_parameters(Var loss) const {
  std::vector<bool> seen(nodes_.size(), false);
  std::vector<std::uint32_t> stack{loss.id()};
  std::vector<ParameterRef> found;
  while (!stack.empty()) {
    const std::uint32_t id = stack.back();
    stack.pop_back();
    if (seen[id]) continue;
    seen[id] = true;
    const Node& node = nodes_[id];
    if (node.store != nullptr) found.push_back({node.store, node.param_index});
    for (const std::uint32_t p : node.parents) stack.push_back(p);
  }
  return found;
}

bool Tape::depends_on(Var loss, const ParameterStore& store) const {
  const auto reached = reachable_parameters(loss);
  return std::any_of(reached.begin(), reached.end(),
                     [&](const ParameterRef& r) { return r.store == &store; });
}

}  // namespace daaclab::diff
