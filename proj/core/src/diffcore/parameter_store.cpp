#include "daaclab/diffcore/parameter_store.hpp"

#include <algorithm>

#include "daaclab/common/error.hpp"

namespace daaclab::diff {

Tensor& ParameterStore::add(std::string name, Shape shape,
                            std::vector<double> values) {
  if (index_.contains(name)) {
    throw UsageError("duplicate parameter name: " + name);
  }
  index_.emplace(name, entries_.size());
  entries_.emplace_back(std::move(name),
                        Tensor(std::move(shape), std::move(values), true));
  return entries_.back().second;
}

bool ParameterStore::contains(std::string_view name) const {
  return index_.contains(std::string(name));
}

std::size_t ParameterStore::index_of(std::string_view name) const {
  const auto it = index_.find(std::string(name));
  if (it == index_.end()) {
    throw UsageError("unknown parameter: " + std::string(name));
  }
  return it->second;
}

Tensor& ParameterStore::at(std::string_view name) {
  return entries_[index_of(name)].second;
}

const Tensor& ParameterStore::at(std::string_view name) const {
  return entries_[index_of(name)].second;
}

std::size_t ParameterStore::parameter_count() const {
  std::size_t count = 0;
  for (const auto& [name, tensor] : entries_) count += tensor.size();
  return count;
}

void ParameterStore::zero_grad() {
  for (auto& [name, tensor] : entries_) {
    std::fill(tensor.grad->begin(), tensor.grad->end(), 0.0);
  }
}

void ParameterStore::copy_values_from(const ParameterStore& other) {
  if (other.size() != size()) {
    throw DimensionError("parameter stores differ in entry count");
  }
  for (std::size_t i = 0; i < size(); ++i) {
    if (other.name_of(i) != name_of(i) ||
        other.at(i).shape != at(i).shape) {
      throw DimensionError("parameter layout mismatch at " + name_of(i));
    }
    at(i).values = other.at(i).values;
  }
}

}  // namespace daaclab::diff
