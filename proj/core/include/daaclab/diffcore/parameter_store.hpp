#ifndef DAACLAB_DIFFCORE_PARAMETER_STORE_HPP_
#define DAACLAB_DIFFCORE_PARAMETER_STORE_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "daaclab/diffcore/tensor.hpp"

namespace daaclab::diff {

// Named trainable tensors in insertion order. Every entry has
// requires_grad = true and an allocated gradient buffer.
class ParameterStore {
 public:
  using Entry = std::pair<std::string, Tensor>;

  ParameterStore() = default;
  explicit ParameterStore(std::string label) : label_(std::move(label)) {}

  // Throws UsageError on a duplicate name.
  Tensor& add(std::string name, Shape shape, std::vector<double> values);

  bool contains(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;
  Tensor& at(std::string_view name);
  const Tensor& at(std::string_view name) const;
  Tensor& at(std::size_t index) { return entries_[index].second; }
  const Tensor& at(std::size_t index) const { return entries_[index].second; }
  const std::string& name_of(std::size_t index) const {
    return entries_[index].first;
  }

  std::size_t size() const { return entries_.size(); }
  std::size_t parameter_count() const;
  const std::string& label() const { return label_; }

  auto begin() { return entries_.begin(); }
  auto end() { return entries_.end(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  void zero_grad();

  // Copies parameter values (not gradients) from another store with the same
  // names and shapes.
  void copy_values_from(const ParameterStore& other);

 private:
  std::string label_;
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace daaclab::diff

#endif  // DAACLAB_DIFFCORE_PARAMETER_STORE_HPP_
