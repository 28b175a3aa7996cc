// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace cmhate {

// Sorted (column, value) pairs with strictly increasing columns and positive
// values.
class SparseVector {
 public:
  using Entry = std::pair<std::uint32_t, double>;

  SparseVector() = default;
  // Throws std::invalid_argument when the invariants do not hold.
  explicit SparseVector(std::vector<Entry> entries);

  std::span<const Entry> entries() const noexcept { return entries_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  double value_at(std::uint32_t column) const noexcept;
  double dot(std::span<const double> dense) const noexcept;
  double squared_norm() const noexcept;
  double sum() const noexcept;
  SparseVector scaled(double factor) const;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::vector<Entry> entries_;
};

}  // namespace cmhate
