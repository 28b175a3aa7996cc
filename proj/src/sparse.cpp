// SPDX-License-Identifier: Apache-2.0

#include "cmhate/sparse.hpp"

#include <algorithm>
#include <stdexcept>

namespace cmhate {

SparseVector::SparseVector(std::vector<Entry> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!(entries_[i].second > 0.0)) throw std::invalid_argument("sparse values must be positive");
    if (i > 0 && entries_[i - 1].first >= entries_[i].first) {
      throw std::invalid_argument("sparse columns must be strictly increasing");
    }
  }
}

double SparseVector::value_at(std::uint32_t column) const noexcept {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), column,
                             [](const Entry& e, std::uint32_t c) { return e.first < c; });
  return it != entries_.end() && it->first == column ? it->second : 0.0;
}

double SparseVector::dot(std::span<const double> dense) const noexcept {
  double s = 0.0;
  for (const auto& [c, v] : entries_) s += dense[c] * v;
  return s;
}

double SparseVector::squared_norm() const noexcept {
  double s = 0.0;
  for (const auto& e : entries_) s += e.second * e.second;
  return s;
}

double SparseVector::sum() const noexcept {
  double s = 0.0;
  for (const auto& e : entries_) s += e.second;
  return s;
}

SparseVector SparseVector::scaled(double factor) const {
  std::vector<Entry> out = entries_;
  for (auto& e : out) e.second *= factor;
  return SparseVector(std::move(out));
}

}  // namespace cmhate
