// SPDX-License-Identifier: Apache-2.0
//
// Pinned pseudo-random source. std::mt19937_64's output sequence is fixed by
// the standard; the distributions are not, so bounded draws and shuffles are
// implemented here to keep results identical across standard libraries.

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace cmhate {

class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64/rejection-mod/fisher-yates";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  // Moves a uniform random k-subset (in draw order) to the front of `items`.
  template <typename T>
  void partial_shuffle(std::span<T> items, std::size_t k) {
    const std::size_t n = items.size();
    for (std::size_t i = 0; i < k && i < n; ++i) {
      const auto j = i + static_cast<std::size_t>(below(n - i));
      std::swap(items[i], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cmhate
