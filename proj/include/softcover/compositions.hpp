#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "softcover/common.hpp"

namespace softcover {

/// Number of compositions of n into k nonnegative parts, C(n+k-1, k-1),
/// as a double (exact integers overflow quickly).
inline double composition_count(std::int64_t n, std::int64_t k) {
  return std::exp(std::lgamma(static_cast<double>(n + k)) - std::lgamma(static_cast<double>(n + 1)) -
                  std::lgamma(static_cast<double>(k)));
}

/// Streams all compositions of n into k parts in ascending lexicographic
/// order (index 0 most significant): (0,...,0,n), (0,...,1,n-1), ..., (n,0,...,0).
class CompositionEnumerator {
 public:
  CompositionEnumerator(int n, int k) : n_(n), k_(k), c_(static_cast<std::size_t>(k), 0), fresh_(true) {
    if (n < 0 || k < 1) throw std::invalid_argument("CompositionEnumerator: need n >= 0, k >= 1");
    c_.back() = n;
  }

  /// Writes the next composition into `out`; returns false once exhausted.
  bool next(std::vector<int>& out) {
    if (fresh_) {
      fresh_ = false;
      out = c_;
      return true;
    }
    // Find the rightmost position (before the tail) with mass to its right.
    int suffix = c_[static_cast<std::size_t>(k_) - 1];
    int j = k_ - 2;
    while (j >= 0 && suffix == 0) {
      suffix += c_[static_cast<std::size_t>(j)];
      --j;
    }
    if (j < 0) return false;
    c_[static_cast<std::size_t>(j)] += 1;
    suffix = 0;
    for (int i = j + 1; i < k_; ++i) {
      suffix += c_[static_cast<std::size_t>(i)];
      c_[static_cast<std::size_t>(i)] = 0;
    }
    c_[static_cast<std::size_t>(k_) - 1] = suffix - 1;
    out = c_;
    return true;
  }

 private:
  int n_, k_;
  std::vector<int> c_;
  bool fresh_;
};

template <class Fn>
inline void for_each_composition(int n, int k, Fn&& fn) {
  CompositionEnumerator e(n, k);
  std::vector<int> c;
  while (e.next(c)) fn(c);
}

}  // namespace softcover
