#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "hsic_lab/errors.hpp"

namespace hsic_lab {

/// Sorted set of 1-based feature indices.
class FeatureSubset {
 public:
  FeatureSubset() = default;

  /// Indices are sorted; duplicates and values outside [1, p] are rejected.
  FeatureSubset(std::vector<int> indices, int p) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
      throw dimension_error("feature subset has repeated indices");
    }
    for (int i : indices_) {
      if (i < 1 || i > p) {
        throw dimension_error("feature index " + std::to_string(i) +
                              " outside 1.." + std::to_string(p));
      }
    }
  }

  static FeatureSubset all(int p) {
    std::vector<int> idx(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) idx[static_cast<std::size_t>(i)] = i + 1;
    return FeatureSubset(std::move(idx), p);
  }

  /// Subset whose members are the set bits of `mask` (bit j <-> index j + 1).
  static FeatureSubset from_mask(unsigned long mask, int p) {
    std::vector<int> idx;
    for (int j = 0; j < p; ++j) {
      if (mask & (1UL << j)) idx.push_back(j + 1);
    }
    return FeatureSubset(std::move(idx), p);
  }

  const std::vector<int>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }

  bool contains(int index) const {
    return std::binary_search(indices_.begin(), indices_.end(), index);
  }

  /// 0/1 weight vector of length p.
  std::vector<double> indicator(int p) const {
    std::vector<double> w(static_cast<std::size_t>(p), 0.0);
    for (int i : indices_) w[static_cast<std::size_t>(i - 1)] = 1.0;
    return w;
  }

  std::string to_string() const {
    std::string out = "{";
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(indices_[i]);
    }
    return out + "}";
  }

  /// Smaller cardinality first, then lexicographic.
  friend bool operator<(const FeatureSubset& a, const FeatureSubset& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.indices_ < b.indices_;
  }
  friend bool operator==(const FeatureSubset&, const FeatureSubset&) = default;

 private:
  std::vector<int> indices_;
};

}  // namespace hsic_lab
