#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace atlas {

// Gradient with respect to a flat trainable-parameter vector, stored as
// (index, partial) pairs with strictly increasing indices.
struct SparseGradient {
  struct Entry {
    std::int64_t index;
    double value;
  };
  std::vector<Entry> entries;

  std::size_t nnz() const noexcept { return entries.size(); }
  void clear() noexcept { entries.clear(); }
  void push(std::int64_t index, double value) { entries.push_back({index, value}); }

  bool sorted_unique() const noexcept {
    for (std::size_t i = 1; i < entries.size(); ++i)
      if (entries[i - 1].index >= entries[i].index) return false;
    return true;
  }

  double l1_norm() const noexcept {
    double acc = 0.0;
    for (const Entry& e : entries) acc += std::abs(e.value);
    return acc;
  }

  // Inner product by sorted-index merge; disjoint supports give exactly 0.
  double dot(const SparseGradient& other) const noexcept {
    double acc = 0.0;
    std::size_t a = 0, b = 0;
    while (a < entries.size() && b < other.entries.size()) {
      const std::int64_t ia = entries[a].index, ib = other.entries[b].index;
      if (ia < ib)
        ++a;
      else if (ib < ia)
        ++b;
      else
        acc += entries[a++].value * other.entries[b++].value;
    }
    return acc;
  }
};

// Dense scratch for summing per-sample sparse gradients over a batch.
// reset() is O(previously touched), so reuse across batches is cheap.
class GradientAccumulator {
 public:
  void reset(std::size_t param_count) {
    if (dense_.size() != param_count) {
      dense_.assign(param_count, 0.0);
      mark_.assign(param_count, 0);
    } else {
      for (std::int64_t i : touched_) {
        dense_[static_cast<std::size_t>(i)] = 0.0;
        mark_[static_cast<std::size_t>(i)] = 0;
      }
    }
    touched_.clear();
  }

  void add(const SparseGradient& g) {
    for (const SparseGradient::Entry& e : g.entries) {
      const auto i = static_cast<std::size_t>(e.index);
      if (!mark_[i]) {
        mark_[i] = 1;
        touched_.push_back(e.index);
      }
      dense_[i] += e.value;
    }
  }

  // Sorted entries; indices whose sum cancelled to exactly zero are dropped.
  void to_sparse(SparseGradient& out) {
    std::sort(touched_.begin(), touched_.end());
    out.clear();
    out.entries.reserve(touched_.size());
    for (std::int64_t i : touched_) {
      const double v = dense_[static_cast<std::size_t>(i)];
      if (v != 0.0) out.push(i, v);
    }
  }

 private:
  std::vector<double> dense_;
  std::vector<std::int64_t> touched_;
  std::vector<unsigned char> mark_;
};

}  // namespace atlas
