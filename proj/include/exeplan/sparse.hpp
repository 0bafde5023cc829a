#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace exeplan {

/// Sparse vector as (column, value) pairs sorted by column, no duplicates.
using SparseVector = std::vector<std::pair<std::uint32_t, double>>;

inline double dot(const SparseVector& a, const SparseVector& b) {
  double sum = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      sum += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  return sum;
}

/// Columns at or beyond dense.size() contribute nothing.
inline double dot(std::span<const double> dense, const SparseVector& x) {
  double sum = 0.0;
  for (const auto& [col, value] : x) {
    if (col < dense.size()) sum += dense[col] * value;
  }
  return sum;
}

inline SparseVector sparse_from_dense(std::span<const double> dense) {
  SparseVector out;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) out.emplace_back(static_cast<std::uint32_t>(i), dense[i]);
  }
  return out;
}

}  // namespace exeplan
