#pragma once

#include <vector>

#include "gcmmc/model.hpp"

namespace fixtures {

// Six workers, three batches each (cyclic repetition).
inline const std::vector<std::vector<int>> kCyclic6x3 = {
    {1, 1, 1, 0, 0, 0},
    {0, 1, 1, 1, 0, 0},
    {0, 0, 1, 1, 1, 0},
    {0, 0, 0, 1, 1, 1},
    {1, 0, 0, 0, 1, 1},
    {1, 1, 0, 0, 0, 1},
};

// The same assignment with one virtual worker per real worker holding its
// first two batches; real and virtual rows interleave.
inline const std::vector<std::vector<int>> kVirtual12x6 = {
    {1, 1, 1, 0, 0, 0},
    {1, 1, 0, 0, 0, 0},
    {0, 1, 1, 1, 0, 0},
    {0, 1, 1, 0, 0, 0},
    {0, 0, 1, 1, 1, 0},
    {0, 0, 1, 1, 0, 0},
    {0, 0, 0, 1, 1, 1},
    {0, 0, 0, 1, 1, 0},
    {1, 0, 0, 0, 1, 1},
    {0, 0, 0, 0, 1, 1},
    {1, 1, 0, 0, 0, 1},
    {1, 0, 0, 0, 0, 1},
};

inline bool equals(const gcmmc::SupportMatrix& s, const std::vector<std::vector<int>>& literal) {
  if (s.rows() != static_cast<int>(literal.size())) return false;
  for (int i = 0; i < s.rows(); ++i) {
    if (s.cols() != static_cast<int>(literal[static_cast<std::size_t>(i)].size())) return false;
    for (int k = 0; k < s.cols(); ++k) {
      if (s.at(i, k) != (literal[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] != 0)) return false;
    }
  }
  return true;
}

inline gcmmc::SupportMatrix from_literal(const std::vector<std::vector<int>>& literal) {
  gcmmc::SupportMatrix s;
  const auto rows = static_cast<int>(literal.size());
  const auto cols = static_cast<int>(literal.front().size());
  s.mask = gcmmc::BinaryMatrix::Zero(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int k = 0; k < cols; ++k) s.mask(i, k) = literal[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] ? 1 : 0;
  }
  s.row_owner.resize(static_cast<std::size_t>(rows));
  return s;
}

// Brute-force zero count of every column.
inline std::vector<int> column_zero_counts(const gcmmc::SupportMatrix& s) {
  std::vector<int> out(static_cast<std::size_t>(s.cols()), 0);
  for (int i = 0; i < s.rows(); ++i) {
    for (int k = 0; k < s.cols(); ++k) {
      if (s.mask(i, k) == 0) ++out[static_cast<std::size_t>(k)];
    }
  }
  return out;
}

// Every size-t subset of [0, n).
inline std::vector<std::vector<int>> subsets(int n, int t) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == t) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace fixtures
