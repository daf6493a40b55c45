#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "vrm/errors.hpp"

namespace vrm {

// Minimum-cost perfect assignment of an n x n matrix (Kuhn-Munkres with
// potentials, O(n^3)). Exact for exact Value types; no infinity sentinel is
// needed. Returns column assigned to each row.
template <class Value>
std::vector<int> hungarian_assignment(const std::vector<std::vector<Value>>& cost) {
  const int n = static_cast<int>(cost.size());
  std::vector<int> row_of_col(static_cast<std::size_t>(n) + 1, 0);
  if (n == 0) return {};
  std::vector<Value> u(static_cast<std::size_t>(n) + 1, Value(0));
  std::vector<Value> v(static_cast<std::size_t>(n) + 1, Value(0));
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);

  for (int i = 1; i <= n; ++i) {
    row_of_col[0] = i;
    int j0 = 0;
    std::vector<Value> minv(static_cast<std::size_t>(n) + 1, Value(0));
    std::vector<unsigned char> has_min(static_cast<std::size_t>(n) + 1, 0);
    std::vector<unsigned char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = row_of_col[static_cast<std::size_t>(j0)];
      int j1 = 0;
      Value delta(0);
      bool has_delta = false;
      for (int j = 1; j <= n; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        if (used[jj]) continue;
        Value cur = cost[static_cast<std::size_t>(i0 - 1)][jj - 1] -
                    u[static_cast<std::size_t>(i0)] - v[jj];
        if (!has_min[jj] || cur < minv[jj]) {
          minv[jj] = cur;
          has_min[jj] = 1;
          way[jj] = j0;
        }
        if (!has_delta || minv[jj] < delta) {
          delta = minv[jj];
          has_delta = true;
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        if (used[jj]) {
          u[static_cast<std::size_t>(row_of_col[jj])] += delta;
          v[jj] -= delta;
        } else {
          minv[jj] -= delta;
        }
      }
      j0 = j1;
    } while (row_of_col[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      row_of_col[static_cast<std::size_t>(j0)] = row_of_col[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> col_of_row(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j) {
    col_of_row[static_cast<std::size_t>(row_of_col[static_cast<std::size_t>(j)] - 1)] = j - 1;
  }
  return col_of_row;
}

// The same algorithm on a row-major int64 matrix. Potential updates are
// deferred: a phase tracks the cumulative shift and settles the potentials of
// its visited columns once at the end. Throws LatticeOverflow if an
// intermediate leaves the int64 range, so callers can retry on BigInt.
inline std::vector<int> hungarian_assignment_int64(const std::vector<std::int64_t>& cost, int n) {
  if (n == 0) return {};
  constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max();
  const auto un = static_cast<std::size_t>(n) + 1;
  std::vector<int> row_of_col(un, 0);
  std::vector<std::int64_t> u(un, 0), v(un, 0), minv(un), shift_at(un, 0);
  std::vector<int> way(un, 0), unused, visited;
  unused.reserve(un);
  visited.reserve(un);
  auto add = [](std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r) || r == inf) throw LatticeOverflow();
    return r;
  };
  auto sub = [](std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r) || r == inf) throw LatticeOverflow();
    return r;
  };

  for (int i = 1; i <= n; ++i) {
    row_of_col[0] = i;
    unused.clear();
    for (int j = 1; j <= n; ++j) unused.push_back(j);
    std::fill(minv.begin(), minv.end(), inf);
    visited.assign(1, 0);
    shift_at[0] = 0;
    std::int64_t shift = 0;  // sum of deltas so far; minv holds true value + shift
    int j0 = 0;
    for (;;) {
      const int i0 = row_of_col[static_cast<std::size_t>(j0)];
      const std::int64_t* row = cost.data() + static_cast<std::size_t>(i0 - 1) * static_cast<std::size_t>(n);
      const std::int64_t base = sub(shift, u[static_cast<std::size_t>(i0)]);
      std::size_t best_k = 0;
      std::int64_t best = inf;
      for (std::size_t k = 0; k < unused.size(); ++k) {
        const auto jj = static_cast<std::size_t>(unused[k]);
        const std::int64_t cur = add(sub(row[jj - 1], v[jj]), base);
        if (cur < minv[jj]) {
          minv[jj] = cur;
          way[jj] = j0;
        }
        if (minv[jj] < best) {
          best = minv[jj];
          best_k = k;
        }
      }
      shift = best;
      j0 = unused[best_k];
      unused[best_k] = unused.back();
      unused.pop_back();
      shift_at[static_cast<std::size_t>(j0)] = shift;
      visited.push_back(j0);
      if (row_of_col[static_cast<std::size_t>(j0)] == 0) break;
    }
    for (int j : visited) {
      const auto jj = static_cast<std::size_t>(j);
      const std::int64_t delta = sub(shift, shift_at[jj]);
      if (delta == 0) continue;
      const auto r = static_cast<std::size_t>(row_of_col[jj]);
      u[r] = add(u[r], delta);
      v[jj] = sub(v[jj], delta);
    }
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      row_of_col[static_cast<std::size_t>(j0)] = row_of_col[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> col_of_row(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j) {
    col_of_row[static_cast<std::size_t>(row_of_col[static_cast<std::size_t>(j)] - 1)] = j - 1;
  }
  return col_of_row;
}

}  // namespace vrm
