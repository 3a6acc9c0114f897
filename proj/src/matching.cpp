// Copyright 2026 The dpse Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <limits>
#include <tuple>

#include "dpse/solver.hpp"

namespace dpse
{

namespace
{

// assignment[i] = candidate index for row i.
std::vector<std::size_t> greedy_assignment(std::span<const cplx> rows,
                                           std::span<const cplx> cands)
{
  const std::size_t n = rows.size();
  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  pairs.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
  {
    for (std::size_t j = 0; j < n; ++j)
    {
      pairs.emplace_back(std::abs(rows[i] - cands[j]), i, j);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<std::size_t> assignment(n, n);
  std::vector<bool> taken(n, false);
  std::size_t placed = 0;
  for (const auto &[d, i, j] : pairs)
  {
    if (assignment[i] == n && !taken[j])
    {
      assignment[i] = j;
      taken[j] = true;
      if (++placed == n)
      {
        break;
      }
    }
  }
  return assignment;
}

// Hungarian method (potentials form), O(n^3).
std::vector<std::size_t> optimal_assignment(std::span<const cplx> rows,
                                            std::span<const cplx> cands)
{
  const std::size_t n = rows.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<bool> used(n + 1);
  auto cost = [&](std::size_t i, std::size_t j) { return std::abs(rows[i - 1] - cands[j - 1]); };

  for (std::size_t i = 1; i <= n; ++i)
  {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), false);
    do
    {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j)
      {
        if (used[j])
        {
          continue;
        }
        const double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j])
        {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta)
        {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j)
      {
        if (used[j])
        {
          u[p[j]] += delta;
          v[j] -= delta;
        }
        else
        {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do
    {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> assignment(n);
  for (std::size_t j = 1; j <= n; ++j)
  {
    assignment[p[j] - 1] = j - 1;
  }
  return assignment;
}

}  // namespace

ComplexVector match_shifts(std::span<const cplx> old, std::span<const cplx> candidates,
                           Matching strategy, std::span<const bool> locked)
{
  if (old.size() != candidates.size())
  {
    throw DimensionError("match_shifts: " + std::to_string(old.size()) + " shifts but " +
                         std::to_string(candidates.size()) + " candidates");
  }
  if (!locked.empty() && locked.size() != old.size())
  {
    throw DimensionError("match_shifts: locked mask has the wrong length");
  }
  const std::size_t n = old.size();
  ComplexVector out(n);
  std::vector<bool> consumed(n, false);
  std::vector<std::size_t> free_rows;

  for (std::size_t i = 0; i < n; ++i)
  {
    if (locked.empty() || !locked[i])
    {
      free_rows.push_back(i);
      continue;
    }
    out[i] = old[i];
    std::size_t best = n;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j)
    {
      const double d = std::abs(candidates[j] - old[i]);
      if (!consumed[j] && d < best_d)
      {
        best_d = d;
        best = j;
      }
    }
    consumed[best] = true;
  }

  ComplexVector rows, cands;
  for (std::size_t i : free_rows)
  {
    rows.push_back(old[i]);
  }
  for (std::size_t j = 0; j < n; ++j)
  {
    if (!consumed[j])
    {
      cands.push_back(candidates[j]);
    }
  }
  const auto assignment = strategy == Matching::greedy_nearest
                              ? greedy_assignment(rows, cands)
                              : optimal_assignment(rows, cands);
  for (std::size_t k = 0; k < free_rows.size(); ++k)
  {
    out[free_rows[k]] = cands[assignment[k]];
  }
  return out;
}

}  // namespace dpse
