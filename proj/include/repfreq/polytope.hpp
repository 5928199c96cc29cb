// Copyright 2026 The repfreq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Homogeneous cones over player 1's mixed actions and brute-force vertex
// enumeration of their simplex sections.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "repfreq/errors.hpp"
#include "repfreq/game.hpp"
#include "repfreq/lp.hpp"

namespace repfreq {

/// {x >= 0 : g.x >= 0 for g in ge, e.x = 0 for e in eq}, tagged with the
/// player-2 action it supports. Scaling x by any q >= 0 stays inside.
struct Cone {
  ActionId b = 0;
  std::vector<std::vector<double>> ge;
  std::vector<std::vector<double>> eq;

  bool contains(const std::vector<double>& x, double tol = kDefaultTol) const {
    for (double v : x) {
      if (v < -tol) return false;
    }
    for (const auto& g : ge) {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += g[i] * x[i];
      if (s < -tol) return false;
    }
    for (const auto& e : eq) {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += e[i] * x[i];
      if (std::abs(s) > tol) return false;
    }
    return true;
  }
};

namespace detail {

// Appends the cone's rows for the variable block starting at `offset`.
inline void add_cone_rows(lp::Problem& prob, const Cone& cone, std::size_t offset,
                          std::size_t n) {
  for (const auto& g : cone.ge) {
    auto r = prob.zero_row();
    for (std::size_t i = 0; i < n; ++i) r[offset + i] = g[i];
    prob.add_row(std::move(r), lp::Relation::kGreaterEqual, 0.0);
  }
  for (const auto& e : cone.eq) {
    auto r = prob.zero_row();
    for (std::size_t i = 0; i < n; ++i) r[offset + i] = e[i];
    prob.add_row(std::move(r), lp::Relation::kEqual, 0.0);
  }
}

}  // namespace detail

/// Some point of the cone on the probability simplex, if any.
inline std::optional<std::vector<double>> cone_simplex_point(const Cone& cone, std::size_t n) {
  lp::Problem prob(n);
  auto simplex = prob.zero_row();
  std::fill(simplex.begin(), simplex.end(), 1.0);
  prob.add_row(simplex, lp::Relation::kEqual, 1.0);
  detail::add_cone_rows(prob, cone, 0, n);
  const auto sol = lp::solve(prob);
  if (!sol.optimal()) return std::nullopt;
  std::vector<double> x = sol.x;
  double total = 0.0;
  for (double v : x) total += v;
  for (double& v : x) v /= total;
  return x;
}

/// Vertices of {x : eq rows hold with equality, ge rows hold}, where each row
/// is (coeffs, rhs). Exhaustive over active sets; fine for |x| <= 8.
inline std::vector<std::vector<double>> enumerate_vertices(
    std::size_t n, std::vector<std::pair<std::vector<double>, double>> eq,
    const std::vector<std::pair<std::vector<double>, double>>& ge, double tol = 1e-9) {
  // Row-reduce the equalities to an independent set; pivots[i] is the column
  // that basis row i alone is nonzero in.
  std::vector<std::pair<std::vector<double>, double>> basis;
  std::vector<std::size_t> pivots;
  for (auto row : eq) {
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const auto& [brow, brhs] = basis[k];
      const double f = row.first[pivots[k]] / brow[pivots[k]];
      if (f == 0.0) continue;
      for (std::size_t i = 0; i < n; ++i) row.first[i] -= f * brow[i];
      row.second -= f * brhs;
    }
    std::size_t lead = n;
    double biggest = 1e-12;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(row.first[i]) > biggest) {
        biggest = std::abs(row.first[i]);
        lead = i;
      }
    }
    if (lead == n) {
      if (std::abs(row.second) > tol) return {};  // inconsistent
      continue;
    }
    for (auto& [brow, brhs] : basis) {
      const double f = brow[lead] / row.first[lead];
      if (f == 0.0) continue;
      for (std::size_t i = 0; i < n; ++i) brow[i] -= f * row.first[i];
      brhs -= f * row.second;
    }
    basis.push_back(std::move(row));
    pivots.push_back(lead);
  }
  if (basis.size() > n) return {};
  const std::size_t k = n - basis.size();
  if (k > ge.size()) return {};

  std::vector<std::vector<double>> vertices;
  std::vector<bool> pick(ge.size(), false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
  do {
    std::vector<std::vector<double>> m;
    std::vector<double> rhs;
    for (const auto& [row, r] : basis) {
      m.push_back(row);
      rhs.push_back(r);
    }
    for (std::size_t i = 0; i < ge.size(); ++i) {
      if (pick[i]) {
        m.push_back(ge[i].first);
        rhs.push_back(ge[i].second);
      }
    }
    // Gaussian elimination with partial pivoting.
    bool singular = false;
    for (std::size_t c = 0; c < n && !singular; ++c) {
      std::size_t p = c;
      for (std::size_t r = c + 1; r < n; ++r) {
        if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
      }
      if (std::abs(m[p][c]) < 1e-12) {
        singular = true;
        break;
      }
      std::swap(m[p], m[c]);
      std::swap(rhs[p], rhs[c]);
      for (std::size_t r = 0; r < n; ++r) {
        if (r == c) continue;
        const double f = m[r][c] / m[c][c];
        if (f == 0.0) continue;
        for (std::size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
        rhs[r] -= f * rhs[c];
      }
    }
    if (singular) continue;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] / m[i][i];

    bool feasible = true;
    for (const auto& [row, r] : ge) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += row[i] * x[i];
      if (s < r - tol) feasible = false;
    }
    for (const auto& [row, r] : eq) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += row[i] * x[i];
      if (std::abs(s - r) > tol) feasible = false;
    }
    if (!feasible) continue;
    for (double& v : x) {
      if (std::abs(v) < 1e-15) v = 0.0;
    }
    const bool dup = std::any_of(vertices.begin(), vertices.end(), [&](const auto& v) {
      for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(v[i] - x[i]) > tol) return false;
      }
      return true;
    });
    if (!dup) vertices.push_back(std::move(x));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  std::sort(vertices.begin(), vertices.end());
  return vertices;
}

/// Vertices of the cone's section with the probability simplex.
inline std::vector<std::vector<double>> cone_vertices(const Cone& cone, std::size_t n) {
  std::vector<std::pair<std::vector<double>, double>> eq;
  eq.emplace_back(std::vector<double>(n, 1.0), 1.0);
  for (const auto& e : cone.eq) eq.emplace_back(e, 0.0);
  std::vector<std::pair<std::vector<double>, double>> ge;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> unit(n, 0.0);
    unit[i] = 1.0;
    ge.emplace_back(std::move(unit), 0.0);
  }
  for (const auto& g : cone.ge) ge.emplace_back(g, 0.0);
  return enumerate_vertices(n, std::move(eq), ge);
}

}  // namespace repfreq
