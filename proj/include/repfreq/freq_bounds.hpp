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

// Lower bound on the long-run frequency of the Stackelberg action among
// payoff-preserving two-point mixtures over best-reply profiles.
//
// The bilinear program
//   min q alpha1(a*) + (1-q) alpha2(a*)
//   s.t. b_i in BR2(alpha_i), q u1(alpha1,b1) + (1-q) u1(alpha2,b2) >= u1(a*,b*)
// becomes one LP per (b1, b2) after substituting x = q alpha1, y = (1-q) alpha2:
// best-reply constraints are homogeneous, so they survive the scaling.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "repfreq/errors.hpp"
#include "repfreq/game.hpp"
#include "repfreq/lp.hpp"
#include "repfreq/polytope.hpp"
#include "repfreq/stage_analysis.hpp"

namespace repfreq {

enum class BoundMethod { kLp, kProp1, kGrid };

inline const char* to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::kLp:
      return "lp";
    case BoundMethod::kProp1:
      return "prop1";
    case BoundMethod::kGrid:
      return "grid";
  }
  return "lp";
}

struct FreqBoundResult {
  double value = 1.0;
  MixedAction alpha1;
  ActionId b1 = 0;
  MixedAction alpha2;
  ActionId b2 = 0;
  double q = 1.0;
  BoundMethod method = BoundMethod::kLp;
  // Set when the component carries no mass and its alpha is only a
  // representative point of the reply region.
  bool alpha1_placeholder = false;
  bool alpha2_placeholder = false;

  /// q u1(alpha1, b1) + (1-q) u1(alpha2, b2).
  double payoff(const StageGame& game) const {
    return q * game.u1_mixed(alpha1.weights, b1) + (1.0 - q) * game.u1_mixed(alpha2.weights, b2);
  }
  /// q alpha1 + (1-q) alpha2.
  MixedAction marginal() const {
    MixedAction m{std::vector<double>(alpha1.size())};
    for (std::size_t a = 0; a < m.size(); ++a) m[a] = q * alpha1[a] + (1.0 - q) * alpha2[a];
    return m;
  }
};

/// Best-reply cone of b: {x >= 0 : u2(x, b) >= u2(x, b') for all b'}.
inline Cone br_cone(const StageGame& game, ActionId b) {
  Cone c;
  c.b = b;
  c.ge = br_polytope(game, b).halfspaces;
  return c;
}

namespace detail {

struct PairSolution {
  double value = 0.0;
  std::vector<double> x;
  std::vector<double> y;
};

inline std::optional<PairSolution> solve_cone_pair(const StageGame& game, const Cone& c1,
                                                   const Cone& c2, ActionId a_star,
                                                   double target, bool equality) {
  const std::size_t n = game.num_actions1();
  lp::Problem prob(2 * n);
  auto total = prob.zero_row();
  std::fill(total.begin(), total.end(), 1.0);
  prob.add_row(total, lp::Relation::kEqual, 1.0);
  add_cone_rows(prob, c1, 0, n);
  add_cone_rows(prob, c2, n, n);
  auto pay = prob.zero_row();
  for (ActionId a = 0; a < n; ++a) {
    pay[a] = game.u1(a, c1.b);
    pay[n + a] = game.u1(a, c2.b);
  }
  prob.add_row(pay, equality ? lp::Relation::kEqual : lp::Relation::kGreaterEqual, target);
  prob.set_objective_coeff(a_star, 1.0);
  prob.set_objective_coeff(n + a_star, 1.0);
  const auto sol = lp::solve(prob);
  if (!sol.optimal()) return std::nullopt;
  PairSolution p;
  p.value = sol.objective;
  p.x.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(n));
  p.y.assign(sol.x.begin() + static_cast<std::ptrdiff_t>(n), sol.x.end());
  return p;
}

// Splits a scaled block back into (mass, conditional mixed action).
inline std::pair<double, MixedAction> unscale(const std::vector<double>& x, const Cone& cone,
                                              std::size_t n, bool& placeholder) {
  double mass = 0.0;
  for (double v : x) mass += v;
  placeholder = mass <= 1e-12;
  MixedAction alpha{std::vector<double>(n, 0.0)};
  if (!placeholder) {
    for (std::size_t a = 0; a < n; ++a) alpha[a] = x[a] / mass;
    return {mass, alpha};
  }
  auto point = cone_simplex_point(cone, n);
  if (!point) throw InternalError("empty reply region carries the zero-mass component");
  alpha.weights = *point;
  return {0.0, alpha};
}

// Minimum over ordered pairs of regions, ties broken by first occurrence.
inline FreqBoundResult min_over_cone_pairs(const StageGame& game, const std::vector<Cone>& all_cones,
                                           double epsilon, bool equality, BoundMethod method,
                                           double tol) {
  const auto st = stackelberg(game, tol);
  if (!st.unique_action || !st.unique_reply) {
    throw PreconditionError("frequency bound needs a unique Stackelberg action and reply");
  }
  const double target = game.u1(st.a_star, st.b_star) - epsilon;
  const std::size_t n = game.num_actions1();
  // Replies that are never best can only carry zero mass; dropping them
  // leaves the optimum unchanged and keeps every witness inside its region.
  std::vector<Cone> cones;
  for (const auto& c : all_cones) {
    if (cone_simplex_point(c, n)) cones.push_back(c);
  }
  std::optional<PairSolution> best;
  std::size_t best_i = 0;
  std::size_t best_j = 0;
  for (std::size_t i = 0; i < cones.size(); ++i) {
    for (std::size_t j = 0; j < cones.size(); ++j) {
      auto sol = solve_cone_pair(game, cones[i], cones[j], st.a_star, target, equality);
      if (!sol) continue;
      if (!best || sol->value < best->value - 1e-12) {
        best = std::move(sol);
        best_i = i;
        best_j = j;
      }
    }
  }
  if (!best) throw InternalError("frequency bound LP infeasible for every reply pair");

  FreqBoundResult r;
  r.method = method;
  r.b1 = cones[best_i].b;
  r.b2 = cones[best_j].b;
  auto [q, alpha1] = unscale(best->x, cones[best_i], n, r.alpha1_placeholder);
  double q2 = 0.0;
  std::tie(q2, r.alpha2) = unscale(best->y, cones[best_j], n, r.alpha2_placeholder);
  r.q = std::clamp(q, 0.0, 1.0);
  r.alpha1 = std::move(alpha1);
  r.value = std::clamp(best->value, 0.0, 1.0);
  return r;
}

}  // namespace detail

/// Exact optimum of the two-point program. `epsilon` relaxes the payoff
/// constraint to >= u1(a*,b*) - epsilon; `equality` makes it binding.
inline FreqBoundResult fstar(const StageGame& game, double epsilon = 0.0, bool equality = false,
                             double tol = kDefaultTol) {
  if (!(epsilon >= 0.0)) throw ValidationError("epsilon must be nonnegative");
  std::vector<Cone> cones;
  for (ActionId b = 0; b < game.num_actions2(); ++b) cones.push_back(br_cone(game, b));
  return detail::min_over_cone_pairs(game, cones, epsilon, equality, BoundMethod::kLp, tol);
}

/// The same objective over all distributions on best-reply profiles, one
/// scaled block per reply. Equal to fstar whenever two support points suffice.
inline double fstar_relaxed(const StageGame& game, double epsilon = 0.0,
                            double tol = kDefaultTol) {
  const auto st = stackelberg(game, tol);
  if (!st.unique_action || !st.unique_reply) {
    throw PreconditionError("frequency bound needs a unique Stackelberg action and reply");
  }
  const std::size_t n = game.num_actions1();
  const std::size_t m = game.num_actions2();
  lp::Problem prob(n * m);
  auto total = prob.zero_row();
  std::fill(total.begin(), total.end(), 1.0);
  prob.add_row(total, lp::Relation::kEqual, 1.0);
  auto pay = prob.zero_row();
  for (ActionId b = 0; b < m; ++b) {
    detail::add_cone_rows(prob, br_cone(game, b), b * n, n);
    for (ActionId a = 0; a < n; ++a) pay[b * n + a] = game.u1(a, b);
    prob.set_objective_coeff(b * n + st.a_star, 1.0);
  }
  prob.add_row(pay, lp::Relation::kGreaterEqual, game.u1(st.a_star, st.b_star) - epsilon);
  const auto sol = lp::solve(prob);
  if (!sol.optimal()) throw InternalError("relaxed frequency bound LP infeasible");
  return std::clamp(sol.objective, 0.0, 1.0);
}

/// Region of mixed actions where every action in `tied` is a best reply and
/// `b` is player 1's favourite among them.
struct GammaStarPiece {
  ActionId b = 0;
  std::vector<ActionId> tied;
  Cone cone;
  std::vector<std::vector<double>> vertices;
};

inline std::vector<GammaStarPiece> gamma_star(const StageGame& game) {
  detail::check_enumerable(game);
  const std::size_t n = game.num_actions1();
  const std::size_t m = game.num_actions2();
  std::vector<GammaStarPiece> pieces;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    const auto tied = detail::bits_to_set(mask, m);
    if (tied.size() < 2) continue;
    for (ActionId b : tied) {
      GammaStarPiece p;
      p.b = b;
      p.tied = tied;
      p.cone.b = b;
      for (ActionId other = 0; other < m; ++other) {
        if (other == b) continue;
        const bool in_tied = std::find(tied.begin(), tied.end(), other) != tied.end();
        auto h = reply_difference(game, b, other);
        (in_tied ? p.cone.eq : p.cone.ge).push_back(std::move(h));
        if (in_tied) {
          std::vector<double> g(n);
          for (ActionId a = 0; a < n; ++a) g[a] = game.u1(a, b) - game.u1(a, other);
          p.cone.ge.push_back(std::move(g));
        }
      }
      p.vertices = cone_vertices(p.cone, n);
      if (!p.vertices.empty()) pieces.push_back(std::move(p));
    }
  }
  return pieces;
}

/// The program restricted to indifference regions plus the lowest pure
/// profile; requires the monotone-supermodular structure.
inline FreqBoundResult fstar_prop1(const StageGame& game, double tol = kDefaultTol) {
  if (!is_monotone_supermodular(game)) {
    throw PreconditionError("game is not monotone-supermodular under its declared orders");
  }
  const std::size_t n = game.num_actions1();
  std::vector<Cone> cones;
  for (auto& p : gamma_star(game)) cones.push_back(std::move(p.cone));
  const auto [a_low, b_low] = lowest_pair(game, tol);
  Cone low;
  low.b = b_low;
  for (ActionId a = 0; a < n; ++a) {
    if (a == a_low) continue;
    std::vector<double> e(n, 0.0);
    e[a] = 1.0;
    low.eq.push_back(std::move(e));
  }
  cones.push_back(std::move(low));
  return detail::min_over_cone_pairs(game, cones, 0.0, false, BoundMethod::kProp1, tol);
}

namespace detail {

// All compositions of `total` into `parts` nonnegative integers.
inline void simplex_grid(std::size_t parts, std::size_t total, std::vector<std::size_t>& cur,
                         std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() + 1 == parts) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (std::size_t k = 0; k <= total; ++k) {
    cur.push_back(k);
    simplex_grid(parts, total - k, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

inline constexpr double kGridTupleBudget = 1e8;

/// Brute force over alpha1, alpha2 and q on the grid with step 1/resolution.
/// Restricting the feasible set makes this an upper bound on fstar.
inline double fstar_grid_oracle(const StageGame& game, std::size_t resolution,
                                double tol = kDefaultTol) {
  if (resolution < 1) throw ValidationError("grid resolution must be at least 1");
  const auto st = stackelberg(game, tol);
  if (!st.unique_action || !st.unique_reply) {
    throw PreconditionError("frequency bound needs a unique Stackelberg action and reply");
  }
  const std::size_t n = game.num_actions1();
  // Count grid points before materializing them.
  double points = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    points = points * static_cast<double>(resolution + i) / static_cast<double>(i);
  }
  const double profiles = points * static_cast<double>(game.num_actions2());
  if (profiles * profiles * static_cast<double>(resolution + 1) > kGridTupleBudget) {
    throw PreconditionError("grid oracle would enumerate more than 1e8 tuples");
  }

  std::vector<std::vector<std::size_t>> grid;
  std::vector<std::size_t> cur;
  detail::simplex_grid(n, resolution, cur, grid);
  const double step = 1.0 / static_cast<double>(resolution);

  struct Profile {
    double freq;    // alpha(a*)
    double payoff;  // u1(alpha, b)
  };
  std::vector<Profile> feasible;
  std::vector<double> alpha(n);
  for (const auto& g : grid) {
    for (std::size_t a = 0; a < n; ++a) alpha[a] = static_cast<double>(g[a]) * step;
    for (ActionId b : best_replies_p2(game, alpha, tol)) {
      feasible.push_back({alpha[st.a_star], game.u1_mixed(alpha, b)});
    }
  }
  const double target = game.u1(st.a_star, st.b_star) - tol;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p1 : feasible) {
    for (const auto& p2 : feasible) {
      for (std::size_t k = 0; k <= resolution; ++k) {
        const double q = static_cast<double>(k) * step;
        if (q * p1.payoff + (1.0 - q) * p2.payoff < target) continue;
        best = std::min(best, q * p1.freq + (1.0 - q) * p2.freq);
      }
    }
  }
  return best;
}

/// fstar at each epsilon; epsilons must be nonnegative and ascending.
inline std::vector<std::pair<double, double>> f_epsilon_curve(const StageGame& game,
                                                              const std::vector<double>& epsilons,
                                                              double tol = kDefaultTol) {
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] >= 0.0)) throw ValidationError("epsilons must be nonnegative");
    if (i > 0 && epsilons[i] < epsilons[i - 1]) {
      throw ValidationError("epsilons must be sorted ascending");
    }
  }
  std::vector<std::pair<double, double>> out;
  for (double e : epsilons) out.emplace_back(e, fstar(game, e, false, tol).value);
  return out;
}

}  // namespace repfreq
