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

// Best replies, the pure Stackelberg action, minmax and folk-theorem payoff
// caps, and the standing assumptions on the stage game.

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "repfreq/errors.hpp"
#include "repfreq/game.hpp"
#include "repfreq/lp.hpp"

namespace repfreq {

/// All b with u2(alpha, b) >= max_b' u2(alpha, b') - tol. Never empty.
inline std::vector<ActionId> best_replies_p2(const StageGame& game, std::span<const double> alpha,
                                             double tol = kDefaultTol) {
  std::vector<double> v(game.num_actions2());
  for (ActionId b = 0; b < v.size(); ++b) v[b] = game.u2_mixed(alpha, b);
  const double best = *std::max_element(v.begin(), v.end());
  std::vector<ActionId> out;
  for (ActionId b = 0; b < v.size(); ++b) {
    if (v[b] >= best - tol) out.push_back(b);
  }
  return out;
}

inline std::vector<ActionId> best_replies_p2(const StageGame& game, const MixedAction& alpha,
                                             double tol = kDefaultTol) {
  alpha.validate(game.num_actions1());
  return best_replies_p2(game, std::span<const double>(alpha.weights), tol);
}

inline std::vector<ActionId> best_replies_p2_pure(const StageGame& game, ActionId a,
                                                  double tol = kDefaultTol) {
  return best_replies_p2(game, MixedAction::pure(game.num_actions1(), a).weights, tol);
}

/// Player 1's pure best replies to a pure player-2 action.
inline std::vector<ActionId> best_replies_p1_pure(const StageGame& game, ActionId b,
                                                  double tol = kDefaultTol) {
  double best = -std::numeric_limits<double>::infinity();
  for (ActionId a = 0; a < game.num_actions1(); ++a) best = std::max(best, game.u1(a, b));
  std::vector<ActionId> out;
  for (ActionId a = 0; a < game.num_actions1(); ++a) {
    if (game.u1(a, b) >= best - tol) out.push_back(a);
  }
  return out;
}

/// Homogeneous description of {alpha : b in BR2(alpha)}: each halfspace h
/// encodes sum_a h[a] alpha[a] >= 0, i.e. u2(alpha, b) >= u2(alpha, b').
struct BRPolytope {
  ActionId b = 0;
  std::vector<std::vector<double>> halfspaces;

  bool contains(std::span<const double> alpha, double tol = kDefaultTol) const {
    for (const auto& h : halfspaces) {
      double s = 0.0;
      for (std::size_t a = 0; a < h.size(); ++a) s += h[a] * alpha[a];
      if (s < -tol) return false;
    }
    return true;
  }
};

inline std::vector<double> reply_difference(const StageGame& game, ActionId b, ActionId other) {
  std::vector<double> h(game.num_actions1());
  for (ActionId a = 0; a < h.size(); ++a) h[a] = game.u2(a, b) - game.u2(a, other);
  return h;
}

inline BRPolytope br_polytope(const StageGame& game, ActionId b) {
  BRPolytope p;
  p.b = b;
  for (ActionId other = 0; other < game.num_actions2(); ++other) {
    if (other != b) p.halfspaces.push_back(reply_difference(game, b, other));
  }
  return p;
}

struct StackelbergResult {
  ActionId a_star = 0;
  ActionId b_star = 0;
  double v_star = 0.0;
  bool unique_action = false;  // argmax over a is a singleton
  bool unique_reply = false;   // BR2(a_star) is a singleton
};

/// Pure Stackelberg action by enumeration: argmax_a min_{b in BR2(a)} u1(a,b).
/// Ties are reported through the flags; the first maximizer is returned.
inline StackelbergResult stackelberg(const StageGame& game, double tol = kDefaultTol) {
  const std::size_t n = game.num_actions1();
  std::vector<double> worst(n);
  std::vector<ActionId> worst_reply(n);
  for (ActionId a = 0; a < n; ++a) {
    const auto br = best_replies_p2_pure(game, a, tol);
    worst[a] = std::numeric_limits<double>::infinity();
    for (ActionId b : br) {
      if (game.u1(a, b) < worst[a]) {
        worst[a] = game.u1(a, b);
        worst_reply[a] = b;
      }
    }
  }
  StackelbergResult r;
  r.a_star = static_cast<ActionId>(std::max_element(worst.begin(), worst.end()) - worst.begin());
  r.b_star = worst_reply[r.a_star];
  r.v_star = game.u1(r.a_star, r.b_star);
  std::size_t ties = 0;
  for (ActionId a = 0; a < n; ++a) {
    if (worst[a] >= worst[r.a_star] - tol) ++ties;
  }
  r.unique_action = ties == 1;
  r.unique_reply = best_replies_p2_pure(game, r.a_star, tol).size() == 1;
  return r;
}

namespace detail {

inline std::vector<ActionId> bits_to_set(std::uint64_t mask, std::size_t n) {
  std::vector<ActionId> s;
  for (ActionId i = 0; i < n; ++i) {
    if (mask & (std::uint64_t{1} << i)) s.push_back(i);
  }
  return s;
}

inline void check_enumerable(const StageGame& game) {
  if (game.num_actions1() > 16 || game.num_actions2() > 16) {
    throw PreconditionError("support enumeration is limited to 16 actions per player");
  }
}

// Maximizes t subject to: alpha in simplex, supp(alpha) within `rows`,
// alpha(a) >= t on `rows`, and every b in `tied` is a best reply.
// Returns -inf when infeasible.
inline double max_min_support_weight(const StageGame& game, const std::vector<ActionId>& rows,
                                     const std::vector<ActionId>& tied) {
  const std::size_t k = rows.size();
  lp::Problem prob(k + 1);
  auto simplex = prob.zero_row();
  for (std::size_t i = 0; i < k; ++i) simplex[i] = 1.0;
  prob.add_row(simplex, lp::Relation::kEqual, 1.0);
  for (std::size_t i = 0; i < k; ++i) {
    auto r = prob.zero_row();
    r[i] = 1.0;
    r[k] = -1.0;
    prob.add_row(r, lp::Relation::kGreaterEqual, 0.0);
  }
  for (ActionId b : tied) {
    for (ActionId other = 0; other < game.num_actions2(); ++other) {
      if (other == b) continue;
      auto r = prob.zero_row();
      for (std::size_t i = 0; i < k; ++i) r[i] = game.u2(rows[i], b) - game.u2(rows[i], other);
      prob.add_row(r, lp::Relation::kGreaterEqual, 0.0);
    }
  }
  prob.set_objective_coeff(k, -1.0);
  const auto sol = lp::solve(prob);
  if (!sol.optimal()) return -std::numeric_limits<double>::infinity();
  return sol.x[k];
}

// True when some alpha in the simplex makes every b in `tied` a best reply.
inline bool jointly_best_replies(const StageGame& game, const std::vector<ActionId>& tied) {
  std::vector<ActionId> all(game.num_actions1());
  for (ActionId a = 0; a < all.size(); ++a) all[a] = a;
  return max_min_support_weight(game, all, tied) > -std::numeric_limits<double>::infinity();
}

// min over beta in Delta(S) of max_{a in rows} u1(a, beta)   (minimize = true)
// max over beta in Delta(S) of min_{a in rows} u1(a, beta)   (minimize = false)
inline double mixed_reply_value(const StageGame& game, const std::vector<ActionId>& rows,
                                const std::vector<ActionId>& cols, bool minimize) {
  const std::size_t k = cols.size();
  // Variables: beta (k), v_plus, v_minus.
  lp::Problem prob(k + 2);
  auto simplex = prob.zero_row();
  for (std::size_t j = 0; j < k; ++j) simplex[j] = 1.0;
  prob.add_row(simplex, lp::Relation::kEqual, 1.0);
  for (ActionId a : rows) {
    auto r = prob.zero_row();
    for (std::size_t j = 0; j < k; ++j) r[j] = game.u1(a, cols[j]);
    r[k] = -1.0;
    r[k + 1] = 1.0;
    prob.add_row(r, minimize ? lp::Relation::kLessEqual : lp::Relation::kGreaterEqual, 0.0);
  }
  const double s = minimize ? 1.0 : -1.0;
  prob.set_objective_coeff(k, s);
  prob.set_objective_coeff(k + 1, -s);
  const auto sol = lp::solve(prob);
  if (!sol.optimal()) throw InternalError("minmax LP failed");
  return sol.x[k] - sol.x[k + 1];
}

}  // namespace detail

/// Player 1's minmax value over opponent mixtures that some alpha rationalizes.
inline double minmax_p1(const StageGame& game) {
  detail::check_enumerable(game);
  const std::size_t m = game.num_actions2();
  std::vector<ActionId> all_rows(game.num_actions1());
  for (ActionId a = 0; a < all_rows.size(); ++a) all_rows[a] = a;
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    const auto s = detail::bits_to_set(mask, m);
    if (!detail::jointly_best_replies(game, s)) continue;
    best = std::min(best, detail::mixed_reply_value(game, all_rows, s, true));
  }
  return best;
}

/// Highest payoff of player 1 in the complete-information repeated game:
/// max over (alpha, beta) with supp(beta) within BR2(alpha) of
/// min_{a in supp(alpha)} u1(a, beta).
inline double vbar_p1(const StageGame& game) {
  detail::check_enumerable(game);
  const std::size_t n = game.num_actions1();
  const std::size_t m = game.num_actions2();
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t tmask = 1; tmask < (std::uint64_t{1} << n); ++tmask) {
    const auto t = detail::bits_to_set(tmask, n);
    for (std::uint64_t smask = 1; smask < (std::uint64_t{1} << m); ++smask) {
      const auto s = detail::bits_to_set(smask, m);
      // Support exactly T is attainable iff every a in T can get positive weight.
      if (detail::max_min_support_weight(game, t, s) <= 1e-12) continue;
      best = std::max(best, detail::mixed_reply_value(game, t, s, false));
    }
  }
  return best;
}

struct AssumptionReport {
  bool a1_unique_stackelberg = false;
  bool a1_unique_reply = false;
  bool a2_not_best_reply = false;
  bool a2_above_minmax = false;
  double minmax = 0.0;
  double vbar = 0.0;

  bool assumption1() const { return a1_unique_stackelberg && a1_unique_reply; }
  bool assumption2() const { return a2_not_best_reply && a2_above_minmax; }
  bool all() const { return assumption1() && assumption2(); }
};

inline AssumptionReport check_assumptions(const StageGame& game, double tol = kDefaultTol) {
  const auto st = stackelberg(game, tol);
  AssumptionReport r;
  r.a1_unique_stackelberg = st.unique_action;
  r.a1_unique_reply = st.unique_reply;
  const auto br1 = best_replies_p1_pure(game, st.b_star, tol);
  r.a2_not_best_reply = std::find(br1.begin(), br1.end(), st.a_star) == br1.end();
  r.minmax = minmax_p1(game);
  r.vbar = vbar_p1(game);
  r.a2_above_minmax = st.v_star > r.minmax + tol;
  return r;
}

/// Definition check under the game's declared orders (highest first):
/// u1 strictly decreasing in player 1's action and u2 with strictly
/// increasing differences.
inline bool is_monotone_supermodular(const StageGame& game) {
  if (!game.order1() || !game.order2()) {
    throw PreconditionError("monotone-supermodular check needs order1 and order2");
  }
  const auto& o1 = *game.order1();
  const auto& o2 = *game.order2();
  // o1[i] is ranked above o1[j] whenever i < j.
  for (std::size_t i = 0; i < o1.size(); ++i) {
    for (std::size_t j = i + 1; j < o1.size(); ++j) {
      const ActionId hi = o1[i];
      const ActionId lo = o1[j];
      for (ActionId b = 0; b < game.num_actions2(); ++b) {
        if (!(game.u1(hi, b) < game.u1(lo, b))) return false;
      }
      for (std::size_t k = 0; k < o2.size(); ++k) {
        for (std::size_t l = k + 1; l < o2.size(); ++l) {
          const double d_hi = game.u2(hi, o2[k]) - game.u2(lo, o2[k]);
          const double d_lo = game.u2(hi, o2[l]) - game.u2(lo, o2[l]);
          if (!(d_hi > d_lo)) return false;
        }
      }
    }
  }
  return true;
}

/// (lowest action under order1, its best reply that is best for player 1).
inline std::pair<ActionId, ActionId> lowest_pair(const StageGame& game, double tol = kDefaultTol) {
  if (!game.order1()) throw PreconditionError("lowest_pair needs order1");
  const ActionId a_low = game.order1()->back();
  const auto br = best_replies_p2_pure(game, a_low, tol);
  ActionId b_low = br.front();
  for (ActionId b : br) {
    if (game.u1(a_low, b) > game.u1(a_low, b_low) + tol) b_low = b;
  }
  return {a_low, b_low};
}

}  // namespace repfreq
