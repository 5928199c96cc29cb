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

// Membership of a player-1 marginal in the set of frequencies that some
// distribution over best-reply profiles delivers at the Stackelberg payoff.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "repfreq/errors.hpp"
#include "repfreq/freq_bounds.hpp"
#include "repfreq/game.hpp"
#include "repfreq/lp.hpp"
#include "repfreq/stage_analysis.hpp"

namespace repfreq {

/// Payoff slack absorbing floating point when epsilon is zero.
inline constexpr double kMembershipSlack = 1e-9;

struct SetAComponent {
  ActionId b = 0;
  double mass = 0.0;
  MixedAction alpha;
};

/// Mixture over (alpha_b, b) with one conditional per reply; components with
/// no mass are omitted.
struct SetAWitness {
  std::vector<SetAComponent> components;
  MixedAction target;
  double payoff = 0.0;
  double stackelberg_payoff = 0.0;

  double total_mass() const {
    double s = 0.0;
    for (const auto& c : components) s += c.mass;
    return s;
  }
  MixedAction marginal() const {
    MixedAction m{std::vector<double>(target.size(), 0.0)};
    for (const auto& c : components) {
      for (std::size_t a = 0; a < m.size(); ++a) m[a] += c.mass * c.alpha[a];
    }
    return m;
  }
};

/// Decomposition witness when `target` is attainable with payoff within
/// epsilon of u1(a*, b*); nullopt otherwise.
inline std::optional<SetAWitness> in_set_A(const StageGame& game, const MixedAction& target,
                                           double epsilon = 0.0, double tol = kDefaultTol) {
  target.validate(game.num_actions1());
  if (!(epsilon >= 0.0)) throw ValidationError("epsilon must be nonnegative");
  const auto st = stackelberg(game, tol);
  if (!st.unique_action || !st.unique_reply) {
    throw PreconditionError("membership test needs a unique Stackelberg action and reply");
  }
  const double u_star = game.u1(st.a_star, st.b_star);
  const std::size_t n = game.num_actions1();
  const std::size_t m = game.num_actions2();

  lp::Problem prob(n * m);
  for (ActionId a = 0; a < n; ++a) {
    auto r = prob.zero_row();
    for (ActionId b = 0; b < m; ++b) r[b * n + a] = 1.0;
    prob.add_row(std::move(r), lp::Relation::kEqual, target[a]);
  }
  auto pay = prob.zero_row();
  for (ActionId b = 0; b < m; ++b) {
    detail::add_cone_rows(prob, br_cone(game, b), b * n, n);
    for (ActionId a = 0; a < n; ++a) pay[b * n + a] = game.u1(a, b);
  }
  prob.add_row(pay, lp::Relation::kLessEqual, u_star + epsilon + kMembershipSlack);
  prob.add_row(pay, lp::Relation::kGreaterEqual, u_star - epsilon - kMembershipSlack);
  const auto sol = lp::solve(prob);
  if (!sol.optimal()) return std::nullopt;

  SetAWitness w;
  w.target = target;
  w.stackelberg_payoff = u_star;
  for (ActionId b = 0; b < m; ++b) {
    double mass = 0.0;
    for (ActionId a = 0; a < n; ++a) mass += sol.x[b * n + a];
    if (mass <= 1e-12) continue;
    SetAComponent c;
    c.b = b;
    c.mass = mass;
    c.alpha.weights.resize(n);
    for (ActionId a = 0; a < n; ++a) c.alpha[a] = sol.x[b * n + a] / mass;
    w.payoff += mass * game.u1_mixed(c.alpha.weights, b);
    w.components.push_back(std::move(c));
  }
  return w;
}

}  // namespace repfreq
