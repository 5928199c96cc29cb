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

#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "repfreq/errors.hpp"

namespace repfreq {

using Matrix = std::vector<std::vector<double>>;

/// Index into a player's ordered action list.
using ActionId = std::size_t;

/// Probability vector over one player's actions, aligned with the game's
/// action order.
struct MixedAction {
  std::vector<double> weights;

  static MixedAction pure(std::size_t num_actions, ActionId a) {
    MixedAction m{std::vector<double>(num_actions, 0.0)};
    m.weights.at(a) = 1.0;
    return m;
  }

  std::size_t size() const { return weights.size(); }
  double operator[](ActionId a) const { return weights[a]; }
  double& operator[](ActionId a) { return weights[a]; }

  /// Throws ValidationError unless nonnegative and summing to one within 1e-12
  /// (scaled by the support size).
  void validate(std::size_t expected_size) const {
    if (weights.size() != expected_size) {
      throw ValidationError("mixed action has " + std::to_string(weights.size()) +
                            " entries, expected " + std::to_string(expected_size));
    }
    double total = 0.0;
    for (double w : weights) {
      if (!std::isfinite(w) || w < 0.0) {
        throw ValidationError("mixed action weights must be finite and nonnegative");
      }
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-12 * static_cast<double>(weights.size())) {
      throw ValidationError("mixed action weights sum to " + std::to_string(total) +
                            ", not 1");
    }
  }

  std::vector<ActionId> support(double tol = 0.0) const {
    std::vector<ActionId> s;
    for (ActionId a = 0; a < weights.size(); ++a) {
      if (weights[a] > tol) s.push_back(a);
    }
    return s;
  }
};

/// Finite two-player bimatrix game with labelled actions.
class StageGame {
 public:
  StageGame(std::vector<std::string> actions1, std::vector<std::string> actions2,
            Matrix u1, Matrix u2,
            std::optional<std::vector<ActionId>> order1 = std::nullopt,
            std::optional<std::vector<ActionId>> order2 = std::nullopt)
      : actions1_(std::move(actions1)),
        actions2_(std::move(actions2)),
        u1_(std::move(u1)),
        u2_(std::move(u2)),
        order1_(std::move(order1)),
        order2_(std::move(order2)) {
    validate();
  }

  std::size_t num_actions1() const { return actions1_.size(); }
  std::size_t num_actions2() const { return actions2_.size(); }
  const std::vector<std::string>& actions1() const { return actions1_; }
  const std::vector<std::string>& actions2() const { return actions2_; }
  const std::string& label1(ActionId a) const { return actions1_.at(a); }
  const std::string& label2(ActionId b) const { return actions2_.at(b); }

  double u1(ActionId a, ActionId b) const { return u1_[a][b]; }
  double u2(ActionId a, ActionId b) const { return u2_[a][b]; }
  const Matrix& u1() const { return u1_; }
  const Matrix& u2() const { return u2_; }

  /// Strict orders, most preferred (highest) first.
  const std::optional<std::vector<ActionId>>& order1() const { return order1_; }
  const std::optional<std::vector<ActionId>>& order2() const { return order2_; }

  ActionId index1(std::string_view label) const { return find(actions1_, label, "player-1"); }
  ActionId index2(std::string_view label) const { return find(actions2_, label, "player-2"); }

  /// u1(alpha, b) for a mixed player-1 action against a pure reply.
  double u1_mixed(std::span<const double> alpha, ActionId b) const {
    double s = 0.0;
    for (ActionId a = 0; a < actions1_.size(); ++a) s += alpha[a] * u1_[a][b];
    return s;
  }
  double u2_mixed(std::span<const double> alpha, ActionId b) const {
    double s = 0.0;
    for (ActionId a = 0; a < actions1_.size(); ++a) s += alpha[a] * u2_[a][b];
    return s;
  }

  double max_u1() const {
    double m = u1_[0][0];
    for (const auto& row : u1_)
      for (double v : row) m = std::max(m, v);
    return m;
  }
  double min_u1() const {
    double m = u1_[0][0];
    for (const auto& row : u1_)
      for (double v : row) m = std::min(m, v);
    return m;
  }

  friend bool operator==(const StageGame&, const StageGame&) = default;

 private:
  static ActionId find(const std::vector<std::string>& labels, std::string_view label,
                       const char* who) {
    for (ActionId i = 0; i < labels.size(); ++i) {
      if (labels[i] == label) return i;
    }
    throw ValidationError(std::string("unknown ") + who + " action label '" +
                          std::string(label) + "'");
  }

  static void check_labels(const std::vector<std::string>& labels, const char* who) {
    if (labels.size() < 2) {
      throw ValidationError(std::string(who) + " needs at least two actions");
    }
    std::set<std::string> seen;
    for (const auto& l : labels) {
      if (l.empty()) throw ValidationError(std::string(who) + " has an empty label");
      if (!seen.insert(l).second) {
        throw ValidationError(std::string("duplicate ") + who + " label '" + l + "'");
      }
    }
  }

  void check_matrix(const Matrix& u, const char* name) const {
    if (u.size() != actions1_.size()) {
      throw ValidationError(std::string(name) + " has " + std::to_string(u.size()) +
                            " rows but there are " + std::to_string(actions1_.size()) +
                            " player-1 actions");
    }
    for (const auto& row : u) {
      if (row.size() != actions2_.size()) {
        throw ValidationError(std::string(name) + " row has " + std::to_string(row.size()) +
                              " entries but there are " +
                              std::to_string(actions2_.size()) + " player-2 actions");
      }
      for (double v : row) {
        if (!std::isfinite(v)) throw ValidationError(std::string(name) + " has a non-finite payoff");
      }
    }
  }

  static void check_order(const std::optional<std::vector<ActionId>>& order, std::size_t n,
                          const char* who) {
    if (!order) return;
    if (order->size() != n) {
      throw ValidationError(std::string(who) + " order must list every action exactly once");
    }
    std::vector<bool> hit(n, false);
    for (ActionId a : *order) {
      if (a >= n || hit[a]) {
        throw ValidationError(std::string(who) + " order must list every action exactly once");
      }
      hit[a] = true;
    }
  }

  void validate() const {
    check_labels(actions1_, "player-1");
    check_labels(actions2_, "player-2");
    check_matrix(u1_, "u1");
    check_matrix(u2_, "u2");
    check_order(order1_, actions1_.size(), "player-1");
    check_order(order2_, actions2_.size(), "player-2");
  }

  std::vector<std::string> actions1_;
  std::vector<std::string> actions2_;
  Matrix u1_;
  Matrix u2_;
  std::optional<std::vector<ActionId>> order1_;
  std::optional<std::vector<ActionId>> order2_;
};

/// (u1, u2) under independent mixing: sum_a sum_b alpha(a) beta(b) u_i(a, b).
inline std::pair<double, double> expected_payoffs(const StageGame& game, const MixedAction& alpha,
                                                  const MixedAction& beta) {
  alpha.validate(game.num_actions1());
  beta.validate(game.num_actions2());
  double v1 = 0.0;
  double v2 = 0.0;
  for (ActionId a = 0; a < game.num_actions1(); ++a) {
    if (alpha[a] == 0.0) continue;
    for (ActionId b = 0; b < game.num_actions2(); ++b) {
      const double w = alpha[a] * beta[b];
      v1 += w * game.u1(a, b);
      v2 += w * game.u2(a, b);
    }
  }
  return {v1, v2};
}

/// Parses "H:0.375,L:0.625". Unlisted labels get probability zero.
inline MixedAction parse_mixed_action(std::string_view text,
                                      const std::vector<std::string>& labels) {
  MixedAction m{std::vector<double>(labels.size(), 0.0)};
  std::vector<bool> seen(labels.size(), false);
  std::string s(text);
  std::stringstream ss(s);
  std::string item;
  bool any = false;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == item.size()) {
      throw ParseError("mixed action entry '" + item + "' is not label:prob");
    }
    const std::string label = item.substr(0, colon);
    const std::string prob = item.substr(colon + 1);
    std::size_t idx = labels.size();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == label) idx = i;
    }
    if (idx == labels.size()) throw ValidationError("unknown action label '" + label + "'");
    if (seen[idx]) throw ParseError("action label '" + label + "' listed twice");
    seen[idx] = true;
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(prob, &used);
    } catch (const std::exception&) {
      throw ParseError("bad probability '" + prob + "'");
    }
    if (used != prob.size()) throw ParseError("bad probability '" + prob + "'");
    m[idx] = p;
    any = true;
  }
  if (!any) throw ParseError("empty mixed action");
  m.validate(labels.size());
  return m;
}

inline std::string format_mixed_action(const MixedAction& m,
                                       const std::vector<std::string>& labels) {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (m[i] == 0.0) continue;
    if (!first) os << ',';
    os << labels[i] << ':' << m[i];
    first = false;
  }
  return os.str();
}

}  // namespace repfreq
