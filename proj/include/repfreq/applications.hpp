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

// Parameterized stage games with closed-form frequency bounds: product
// choice with two or three consumer options, entry deterrence and fiscal
// policy.

#pragma once

#include <string>
#include <type_traits>
#include <variant>

#include "repfreq/errors.hpp"
#include "repfreq/game.hpp"

namespace repfreq {

/// Firm H/L against consumer h/l; consumers buy h iff Pr(H) > gamma.
struct Product2Params {
  double gamma = 0.5;
  double c_h = 0.4;
  double c_l = 0.2;
};

/// Firm H/L against consumer h/m/l with thresholds g2 < g1.
struct Product3Params {
  double g1 = 0.6;
  double g2 = 0.4;
  double p = 0.5;
  double c = 0.5;
};

/// Incumbent F/A against entrant O/I. A subsidy s on entry shifts the
/// entrant's threshold to gamma + s.
struct EntryParams {
  double gamma = 0.6;
  double c_o = 0.5;
  double c_i = 0.3;
  double subsidy = 0.0;
};

/// Government Normal/Expropriate against citizen Invest/NotInvest.
struct FiscalParams {
  double tau = 0.3;
  double c = 0.2;
};

using AppParams = std::variant<Product2Params, Product3Params, EntryParams, FiscalParams>;

namespace detail {

inline void require_open_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) throw ValidationError(std::string(name) + " must lie in (0, 1)");
}

}  // namespace detail

inline void validate(const AppParams& params) {
  std::visit(
      [](const auto& pr) {
        using T = std::decay_t<decltype(pr)>;
        if constexpr (std::is_same_v<T, Product2Params>) {
          detail::require_open_unit(pr.gamma, "gamma");
          detail::require_open_unit(pr.c_h, "c_h");
          detail::require_open_unit(pr.c_l, "c_l");
        } else if constexpr (std::is_same_v<T, Product3Params>) {
          detail::require_open_unit(pr.g1, "g1");
          detail::require_open_unit(pr.g2, "g2");
          detail::require_open_unit(pr.p, "p");
          detail::require_open_unit(pr.c, "c");
          if (!(pr.g2 < pr.g1)) throw ValidationError("g2 must be below g1");
        } else if constexpr (std::is_same_v<T, EntryParams>) {
          detail::require_open_unit(pr.gamma, "gamma");
          detail::require_open_unit(pr.c_o, "c_o");
          if (!(pr.c_i > 0.0)) throw ValidationError("c_i must be positive");
          if (!(pr.subsidy >= 0.0)) throw ValidationError("subsidy must be nonnegative");
        } else {
          detail::require_open_unit(pr.tau, "tau");
          if (!(pr.c > 0.0 && pr.c < 1.0 - pr.tau)) {
            throw ValidationError("c must lie in (0, 1 - tau)");
          }
        }
      },
      params);
}

inline const char* app_name(const AppParams& params) {
  switch (params.index()) {
    case 0:
      return "product2";
    case 1:
      return "product3";
    case 2:
      return "entry";
    default:
      return "fiscal";
  }
}

inline StageGame build_stage_game(const AppParams& params) {
  validate(params);
  return std::visit(
      [](const auto& pr) -> StageGame {
        using T = std::decay_t<decltype(pr)>;
        if constexpr (std::is_same_v<T, Product2Params>) {
          const double g = pr.gamma;
          return StageGame({"H", "L"}, {"h", "l"}, {{1.0 - pr.c_h, -pr.c_l}, {1.0, 0.0}},
                           {{2.0 - g, 1.0}, {-g, 0.0}}, std::vector<ActionId>{0, 1},
                           std::vector<ActionId>{0, 1});
        } else if constexpr (std::is_same_v<T, Product3Params>) {
          // u2(., l) = 0; u2(alpha, m) = Pr(H) - g2; u2(alpha, h) - u2(alpha, m) = Pr(H) - g1.
          const double g1 = pr.g1;
          const double g2 = pr.g2;
          return StageGame({"H", "L"}, {"h", "m", "l"},
                           {{1.0 - pr.c, pr.p - pr.c, -pr.c}, {1.0, pr.p, 0.0}},
                           {{2.0 - g1 - g2, 1.0 - g2, 0.0}, {-g1 - g2, -g2, 0.0}},
                           std::vector<ActionId>{0, 1}, std::vector<ActionId>{0, 1, 2});
        } else if constexpr (std::is_same_v<T, EntryParams>) {
          const double g = pr.gamma + pr.subsidy;
          return StageGame({"F", "A"}, {"O", "I"}, {{1.0 - pr.c_o, -pr.c_i}, {1.0, 0.0}},
                           {{0.0, -(1.0 - g)}, {0.0, g}}, std::vector<ActionId>{0, 1},
                           std::vector<ActionId>{0, 1});
        } else {
          return StageGame({"Normal", "Expropriate"}, {"Invest", "NotInvest"},
                           {{pr.tau, 0.0}, {1.0, 0.0}},
                           {{1.0 - pr.tau - pr.c, 0.0}, {-pr.c, 0.0}},
                           std::vector<ActionId>{0, 1}, std::vector<ActionId>{0, 1});
        }
      },
      params);
}

/// Which of the three product3 regimes applies (1-based).
inline int product3_case(const Product3Params& pr) {
  if (pr.p <= pr.g2 / pr.g1) return 1;
  return pr.c >= (1.0 - pr.p) / (1.0 - pr.g2) ? 2 : 3;
}

inline double product3_case_value(const Product3Params& pr, int which) {
  const double g1 = pr.g1;
  const double g2 = pr.g2;
  const double p = pr.p;
  const double c = pr.c;
  switch (which) {
    case 1:
      return g1 * (1.0 - c) / (1.0 - g1 * c);
    case 2:
      return g2 * (1.0 - c) / (p - g2 * c);
    default:
      return (g1 * (1.0 - p) - c * (g1 - g2)) / ((1.0 - p) - c * (g1 - g2));
  }
}

/// Minimal discounted frequency of the Stackelberg action.
inline double closed_form_fstar(const AppParams& params) {
  validate(params);
  return std::visit(
      [](const auto& pr) -> double {
        using T = std::decay_t<decltype(pr)>;
        if constexpr (std::is_same_v<T, Product2Params>) {
          return pr.gamma * (1.0 - pr.c_h) / (1.0 - pr.gamma * pr.c_h);
        } else if constexpr (std::is_same_v<T, Product3Params>) {
          return product3_case_value(pr, product3_case(pr));
        } else if constexpr (std::is_same_v<T, EntryParams>) {
          const double g = pr.gamma + pr.subsidy;
          if (!(g < 1.0)) {
            throw PreconditionError("subsidy makes entry dominant; fighting is no longer the Stackelberg action");
          }
          return (1.0 - pr.c_o) * g / (1.0 - pr.c_o * g);
        } else {
          return pr.tau / (1.0 - pr.tau) * (pr.c / (1.0 - pr.c));
        }
      },
      params);
}

/// 1 - F*: the highest frequency of the non-Stackelberg action (for fiscal
/// policy, the expropriation frequency).
inline double closed_form_complement(const AppParams& params) {
  return 1.0 - closed_form_fstar(params);
}

}  // namespace repfreq
