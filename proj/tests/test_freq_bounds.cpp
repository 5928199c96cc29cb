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


#include <gtest/gtest.h>

#include <cmath>

#include "repfreq/freq_bounds.hpp"
#include "test_support.hpp"

namespace repfreq {
namespace {

using testing::fixture;

struct Frozen {
  const char* name;
  double fstar;
};

// Values confirmed against the grid oracle and, for the applications, the
// closed forms.
const Frozen kFrozen[] = {
    {"product_choice", 0.375},
    {"product3", 3.0 / 7.0},
    {"entry_deterrence", 3.0 / 7.0},
    {"fiscal_policy", 0.3 / 0.7 * (0.2 / 0.8)},
    {"three_by_two", 0.0},
    {"matching_penny_variant", 1.0 / 21.0},
    {"battle_of_sexes", 1.0},
    {"chicken", 1.0},
};

void expect_consistent_witness(const StageGame& g, const FreqBoundResult& r, double epsilon) {
  const auto st = stackelberg(g);
  EXPECT_GE(r.q, -1e-12);
  EXPECT_LE(r.q, 1.0 + 1e-12);
  EXPECT_NEAR(r.value, r.marginal()[st.a_star], 1e-9);
  EXPECT_GE(r.payoff(g), st.v_star - epsilon - 1e-9);
  const auto check = [&](const MixedAction& alpha, ActionId b) {
    double total = 0.0;
    for (double w : alpha.weights) total += w;
    EXPECT_NEAR(total, 1.0, 1e-9);
    EXPECT_TRUE(br_polytope(g, b).contains(alpha.weights, 1e-7));
  };
  check(r.alpha1, r.b1);
  check(r.alpha2, r.b2);
}

TEST(Fstar, FrozenFixtureValues) {
  for (const auto& f : kFrozen) {
    const auto g = fixture(f.name);
    const auto r = fstar(g);
    EXPECT_NEAR(r.value, f.fstar, 1e-9) << f.name;
    expect_consistent_witness(g, r, 0.0);
    EXPECT_NEAR(fstar(g, 0.0, true).value, f.fstar, 1e-9) << f.name;
    EXPECT_NEAR(fstar_relaxed(g), f.fstar, 1e-9) << f.name;
  }
}

TEST(Fstar, ProductChoiceWitness) {
  const auto g = fixture("product_choice");
  const auto r = fstar(g);
  EXPECT_NEAR(r.q, 0.75, 1e-9);
  EXPECT_EQ(g.label2(r.b1), "h");
  EXPECT_NEAR(r.alpha1[0], 0.5, 1e-9);
  EXPECT_EQ(g.label2(r.b2), "l");
  EXPECT_NEAR(r.alpha2[0], 0.0, 1e-9);
  EXPECT_NEAR(r.payoff(g), 0.6, 1e-9);
  EXPECT_EQ(r.method, BoundMethod::kLp);
}

TEST(Fstar, RequiresAssumptionOne) {
  const StageGame tie({"x", "y"}, {"l", "r"}, {{1, 0}, {0, 1}}, {{1, 0}, {0, 1}});
  EXPECT_THROW(fstar(tie), PreconditionError);
  EXPECT_THROW(fstar(fixture("product_choice"), -0.1), ValidationError);
}

TEST(GammaStar, ProductChoice) {
  const auto pieces = gamma_star(fixture("product_choice"));
  ASSERT_EQ(pieces.size(), 1u);
  EXPECT_EQ(pieces[0].b, 0u);
  ASSERT_EQ(pieces[0].vertices.size(), 1u);
  EXPECT_NEAR(pieces[0].vertices[0][0], 0.5, 1e-12);
}

TEST(GammaStar, Product3) {
  const auto g = fixture("product3");
  const auto pieces = gamma_star(g);
  ASSERT_EQ(pieces.size(), 2u);
  for (const auto& p : pieces) {
    ASSERT_EQ(p.vertices.size(), 1u);
    const double h = p.vertices[0][0];
    if (g.label2(p.b) == "h") {
      EXPECT_NEAR(h, 0.6, 1e-12);
    } else {
      EXPECT_EQ(g.label2(p.b), "m");
      EXPECT_NEAR(h, 0.4, 1e-12);
    }
  }
}

TEST(FstarProp1, MatchesLpOnStrictGames) {
  for (const char* name : {"product_choice", "product3", "entry_deterrence"}) {
    const auto g = fixture(name);
    const auto r = fstar_prop1(g);
    EXPECT_NEAR(r.value, fstar(g).value, 1e-9) << name;
    EXPECT_EQ(r.method, BoundMethod::kProp1);
  }
  EXPECT_THROW(fstar_prop1(fixture("fiscal_policy")), PreconditionError);
}

TEST(GridOracle, FrozenValues) {
  EXPECT_NEAR(fstar_grid_oracle(fixture("product_choice"), 50), 0.38, 1e-9);
  EXPECT_NEAR(fstar_grid_oracle(fixture("product3"), 50), 0.432, 1e-9);
  EXPECT_NEAR(fstar_grid_oracle(fixture("fiscal_policy"), 50), 0.114, 1e-9);
  EXPECT_THROW(fstar_grid_oracle(fixture("product_choice"), 0), ValidationError);
}

// The grid restricts the same program to a subset, so it can only be higher.
TEST(GridOracle, UpperBoundsLpOnRandomGames) {
  testing::GameGen gen(3);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = gen.admissible_game(2, 2 + trial % 2);
    const double lp = fstar(g).value;
    const double grid = fstar_grid_oracle(g, 40);
    EXPECT_GE(grid, lp - 1e-9) << "trial " << trial;
    EXPECT_GE(lp, -1e-12);
    EXPECT_LE(lp, 1.0 + 1e-12);
  }
}

TEST(Fstar, RandomAdmissibleGamesWitnessesAndVariants) {
  testing::GameGen gen(17);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = gen.admissible_game(3, 3);
    const auto r = fstar(g);
    EXPECT_GE(r.value, -1e-12);
    EXPECT_LE(r.value, 1.0 + 1e-12);
    expect_consistent_witness(g, r, 0.0);
    EXPECT_NEAR(fstar(g, 0.0, true).value, r.value, 1e-8) << "trial " << trial;
    EXPECT_NEAR(fstar_relaxed(g), r.value, 1e-8) << "trial " << trial;
  }
}

TEST(EpsilonCurve, NonincreasingAndWitnessesRespectSlack) {
  testing::GameGen gen(29);
  const std::vector<double> eps = {0.0, 1e-4, 1e-2, 0.05, 0.2};
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = gen.admissible_game(3, 2 + trial % 2);
    const auto curve = f_epsilon_curve(g, eps);
    ASSERT_EQ(curve.size(), eps.size());
    for (std::size_t i = 1; i < curve.size(); ++i) {
      EXPECT_LE(curve[i].second, curve[i - 1].second + 1e-9) << "trial " << trial;
    }
    expect_consistent_witness(g, fstar(g, 0.05), 0.05);
  }
  EXPECT_THROW(f_epsilon_curve(fixture("product_choice"), {0.1, 0.01}), ValidationError);
}

TEST(GammaStar, StrictlyDominantReplyHasNoPieces) {
  const StageGame g({"x", "y"}, {"l", "r"}, {{1, 0}, {0, 1}}, {{1, 0}, {2, 1}});
  EXPECT_TRUE(gamma_star(g).empty());
}

TEST(GridOracle, SmallResolutions) {
  const auto pc = fixture("product_choice");
  const double r20 = fstar_grid_oracle(pc, 20);
  EXPECT_GE(r20, 0.375 - 1e-12);
  EXPECT_LE(r20, 0.475);
  EXPECT_GE(fstar_grid_oracle(pc, 1), fstar(pc).value - 1e-12);
  // Half M, half L lies on the grid.
  EXPECT_EQ(fstar_grid_oracle(fixture("three_by_two"), 10), 0.0);
}

TEST(EpsilonCurve, ProductChoice) {
  const auto curve = f_epsilon_curve(fixture("product_choice"), {0.0, 0.01, 0.1});
  EXPECT_NEAR(curve[0].second, 0.375, 1e-9);
  EXPECT_LE(curve[1].second, curve[0].second + 1e-12);
  EXPECT_LE(curve[2].second, curve[1].second + 1e-12);
  // Slack past u* - min u1 makes the payoff row vacuous: (L, l) alone works.
  EXPECT_NEAR(fstar(fixture("product_choice"), 0.9).value, 0.0, 1e-12);
}

}  // namespace
}  // namespace repfreq
