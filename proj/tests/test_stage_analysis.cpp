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

#include <algorithm>
#include <limits>

#include "repfreq/stage_analysis.hpp"
#include "test_support.hpp"

namespace repfreq {
namespace {

using testing::fixture;

TEST(BestReplies, ProductChoice) {
  const auto g = fixture("product_choice");
  EXPECT_EQ(best_replies_p2_pure(g, 0), std::vector<ActionId>{0});
  EXPECT_EQ(best_replies_p2_pure(g, 1), std::vector<ActionId>{1});
  // u2(alpha, h) - u2(alpha, l) = alpha(H) - 0.5 ties at one half.
  EXPECT_EQ(best_replies_p2(g, MixedAction{{0.5, 0.5}}), (std::vector<ActionId>{0, 1}));
  EXPECT_EQ(best_replies_p2(g, MixedAction{{0.51, 0.49}}), std::vector<ActionId>{0});
  EXPECT_EQ(best_replies_p1_pure(g, 0), std::vector<ActionId>{1});
}

TEST(BestReplies, NeverEmptyAndContainMaximizer) {
  testing::GameGen gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = gen.game(3, 3);
    const auto alpha = gen.mixed(3);
    const auto br = best_replies_p2(g, alpha);
    ASSERT_FALSE(br.empty());
    double best = -std::numeric_limits<double>::infinity();
    for (ActionId b = 0; b < 3; ++b) best = std::max(best, g.u2_mixed(alpha.weights, b));
    for (ActionId b : br) EXPECT_GE(g.u2_mixed(alpha.weights, b), best - kDefaultTol);
    for (ActionId b : br) EXPECT_TRUE(br_polytope(g, b).contains(alpha.weights));
  }
}

TEST(Stackelberg, Fixtures) {
  struct Case {
    const char* name;
    const char* a;
    const char* b;
    double v;
  };
  for (const auto& c : {Case{"product_choice", "H", "h", 0.6}, Case{"entry_deterrence", "F", "O", 0.5},
                        Case{"fiscal_policy", "Normal", "Invest", 0.3},
                        Case{"matching_penny_variant", "H", "t", -0.9},
                        Case{"three_by_two", "H", "T", 1.0}, Case{"chicken", "D", "c", 7.0},
                        Case{"battle_of_sexes", "O", "o", 2.0}}) {
    const auto g = fixture(c.name);
    const auto st = stackelberg(g);
    EXPECT_EQ(g.label1(st.a_star), c.a) << c.name;
    EXPECT_EQ(g.label2(st.b_star), c.b) << c.name;
    EXPECT_NEAR(st.v_star, c.v, 1e-12) << c.name;
    EXPECT_TRUE(st.unique_action && st.unique_reply) << c.name;
  }
}

TEST(Stackelberg, FlagsTies) {
  // Both rows earn 1 against their unique best reply.
  const StageGame g({"x", "y"}, {"l", "r"}, {{1, 0}, {0, 1}}, {{1, 0}, {0, 1}});
  EXPECT_FALSE(stackelberg(g).unique_action);
  // Column player indifferent after x.
  const StageGame h({"x", "y"}, {"l", "r"}, {{2, 1}, {0, 0}}, {{1, 1}, {0, 1}});
  EXPECT_FALSE(stackelberg(h).unique_reply);
}

// Independent minmax oracle for games where player 1 has two actions:
// alpha is one-dimensional, so the rationalizable reply sets are exactly the
// best-reply sets at breakpoints and between them.
double minmax_two_rows(const StageGame& g) {
  const std::size_t m = g.num_actions2();
  std::vector<double> pts = {0.0, 1.0};
  for (ActionId b = 0; b < m; ++b) {
    for (ActionId c = b + 1; c < m; ++c) {
      // u2(alpha, b) = u2(alpha, c) with alpha = x on row 0.
      const double d0 = g.u2(0, b) - g.u2(0, c);
      const double d1 = g.u2(1, b) - g.u2(1, c);
      if (d0 != d1) {
        const double x = d1 / (d1 - d0);
        if (x > 0.0 && x < 1.0) pts.push_back(x);
      }
    }
  }
  std::sort(pts.begin(), pts.end());
  const std::size_t k = pts.size();
  for (std::size_t i = 0; i + 1 < k; ++i) pts.push_back(0.5 * (pts[i] + pts[i + 1]));
  double best = std::numeric_limits<double>::infinity();
  for (double x : pts) {
    const auto br = best_replies_p2(g, std::vector<double>{x, 1.0 - x});
    for (ActionId b : br) best = std::min(best, std::max(g.u1(0, b), g.u1(1, b)));
    for (std::size_t i = 0; i < br.size(); ++i) {
      for (std::size_t j = i + 1; j < br.size(); ++j) {
        // Minimize the upper envelope of two lines in beta = weight on br[i].
        const ActionId b = br[i];
        const ActionId c = br[j];
        const double s0 = g.u1(0, b) - g.u1(0, c);
        const double s1 = g.u1(1, b) - g.u1(1, c);
        if (s0 != s1) {
          const double beta = (g.u1(1, c) - g.u1(0, c)) / (s0 - s1);
          if (beta > 0.0 && beta < 1.0) {
            best = std::min(best, g.u1(0, c) + beta * s0);
          }
        }
      }
    }
  }
  return best;
}

TEST(Minmax, MatchingPennyVariant) {
  // h weight 0.475 equalizes 2 beta - 0.9 and 1 - 2 beta.
  EXPECT_NEAR(minmax_p1(fixture("matching_penny_variant")), 0.05, 1e-9);
}

TEST(Minmax, MatchesOneDimensionalOracle) {
  testing::GameGen gen(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = gen.game(2, 2 + trial % 2);
    EXPECT_NEAR(minmax_p1(g), minmax_two_rows(g), 1e-8) << "trial " << trial;
  }
  for (const auto& name : testing::kTwoByTwoFixtures) {
    const auto g = fixture(name);
    EXPECT_NEAR(minmax_p1(g), minmax_two_rows(g), 1e-8) << name;
  }
}

TEST(Vbar, BoundsAndFixtures) {
  EXPECT_NEAR(vbar_p1(fixture("product_choice")), 0.6, 1e-9);
  testing::GameGen gen(9);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = gen.game(3, 3);
    const double v = vbar_p1(g);
    EXPECT_GE(v, stackelberg(g).v_star - 1e-9);
    EXPECT_LE(v, g.max_u1() + 1e-9);
  }
}

TEST(Assumptions, Fixtures) {
  for (const auto& name : testing::kApplicationFixtures) {
    EXPECT_TRUE(check_assumptions(fixture(name)).all()) << name;
  }
  const auto mp = check_assumptions(fixture("matching_penny_variant"));
  EXPECT_TRUE(mp.assumption1());
  EXPECT_TRUE(mp.a2_not_best_reply);
  EXPECT_FALSE(mp.a2_above_minmax);
  EXPECT_NEAR(mp.minmax, 0.05, 1e-9);
  const auto t = check_assumptions(fixture("three_by_two"));
  EXPECT_FALSE(t.a2_not_best_reply);
  EXPECT_TRUE(check_assumptions(fixture("battle_of_sexes")).assumption1());
}

TEST(MonotoneSupermodular, Fixtures) {
  EXPECT_TRUE(is_monotone_supermodular(fixture("product_choice")));
  EXPECT_TRUE(is_monotone_supermodular(fixture("product3")));
  EXPECT_TRUE(is_monotone_supermodular(fixture("entry_deterrence")));
  // NotInvest pays both sides zero whatever the government does: differences tie.
  EXPECT_FALSE(is_monotone_supermodular(fixture("fiscal_policy")));
  EXPECT_THROW(is_monotone_supermodular(fixture("chicken")), PreconditionError);
}

TEST(LowestPair, ProductChoice) {
  const auto g = fixture("product_choice");
  const auto [a, b] = lowest_pair(g);
  EXPECT_EQ(g.label1(a), "L");
  EXPECT_EQ(g.label2(b), "l");
}

TEST(BestReplies, ThreeByTwoTie) {
  const auto g = fixture("three_by_two");
  // u2(alpha, T) = u2(alpha, N) = 1.5 at half M, half L.
  EXPECT_EQ(best_replies_p2(g, MixedAction{{0.0, 0.5, 0.5}}), (std::vector<ActionId>{0, 1}));
}

TEST(Stackelberg, ConstantPayoffsAreNotUnique) {
  const StageGame g({"x", "y"}, {"l", "r"}, {{2, 2}, {2, 2}}, {{1, 0}, {0, 1}});
  EXPECT_FALSE(stackelberg(g).unique_action);
  EXPECT_NEAR(vbar_p1(g), 2.0, 1e-12);
}

TEST(Minmax, ApplicationFixtures) {
  EXPECT_NEAR(minmax_p1(fixture("product_choice")), 0.0, 1e-12);
  EXPECT_NEAR(minmax_p1(fixture("entry_deterrence")), 0.0, 1e-12);
  EXPECT_NEAR(vbar_p1(fixture("entry_deterrence")), 0.5, 1e-9);
}

TEST(MonotoneSupermodular, ReversedOrderFails) {
  const auto g = fixture("product_choice");
  const StageGame flipped(g.actions1(), g.actions2(), g.u1(), g.u2(), std::vector<ActionId>{1, 0},
                          std::vector<ActionId>{0, 1});
  EXPECT_FALSE(is_monotone_supermodular(flipped));
}

TEST(LowestPair, EntryDeterrence) {
  const auto g = fixture("entry_deterrence");
  const auto [a, b] = lowest_pair(g);
  EXPECT_EQ(g.label1(a), "A");
  EXPECT_EQ(g.label2(b), "I");
}

}  // namespace
}  // namespace repfreq
