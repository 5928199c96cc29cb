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

#include "repfreq/game.hpp"
#include "repfreq/game_io.hpp"
#include "test_support.hpp"

namespace repfreq {
namespace {

using testing::fixture;

TEST(StageGame, LoadsProductChoiceFixture) {
  const auto g = fixture("product_choice");
  EXPECT_EQ(g.num_actions1(), 2u);
  EXPECT_EQ(g.num_actions2(), 2u);
  EXPECT_DOUBLE_EQ(g.u1(g.index1("H"), g.index2("h")), 0.6);
  EXPECT_DOUBLE_EQ(g.u2(g.index1("L"), g.index2("h")), -0.5);
  ASSERT_TRUE(g.order1());
  EXPECT_EQ(g.order1()->front(), g.index1("H"));
}

TEST(StageGame, RejectsMalformedInput) {
  EXPECT_THROW(load_game("{not json"), ParseError);
  EXPECT_THROW(load_game(R"({"actions1":["H","L"],"actions2":["h","l"],"u1":[[1,2]],"u2":[[1,2],[3,4]]})"),
               ValidationError);
  EXPECT_THROW(load_game(R"({"actions1":["H","H"],"actions2":["h","l"],"u1":[[1,2],[3,4]],"u2":[[1,2],[3,4]]})"),
               ValidationError);
  EXPECT_THROW(load_game(R"({"actions1":["H"],"actions2":["h","l"],"u1":[[1,2]],"u2":[[1,2]]})"),
               ValidationError);
  EXPECT_THROW(load_game(R"({"actions1":["H","L"],"actions2":["h","l"],"u1":[[1,2],[3,4]]})"), ParseError);
  EXPECT_THROW(load_game(R"({"actions1":["H","L"],"actions2":["h","l"],"u1":[[1,2],[3,4]],"u2":[[1,2],[3,4]],"order1":["H","X"]})"),
               ValidationError);
  EXPECT_THROW(load_game_file("/nonexistent/game.json"), Error);
}

TEST(StageGame, RoundTripsThroughJson) {
  for (const auto& name : testing::kAllFixtures) {
    const auto g = fixture(name);
    EXPECT_EQ(load_game(emit_game(g)), g) << name;
  }
}

TEST(MixedAction, ParsesAndValidates) {
  const std::vector<std::string> labels = {"H", "L"};
  const auto m = parse_mixed_action("H:0.375,L:0.625", labels);
  EXPECT_DOUBLE_EQ(m[0], 0.375);
  EXPECT_DOUBLE_EQ(m[1], 0.625);
  const auto pure = parse_mixed_action("L:1", labels);
  EXPECT_DOUBLE_EQ(pure[0], 0.0);
  EXPECT_THROW(parse_mixed_action("H:0.5,L:0.6", labels), ValidationError);
  EXPECT_THROW(parse_mixed_action("X:1", labels), ValidationError);
  EXPECT_THROW(parse_mixed_action("H=1", labels), ParseError);
  EXPECT_THROW(parse_mixed_action("H:-0.5,L:1.5", labels), ValidationError);
  EXPECT_EQ(format_mixed_action(m, labels), "H:0.375,L:0.625");
}

TEST(ExpectedPayoffs, BilinearInMixtures) {
  const auto g = fixture("product_choice");
  // (0.5H + 0.5L) against (0.5h + 0.5l): u1 = (0.6 - 0.2 + 1 + 0) / 4.
  const auto [v1, v2] = expected_payoffs(g, MixedAction{{0.5, 0.5}}, MixedAction{{0.5, 0.5}});
  EXPECT_NEAR(v1, 0.35, 1e-15);
  EXPECT_NEAR(v2, 0.5, 1e-15);
  EXPECT_THROW(expected_payoffs(g, MixedAction{{0.5, 0.6}}, MixedAction{{1.0, 0.0}}), ValidationError);
}

TEST(ExpectedPayoffs, PureProfilesReproduceMatrixEntries) {
  testing::GameGen gen(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = gen.game(3, 4);
    for (ActionId a = 0; a < 3; ++a) {
      for (ActionId b = 0; b < 4; ++b) {
        const auto [v1, v2] = expected_payoffs(g, MixedAction::pure(3, a), MixedAction::pure(4, b));
        EXPECT_DOUBLE_EQ(v1, g.u1(a, b));
        EXPECT_DOUBLE_EQ(v2, g.u2(a, b));
      }
    }
  }
}

}  // namespace
}  // namespace repfreq
