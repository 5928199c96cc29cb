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

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <optional>

#include "repfreq/lp.hpp"
#include "repfreq/rng.hpp"

namespace repfreq::lp {
namespace {

// Independent oracle: enumerate basic solutions of the slack-augmented
// system and keep the best feasible one.
std::optional<double> brute_force_min(const Problem& p) {
  const std::size_t n = p.num_vars();
  const std::size_t m = p.rows().size();
  std::size_t slacks = 0;
  for (const auto& r : p.rows()) slacks += r.relation != Relation::kEqual;
  const std::size_t cols = n + slacks;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(cols));
  Eigen::VectorXd b(static_cast<Eigen::Index>(m));
  std::size_t s = n;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& r = p.rows()[i];
    for (std::size_t j = 0; j < n; ++j) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = r.coeffs[j];
    if (r.relation == Relation::kLessEqual) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s++)) = 1.0;
    if (r.relation == Relation::kGreaterEqual) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s++)) = -1.0;
    b(static_cast<Eigen::Index>(i)) = r.rhs;
  }
  std::optional<double> best;
  std::vector<bool> pick(cols, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(std::min(m, cols)), true);
  do {
    std::vector<Eigen::Index> basis;
    for (std::size_t j = 0; j < cols; ++j) {
      if (pick[j]) basis.push_back(static_cast<Eigen::Index>(j));
    }
    Eigen::MatrixXd sub(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(basis[k]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
    if (lu.rank() < static_cast<Eigen::Index>(basis.size())) continue;
    const Eigen::VectorXd z = lu.solve(b);
    if ((sub * z - b).norm() > 1e-9) continue;
    if (z.minCoeff() < -1e-9) continue;
    double obj = 0.0;
    for (std::size_t k = 0; k < basis.size(); ++k) {
      if (static_cast<std::size_t>(basis[k]) < n) obj += p.objective()[static_cast<std::size_t>(basis[k])] * z(static_cast<Eigen::Index>(k));
    }
    if (!best || obj < *best) best = obj;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

TEST(Lp, TextbookMaximization) {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18: optimum (2, 6) with value 36.
  Problem p(2);
  p.set_objective({-3.0, -5.0});
  p.add_row({1.0, 0.0}, Relation::kLessEqual, 4.0);
  p.add_row({0.0, 2.0}, Relation::kLessEqual, 12.0);
  p.add_row({3.0, 2.0}, Relation::kLessEqual, 18.0);
  const auto sol = solve(p);
  ASSERT_TRUE(sol.optimal());
  EXPECT_NEAR(sol.objective, -36.0, 1e-10);
  EXPECT_NEAR(sol.x[0], 2.0, 1e-10);
  EXPECT_NEAR(sol.x[1], 6.0, 1e-10);
}

TEST(Lp, EqualityAndSurplusRows) {
  // min x + 2y s.t. x + y = 3, x - y >= -1 (rhs negative), y >= 1.5.
  Problem p(2);
  p.set_objective({1.0, 2.0});
  p.add_row({1.0, 1.0}, Relation::kEqual, 3.0);
  p.add_row({1.0, -1.0}, Relation::kGreaterEqual, -1.0);
  p.add_row({0.0, 1.0}, Relation::kGreaterEqual, 1.5);
  const auto sol = solve(p);
  ASSERT_TRUE(sol.optimal());
  EXPECT_NEAR(sol.x[0], 1.5, 1e-10);
  EXPECT_NEAR(sol.x[1], 1.5, 1e-10);
  EXPECT_NEAR(sol.objective, 4.5, 1e-10);
}

TEST(Lp, DetectsInfeasibility) {
  Problem p(2);
  p.add_row({1.0, 1.0}, Relation::kLessEqual, 1.0);
  p.add_row({1.0, 1.0}, Relation::kGreaterEqual, 2.0);
  EXPECT_EQ(solve(p).status, Status::kInfeasible);
}

TEST(Lp, DetectsUnboundedness) {
  Problem p(2);
  p.set_objective({-1.0, 0.0});
  p.add_row({1.0, -1.0}, Relation::kLessEqual, 1.0);
  EXPECT_EQ(solve(p).status, Status::kUnbounded);
}

TEST(Lp, RedundantEqualitiesAreDropped) {
  Problem p(3);
  p.set_objective({1.0, 1.0, 0.0});
  p.add_row({1.0, 1.0, 1.0}, Relation::kEqual, 1.0);
  p.add_row({2.0, 2.0, 2.0}, Relation::kEqual, 2.0);
  const auto sol = solve(p);
  ASSERT_TRUE(sol.optimal());
  EXPECT_NEAR(sol.objective, 0.0, 1e-12);
  EXPECT_NEAR(sol.x[2], 1.0, 1e-12);
}

TEST(Lp, DegenerateCyclingExampleTerminates) {
  // Beale's example cycles under the textbook largest-coefficient rule.
  Problem p(4);
  p.set_objective({-0.75, 150.0, -0.02, 6.0});
  p.add_row({0.25, -60.0, -0.04, 9.0}, Relation::kLessEqual, 0.0);
  p.add_row({0.5, -90.0, -0.02, 3.0}, Relation::kLessEqual, 0.0);
  p.add_row({0.0, 0.0, 1.0, 0.0}, Relation::kLessEqual, 1.0);
  const auto sol = solve(p);
  ASSERT_TRUE(sol.optimal());
  EXPECT_NEAR(sol.objective, -0.05, 1e-10);
}

TEST(Lp, MatchesBasisEnumerationOnRandomBoundedProblems) {
  PhiloxStream rng(2024, 0);
  auto u = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 3;
    Problem p(n);
    std::vector<double> c(n);
    for (auto& v : c) v = u(-1.0, 1.0);
    p.set_objective(c);
    std::vector<double> box(n, 1.0);
    p.add_row(box, Relation::kLessEqual, 5.0);
    for (int r = 0; r < 2; ++r) {
      std::vector<double> row(n);
      for (auto& v : row) v = u(-1.0, 1.0);
      const Relation rel = r == 0 ? Relation::kGreaterEqual : (trial % 2 ? Relation::kEqual : Relation::kLessEqual);
      p.add_row(row, rel, u(-1.0, 1.0));
    }
    const auto oracle = brute_force_min(p);
    const auto sol = solve(p);
    if (!oracle) {
      EXPECT_EQ(sol.status, Status::kInfeasible) << "trial " << trial;
      continue;
    }
    ASSERT_TRUE(sol.optimal()) << "trial " << trial;
    EXPECT_NEAR(sol.objective, *oracle, 1e-8) << "trial " << trial;
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

}  // namespace
}  // namespace repfreq::lp
