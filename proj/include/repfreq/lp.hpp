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

// Dense two-phase simplex for the small linear programs that show up in
// stage-game analysis. All variables are nonnegative; free variables are
// expected to be split by the caller.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "repfreq/errors.hpp"

namespace repfreq::lp {

enum class Relation { kLessEqual, kGreaterEqual, kEqual };
enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Row {
  std::vector<double> coeffs;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

/// minimize objective . x  subject to rows, x >= 0.
class Problem {
 public:
  explicit Problem(std::size_t num_vars)
      : num_vars_(num_vars), objective_(num_vars, 0.0) {}

  std::size_t num_vars() const { return num_vars_; }
  const std::vector<double>& objective() const { return objective_; }
  const std::vector<Row>& rows() const { return rows_; }

  void set_objective(std::vector<double> c) {
    if (c.size() != num_vars_) throw InternalError("lp: objective size mismatch");
    objective_ = std::move(c);
  }
  void set_objective_coeff(std::size_t j, double v) { objective_.at(j) = v; }

  void add_row(std::vector<double> coeffs, Relation rel, double rhs) {
    if (coeffs.size() != num_vars_) throw InternalError("lp: row size mismatch");
    rows_.push_back(Row{std::move(coeffs), rel, rhs});
  }

  std::vector<double> zero_row() const { return std::vector<double>(num_vars_, 0.0); }

 private:
  std::size_t num_vars_;
  std::vector<double> objective_;
  std::vector<Row> rows_;
};

struct Options {
  double cost_tol = 1e-10;   // reduced-cost optimality threshold
  double pivot_tol = 1e-12;  // smallest admissible pivot element
  double feas_tol = 1e-9;    // phase-1 residual treated as feasible
  std::size_t max_iterations = 200000;
};

struct Solution {
  Status status = Status::kInfeasible;
  double objective = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> x;

  bool optimal() const { return status == Status::kOptimal; }
};

namespace detail {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }
  // Row `rows_` holds reduced costs; its rhs is minus the objective value.
  double& cost(std::size_t c) { return at(rows_, c); }
  double cost(std::size_t c) const { return at(rows_, c); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) /= p;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
  }

  void drop_row(std::size_t r) {
    // Swap with the last constraint row, keep the cost row at the end.
    const std::size_t w = cols_ + 1;
    if (r != rows_ - 1) {
      std::copy(data_.begin() + (rows_ - 1) * w, data_.begin() + rows_ * w,
                data_.begin() + r * w);
    }
    std::copy(data_.begin() + rows_ * w, data_.begin() + (rows_ + 1) * w,
              data_.begin() + (rows_ - 1) * w);
    --rows_;
    data_.resize((rows_ + 1) * w);
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

// Bland's rule simplex iterations on columns [0, allowed_cols).
inline Status iterate(Tableau& t, std::vector<std::size_t>& basis,
                      std::size_t allowed_cols, const Options& opt) {
  for (std::size_t iter = 0; iter < opt.max_iterations; ++iter) {
    std::size_t enter = allowed_cols;
    for (std::size_t c = 0; c < allowed_cols; ++c) {
      if (t.cost(c) < -opt.cost_tol) {
        enter = c;
        break;
      }
    }
    if (enter == allowed_cols) return Status::kOptimal;

    std::size_t leave = t.rows();
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const double a = t.at(r, enter);
      if (a <= opt.pivot_tol) continue;
      const double ratio = std::max(t.rhs(r), 0.0) / a;
      if (ratio < best_ratio - 1e-15 ||
          (leave < t.rows() && std::abs(ratio - best_ratio) <= 1e-15 &&
           basis[r] < basis[leave])) {
        best_ratio = ratio;
        leave = r;
      }
    }
    if (leave == t.rows()) return Status::kUnbounded;
    t.pivot(leave, enter);
    basis[leave] = enter;
  }
  throw InternalError("lp: iteration limit reached");
}

}  // namespace detail

inline Solution solve(const Problem& problem, const Options& opt = {}) {
  const std::size_t n = problem.num_vars();
  const auto& rows = problem.rows();
  const std::size_t m = rows.size();

  // Column layout: originals | slack or surplus per inequality | artificials.
  std::size_t num_slack = 0;
  std::size_t num_art = 0;
  std::vector<Relation> rel(m);
  std::vector<double> sign(m, 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    rel[i] = rows[i].relation;
    if (rows[i].rhs < 0.0) {
      sign[i] = -1.0;
      if (rel[i] == Relation::kLessEqual) {
        rel[i] = Relation::kGreaterEqual;
      } else if (rel[i] == Relation::kGreaterEqual) {
        rel[i] = Relation::kLessEqual;
      }
    }
    if (rel[i] != Relation::kEqual) ++num_slack;
    if (rel[i] != Relation::kLessEqual) ++num_art;
  }
  const std::size_t art_begin = n + num_slack;
  const std::size_t cols = art_begin + num_art;

  detail::Tableau t(m, cols);
  std::vector<std::size_t> basis(m);
  std::size_t next_slack = n;
  std::size_t next_art = art_begin;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = sign[i] * rows[i].coeffs[j];
    t.rhs(i) = sign[i] * rows[i].rhs;
    switch (rel[i]) {
      case Relation::kLessEqual:
        t.at(i, next_slack) = 1.0;
        basis[i] = next_slack++;
        break;
      case Relation::kGreaterEqual:
        t.at(i, next_slack++) = -1.0;
        t.at(i, next_art) = 1.0;
        basis[i] = next_art++;
        break;
      case Relation::kEqual:
        t.at(i, next_art) = 1.0;
        basis[i] = next_art++;
        break;
    }
  }

  // Phase 1: minimize the sum of artificials.
  if (num_art > 0) {
    for (std::size_t c = art_begin; c < cols; ++c) t.cost(c) = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < art_begin) continue;
      for (std::size_t c = 0; c <= cols; ++c) t.at(m, c) -= t.at(i, c);
    }
    const Status s1 = detail::iterate(t, basis, cols, opt);
    if (s1 != Status::kOptimal) throw InternalError("lp: phase 1 unbounded");
    if (-t.rhs(t.rows()) > opt.feas_tol) return Solution{Status::kInfeasible, {}, {}};

    // Drive remaining artificials out of the basis; drop redundant rows.
    for (std::size_t i = 0; i < t.rows();) {
      if (basis[i] < art_begin) {
        ++i;
        continue;
      }
      std::size_t pc = art_begin;
      double best = opt.pivot_tol;
      for (std::size_t c = 0; c < art_begin; ++c) {
        if (std::abs(t.at(i, c)) > best) {
          best = std::abs(t.at(i, c));
          pc = c;
        }
      }
      if (pc < art_begin) {
        t.pivot(i, pc);
        basis[i] = pc;
        ++i;
      } else {
        t.drop_row(i);
        basis[i] = basis.back();
        basis.pop_back();
      }
    }
  }

  // Phase 2 over non-artificial columns.
  for (std::size_t c = 0; c <= cols; ++c) t.cost(c) = 0.0;
  for (std::size_t j = 0; j < n; ++j) t.cost(j) = problem.objective()[j];
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const double cb = basis[i] < n ? problem.objective()[basis[i]] : 0.0;
    if (cb == 0.0) continue;
    for (std::size_t c = 0; c <= cols; ++c) t.cost(c) -= cb * t.at(i, c);
  }
  const Status s2 = detail::iterate(t, basis, art_begin, opt);
  if (s2 == Status::kUnbounded) return Solution{Status::kUnbounded, {}, {}};

  Solution sol;
  sol.status = Status::kOptimal;
  sol.x.assign(n, 0.0);
  for (std::size_t i = 0; i < t.rows(); ++i) {
    if (basis[i] < n) sol.x[basis[i]] = std::max(t.rhs(i), 0.0);
  }
  double obj = 0.0;
  for (std::size_t j = 0; j < n; ++j) obj += problem.objective()[j] * sol.x[j];
  sol.objective = obj;
  return sol;
}

}  // namespace repfreq::lp
