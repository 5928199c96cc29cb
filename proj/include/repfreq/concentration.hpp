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

// Exponential tail bound for discounted sums of i.i.d. negative-drift
// variables: Pr[sup_n sum_{t=1}^n delta^t Z_t >= c] <= exp(-r* c), where r*
// is the positive root of E[exp(r Z)] = 1. Includes a Monte Carlo check.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "repfreq/errors.hpp"
#include "repfreq/parallel.hpp"
#include "repfreq/rng.hpp"

namespace repfreq {

/// Finite-support distribution as (value, probability) pairs.
struct FiniteDist {
  std::vector<std::pair<double, double>> support;

  void validate() const {
    if (support.empty()) throw ValidationError("distribution has empty support");
    double total = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
      const auto [v, p] = support[i];
      if (!std::isfinite(v)) throw ValidationError("distribution value is not finite");
      if (!(p > 0.0) || !std::isfinite(p)) {
        throw ValidationError("distribution probabilities must be positive");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (support[j].first == v) throw ValidationError("distribution values must be distinct");
      }
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw ValidationError("distribution probabilities sum to " + std::to_string(total));
    }
  }

  double mean() const {
    double m = 0.0;
    for (const auto& [v, p] : support) m += v * p;
    return m;
  }
  double max_value() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& [v, p] : support) m = std::max(m, v);
    return m;
  }
  bool has_positive_value() const { return max_value() > 0.0; }

  /// gamma(r) = E[exp(r Z)] - 1.
  double mgf_minus_one(double r) const {
    double s = 0.0;
    for (const auto& [v, p] : support) s += p * std::expm1(r * v);
    return s;
  }
};

/// Builds a distribution from (value, probability) pairs, merging values
/// closer than `merge_tol` and dropping zero-probability entries.
inline FiniteDist make_dist(std::vector<std::pair<double, double>> pairs, double merge_tol = 1e-12) {
  std::sort(pairs.begin(), pairs.end());
  FiniteDist d;
  for (const auto& [v, p] : pairs) {
    if (p <= 0.0) continue;
    if (!d.support.empty() && std::abs(d.support.back().first - v) <= merge_tol) {
      d.support.back().second += p;
    } else {
      d.support.emplace_back(v, p);
    }
  }
  return d;
}

/// Parses [{"value": v, "prob": p}, ...].
inline FiniteDist dist_from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) throw ParseError("distribution must be a JSON array");
  FiniteDist d;
  for (const auto& e : doc) {
    if (!e.is_object() || !e.contains("value") || !e.contains("prob") ||
        !e.at("value").is_number() || !e.at("prob").is_number()) {
      throw ParseError("distribution entries must be {\"value\": number, \"prob\": number}");
    }
    d.support.emplace_back(e.at("value").get<double>(), e.at("prob").get<double>());
  }
  d.validate();
  return d;
}

inline nlohmann::json dist_to_json(const FiniteDist& d) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [v, p] : d.support) arr.push_back({{"value", v}, {"prob", p}});
  return arr;
}

/// Smallest positive root of E[exp(r Z)] = 1. Infinite when Z has no
/// positive value, since then the tail event is empty for every c > 0.
inline double r_star_or_infinity(const FiniteDist& dist) {
  dist.validate();
  if (!(dist.mean() < 0.0)) throw PreconditionError("r* needs a strictly negative mean");
  if (!dist.has_positive_value()) return std::numeric_limits<double>::infinity();
  // gamma is convex with gamma(0) = 0 and gamma'(0) < 0, so it is negative on
  // (0, r*) and positive beyond.
  double lo = 0.0;
  double hi = 1.0;
  while (dist.mgf_minus_one(hi) <= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw InternalError("r* bracketing diverged");
  }
  for (int i = 0; i < 400 && hi - lo > 0.0; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (dist.mgf_minus_one(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(dist.mgf_minus_one(lo)) < std::abs(dist.mgf_minus_one(hi)) ? lo : hi;
}

inline double r_star(const FiniteDist& dist) {
  dist.validate();
  if (!dist.has_positive_value()) {
    throw PreconditionError("r* needs a positive value with positive probability");
  }
  return r_star_or_infinity(dist);
}

inline double analytic_tail_bound(double r_star_value, double c) {
  return std::exp(-r_star_value * c);
}

/// Discounted mass an adversary could still add after period `horizon`:
/// sum_{t > horizon} delta^t max(Z, 0).
inline double truncation_tail(double delta, double max_value, std::size_t horizon) {
  return std::pow(delta, static_cast<double>(horizon) + 1.0) / (1.0 - delta) *
         std::max(max_value, 0.0);
}

inline double truncation_budget(double c) { return 1e-6 * std::max(c, 1.0); }

/// Smallest horizon whose truncation tail fits the budget.
inline std::size_t default_horizon(double delta, double max_value, double c) {
  const double mx = std::max(max_value, 0.0);
  if (mx == 0.0) return 1;
  // delta^(H+1) < budget (1 - delta) / mx.
  const double h = std::log(truncation_budget(c) * (1.0 - delta) / mx) / std::log(delta) - 1.0;
  auto horizon = static_cast<std::size_t>(std::max(1.0, std::ceil(h)));
  while (truncation_tail(delta, mx, horizon) >= truncation_budget(c)) ++horizon;
  return horizon;
}

struct TailReport {
  double r_star = 0.0;
  double analytic_bound = 1.0;
  double empirical = 0.0;
  std::size_t hits = 0;
  std::size_t reps = 0;
  double std_error = 0.0;
  std::size_t horizon = 0;
  double delta = 0.0;
  double c = 0.0;

  bool within_bound(double sigmas = 3.0) const {
    return empirical <= analytic_bound + sigmas * std_error;
  }
};

struct TailOptions {
  std::size_t horizon = 0;  // 0 selects default_horizon
  std::size_t reps = 100000;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

namespace detail {

// True when the discounted running sum reaches c within the horizon. Stops
// early once even all-maximal future draws could not reach c.
inline bool tail_path_hits(const FiniteDist& dist, const std::vector<double>& cdf, double delta,
                           double c, std::size_t horizon, PhiloxStream& rng) {
  const double mx = std::max(dist.max_value(), 0.0);
  const double future = mx * delta / (1.0 - delta);
  double s = 0.0;
  double w = delta;
  for (std::size_t t = 1; t <= horizon; ++t) {
    const double u = rng.uniform();
    std::size_t k = 0;
    while (k + 1 < cdf.size() && u >= cdf[k]) ++k;
    s += w * dist.support[k].first;
    if (s >= c) return true;
    if (s + w * future < c) return false;
    w *= delta;
  }
  return false;
}

}  // namespace detail

/// Monte Carlo estimate of Pr[some partial sum sum_{t=1}^n delta^t Z_t >= c].
inline TailReport mc_tail_probability(const FiniteDist& dist, double delta, double c,
                                      const TailOptions& opt = {}) {
  dist.validate();
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");
  if (!(c >= 0.0) || !std::isfinite(c)) throw ValidationError("c must be finite and nonnegative");
  if (opt.reps < 1000) throw ValidationError("tail estimate needs at least 1000 replications");
  TailReport r;
  r.r_star = r_star(dist);
  r.analytic_bound = analytic_tail_bound(r.r_star, c);
  r.delta = delta;
  r.c = c;
  r.reps = opt.reps;
  r.horizon = opt.horizon == 0 ? default_horizon(delta, dist.max_value(), c) : opt.horizon;
  if (truncation_tail(delta, dist.max_value(), r.horizon) >= truncation_budget(c)) {
    throw PreconditionError("horizon " + std::to_string(r.horizon) +
                            " leaves too much discounted mass after truncation");
  }

  std::vector<double> cdf;
  double acc = 0.0;
  for (const auto& [v, p] : dist.support) cdf.push_back(acc += p);

  std::vector<unsigned char> hit(opt.reps, 0);
  parallel_for(opt.reps, opt.threads, [&](std::size_t i) {
    PhiloxStream rng(opt.seed, i);
    hit[i] = detail::tail_path_hits(dist, cdf, delta, c, r.horizon, rng) ? 1 : 0;
  });
  for (unsigned char h : hit) r.hits += h;
  r.empirical = static_cast<double>(r.hits) / static_cast<double>(opt.reps);
  r.std_error = std::sqrt(r.empirical * (1.0 - r.empirical) / static_cast<double>(opt.reps));
  return r;
}

}  // namespace repfreq
