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

// On-path simulation of a block equilibrium that steers the patient player's
// discounted action frequencies to a target marginal while holding every
// block's discounted payoff at the Stackelberg payoff.
//
// Path layout:
//   preparation   (alpha', b*) until a' is realized
//   block         T1 review periods of (alpha', b*)
//                 absorbing subphase if every review period was (a', b*)
//                 compensation until the block's discounted payoff is u*
// Blocks repeat until the remaining discounted weight drops below 1e-8.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "repfreq/action_sets.hpp"
#include "repfreq/concentration.hpp"
#include "repfreq/errors.hpp"
#include "repfreq/game.hpp"
#include "repfreq/parallel.hpp"
#include "repfreq/rng.hpp"
#include "repfreq/stage_analysis.hpp"

namespace repfreq {

/// How the upper-drift variable of the absorbing subphase is centred.
/// kDrift: u1(a,b) - (eps1 u1(alpha',b*) + (1-eps1) E_q[u1] + eps1), negative mean.
/// kLiteral: u1(a,b) - eps1.
enum class Z2Variant { kDrift, kLiteral };

inline const char* to_string(Z2Variant v) { return v == Z2Variant::kDrift ? "drift" : "literal"; }

struct SimConfig {
  double eps1 = 0.01;
  double delta = 0.999;
  Z2Variant z2 = Z2Variant::kDrift;
  // Enforce delta > delta_bar in addition to the incentive guard.
  bool strict_delta = false;
  // Play (a*, b*) forever; the target is ignored.
  bool always_stackelberg = false;
  double alpha_margin = 1e-3;
  // Prior on the commitment type. Recorded only; on-path play of the
  // strategic type does not depend on it.
  double prior = 0.0;
};

struct SimParams {
  ActionId a_star = 0;
  ActionId b_star = 0;
  double u_star = 0.0;
  bool always_stackelberg = false;

  ActionId a_prime = 0;
  ActionId b_prime = 0;
  MixedAction alpha_prime;
  double p = 0.0;  // alpha'(a')
  SetAWitness witness;

  double eps1 = 0.0;
  double delta = 0.0;
  double c = 0.0;
  std::size_t T1 = 0;
  std::size_t T2_bar = 0;
  double delta_bar = 0.0;
  double M_bar = 0.0;
  double minmax = 0.0;
  double r1_star = 0.0;
  double r2_star = 0.0;
  FiniteDist z1;
  FiniteDist z2;
  Z2Variant z2_variant = Z2Variant::kDrift;
  // eps1 u1(alpha', b*) + (1 - eps1) E_q[u1]: mean stage payoff while absorbing.
  double absorbing_mean = 0.0;
  double prior = 0.0;
};

namespace detail {

inline ActionId draw_action(const std::vector<double>& weights, double u) {
  double acc = 0.0;
  for (ActionId a = 0; a < weights.size(); ++a) {
    acc += weights[a];
    if (u < acc) return a;
  }
  // Rounding left u above the last partial sum; take the last positive entry.
  for (ActionId a = weights.size(); a-- > 0;) {
    if (weights[a] > 0.0) return a;
  }
  return 0;
}

// Largest weight on a' that keeps b* a best reply to (1-w) a* + w a'.
inline double max_prime_weight(const StageGame& game, ActionId a_star, ActionId a_prime,
                               ActionId b_star) {
  double w = 1.0;
  for (ActionId b = 0; b < game.num_actions2(); ++b) {
    if (b == b_star) continue;
    const double d_star = game.u2(a_star, b_star) - game.u2(a_star, b);
    const double d_prime = game.u2(a_prime, b_star) - game.u2(a_prime, b);
    if (d_prime < d_star) w = std::min(w, d_star / (d_star - d_prime));
  }
  return w;
}

}  // namespace detail

/// All construction parameters for the target marginal.
inline SimParams derive_params(const StageGame& game, const MixedAction& target,
                               const SimConfig& cfg, double tol = kDefaultTol) {
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");
  if (!(cfg.eps1 > 0.0 && cfg.eps1 < 1.0)) throw ValidationError("eps1 must lie in (0, 1)");
  if (!(cfg.alpha_margin > 0.0 && cfg.alpha_margin < 1.0)) {
    throw ValidationError("alpha margin must lie in (0, 1)");
  }
  const double t2 = std::ceil(std::log(1.0 - cfg.eps1) / std::log(cfg.delta));
  if (!(t2 >= 1.0)) throw ValidationError("absorbing subphase bound is zero for this eps1 and delta");
  target.validate(game.num_actions1());
  const auto st = stackelberg(game, tol);
  if (!st.unique_action || !st.unique_reply) {
    throw PreconditionError("construction needs a unique Stackelberg action and reply");
  }

  SimParams sp;
  sp.a_star = st.a_star;
  sp.b_star = st.b_star;
  sp.u_star = game.u1(st.a_star, st.b_star);
  sp.eps1 = cfg.eps1;
  sp.delta = cfg.delta;
  sp.M_bar = game.max_u1();
  sp.minmax = minmax_p1(game);
  sp.z2_variant = cfg.z2;
  sp.prior = cfg.prior;

  bool trivial = cfg.always_stackelberg;
  if (!trivial) {
    trivial = true;
    for (ActionId a = 0; a < target.size(); ++a) {
      const double want = a == st.a_star ? 1.0 : 0.0;
      if (std::abs(target[a] - want) > 1e-12) trivial = false;
    }
  }
  if (trivial) {
    sp.always_stackelberg = true;
    sp.alpha_prime = MixedAction::pure(game.num_actions1(), st.a_star);
    sp.a_prime = st.a_star;
    sp.b_prime = st.b_star;
    sp.witness.target = MixedAction::pure(game.num_actions1(), st.a_star);
    sp.witness.components.push_back({st.b_star, 1.0, sp.witness.target});
    sp.witness.payoff = sp.u_star;
    sp.witness.stackelberg_payoff = sp.u_star;
    sp.absorbing_mean = sp.u_star;
    sp.r1_star = sp.r2_star = std::numeric_limits<double>::infinity();
    return sp;
  }

  const auto rep = check_assumptions(game, tol);
  if (!rep.a2_not_best_reply) {
    throw PreconditionError("the Stackelberg action is a best reply to b*: no profitable a' exists");
  }
  if (!rep.a2_above_minmax) {
    throw PreconditionError("the Stackelberg payoff does not exceed the minmax value");
  }

  // a' maximizes u1(., b*) among actions beating the Stackelberg payoff.
  bool found = false;
  for (ActionId a = 0; a < game.num_actions1(); ++a) {
    if (game.u1(a, st.b_star) <= sp.u_star + tol) continue;
    if (!found || game.u1(a, st.b_star) > game.u1(sp.a_prime, st.b_star)) sp.a_prime = a;
    found = true;
  }
  if (!found) throw PreconditionError("no action beats the Stackelberg payoff against b*");

  const auto br = best_replies_p2_pure(game, sp.a_prime, tol);
  sp.b_prime = br.front();
  for (ActionId b : br) {
    if (game.u1(sp.a_prime, b) < game.u1(sp.a_prime, sp.b_prime)) sp.b_prime = b;
  }
  if (!(game.u1(sp.a_prime, sp.b_prime) < sp.u_star - tol)) {
    throw PreconditionError("compensation profile (a', b') does not fall below the Stackelberg payoff");
  }

  const double w_bar = detail::max_prime_weight(game, st.a_star, sp.a_prime, st.b_star);
  const double w = w_bar > cfg.alpha_margin ? w_bar - cfg.alpha_margin : 0.5 * w_bar;
  if (!(w > 0.0)) throw PreconditionError("b* is not a strict best reply near the Stackelberg action");
  sp.alpha_prime.weights.assign(game.num_actions1(), 0.0);
  sp.alpha_prime[st.a_star] = 1.0 - w;
  sp.alpha_prime[sp.a_prime] = w;
  sp.p = w;

  auto witness = in_set_A(game, target, 0.0, tol);
  if (!witness) throw PreconditionError("target is not an attainable frequency");
  sp.witness = std::move(*witness);

  // Outcome distribution of one absorbing period.
  struct Outcome {
    double u;
    double prob;
  };
  std::vector<Outcome> outcomes;
  outcomes.push_back({game.u1(st.a_star, st.b_star), cfg.eps1 * (1.0 - w)});
  outcomes.push_back({game.u1(sp.a_prime, st.b_star), cfg.eps1 * w});
  for (const auto& comp : sp.witness.components) {
    for (ActionId a = 0; a < game.num_actions1(); ++a) {
      const double pr = (1.0 - cfg.eps1) * comp.mass * comp.alpha[a];
      if (pr > 0.0) outcomes.push_back({game.u1(a, comp.b), pr});
    }
  }
  double total = 0.0;
  for (const auto& o : outcomes) total += o.prob;
  sp.absorbing_mean = cfg.eps1 * game.u1_mixed(sp.alpha_prime.weights, st.b_star) +
                      (1.0 - cfg.eps1) * sp.witness.payoff;

  std::vector<std::pair<double, double>> z1;
  std::vector<std::pair<double, double>> z2;
  const double z2_shift =
      cfg.z2 == Z2Variant::kDrift ? sp.absorbing_mean + cfg.eps1 : cfg.eps1;
  for (const auto& o : outcomes) {
    z1.emplace_back(sp.u_star - o.u, o.prob / total);
    z2.emplace_back(o.u - z2_shift, o.prob / total);
  }
  sp.z1 = make_dist(std::move(z1));
  sp.z2 = make_dist(std::move(z2));
  sp.r1_star = r_star_or_infinity(sp.z1);
  sp.r2_star = r_star_or_infinity(sp.z2);
  const double r_min = std::min(sp.r1_star, sp.r2_star);
  sp.c = std::isinf(r_min) ? 0.0 : -std::log(cfg.eps1) / r_min;

  const double gain = game.u1(sp.a_prime, st.b_star) - sp.u_star;
  sp.T1 = static_cast<std::size_t>(std::ceil((sp.M_bar + sp.c) / gain));
  sp.T2_bar = static_cast<std::size_t>(t2);
  sp.delta_bar = std::max(std::pow(1.0 - std::pow(cfg.eps1, 3), 1.0 / static_cast<double>(sp.T1)),
                          1.0 - cfg.eps1 * cfg.eps1);
  if (cfg.strict_delta && !(cfg.delta > sp.delta_bar)) {
    throw PreconditionError("delta " + std::to_string(cfg.delta) + " does not exceed delta_bar " +
                            std::to_string(sp.delta_bar));
  }
  return sp;
}

struct IncentiveReport {
  double deviation_cap = 0.0;     // (1 - delta) M_bar + delta minmax
  double min_continuation = 0.0;  // lower bound on on-path continuation values
  double slack = 0.0;
  bool passes = false;
};

/// One-shot deviation check: the worst on-path continuation value against
/// the best deviation followed by minmax punishment.
inline IncentiveReport check_incentives(const SimParams& sp) {
  IncentiveReport r;
  const double d = sp.delta;
  r.deviation_cap = (1.0 - d) * sp.M_bar + d * sp.minmax;
  if (sp.always_stackelberg) {
    r.min_continuation = sp.u_star;
  } else {
    // Within a block, V_k = u* - D_k / delta^k where D_k is the normalized
    // payoff surplus so far. Surplus only accrues in the first T1 + T2_bar
    // periods, each contributing at most M_bar - u*; compensation then
    // raises V monotonically back to u*.
    const double horizon = static_cast<double>(sp.T1 + sp.T2_bar);
    const double dk = std::pow(d, horizon);
    const double d_max = (1.0 - dk) * std::max(sp.M_bar - sp.u_star, 0.0);
    r.min_continuation = sp.u_star - d_max / dk;
  }
  r.slack = r.min_continuation - r.deviation_cap;
  r.passes = r.slack > 0.0;
  return r;
}

enum class Phase : std::uint8_t {
  kStackelberg,
  kPreparation,
  kReview,
  kAbsorbing,
  kCompensation,
  kCompensationUp,
};

inline const char* to_string(Phase p) {
  switch (p) {
    case Phase::kStackelberg:
      return "stackelberg";
    case Phase::kPreparation:
      return "preparation";
    case Phase::kReview:
      return "review";
    case Phase::kAbsorbing:
      return "absorbing";
    case Phase::kCompensation:
      return "compensation";
    case Phase::kCompensationUp:
      return "compensation_up";
  }
  return "?";
}

struct PeriodRecord {
  ActionId a = 0;
  ActionId b = 0;
  Phase phase = Phase::kStackelberg;
  std::uint32_t block = 0;  // 0 outside blocks, else 1-based
  double weight = 0.0;      // (1 - delta) delta^t
};

/// Block end decided by the closing lottery: the period at `lottery_period`
/// is played as (a', b') with probability lambda.
struct BlockRecord {
  std::size_t first = 0;
  std::size_t lottery_period = 0;
  double lambda = 0.0;
  bool played = false;
};

enum class AbsorbingEnd : std::uint8_t { kLowerBreach, kUpperBreach, kTimeout, kTruncated };

struct PathRecord {
  std::vector<PeriodRecord> periods;
  std::vector<BlockRecord> blocks;  // completed blocks only
  std::vector<AbsorbingEnd> absorbing;
  bool truncated = false;
};

inline constexpr double kTruncationWeight = 1e-8;

/// One on-path history of the strategic type. Replaying the same
/// (params, seed, rep) reproduces it exactly.
inline PathRecord simulate_path(const StageGame& game, const SimParams& sp, std::uint64_t seed,
                                std::uint64_t rep = 0) {
  if (!check_incentives(sp).passes) {
    throw PreconditionError("delta " + std::to_string(sp.delta) +
                            " is too small: on-path continuation value falls below the deviation cap");
  }
  PhiloxStream rng(seed, rep);
  PathRecord rec;
  const double d = sp.delta;
  const double u_star = sp.u_star;
  const double u_comp = game.u1(sp.a_prime, sp.b_prime);
  double dpow = 1.0;
  bool alive = true;
  std::uint32_t block = 0;

  auto emit = [&](ActionId a, ActionId b, Phase ph) {
    rec.periods.push_back({a, b, ph, block, (1.0 - d) * dpow});
    dpow *= d;
    alive = dpow >= kTruncationWeight;
  };

  if (sp.always_stackelberg) {
    while (alive) emit(sp.a_star, sp.b_star, Phase::kStackelberg);
    rec.truncated = true;
    return rec;
  }

  while (alive) {
    const ActionId a = detail::draw_action(sp.alpha_prime.weights, rng.uniform());
    emit(a, sp.b_star, Phase::kPreparation);
    if (a != sp.a_star) break;
  }

  std::vector<double> comp_mass;
  for (const auto& comp : sp.witness.components) comp_mass.push_back(comp.mass);

  while (alive) {
    ++block;
    const std::size_t first = rec.periods.size();
    double bpow = 1.0;
    double surplus = 0.0;  // (1 - delta) sum_k delta^k (u_k - u*), block-relative
    auto play = [&](ActionId a, ActionId b, Phase ph) {
      surplus += (1.0 - d) * bpow * (game.u1(a, b) - u_star);
      bpow *= d;
      emit(a, b, ph);
    };

    bool all_prime = true;
    for (std::size_t k = 0; k < sp.T1 && alive; ++k) {
      const ActionId a = detail::draw_action(sp.alpha_prime.weights, rng.uniform());
      all_prime = all_prime && a == sp.a_prime;
      play(a, sp.b_star, Phase::kReview);
    }

    if (alive && all_prime) {
      double low = 0.0;
      double high = 0.0;
      double jpow = 1.0;
      const double high_centre = sp.absorbing_mean + sp.eps1;
      AbsorbingEnd end = AbsorbingEnd::kTimeout;
      for (std::size_t j = 0; j < sp.T2_bar; ++j) {
        if (!alive) {
          end = AbsorbingEnd::kTruncated;
          break;
        }
        ActionId a = 0;
        ActionId b = sp.b_star;
        if (rng.uniform() < sp.eps1) {
          a = detail::draw_action(sp.alpha_prime.weights, rng.uniform());
        } else {
          const auto& comp = sp.witness.components[detail::draw_action(comp_mass, rng.uniform())];
          b = comp.b;
          a = detail::draw_action(comp.alpha.weights, rng.uniform());
        }
        const double u = game.u1(a, b);
        low += jpow * (u - u_star);
        high += jpow * (u - high_centre);
        jpow *= d;
        play(a, b, Phase::kAbsorbing);
        if (low < -sp.c) {
          end = AbsorbingEnd::kLowerBreach;
          break;
        }
        if (high > sp.c) {
          end = AbsorbingEnd::kUpperBreach;
          break;
        }
      }
      rec.absorbing.push_back(end);
    }

    bool closed = false;
    while (alive) {
      if (surplus > 0.0) {
        const double next = surplus + (1.0 - d) * bpow * (u_comp - u_star);
        if (next > 0.0) {
          play(sp.a_prime, sp.b_prime, Phase::kCompensation);
          continue;
        }
        const double lambda = surplus / (surplus - next);
        const bool played = rng.uniform() < lambda;
        rec.blocks.push_back({first, rec.periods.size(), lambda, played});
        if (played) play(sp.a_prime, sp.b_prime, Phase::kCompensation);
        closed = true;
        break;
      }
      if (surplus < 0.0) {
        const ActionId a = detail::draw_action(sp.alpha_prime.weights, rng.uniform());
        play(a, sp.b_star, Phase::kCompensationUp);
        continue;
      }
      rec.blocks.push_back({first, rec.periods.size(), 0.0, false});
      closed = true;
      break;
    }
    if (!closed) break;
  }
  rec.truncated = true;
  return rec;
}

struct BlockAudit {
  std::size_t blocks = 0;
  double max_expected_residual = 0.0;  // |lambda D_new + (1 - lambda) D_prev|
  double max_realized_residual = 0.0;  // |D| after the lottery outcome
};

/// Recomputes every completed block's normalized payoff surplus from the
/// per-period records alone.
inline BlockAudit audit_blocks(const StageGame& game, const SimParams& sp, const PathRecord& rec) {
  BlockAudit out;
  const double d = sp.delta;
  const double u_comp = game.u1(sp.a_prime, sp.b_prime);
  for (const auto& blk : rec.blocks) {
    double prev = 0.0;
    double pw = 1.0;
    for (std::size_t t = blk.first; t < blk.lottery_period; ++t) {
      const auto& p = rec.periods[t];
      prev += (1.0 - d) * pw * (game.u1(p.a, p.b) - sp.u_star);
      pw *= d;
    }
    const double next = prev + (1.0 - d) * pw * (u_comp - sp.u_star);
    const double expected = blk.lambda * next + (1.0 - blk.lambda) * prev;
    const double realized = blk.played ? next : prev;
    out.max_expected_residual = std::max(out.max_expected_residual, std::abs(expected));
    out.max_realized_residual = std::max(out.max_realized_residual, std::abs(realized));
    ++out.blocks;
  }
  return out;
}

inline constexpr double kBlockResidualTol = 1e-6;

struct PhaseStats {
  double preparation_periods = 0.0;  // per-path means below
  double blocks = 0.0;
  double review_periods = 0.0;
  double absorbing_periods = 0.0;
  double compensation_periods = 0.0;
  double compensation_up_periods = 0.0;
  std::size_t absorbing_entries = 0;  // totals over all paths
  std::size_t lower_breaches = 0;
  std::size_t upper_breaches = 0;
  std::size_t timeouts = 0;
  std::size_t blocks_audited = 0;
  double max_block_residual = 0.0;
  double max_realized_residual = 0.0;

  double breach_rate() const {
    const std::size_t n = lower_breaches + upper_breaches + timeouts;
    return n == 0 ? 0.0 : static_cast<double>(lower_breaches + upper_breaches) / static_cast<double>(n);
  }
  double breach_std_error() const {
    const std::size_t n = lower_breaches + upper_breaches + timeouts;
    if (n == 0) return 0.0;
    const double p = breach_rate();
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  }
};

struct SimOutcome {
  std::vector<double> freq;
  std::vector<double> freq_ci;  // 95% normal half-width
  double payoff = 0.0;
  double payoff_ci = 0.0;
  std::size_t reps = 0;
  PhaseStats phase_stats;
};

struct EstimateOptions {
  std::size_t reps = 2000;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

/// Averages discounted frequencies and payoffs over independent paths.
inline SimOutcome estimate(const StageGame& game, const SimParams& sp,
                           const EstimateOptions& opt = {}) {
  if (opt.reps < 100) throw ValidationError("estimate needs at least 100 replications");
  const auto inc = check_incentives(sp);
  if (!inc.passes) {
    throw PreconditionError("delta " + std::to_string(sp.delta) +
                            " is too small: on-path continuation value falls below the deviation cap");
  }
  const std::size_t n = game.num_actions1();

  struct PathSummary {
    std::vector<double> freq;
    double payoff = 0.0;
    std::size_t prep = 0, review = 0, absorbing = 0, comp = 0, comp_up = 0, blocks = 0;
    std::size_t lower = 0, upper = 0, timeouts = 0, entries = 0;
    BlockAudit audit;
  };
  std::vector<PathSummary> paths(opt.reps);
  parallel_for(opt.reps, opt.threads, [&](std::size_t i) {
    const auto rec = simulate_path(game, sp, opt.seed, i);
    auto& s = paths[i];
    s.freq.assign(n, 0.0);
    for (const auto& p : rec.periods) {
      s.freq[p.a] += p.weight;
      s.payoff += p.weight * game.u1(p.a, p.b);
      switch (p.phase) {
        case Phase::kPreparation:
          ++s.prep;
          break;
        case Phase::kReview:
          ++s.review;
          break;
        case Phase::kAbsorbing:
          ++s.absorbing;
          break;
        case Phase::kCompensation:
          ++s.comp;
          break;
        case Phase::kCompensationUp:
          ++s.comp_up;
          break;
        case Phase::kStackelberg:
          break;
      }
    }
    for (auto e : rec.absorbing) {
      if (e == AbsorbingEnd::kTruncated) continue;
      ++s.entries;
      if (e == AbsorbingEnd::kLowerBreach) ++s.lower;
      if (e == AbsorbingEnd::kUpperBreach) ++s.upper;
      if (e == AbsorbingEnd::kTimeout) ++s.timeouts;
    }
    s.blocks = rec.blocks.size();
    s.audit = audit_blocks(game, sp, rec);
  });

  // Fixed-order reduction keeps results independent of the thread count.
  SimOutcome out;
  out.reps = opt.reps;
  out.freq.assign(n, 0.0);
  out.freq_ci.assign(n, 0.0);
  std::vector<double> sq(n, 0.0);
  double pay_sq = 0.0;
  auto& ps = out.phase_stats;
  for (const auto& s : paths) {
    for (std::size_t a = 0; a < n; ++a) {
      out.freq[a] += s.freq[a];
      sq[a] += s.freq[a] * s.freq[a];
    }
    out.payoff += s.payoff;
    pay_sq += s.payoff * s.payoff;
    ps.preparation_periods += static_cast<double>(s.prep);
    ps.review_periods += static_cast<double>(s.review);
    ps.absorbing_periods += static_cast<double>(s.absorbing);
    ps.compensation_periods += static_cast<double>(s.comp);
    ps.compensation_up_periods += static_cast<double>(s.comp_up);
    ps.blocks += static_cast<double>(s.blocks);
    ps.absorbing_entries += s.entries;
    ps.lower_breaches += s.lower;
    ps.upper_breaches += s.upper;
    ps.timeouts += s.timeouts;
    ps.blocks_audited += s.audit.blocks;
    ps.max_block_residual = std::max(ps.max_block_residual, s.audit.max_expected_residual);
    ps.max_realized_residual = std::max(ps.max_realized_residual, s.audit.max_realized_residual);
  }
  const double r = static_cast<double>(opt.reps);
  auto half_width = [r](double sum, double sum_sq) {
    const double mean = sum / r;
    const double var = std::max(sum_sq / r - mean * mean, 0.0) * r / (r - 1.0);
    return 1.96 * std::sqrt(var / r);
  };
  for (std::size_t a = 0; a < n; ++a) {
    out.freq_ci[a] = half_width(out.freq[a], sq[a]);
    out.freq[a] /= r;
  }
  out.payoff_ci = half_width(out.payoff, pay_sq);
  out.payoff /= r;
  ps.preparation_periods /= r;
  ps.review_periods /= r;
  ps.absorbing_periods /= r;
  ps.compensation_periods /= r;
  ps.compensation_up_periods /= r;
  ps.blocks /= r;
  if (ps.max_block_residual > kBlockResidualTol) {
    throw InternalError("block payoff accounting drifted by " +
                        std::to_string(ps.max_block_residual));
  }
  return out;
}

}  // namespace repfreq
