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

// Command-line dispatch for the repfreq binary. Exit status: 0 success,
// 1 domain error (bad game file, violated precondition), 2 usage error.

#pragma once

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "repfreq/repfreq.hpp"

namespace repfreq::cli {

using nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  std::string format = "json";
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

namespace detail {

inline json labels_json(const StageGame& game, const std::vector<ActionId>& ids, bool player1) {
  json arr = json::array();
  for (ActionId i : ids) arr.push_back(player1 ? game.label1(i) : game.label2(i));
  return arr;
}

// Infinite values become null.
inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline void flatten(const json& j, const std::string& prefix,
                    std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
    }
  } else {
    out.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
  }
}

inline void emit(const json& doc, const RunConfig& cfg, std::ostream& out) {
  if (cfg.format == "json") {
    out << doc.dump(2) << "\n";
    return;
  }
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(doc, "", rows);
  if (cfg.format == "csv") {
    out << "key,value\n";
    for (const auto& [k, v] : rows) out << k << "," << v << "\n";
  } else {
    for (const auto& [k, v] : rows) out << k << ": " << v << "\n";
  }
}

inline json witness_json(const StageGame& game, const FreqBoundResult& r) {
  return {{"q", r.q},
          {"alpha1", mixed_to_json(r.alpha1, game.actions1())},
          {"b1", game.label2(r.b1)},
          {"alpha2", mixed_to_json(r.alpha2, game.actions1())},
          {"b2", game.label2(r.b2)},
          {"alpha1_placeholder", r.alpha1_placeholder},
          {"alpha2_placeholder", r.alpha2_placeholder}};
}

inline json set_a_json(const StageGame& game, const SetAWitness& w) {
  json comps = json::array();
  for (const auto& c : w.components) {
    comps.push_back({{"b", game.label2(c.b)},
                     {"mass", c.mass},
                     {"alpha", mixed_to_json(c.alpha, game.actions1())}});
  }
  return {{"member", true},
          {"target", mixed_to_json(w.target, game.actions1())},
          {"payoff", w.payoff},
          {"stackelberg_payoff", w.stackelberg_payoff},
          {"components", comps}};
}

}  // namespace detail

inline json analyze_json(const StageGame& game, double tol) {
  const auto st = stackelberg(game, tol);
  const auto rep = check_assumptions(game, tol);
  json br = json::object();
  for (ActionId a = 0; a < game.num_actions1(); ++a) {
    br[game.label1(a)] = detail::labels_json(game, best_replies_p2_pure(game, a, tol), false);
  }
  json pieces = json::array();
  for (const auto& p : gamma_star(game)) {
    json verts = json::array();
    for (const auto& v : p.vertices) verts.push_back(mixed_to_json(MixedAction{v}, game.actions1()));
    pieces.push_back({{"b", game.label2(p.b)},
                      {"tied", detail::labels_json(game, p.tied, false)},
                      {"vertices", verts}});
  }
  json ms = nullptr;
  if (game.order1() && game.order2()) ms = is_monotone_supermodular(game);
  return {{"game", game_to_json(game)},
          {"stackelberg",
           {{"a_star", game.label1(st.a_star)},
            {"b_star", game.label2(st.b_star)},
            {"v_star", st.v_star}}},
          {"best_replies", br},
          {"assumptions",
           {{"a1_unique_stackelberg", rep.a1_unique_stackelberg},
            {"a1_unique_reply", rep.a1_unique_reply},
            {"a2_not_best_reply", rep.a2_not_best_reply},
            {"a2_above_minmax", rep.a2_above_minmax},
            {"assumption1", rep.assumption1()},
            {"assumption2", rep.assumption2()}}},
          {"minmax", rep.minmax},
          {"vbar", rep.vbar},
          {"monotone_supermodular", ms},
          {"gamma_star", pieces}};
}

inline json fstar_json(const StageGame& game, double epsilon, bool equality,
                       const std::string& method, std::size_t resolution, double tol) {
  const auto st = stackelberg(game, tol);
  json doc = {{"method", method},
              {"epsilon", epsilon},
              {"equality", equality},
              {"stackelberg_payoff", game.u1(st.a_star, st.b_star)},
              {"a_star", game.label1(st.a_star)}};
  if (method == "grid") {
    doc["value"] = fstar_grid_oracle(game, resolution, tol);
    doc["resolution"] = resolution;
    doc["witness"] = nullptr;
    return doc;
  }
  const auto r = method == "prop1" ? fstar_prop1(game, tol) : fstar(game, epsilon, equality, tol);
  doc["value"] = r.value;
  doc["payoff"] = r.payoff(game);
  doc["witness"] = detail::witness_json(game, r);
  return doc;
}

inline json params_json(const StageGame& game, const SimParams& sp) {
  return {{"always_stackelberg", sp.always_stackelberg},
          {"a_star", game.label1(sp.a_star)},
          {"b_star", game.label2(sp.b_star)},
          {"u_star", sp.u_star},
          {"a_prime", game.label1(sp.a_prime)},
          {"b_prime", game.label2(sp.b_prime)},
          {"alpha_prime", mixed_to_json(sp.alpha_prime, game.actions1())},
          {"p", sp.p},
          {"eps1", sp.eps1},
          {"delta", sp.delta},
          {"delta_bar", sp.delta_bar},
          {"c", sp.c},
          {"T1", sp.T1},
          {"T2_bar", sp.T2_bar},
          {"M_bar", sp.M_bar},
          {"minmax", sp.minmax},
          {"r1_star", detail::number_or_null(sp.r1_star)},
          {"r2_star", detail::number_or_null(sp.r2_star)},
          {"z2_variant", to_string(sp.z2_variant)},
          {"prior", sp.prior},
          {"witness", detail::set_a_json(game, sp.witness)}};
}

inline json outcome_json(const StageGame& game, const SimOutcome& o) {
  json freq = json::object();
  json ci = json::object();
  for (ActionId a = 0; a < game.num_actions1(); ++a) {
    freq[game.label1(a)] = o.freq[a];
    ci[game.label1(a)] = o.freq_ci[a];
  }
  const auto& s = o.phase_stats;
  return {{"freq", freq},
          {"freq_ci", ci},
          {"payoff", o.payoff},
          {"payoff_ci", o.payoff_ci},
          {"reps", o.reps},
          {"phase_stats",
           {{"preparation_periods", s.preparation_periods},
            {"blocks", s.blocks},
            {"review_periods", s.review_periods},
            {"absorbing_periods", s.absorbing_periods},
            {"compensation_periods", s.compensation_periods},
            {"compensation_up_periods", s.compensation_up_periods},
            {"absorbing_entries", s.absorbing_entries},
            {"lower_breaches", s.lower_breaches},
            {"upper_breaches", s.upper_breaches},
            {"timeouts", s.timeouts},
            {"breach_rate", s.breach_rate()},
            {"blocks_audited", s.blocks_audited},
            {"max_block_residual", s.max_block_residual},
            {"max_realized_residual", s.max_realized_residual}}}};
}

inline json tail_json(const TailReport& r) {
  return {{"r_star", r.r_star},       {"analytic_bound", r.analytic_bound},
          {"empirical", r.empirical}, {"hits", r.hits},
          {"reps", r.reps},           {"std_error", r.std_error},
          {"horizon", r.horizon},     {"delta", r.delta},
          {"c", r.c},                 {"within_bound", r.within_bound()}};
}

inline json app_json(const AppParams& params, double tol) {
  const auto game = build_stage_game(params);
  const auto rep = check_assumptions(game, tol);
  const double lp_value = fstar(game, 0.0, false, tol).value;
  json doc = {{"variant", app_name(params)},
              {"assumption1", rep.assumption1()},
              {"assumption2", rep.assumption2()},
              {"lp_value", lp_value},
              {"game", game_to_json(game)}};
  // The closed forms only hold while the named Stackelberg action survives.
  if (rep.all()) {
    const double closed = closed_form_fstar(params);
    doc["closed_form"] = closed;
    doc["complement"] = 1.0 - closed;
    doc["difference"] = lp_value - closed;
  } else {
    doc["closed_form"] = nullptr;
    doc["complement"] = nullptr;
    doc["difference"] = nullptr;
  }
  return doc;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Parses argv and runs one subcommand.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"repfreq: frequency bounds and equilibrium simulation for reputation games",
               "repfreq"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "human"}));
  app.add_option("--tol", cfg.tol, "Best-reply tolerance")->check(CLI::Range(1e-15, 1e-3));
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")
      ->check(CLI::Range(std::size_t{0}, std::size_t{1024}));

  std::string game_path;

  auto* analyze = app.add_subcommand("analyze", "Stackelberg action, assumptions, minmax, indifference regions");
  analyze->add_option("game", game_path, "Game JSON file")->required();

  double epsilon = 0.0;
  bool equality = false;
  std::string method = "lp";
  std::size_t resolution = 50;
  auto* fs = app.add_subcommand("fstar", "Lowest attainable frequency of the Stackelberg action");
  fs->add_option("game", game_path, "Game JSON file")->required();
  fs->add_option("--epsilon", epsilon, "Payoff relaxation")->check(CLI::NonNegativeNumber);
  fs->add_flag("--equality", equality, "Bind the payoff constraint");
  fs->add_option("--method", method, "lp | prop1 | grid")
      ->check(CLI::IsMember({"lp", "prop1", "grid"}));
  fs->add_option("--resolution", resolution, "Grid resolution")
      ->check(CLI::Range(std::size_t{1}, std::size_t{100000}));

  std::string alpha_text;
  auto* ia = app.add_subcommand("in-set-a", "Is a marginal attainable at the Stackelberg payoff?");
  ia->add_option("game", game_path, "Game JSON file")->required();
  ia->add_option("--alpha", alpha_text, "Target marginal, e.g. H:0.375,L:0.625")->required();
  ia->add_option("--epsilon", epsilon, "Payoff tolerance")->check(CLI::NonNegativeNumber);

  std::string target_text;
  SimConfig sim;
  std::size_t reps = 2000;
  std::string z2 = "drift";
  std::string csv_path;
  auto* sm = app.add_subcommand("simulate", "Monte Carlo of the block equilibrium");
  sm->add_option("game", game_path, "Game JSON file")->required();
  sm->add_option("--target", target_text, "Target marginal; defaults to the fstar witness");
  sm->add_option("--delta", sim.delta, "Discount factor")->check(CLI::Range(0.0, 1.0));
  sm->add_option("--eps1", sim.eps1, "Absorbing-subphase exploration probability")
      ->check(CLI::Range(0.0, 1.0));
  sm->add_option("--reps", reps, "Replications")->check(CLI::Range(std::size_t{100}, std::size_t{100000000}));
  sm->add_option("--z2-variant", z2, "drift | literal")->check(CLI::IsMember({"drift", "literal"}));
  sm->add_option("--out", csv_path, "Write per-action CSV here");
  sm->add_flag("--strict-delta", sim.strict_delta, "Require delta above delta_bar");
  sm->add_flag("--trivial", sim.always_stackelberg, "Always play the Stackelberg profile");
  sm->add_option("--prior", sim.prior, "Commitment-type prior (recorded only)")
      ->check(CLI::Range(0.0, 1.0));

  std::string dist_path;
  double delta = 0.99;
  double c = 1.0;
  std::size_t tail_reps = 100000;
  std::size_t horizon = 0;
  auto* cc = app.add_subcommand("concentration", "Tail bound for discounted sums");
  cc->add_option("--dist", dist_path, "Distribution JSON file")->required();
  cc->add_option("--delta", delta, "Discount factor")->check(CLI::Range(0.0, 1.0));
  cc->add_option("--c", c, "Threshold")->check(CLI::NonNegativeNumber);
  cc->add_option("--reps", tail_reps, "Replications")
      ->check(CLI::Range(std::size_t{1000}, std::size_t{100000000}));
  cc->add_option("--horizon", horizon, "Truncation horizon (0 = automatic)");

  auto* ap = app.add_subcommand("app", "Closed-form applications");
  ap->require_subcommand(1);
  Product2Params p2;
  auto* apc = ap->add_subcommand("product-choice", "Two-option product choice");
  apc->add_option("--gamma", p2.gamma, "Consumer threshold");
  apc->add_option("--ch", p2.c_h, "Effort cost when h is bought");
  apc->add_option("--cl", p2.c_l, "Effort cost when l is bought");
  Product3Params p3;
  auto* ap3 = ap->add_subcommand("product3", "Three-option product choice");
  ap3->add_option("--g1", p3.g1, "Upper threshold");
  ap3->add_option("--g2", p3.g2, "Lower threshold");
  ap3->add_option("--p", p3.p, "Intermediate-product benefit");
  ap3->add_option("--c", p3.c, "Effort cost");
  EntryParams ep;
  auto* ape = ap->add_subcommand("entry", "Entry deterrence");
  ape->add_option("--gamma", ep.gamma, "Entrant threshold");
  ape->add_option("--co", ep.c_o, "Cost of fighting when the entrant stays out");
  ape->add_option("--ci", ep.c_i, "Cost of fighting when the entrant enters");
  ape->add_option("--subsidy", ep.subsidy, "Entry subsidy");
  FiscalParams fp;
  auto* apf = ap->add_subcommand("fiscal", "Fiscal policy");
  apf->add_option("--tau", fp.tau, "Normal tax rate");
  apf->add_option("--c", fp.c, "Investment cost");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    json doc;
    if (*analyze) {
      doc = analyze_json(load_game_file(game_path), cfg.tol);
    } else if (*fs) {
      doc = fstar_json(load_game_file(game_path), epsilon, equality, method, resolution, cfg.tol);
    } else if (*ia) {
      const auto game = load_game_file(game_path);
      const auto target = parse_mixed_action(alpha_text, game.actions1());
      const auto w = in_set_A(game, target, epsilon, cfg.tol);
      doc = w ? detail::set_a_json(game, *w) : json{{"member", false}};
    } else if (*sm) {
      const auto game = load_game_file(game_path);
      sim.z2 = z2 == "drift" ? Z2Variant::kDrift : Z2Variant::kLiteral;
      const MixedAction target = target_text.empty()
                                     ? fstar(game, 0.0, true, cfg.tol).marginal()
                                     : parse_mixed_action(target_text, game.actions1());
      const auto sp = derive_params(game, target, sim, cfg.tol);
      const auto inc = check_incentives(sp);
      const auto outcome = estimate(game, sp, {reps, cfg.seed, cfg.threads});
      std::ostringstream csv;
      csv << std::setprecision(17) << "action,freq_estimate,ci_radius\n";
      for (ActionId a = 0; a < game.num_actions1(); ++a) {
        csv << game.label1(a) << "," << outcome.freq[a] << "," << outcome.freq_ci[a] << "\n";
      }
      if (!csv_path.empty()) {
        std::ofstream f(csv_path);
        if (!f) throw Error("cannot write '" + csv_path + "'");
        f << csv.str();
      }
      if (cfg.format == "csv") {
        out << csv.str();
        return kExitOk;
      }
      doc = {{"params", params_json(game, sp)},
             {"incentives",
              {{"deviation_cap", inc.deviation_cap},
               {"min_continuation", inc.min_continuation},
               {"slack", inc.slack},
               {"passes", inc.passes}}},
             {"seed", cfg.seed},
             {"outcome", outcome_json(game, outcome)}};
    } else if (*cc) {
      const auto dist = dist_from_json(json::parse(read_file(dist_path)));
      TailOptions opt;
      opt.horizon = horizon;
      opt.reps = tail_reps;
      opt.seed = cfg.seed;
      opt.threads = cfg.threads;
      doc = tail_json(mc_tail_probability(dist, delta, c, opt));
    } else if (*apc) {
      doc = app_json(p2, cfg.tol);
    } else if (*ap3) {
      doc = app_json(p3, cfg.tol);
    } else if (*ape) {
      doc = app_json(ep, cfg.tol);
    } else if (*apf) {
      doc = app_json(fp, cfg.tol);
    }
    detail::emit(doc, cfg, out);
    return kExitOk;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
}

}  // namespace repfreq::cli
