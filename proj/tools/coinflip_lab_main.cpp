/*
 * This code is part of coinflip-lab.
 *
 * (C) Copyright 2026, coinflip-lab contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "coinflip/adversary.hpp"
#include "coinflip/family.hpp"
#include "coinflip/json_io.hpp"
#include "coinflip/protocol_json.hpp"
#include "coinflip/report_io.hpp"
#include "coinflip/trajectory.hpp"

namespace {

using coinflip::InvariantError;
using coinflip::ParseError;
using json = nlohmann::ordered_json;

constexpr int kExitParse = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitAudit = 4;

void check_thread_env() {
  const char* value = std::getenv("COINFLIP_LAB_THREADS");
  if (value == nullptr) {
    return;
  }
  // The cap only needs to be a positive integer; everything here runs
  // single-threaded, which respects any cap.
  const std::string text(value);
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos ||
      std::stoull(text) == 0) {
    throw InvariantError("COINFLIP_LAB_THREADS must be a positive integer");
  }
}

std::uint64_t parse_builtin_seed(const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw ParseError("random family seed must be a nonnegative integer");
  }
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw ParseError("random family seed is out of range");
  }
}

std::string spec_label(const std::string& builtin, const std::string& input) {
  return builtin.empty() ? input : builtin;
}

void require_one_source(const std::string& builtin, const std::string& input) {
  if (builtin.empty() == input.empty()) {
    throw ParseError("choose exactly one of --builtin and --input");
  }
}

coinflip::ProtocolSpec resolve_protocol(const std::string& builtin,
                                        const std::string& input) {
  require_one_source(builtin, input);
  if (!builtin.empty()) {
    if (builtin == "section3") {
      return coinflip::section3_spec();
    }
    if (builtin == "family:section3") {
      return coinflip::to_protocol_spec(coinflip::section3_family());
    }
    const std::string prefix = "family:random:";
    if (builtin.rfind(prefix, 0) == 0) {
      return coinflip::to_protocol_spec(
          coinflip::random_family_from_seed(parse_builtin_seed(builtin.substr(prefix.size()))));
    }
    throw ParseError("unknown builtin '" + builtin + "'");
  }
  return coinflip::load_protocol_file(input);
}

coinflip::FamilySpec resolve_family(const std::string& builtin, const std::string& input) {
  require_one_source(builtin, input);
  if (!builtin.empty()) {
    if (builtin == "section3" || builtin == "family:section3") {
      return coinflip::section3_family();
    }
    const std::string prefix = "family:random:";
    if (builtin.rfind(prefix, 0) == 0) {
      return coinflip::random_family_from_seed(
          parse_builtin_seed(builtin.substr(prefix.size())));
    }
    throw ParseError("unknown builtin '" + builtin + "'");
  }
  return coinflip::load_family_file(input);
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty()) {
    std::cout << text;
  } else {
    coinflip::write_text_file(output, text);
  }
}

json number_or_null(double v) {
  if (std::isfinite(v)) {
    return v;
  }
  return nullptr;
}

json report_header(const char* command) {
  json j;
  j["command"] = command;
  j["version"] = coinflip::kVersion;
  return j;
}

json attack_report_json(const coinflip::AttackReport& report) {
  json j;
  j["cheater"] = coinflip::to_string(report.cheater);
  j["target"] = report.target_outcome;
  j["trials"] = report.trials;
  j["seed"] = report.seed;
  j["analytic_kind"] = coinflip::to_string(report.analytic_kind);
  j["analytic"] = number_or_null(report.analytic_success);
  j["exact_success"] = report.exact_success;
  j["exact_abort"] = report.exact_abort;
  j["empirical"] = report.empirical_success;
  j["abort"] = report.empirical_abort;
  return j;
}

struct CommonOptions {
  std::string builtin;
  std::string input;
  std::string output;
  long long trials = 100000;
  std::uint64_t seed = 1;
  double epsilon = 0.25;
};

void add_source_options(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--builtin", opt.builtin,
                  "named spec: section3, family:section3, family:random:<seed>");
  cmd->add_option("--input", opt.input, "spec file (JSON)");
  cmd->add_option("--output", opt.output, "write the report here instead of stdout");
}

int run(int argc, char** argv) {
  CLI::App app{"laboratory for a three-round quantum coin-flipping protocol "
               "and its cheat bounds"};
  app.require_subcommand(1);
  app.set_version_flag("--version", coinflip::kVersion);
  check_thread_env();

  CommonOptions opt;
  int target = 0;
  int round = -1;
  double delta1 = 1.0 / 6.0;
  double delta2 = 1.0 / 6.0;
  double grid_step = 1e-3;
  std::string cheater_name;
  std::string mode;
  std::string format = "csv";
  bool strict = false;

  CLI::App* simulate = app.add_subcommand("simulate", "honest protocol runs");
  add_source_options(simulate, opt);
  simulate->add_option("--trials", opt.trials, "number of runs")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", opt.seed, "base seed");

  CLI::App* attack = app.add_subcommand("attack", "run a cheating strategy");
  add_source_options(attack, opt);
  attack->add_option("--trials", opt.trials, "number of runs")
      ->check(CLI::PositiveNumber);
  attack->add_option("--seed", opt.seed, "base seed");
  attack->add_option("--cheater", cheater_name, "alice or bob")->required();
  attack->add_option("--mode", mode,
                     "helstrom, start-lemma, main-lemma, or symmetrized "
                     "(default: helstrom for bob, symmetrized for alice)");
  attack->add_option("--target", target, "outcome to force")->check(CLI::Range(0, 1));
  attack->add_option("--round", round, "round index for main-lemma");
  attack->add_option("--delta1", delta1, "symmetrized commit weight on level 1");
  attack->add_option("--delta2", delta2, "symmetrized commit weight on level 2");

  CLI::App* analyze = app.add_subcommand("analyze-family", "optimal biases of a family");
  analyze->add_option("--builtin", opt.builtin,
                      "named family: section3 or family:random:<seed>");
  analyze->add_option("--input", opt.input, "family file (JSON)");
  analyze->add_option("--output", opt.output, "write the report here instead of stdout");

  CLI::App* trajectory = app.add_subcommand("trajectory", "per-round branch fidelities");
  add_source_options(trajectory, opt);
  trajectory->add_option("--epsilon", opt.epsilon, "bias used for the bound columns")
      ->check(CLI::Range(0.0, 0.5));
  trajectory->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI::App* audit = app.add_subcommand("audit", "fidelity bound checks");
  add_source_options(audit, opt);
  audit->add_option("--epsilon", opt.epsilon, "declared or measured bias")
      ->check(CLI::Range(0.0, 0.5));
  audit->add_flag("--strict", strict, "exit 4 when a check fails");

  CLI::App* bound = app.add_subcommand("bound", "round count needed for a target bias");
  bound->add_option("--epsilon", opt.epsilon, "target bias")->required();
  bound->add_option("--output", opt.output, "write the report here instead of stdout");

  CLI::App* optimize = app.add_subcommand("optimize-eq2", "sweep the commit weights");
  optimize->add_option("--grid-step", grid_step, "initial grid resolution")
      ->check(CLI::Range(1e-9, 0.1));
  optimize->add_option("--output", opt.output, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  if (simulate->parsed()) {
    const coinflip::ProtocolSpec spec = resolve_protocol(opt.builtin, opt.input);
    const coinflip::OutcomeDistribution exact = spec.exact_outcome_distribution();
    const coinflip::TrialCounts counts =
        coinflip::run_honest_trials(spec, opt.trials, opt.seed);
    json j = report_header("simulate");
    j["spec"] = spec_label(opt.builtin, opt.input);
    j["trials"] = opt.trials;
    j["seed"] = opt.seed;
    j["exact"] = {{"p0", exact.p0}, {"p1", exact.p1}, {"p_abort", exact.p_abort}};
    const double n = static_cast<double>(opt.trials);
    j["empirical"] = {{"p0", static_cast<double>(counts.n0) / n},
                      {"p1", static_cast<double>(counts.n1) / n},
                      {"p_abort", static_cast<double>(counts.n_abort) / n}};
    j["counts"] = {{"n0", counts.n0}, {"n1", counts.n1}, {"n_abort", counts.n_abort}};
    emit(coinflip::json_to_text(j), opt.output);
    return 0;
  }

  if (attack->parsed()) {
    const coinflip::ProtocolSpec spec = resolve_protocol(opt.builtin, opt.input);
    const coinflip::Party cheater = coinflip::party_from_string(cheater_name);
    if (mode.empty()) {
      mode = cheater == coinflip::Party::Bob ? "helstrom" : "symmetrized";
    }
    json j = report_header("attack");
    j["spec"] = spec_label(opt.builtin, opt.input);
    j["mode"] = mode;

    coinflip::AttackReport report;
    if (mode == "helstrom") {
      if (cheater != coinflip::Party::Bob) {
        throw ParseError("mode helstrom is bob's strategy");
      }
      report = coinflip::simulate_attack(spec, coinflip::bob_helstrom_attack(spec, target),
                                         opt.trials, opt.seed);
    } else if (mode == "symmetrized") {
      if (cheater != coinflip::Party::Alice) {
        throw ParseError("mode symmetrized is alice's strategy");
      }
      j["delta1"] = delta1;
      j["delta2"] = delta2;
      report = coinflip::simulate_attack(
          spec, coinflip::alice_symmetrized_attack(spec, delta1, delta2, target),
          opt.trials, opt.seed);
    } else if (mode == "start-lemma") {
      if (cheater != coinflip::Party::Alice) {
        throw ParseError("mode start-lemma is alice's strategy");
      }
      report = coinflip::start_lemma_attack(spec, target, opt.trials, opt.seed).report;
    } else if (mode == "main-lemma") {
      if (round < 0) {
        throw ParseError("mode main-lemma needs --round");
      }
      j["round"] = round;
      report =
          coinflip::main_lemma_attack(spec, round, opt.trials, opt.seed, cheater).report;
    } else {
      throw ParseError("unknown mode '" + mode + "'");
    }
    j.update(attack_report_json(report));
    emit(coinflip::json_to_text(j), opt.output);
    return 0;
  }

  if (analyze->parsed()) {
    const coinflip::FamilySpec family = resolve_family(opt.builtin, opt.input);
    const coinflip::FamilyReport report = coinflip::analyze_family(family);
    const coinflip::RestrictedBoundCheck check = coinflip::restricted_bound_check(family);
    const double overlap = coinflip::alice_construction_overlap(family);
    json j = report_header("analyze-family");
    j["family"] = spec_label(opt.builtin, opt.input);
    j["dim"] = family.dim;
    j["bob_success"] = report.bob_success;
    j["alice_success"] = report.alice_success;
    j["max_bias"] = report.max_bias;
    j["witness"] = coinflip::to_string(check.witness);
    j["certificate"] = check.certificate;
    j["alice_certificate"] = check.alice_certificate;
    j["bob_certificate"] = check.bob_certificate;
    j["construction_overlap"] = overlap;
    j["construction_success"] = (1.0 + overlap) / 2.0;
    j["rho0"] = coinflip::matrix_to_json(report.rho0.mat());
    j["rho1"] = coinflip::matrix_to_json(report.rho1.mat());
    emit(coinflip::json_to_text(j), opt.output);
    return 0;
  }

  if (trajectory->parsed()) {
    const coinflip::ProtocolSpec spec = resolve_protocol(opt.builtin, opt.input);
    const coinflip::FidelityTrajectory traj = coinflip::fidelity_trajectory(spec);
    if (format == "csv") {
      emit(coinflip::trajectory_csv(traj, opt.epsilon), opt.output);
      return 0;
    }
    const coinflip::BoundAudit audit_result = coinflip::maincor_audit(traj, opt.epsilon);
    json j = report_header("trajectory");
    j["spec"] = spec_label(opt.builtin, opt.input);
    j["epsilon"] = opt.epsilon;
    j["k"] = traj.k;
    j["rows"] = json::array();
    for (const coinflip::BoundAudit::Row& row : audit_result.rows) {
      j["rows"].push_back({{"round", row.i},
                           {"F_A", row.f_alice},
                           {"F_B", row.f_bob},
                           {"bound_A", row.bound_on_alice},
                           {"bound_B", row.bound_on_bob},
                           {"maincor_AB_pass", row.pass_alice},
                           {"maincor_BA_pass", row.pass_bob}});
    }
    emit(coinflip::json_to_text(j), opt.output);
    return 0;
  }

  if (audit->parsed()) {
    const coinflip::ProtocolSpec spec = resolve_protocol(opt.builtin, opt.input);
    const coinflip::FidelityTrajectory traj = coinflip::fidelity_trajectory(spec);
    const coinflip::BoundAudit audit_result = coinflip::maincor_audit(traj, opt.epsilon);
    const double f_final_a = traj.rows.back().f_alice;
    const double f_final_b = traj.rows.back().f_bob;
    const bool end_pass = f_final_a <= 1e-9 && f_final_b <= 1e-9;

    json j = report_header("audit");
    j["spec"] = spec_label(opt.builtin, opt.input);
    j["epsilon"] = opt.epsilon;
    j["k"] = traj.k;
    j["maincor"] = json::array();
    for (const coinflip::BoundAudit::Row& row : audit_result.rows) {
      j["maincor"].push_back({{"round", row.i},
                              {"F_A", row.f_alice},
                              {"F_B", row.f_bob},
                              {"bound_on_A", row.bound_on_alice},
                              {"bound_on_B", row.bound_on_bob},
                              {"residual_A", row.residual_alice},
                              {"residual_B", row.residual_bob},
                              {"pass_A", row.pass_alice},
                              {"pass_B", row.pass_bob}});
    }
    j["maincor_all_pass"] = audit_result.all_pass;
    j["end_condition"] = {
        {"F_A_final", f_final_a}, {"F_B_final", f_final_b}, {"pass", end_pass}};
    j["induction"] = json::array();
    for (size_t i = 0; i < audit_result.induction.size(); ++i) {
      j["induction"].push_back({{"i", static_cast<int>(i)},
                                {"bound", audit_result.induction[i]},
                                {"clamped", std::min(1.0, audit_result.induction[i])}});
    }
    const bool pass = audit_result.all_pass && end_pass;
    j["pass"] = pass;
    emit(coinflip::json_to_text(j), opt.output);
    return strict && !pass ? kExitAudit : 0;
  }

  if (bound->parsed()) {
    json j = report_header("bound");
    j["epsilon"] = opt.epsilon;
    j["k_min"] = coinflip::round_lower_bound(opt.epsilon);
    j["constraint"] = "14*eps^(1/4^(k-1)) >= (0.5-eps)^2";
    j["k_min_simplified"] = coinflip::round_lower_bound_simplified(opt.epsilon);
    j["simplified_constraint"] = "14*eps^(1/4^(k-1)) >= 1/16";
    emit(coinflip::json_to_text(j), opt.output);
    return 0;
  }

  if (optimize->parsed()) {
    const coinflip::Eq2Optimum best = coinflip::optimize_eq2(grid_step);
    json j = report_header("optimize-eq2");
    j["grid_step"] = best.grid_step;
    j["delta1"] = best.delta1;
    j["delta2"] = best.delta2;
    j["value"] = best.value;
    emit(coinflip::json_to_text(j), opt.output);
    return 0;
  }

  throw ParseError("no subcommand given");
}

} // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const InvariantError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
}
