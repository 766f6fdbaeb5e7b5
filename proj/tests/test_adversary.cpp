/*
 * This code is part of coinflip-lab.
 *
 * (C) Copyright 2026, coinflip-lab contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "coinflip/adversary.hpp"
#include "coinflip/qdist.hpp"
#include "coinflip/random.hpp"

using namespace coinflip;

TEST_CASE("conditional message states match the commit mixtures") {
  const ProtocolSpec spec = section3_spec();

  const DensityMatrix rho0 = conditional_message_state(spec, 0);
  const DensityMatrix rho1 = conditional_message_state(spec, 1);

  Matrix expected0 = Matrix::Zero(3, 3);
  expected0(0, 0) = 0.5;
  expected0(1, 1) = 0.5;
  Matrix expected1 = Matrix::Zero(3, 3);
  expected1(0, 0) = 0.5;
  expected1(2, 2) = 0.5;

  CHECK((rho0.mat() - expected0).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((rho1.mat() - expected1).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(conditional_message_state(spec, 2), InvariantError);
}

TEST_CASE("discriminating bob wins exactly three quarters") {
  const ProtocolSpec spec = section3_spec();

  for (int target = 0; target < 2; ++target) {
    const Attack attack = bob_helstrom_attack(spec, target);
    CHECK(attack.analytic_kind == AnalyticKind::Exact);
    CHECK(std::abs(attack.analytic_success - 0.75) < 1e-12);

    const AttackReport report = simulate_attack(spec, attack, 100000, 7);
    CHECK(std::abs(report.exact_success - 0.75) < 1e-12);
    CHECK(report.exact_abort < 1e-12);
    // 4 sigma at p = 3/4, n = 1e5 is about 0.0055.
    CHECK(std::abs(report.empirical_success - 0.75) < 0.006);
    CHECK(report.trials == 100000);
  }
}

TEST_CASE("sign twirl keeps diagonals and kills coherences") {
  const DensityMatrix commit0 =
      DensityMatrix::pure(section3_message_state(0, 0));
  const DensityMatrix tw = symmetrize(commit0);
  Matrix expected = Matrix::Zero(3, 3);
  expected(0, 0) = 0.5;
  expected(1, 1) = 0.5;
  CHECK((tw.mat() - expected).cwiseAbs().maxCoeff() < 1e-12);

  Rng rng(31);
  for (int rep = 0; rep < 10; ++rep) {
    const DensityMatrix rho = random_density_matrix(3, rng);
    const DensityMatrix sym = symmetrize(rho);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(sym.mat()(i, i) - rho.mat()(i, i)) < 1e-12);
      for (int j = 0; j < 3; ++j) {
        if (i != j && (i >= 1 || j >= 1)) {
          CHECK(std::abs(sym.mat()(i, j)) < 1e-12);
        }
      }
    }
    // Twirling twice changes nothing.
    CHECK((symmetrize(sym).mat() - sym.mat()).cwiseAbs().maxCoeff() < 1e-12);
  }

  CHECK_THROWS_AS(symmetrize(random_density_matrix(2, rng)), InvariantError);
}

TEST_CASE("closed-form cheating value: anchors, optimum, concavity") {
  CHECK(std::abs(alice_symmetrized_bound(1.0 / 6.0, 1.0 / 6.0) - 0.75) < 1e-12);
  CHECK(std::abs(alice_symmetrized_bound(0.0, 0.0) - 0.5) < 1e-12);

  // Nothing on the grid beats the analytic maximum.
  double best = 0.0;
  for (int i = 0; i <= 200; ++i) {
    for (int j = 0; i + j <= 200; ++j) {
      const double v = alice_symmetrized_bound(i / 200.0, j / 200.0);
      CHECK(v <= 0.75 + 1e-12);
      best = std::max(best, v);
    }
  }
  CHECK(best > 0.749);

  // Along the symmetric diagonal d1 = d2 = d the value is
  // (1 - d + 2 sqrt(d (1 - 2 d))) / 2; its slope changes sign exactly once,
  // at d = 1/6.
  auto diag = [](double d) { return alice_symmetrized_bound(d, d); };
  const double h = 1e-6;
  CHECK(diag(1.0 / 6.0 + h) < diag(1.0 / 6.0));
  CHECK(diag(1.0 / 6.0 - h) < diag(1.0 / 6.0));
  CHECK(diag(0.10 + h) > diag(0.10));
  CHECK(diag(0.25 + h) < diag(0.25));

  CHECK_THROWS_AS(alice_symmetrized_bound(-0.1, 0.2), InvariantError);
  CHECK_THROWS_AS(alice_symmetrized_bound(0.7, 0.7), InvariantError);
}

TEST_CASE("grid optimizer recovers the known maximum") {
  const Eq2Optimum opt = optimize_eq2(1e-2);
  CHECK(std::abs(opt.value - 0.75) < 1e-6);
  CHECK(std::abs(opt.delta1 - 1.0 / 6.0) < 2e-3);
  CHECK(std::abs(opt.delta2 - 1.0 / 6.0) < 2e-3);
  CHECK(opt.grid_step == 1e-2);

  CHECK_THROWS_AS(optimize_eq2(0.0), InvariantError);
  CHECK_THROWS_AS(optimize_eq2(0.7), InvariantError);
}

TEST_CASE("committed-mixture alice attack meets its analysis") {
  const ProtocolSpec spec = section3_spec();

  for (int target = 0; target < 2; ++target) {
    const Attack attack = alice_symmetrized_attack(spec, 1.0 / 6.0, 1.0 / 6.0, target);
    CHECK(attack.analytic_kind == AnalyticKind::Exact);
    CHECK(std::abs(attack.analytic_success - 0.75) < 1e-12);

    const AttackReport report = simulate_attack(spec, attack, 100000, 11);
    CHECK(std::abs(report.exact_success - attack.analytic_success) < 1e-9);
    CHECK(std::abs(report.empirical_success - 0.75) < 0.006);
  }

  // Away from the optimum the analysis still matches the simulation.
  const Attack off = alice_symmetrized_attack(spec, 0.3, 0.05, 0);
  const AttackReport off_report = simulate_attack(spec, off, 1, 1);
  CHECK(std::abs(off_report.exact_success - off.analytic_success) < 1e-9);
  CHECK(off.analytic_success < 0.75);
  CHECK(off.analytic_success > 0.5);

  CHECK_THROWS_AS(alice_symmetrized_attack(spec, 0.6, 0.6, 0), InvariantError);
}

TEST_CASE("doing nothing wins half the time") {
  const ProtocolSpec spec = section3_spec();
  CheatStrategy lazy;
  lazy.cheater = Party::Bob;
  lazy.target_outcome = 0;

  const AttackReport report = simulate_attack(spec, lazy, 100000, 3);
  CHECK(std::abs(report.exact_success - 0.5) < 1e-9);
  CHECK(report.exact_abort < 1e-9);
  CHECK(std::abs(report.empirical_success - 0.5) < 0.007);
  CHECK(report.analytic_kind == AnalyticKind::None);
  CHECK(std::isnan(report.analytic_success));
}

TEST_CASE("sign unitaries permute the honest commit states") {
  // This is the fact behind symmetrize(): each diag(1, s1, s2) maps the
  // four commit states onto each other, so Bob twirling the message (and
  // undoing it before his check) costs nothing while erasing coherences.
  for (int s1 = 0; s1 < 2; ++s1) {
    for (int s2 = 0; s2 < 2; ++s2) {
      Matrix signs = Matrix::Zero(3, 3);
      signs(0, 0) = 1.0;
      signs(1, 1) = s1 ? -1.0 : 1.0;
      signs(2, 2) = s2 ? -1.0 : 1.0;

      for (int b = 0; b < 2; ++b) {
        for (int x = 0; x < 2; ++x) {
          const int flip = (b == 0) ? s1 : s2;
          const Vector mapped = signs * section3_message_state(b, x).v;
          const Vector target = section3_message_state(b, x ^ flip).v;
          CHECK((mapped - target).norm() < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("cancelling deviations leave the honest statistics alone") {
  const ProtocolSpec spec = section3_spec();
  const OutcomeDistribution honest = spec.exact_outcome_distribution();

  Matrix signs = Matrix::Zero(3, 3);
  signs(0, 0) = 1.0;
  signs(1, 1) = -1.0;
  signs(2, 2) = -1.0;

  // Bob holds (message, coin_b, copy_b) before round 2 and (message,
  // coin_b) before round 3; flipping the message signs across his own round
  // and flipping them back is a net no-op, exercising interventions at two
  // different ownership layouts.
  Intervention apply;
  apply.before_round = 2;
  apply.actions = {embed_operator(Operator(signs), {3, 2, 2}, {0})};
  Intervention undo;
  undo.before_round = 3;
  undo.actions = {embed_operator(Operator(signs), {3, 2}, {0})};

  CheatStrategy strategy;
  strategy.cheater = Party::Bob;
  strategy.target_outcome = 0;
  strategy.interventions = {apply, undo};

  const AttackReport report = simulate_attack(spec, strategy, 1, 1);
  CHECK(std::abs(report.exact_success - honest.p0) < 1e-9);
  CHECK(report.exact_abort < 1e-9);
}

TEST_CASE("strategy validation rejects malformed deviations") {
  const ProtocolSpec spec = section3_spec();

  CheatStrategy bad_target;
  bad_target.target_outcome = 2;
  CHECK_THROWS_AS(simulate_attack(spec, bad_target, 1, 1), InvariantError);

  CheatStrategy late;
  late.cheater = Party::Bob;
  Intervention beyond;
  beyond.before_round = 99;
  beyond.actions = {Operator::identity(12)};
  late.interventions = {beyond};
  CHECK_THROWS_AS(simulate_attack(spec, late, 1, 1), InvariantError);

  CheatStrategy wrong_dim;
  wrong_dim.cheater = Party::Bob;
  Intervention tiny;
  tiny.before_round = 2;
  tiny.actions = {Operator::identity(2)}; // Bob holds dim 12 before round 2
  wrong_dim.interventions = {tiny};
  CHECK_THROWS_AS(simulate_attack(spec, wrong_dim, 1, 1), InvariantError);

  CheatStrategy not_senders_round;
  not_senders_round.cheater = Party::Bob;
  Intervention replace;
  replace.before_round = 1; // round 1 is Alice's
  replace.actions = {Operator::identity(4)};
  replace.replaces_round_unitary = true;
  not_senders_round.interventions = {replace};
  CHECK_THROWS_AS(simulate_attack(spec, not_senders_round, 1, 1), InvariantError);

  CheatStrategy zero_trials;
  CHECK_THROWS_AS(simulate_attack(spec, zero_trials, 0, 1), InvariantError);
}

TEST_CASE("attack reports are reproducible per seed") {
  const ProtocolSpec spec = section3_spec();
  const Attack attack = bob_helstrom_attack(spec, 0);

  const AttackReport a = simulate_attack(spec, attack, 5000, 17);
  const AttackReport b = simulate_attack(spec, attack, 5000, 17);
  CHECK(a.empirical_success == b.empirical_success);
  CHECK(a.empirical_abort == b.empirical_abort);
  CHECK(a.seed == 17);
}
