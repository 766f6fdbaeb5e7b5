/*
 * This code is part of coinflip-lab.
 *
 * (C) Copyright 2026, coinflip-lab contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <string>
#include <vector>

#include "coinflip/adversary.hpp"

namespace coinflip {

/// Per-round branch fidelities. Row i holds the fidelity between the two
/// outcome branches reduced to each party after round i, so row 0 describes
/// the start and row k the final state, where both values vanish.
struct FidelityTrajectory {
  struct Row {
    int i = 0;
    double f_alice = 0.0;
    double f_bob = 0.0;
  };
  int k = 0;
  std::vector<Row> rows;
};

FidelityTrajectory fidelity_trajectory(const ProtocolSpec& spec);

/// Checks 2*eps + 6*F^(1/4) bounds round by round. `bound_on_alice` caps
/// f_alice using f_bob and vice versa; the AB pass flag refers to the bound
/// on Alice's fidelity, BA to the bound on Bob's. `induction` carries the
/// unclamped 14*eps^(1/4^(k-i-1)) values for i = 0..k-1 and stays empty when
/// epsilon falls outside their (0, 1/4) domain.
struct BoundAudit {
  struct Row {
    int i = 0;
    double f_alice = 0.0;
    double f_bob = 0.0;
    double bound_on_alice = 0.0;
    double bound_on_bob = 0.0;
    double residual_alice = 0.0;
    double residual_bob = 0.0;
    bool pass_alice = true;
    bool pass_bob = true;
  };
  double epsilon = 0.0;
  std::vector<Row> rows;
  std::vector<double> induction;
  bool all_pass = true;
};

/// Requires epsilon in [0, 1/2]. Pass flags allow 1e-9 slack.
BoundAudit maincor_audit(const FidelityTrajectory& traj, double epsilon);

/// Raw values 14*eps^(1/4^(k-i-1)) for i = 0..k-1. Requires k >= 1 and
/// epsilon in (0, 1/4); values above 1 are meaningful only as vacuous
/// fidelity bounds, so reports clamp them separately.
std::vector<double> induction_bound(int k, double epsilon);

/// Smallest k >= 1 at which a k-round protocol with bias epsilon is not yet
/// ruled out: 14*eps^(1/4^(k-1)) >= (1/2 - eps)^2. Requires epsilon in
/// (0, 1/4). The simplified variant uses the coarser constant 1/16 on the
/// right-hand side.
int round_lower_bound(double epsilon);
int round_lower_bound_simplified(double epsilon);

/// Success floor of the mid-protocol attack, with each square dropped to
/// zero when the distinguishability term overtakes it:
/// max(0, 1/sqrt(2) - f_a^(1/4))^2 + max(0, sqrt(f_b)/sqrt(2) - f_a^(1/4))^2.
/// At f_a = 0 this is 1/2 + f_b/2; at f_a = 1 it vanishes.
double attack_success_floor(double f_alice, double f_bob);

struct LemmaAttack {
  CheatStrategy strategy;
  AttackReport report;
};

/// Alice measures her starting factor with the Helstrom pair for the two
/// outcome branches and substitutes the normalized component for `target`.
/// The analytic floor 1 - sqrt(F^0_A) is attached only when `target` is the
/// majority component (weight >= 1/2); the minority variant runs without
/// one. Success is the honest party's verdict reading `target`.
LemmaAttack start_lemma_attack(const ProtocolSpec& spec, int target, long long trials,
                               std::uint64_t seed);

/// Mid-protocol attack after round i (1 <= i <= k-1), by default analyzed
/// for Alice; passing Bob swaps the roles. The cheater Helstrom-measures the
/// branch pair on their own registers, continues honestly on outcome 0, and
/// on outcome 1 first steers their purification toward branch 0. Success is
/// measured as the squared projection onto the subspace that the remaining
/// rounds carry to final outcome 0 on both sides; the analytic floor is
/// attack_success_floor of the round's fidelities.
LemmaAttack main_lemma_attack(const ProtocolSpec& spec, int i, long long trials,
                              std::uint64_t seed, Party analyzing = Party::Alice);

/// CSV rows `round,F_A,F_B,bound_A,bound_B,maincor_AB_pass,maincor_BA_pass`
/// with the audit bounds evaluated at `epsilon` and pass flags as 1/0.
std::string trajectory_csv(const FidelityTrajectory& traj, double epsilon);

} // namespace coinflip
