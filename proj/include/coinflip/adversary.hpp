/*
 * This code is part of coinflip-lab.
 *
 * (C) Copyright 2026, coinflip-lab contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <limits>
#include <optional>

#include "coinflip/protocol.hpp"

namespace coinflip {

/// A deviation applied just before round `before_round` (1-based). The
/// optional projective measurement acts on the cheater's registers at that
/// moment (given on them in ascending order); `actions` holds one unitary
/// per measurement outcome, or a single unconditional unitary when there is
/// no measurement. If the cheater also sends that round,
/// `replaces_round_unitary` drops the honest round unitary in favor of the
/// action.
struct Intervention {
  int before_round = 1;
  std::vector<Operator> measurement;
  std::vector<Operator> actions;
  bool replaces_round_unitary = false;
};

/// Everything a dishonest party does: optionally start from a different
/// local state, then deviate at chosen rounds. Transfers and the honest
/// party's behavior are fixed by the protocol and cannot be touched.
struct CheatStrategy {
  Party cheater = Party::Bob;
  int target_outcome = 0;
  std::optional<StateVector> start_substitution;
  std::vector<Intervention> interventions;
};

enum class AnalyticKind { Exact, Floor, None };
const char* to_string(AnalyticKind k);

/// A strategy together with what theory promises for it: an exact success
/// probability, a lower bound (floor), or nothing.
struct Attack {
  CheatStrategy strategy;
  AnalyticKind analytic_kind = AnalyticKind::None;
  double analytic_success = std::numeric_limits<double>::quiet_NaN();
};

struct AttackReport {
  Party cheater = Party::Bob;
  int target_outcome = 0;
  AnalyticKind analytic_kind = AnalyticKind::None;
  double analytic_success = std::numeric_limits<double>::quiet_NaN();
  double exact_success = 0.0; // deterministic, from the deviated evolution
  double exact_abort = 0.0;
  double empirical_success = 0.0;
  double empirical_abort = 0.0;
  long long trials = 0;
  std::uint64_t seed = 0;
};

/// Run the deviated protocol. The unitary evolution and measurement branches
/// are computed exactly once (that yields exact_success); Monte Carlo trials
/// then sample the honest party's verdict with counter-derived per-trial
/// randomness. Aborts count against the cheater.
AttackReport simulate_attack(const ProtocolSpec& spec, const Attack& attack,
                             long long trials, std::uint64_t seed);
AttackReport simulate_attack(const ProtocolSpec& spec, const CheatStrategy& strategy,
                             long long trials, std::uint64_t seed);

/// Reduced message state a family-shaped spec sends in round 1 when Alice's
/// coin is `b`.
DensityMatrix conditional_message_state(const ProtocolSpec& spec, int b);

/// Bob's optimal discrimination attack on a family-shaped spec: measure the
/// round-1 message with the Helstrom projectors for the two conditional
/// message states, then claim the coin that forces `target`. Success is
/// exactly 1/2 + trace_distance/4.
Attack bob_helstrom_attack(const ProtocolSpec& spec, int target = 0);

/// Average a qutrit state over the four diagonal-sign unitaries
/// diag(1, s1, s2), each sign in {+1, -1}. Kills all off-diagonal terms involving
/// rows 1 and 2 while preserving every diagonal entry and the attack's
/// acceptance statistics.
DensityMatrix symmetrize(const DensityMatrix& rho);

/// Closed form for dishonest Alice's success against the built-in qutrit
/// protocol when her commit message is diag(1-d1-d2, d1, d2): the average of
/// the two fidelities with the honest conditional messages. Maximized at
/// d1 = d2 = 1/6 with value 3/4.
double alice_symmetrized_bound(double delta1, double delta2);

/// Executable strategy achieving alice_symmetrized_bound: commit a
/// purification of the diagonal state, learn Bob's coin, rotate the
/// purification onto the honest branch that wins, and open honestly.
Attack alice_symmetrized_attack(const ProtocolSpec& spec, double delta1 = 1.0 / 6.0,
                                double delta2 = 1.0 / 6.0, int target = 0);

struct Eq2Optimum {
  double delta1 = 0.0;
  double delta2 = 0.0;
  double value = 0.0;
  double grid_step = 0.0;
};

/// Maximize alice_symmetrized_bound over the probability simplex: full grid
/// sweep at `grid_step`, then shrinking local grids down to ~1e-9.
Eq2Optimum optimize_eq2(double grid_step = 1e-3);

} // namespace coinflip
