/*
 * This code is part of coinflip-lab.
 *
 * (C) Copyright 2026, coinflip-lab contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "coinflip/qmatrix.hpp"

namespace coinflip {

enum class Outcome { Zero = 0, One = 1, Abort = 2 };
const char* to_string(Outcome o);

/// One communication round: the sender applies a unitary to the registers it
/// currently owns, then hands the `transfer` registers to the other party.
/// The unitary is given on the sender's registers in ascending position
/// order; it is embedded into the full space when the round runs.
struct Round {
  Party sender;
  Operator unitary;
  std::vector<Index> transfer;
};

/// Final projective measurement of one party, given on that party's
/// end-of-protocol registers in ascending position order. The three
/// operators must form a complete orthogonal partition.
struct FinalMeasurement {
  Operator outcome0;
  Operator outcome1;
  Operator abort;
};

struct OutcomeDistribution {
  double p0 = 0.0;
  double p1 = 0.0;
  double p_abort = 0.0;
};

/// A coin-flipping protocol in standard form: a product start, unitary
/// rounds with register transfers, and measurements only at the very end.
/// Construction validates everything (unit start, product start, unitarity,
/// ownership discipline, projector partitions, agreement of the two parties'
/// verdicts on the honest final state) and precomputes the honest evolution,
/// so instances are immutable and cheap to query.
class ProtocolSpec {
public:
  ProtocolSpec(SubsystemLayout layout, StateVector initial, std::vector<Round> rounds,
               FinalMeasurement alice_final, FinalMeasurement bob_final,
               bool family_shaped = false);

  int round_count() const { return static_cast<int>(rounds_.size()); }
  const Round& round(int i) const; // i = 1..k
  /// Ownership after round i (i = 0 is the initial layout).
  const SubsystemLayout& layout_at(int i) const;
  /// Honest state after round i (i = 0 is the initial state).
  const StateVector& state_after(int i) const;
  const StateVector& initial_state() const { return states_.front(); }
  const StateVector& final_state() const { return states_.back(); }
  /// Round unitary expanded to the full space, i = 1..k.
  const Operator& embedded_unitary(int i) const;
  const FinalMeasurement& final_measurement(Party p) const;
  /// Party p's final projector for `o`, expanded to the full space.
  const Operator& final_projector(Party p, Outcome o) const;

  /// Probability that both parties report joint outcome (a, b) on an honest
  /// run; indices follow Outcome.
  double joint_probability(Outcome a, Outcome b) const;
  OutcomeDistribution exact_outcome_distribution() const;

  /// True for specs with the canonical three-round message/commit structure
  /// used by the built-in protocol and the state-family exports. Attack
  /// builders that need to know where the coin registers live require it.
  bool family_shaped() const { return family_shaped_; }

  // Canonical register positions of family-shaped specs.
  static constexpr Index kCoinA = 0;     // Alice's coin b
  static constexpr Index kIndexA = 1;    // Alice's branch index x
  static constexpr Index kMessage = 2;   // message register, sent in round 1
  static constexpr Index kCoinCopyA = 3; // copy of b, sent in round 3
  static constexpr Index kCoinB = 4;     // Bob's coin b'
  static constexpr Index kCoinCopyB = 5; // copy of b', sent in round 2

private:
  void validate_and_evolve();
  void check_family_shape() const;

  SubsystemLayout initial_layout_;
  std::vector<Round> rounds_;
  FinalMeasurement alice_final_;
  FinalMeasurement bob_final_;
  bool family_shaped_;

  std::vector<SubsystemLayout> layouts_;   // after round i
  std::vector<StateVector> states_;        // honest state after round i
  std::vector<Operator> embedded_;         // embedded round unitaries
  std::array<Operator, 3> alice_proj_;     // embedded final projectors
  std::array<Operator, 3> bob_proj_;
  std::array<std::array<double, 3>, 3> joint_prob_;
};

/// Sample one honest execution. The unitary part of the run is
/// deterministic, so only the final joint measurement consumes randomness;
/// equal seeds give equal outcomes.
Outcome honest_run(const ProtocolSpec& spec, std::uint64_t seed);

struct TrialCounts {
  long long n0 = 0;
  long long n1 = 0;
  long long n_abort = 0;
};

/// Repeated honest runs with counter-derived per-trial randomness (trial t of
/// seed s always sees the same stream, regardless of batching).
TrialCounts run_honest_trials(const ProtocolSpec& spec, long long trials,
                              std::uint64_t seed);

/// Unnormalized outcome branches of the honest run, transported back through
/// the protocol: branch[i][c] is the state after round i that leads to
/// outcome c, with squared norm 1/2. Requires a fair spec with zero honest
/// abort probability (within 1e-9).
struct BranchDecomposition {
  std::vector<std::array<StateVector, 2>> branch; // index i = 0..k
};
BranchDecomposition branch_states(const ProtocolSpec& spec);

/// The built-in three-round qutrit protocol: a two-branch message commits
/// Alice to her coin, Bob replies with his coin, Alice opens the commitment
/// and Bob verifies the message register.
ProtocolSpec section3_spec();

/// Message states of the built-in protocol: b selects the branch pair
/// (|0>+-|1>)/sqrt(2) for b = 0 and (|0>+-|2>)/sqrt(2) for b = 1.
StateVector section3_message_state(int b, int x);

} // namespace coinflip
