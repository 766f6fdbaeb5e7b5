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
#include <string>
#include <vector>

#include "coinflip/protocol.hpp"
#include "coinflip/rng.hpp"

namespace coinflip {

/// One side of a commit family: Alice, holding coin value b, draws an index
/// x with probability `prior[x]` and sends `states[x]`.
struct FamilyBranch {
  std::vector<double> prior;
  std::vector<StateVector> states;
};

/// A two-branch family of message states over C^dim. The coin itself is
/// uniform; the prior weights the index choice within each branch.
struct FamilySpec {
  Index dim = 2;
  std::array<FamilyBranch, 2> branches;
};

/// Throws InvariantError unless dimensions agree, every state is unit norm,
/// and each branch prior is a probability vector (sum 1 within 1e-12).
void check_family(const FamilySpec& spec);

/// Optimal cheat probabilities for the fixed commit-reveal template built on
/// a family. Bob's best play discriminates the two mixtures; Alice's keeps a
/// purification and steers it toward the branch she wants to open.
struct FamilyReport {
  DensityMatrix rho0;
  DensityMatrix rho1;
  double bob_success = 0.0;   // 1/2 + T(rho0, rho1)/4
  double alice_success = 0.0; // 1/2 + sqrt(F(rho0, rho1))/2
  double max_bias = 0.0;      // max(successes) - 1/2, always >= 1/4
};

FamilyReport analyze_family(const FamilySpec& spec);

/// Which party's cheat certifies bias >= 1/4 for a given family: Alice when
/// F(rho0, rho1) >= 1/4 (her certificate is sqrt(F)/2), Bob otherwise (his
/// is (1 - sqrt(F))/2, a lower bound on T/4). Both certificates are
/// reported; `certificate` repeats the witness's value.
struct RestrictedBoundCheck {
  double max_bias = 0.0;
  Party witness = Party::Alice;
  double certificate = 0.0;
  double alice_certificate = 0.0;
  double bob_certificate = 0.0;
};

RestrictedBoundCheck restricted_bound_check(const FamilySpec& spec);

/// The built-in qutrit family: uniform priors over (|0> +- |1>)/sqrt(2) for
/// coin 0 and (|0> +- |2>)/sqrt(2) for coin 1.
FamilySpec section3_family();

/// Random family with Haar-like states, message dimension in [2, 5], at most
/// four states per branch, and priors bounded away from zero.
FamilySpec random_family(Rng& rng);
FamilySpec random_family_from_seed(std::uint64_t seed);

/// Overlap |<psi0|(U x I)psi1>| of the two canonical purifications
/// psi_b = sum_x sqrt(prior_b(x)) |x>|phi_{b,x}> after rotating psi1's index
/// register with the alignment unitary. Equals sqrt(F(rho0, rho1)), so
/// (1 + overlap)/2 reproduces alice_success.
double alice_construction_overlap(const FamilySpec& spec);

/// Purified protocol for a family, in the same six-register shape as the
/// built-in protocol: Alice commits with the message register, Bob replies
/// with his coin, Alice reveals (index, coin copy) and Bob verifies the
/// message against the named state. The index register is padded to the
/// larger branch size.
ProtocolSpec to_protocol_spec(const FamilySpec& spec);

/// JSON form: {"dim": d, "branches": [{"prior": [...],
/// "states": [[[re,im],...], ...]}, {...}]}.
FamilySpec family_from_json_text(const std::string& text);
FamilySpec load_family_file(const std::string& path);
std::string family_to_json_text(const FamilySpec& spec);

} // namespace coinflip
