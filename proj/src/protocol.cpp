/*
 * This code is part of coinflip-lab.
 *
 * (C) Copyright 2026, coinflip-lab contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "coinflip/protocol.hpp"

#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

namespace coinflip {

const char* to_string(Outcome o) {
  switch (o) {
  case Outcome::Zero:
    return "0";
  case Outcome::One:
    return "1";
  default:
    return "abort";
  }
}

//------------------------------------------------------------------------
// ProtocolSpec
//------------------------------------------------------------------------

ProtocolSpec::ProtocolSpec(SubsystemLayout layout, StateVector initial,
                           std::vector<Round> rounds, FinalMeasurement alice_final,
                           FinalMeasurement bob_final, bool family_shaped)
    : initial_layout_(std::move(layout)), rounds_(std::move(rounds)),
      alice_final_(std::move(alice_final)), bob_final_(std::move(bob_final)),
      family_shaped_(family_shaped) {
  states_.push_back(std::move(initial));
  validate_and_evolve();
  if (family_shaped_) {
    check_family_shape();
  }
}

const Round& ProtocolSpec::round(int i) const {
  if (i < 1 || i > round_count()) {
    throw InvariantError("round index out of range");
  }
  return rounds_[static_cast<size_t>(i - 1)];
}

const SubsystemLayout& ProtocolSpec::layout_at(int i) const {
  if (i < 0 || i > round_count()) {
    throw InvariantError("round index out of range");
  }
  return layouts_[static_cast<size_t>(i)];
}

const StateVector& ProtocolSpec::state_after(int i) const {
  if (i < 0 || i > round_count()) {
    throw InvariantError("round index out of range");
  }
  return states_[static_cast<size_t>(i)];
}

const Operator& ProtocolSpec::embedded_unitary(int i) const {
  if (i < 1 || i > round_count()) {
    throw InvariantError("round index out of range");
  }
  return embedded_[static_cast<size_t>(i - 1)];
}

const FinalMeasurement& ProtocolSpec::final_measurement(Party p) const {
  return p == Party::Alice ? alice_final_ : bob_final_;
}

const Operator& ProtocolSpec::final_projector(Party p, Outcome o) const {
  const auto& arr = p == Party::Alice ? alice_proj_ : bob_proj_;
  return arr[static_cast<size_t>(o)];
}

double ProtocolSpec::joint_probability(Outcome a, Outcome b) const {
  return joint_prob_[static_cast<size_t>(a)][static_cast<size_t>(b)];
}

OutcomeDistribution ProtocolSpec::exact_outcome_distribution() const {
  OutcomeDistribution d;
  d.p0 = joint_probability(Outcome::Zero, Outcome::Zero);
  d.p1 = joint_probability(Outcome::One, Outcome::One);
  d.p_abort = 1.0 - d.p0 - d.p1;
  if (d.p_abort < 0.0) {
    d.p_abort = 0.0;
  }
  return d;
}

void ProtocolSpec::validate_and_evolve() {
  if (rounds_.empty()) {
    throw InvariantError("protocol needs at least one round");
  }
  const StateVector& initial = states_.front();
  if (initial.dim() != initial_layout_.total_dim()) {
    throw InvariantError("initial state dimension does not match the layout");
  }
  if (std::abs(initial.norm() - 1.0) > tol::invariant) {
    throw InvariantError("initial state must have unit norm");
  }

  // Product start: the cross-party coefficient matrix must be rank one.
  if (initial_layout_.party_dim(Party::Alice) > 1 &&
      initial_layout_.party_dim(Party::Bob) > 1) {
    const Matrix c = party_coefficient_matrix(initial, initial_layout_, Party::Alice);
    Eigen::JacobiSVD<Matrix> svd(c);
    if (svd.singularValues().size() > 1 && svd.singularValues()(1) > tol::invariant) {
      throw InvariantError("initial state must be a product of an Alice part and a "
                           "Bob part");
    }
  }

  layouts_.push_back(initial_layout_);
  const std::vector<Index> dims = initial_layout_.dims();
  for (size_t r = 0; r < rounds_.size(); ++r) {
    const Round& round = rounds_[r];
    const SubsystemLayout& current = layouts_.back();
    const std::vector<Index> sender_pos = current.positions(round.sender);
    if (round.unitary.dim() != current.party_dim(round.sender)) {
      throw InvariantError("round " + std::to_string(r + 1) +
                           ": unitary dimension does not match the sender's registers");
    }
    if (!round.unitary.is_unitary()) {
      throw InvariantError("round " + std::to_string(r + 1) + ": matrix is not unitary");
    }
    embedded_.push_back(embed_operator(round.unitary, dims, sender_pos));
    states_.push_back(StateVector(embedded_.back().m * states_.back().v));

    SubsystemLayout next = current;
    for (Index t : round.transfer) {
      if (t < 0 || t >= current.count() || current.owner(t) != round.sender) {
        throw InvariantError("round " + std::to_string(r + 1) +
                             ": transfer of a register the sender does not own");
      }
      next = next.with_owner(t, other(round.sender));
    }
    layouts_.push_back(std::move(next));
  }

  // Final measurements: validate each party's partition on its own
  // registers, then embed.
  const SubsystemLayout& final_layout = layouts_.back();
  for (Party p : {Party::Alice, Party::Bob}) {
    const FinalMeasurement& fm = final_measurement(p);
    validate_projector_partition({fm.outcome0, fm.outcome1, fm.abort});
    if (fm.outcome0.dim() != final_layout.party_dim(p)) {
      throw InvariantError("final projectors do not match the party's final registers");
    }
    auto& embedded = p == Party::Alice ? alice_proj_ : bob_proj_;
    const std::vector<Index> pos = final_layout.positions(p);
    embedded[0] = embed_operator(fm.outcome0, dims, pos);
    embedded[1] = embed_operator(fm.outcome1, dims, pos);
    embedded[2] = embed_operator(fm.abort, dims, pos);
  }

  // Joint verdict distribution on the honest final state. The two parties
  // measure disjoint registers, so the projectors commute and the joint
  // probabilities are plain squared norms.
  const StateVector& final_state = states_.back();
  for (size_t a = 0; a < 3; ++a) {
    for (size_t b = 0; b < 3; ++b) {
      const Vector v = alice_proj_[a].m * (bob_proj_[b].m * final_state.v);
      joint_prob_[a][b] = v.squaredNorm();
    }
  }

  // Honest verdicts must agree: conflicting 0/1 assignments may carry no
  // more than rounding-level amplitude.
  const double disagree01 = std::sqrt(joint_prob_[0][1]);
  const double disagree10 = std::sqrt(joint_prob_[1][0]);
  if (disagree01 > tol::invariant || disagree10 > tol::invariant) {
    throw InvariantError("honest run lets the parties disagree on the outcome "
                         "(amplitude " +
                         std::to_string(std::max(disagree01, disagree10)) + ")");
  }
}

void ProtocolSpec::check_family_shape() const {
  const auto fail = [](const std::string& why) {
    throw InvariantError("spec is not family-shaped: " + why);
  };
  if (initial_layout_.count() != 6) {
    fail("expected 6 registers");
  }
  for (Index i = 0; i <= kCoinCopyA; ++i) {
    if (initial_layout_.owner(i) != Party::Alice) {
      fail("registers 0..3 must start with alice");
    }
  }
  if (initial_layout_.owner(kCoinB) != Party::Bob ||
      initial_layout_.owner(kCoinCopyB) != Party::Bob) {
    fail("registers 4..5 must start with bob");
  }
  if (round_count() != 3) {
    fail("expected 3 rounds");
  }
  if (rounds_[0].sender != Party::Alice || rounds_[0].transfer != std::vector<Index>{kMessage}) {
    fail("round 1 must send the message register");
  }
  if (rounds_[1].sender != Party::Bob ||
      rounds_[1].transfer != std::vector<Index>{kCoinCopyB}) {
    fail("round 2 must send bob's coin copy");
  }
  if (rounds_[2].sender != Party::Alice ||
      rounds_[2].transfer != std::vector<Index>{kIndexA, kCoinCopyA}) {
    fail("round 3 must open the commitment");
  }
}

//------------------------------------------------------------------------
// Honest execution
//------------------------------------------------------------------------

namespace {

Outcome joint_to_outcome(size_t a, size_t b) {
  if (a == 2 || b == 2 || a != b) {
    return Outcome::Abort;
  }
  return a == 0 ? Outcome::Zero : Outcome::One;
}

Outcome sample_joint(const ProtocolSpec& spec, double u) {
  double acc = 0.0;
  for (size_t a = 0; a < 3; ++a) {
    for (size_t b = 0; b < 3; ++b) {
      acc += spec.joint_probability(static_cast<Outcome>(a), static_cast<Outcome>(b));
      if (u < acc) {
        return joint_to_outcome(a, b);
      }
    }
  }
  return Outcome::Abort;
}

} // namespace

Outcome honest_run(const ProtocolSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  return sample_joint(spec, rng.uniform());
}

TrialCounts run_honest_trials(const ProtocolSpec& spec, long long trials,
                              std::uint64_t seed) {
  if (trials < 1) {
    throw InvariantError("trial count must be positive");
  }
  TrialCounts counts;
  for (long long t = 0; t < trials; ++t) {
    Rng rng = Rng::for_trial(seed, static_cast<std::uint64_t>(t));
    switch (sample_joint(spec, rng.uniform())) {
    case Outcome::Zero:
      ++counts.n0;
      break;
    case Outcome::One:
      ++counts.n1;
      break;
    case Outcome::Abort:
      ++counts.n_abort;
      break;
    }
  }
  return counts;
}

BranchDecomposition branch_states(const ProtocolSpec& spec) {
  const OutcomeDistribution dist = spec.exact_outcome_distribution();
  if (dist.p_abort > tol::invariant) {
    throw InvariantError("branch decomposition needs zero honest abort probability, got " +
                         std::to_string(dist.p_abort));
  }

  const int k = spec.round_count();
  BranchDecomposition out;
  out.branch.resize(static_cast<size_t>(k) + 1);

  for (int c = 0; c < 2; ++c) {
    const Outcome oc = c == 0 ? Outcome::Zero : Outcome::One;
    Vector v = spec.final_projector(Party::Alice, oc).m *
               (spec.final_projector(Party::Bob, oc).m * spec.final_state().v);
    if (std::abs(v.squaredNorm() - 0.5) > tol::invariant) {
      throw InvariantError("protocol is not fair: honest outcome " +
                           std::string(to_string(oc)) + " has probability " +
                           std::to_string(v.squaredNorm()));
    }
    out.branch[static_cast<size_t>(k)][static_cast<size_t>(c)] = StateVector(v);
    for (int i = k; i-- > 0;) {
      v = spec.embedded_unitary(i + 1).m.adjoint() * v;
      out.branch[static_cast<size_t>(i)][static_cast<size_t>(c)] = StateVector(v);
    }
  }
  return out;
}

//------------------------------------------------------------------------
// Built-in protocol
//------------------------------------------------------------------------

StateVector section3_message_state(int b, int x) {
  if ((b != 0 && b != 1) || (x != 0 && x != 1)) {
    throw InvariantError("message state labels must be bits");
  }
  Vector v = Vector::Zero(3);
  const double s = 1.0 / std::sqrt(2.0);
  v(0) = s;
  v(b == 0 ? 1 : 2) = x == 0 ? s : -s;
  return StateVector(std::move(v));
}

ProtocolSpec section3_spec() {
  SubsystemLayout layout({{2, Party::Alice},  // coin b
                          {2, Party::Alice},  // branch index x
                          {3, Party::Alice},  // message
                          {2, Party::Alice},  // copy of b, opened in round 3
                          {2, Party::Bob},    // coin b'
                          {2, Party::Bob}});  // copy of b', sent in round 2

  const StateVector initial = StateVector::basis(layout.total_dim(), 0);

  // Round 1: put (b, x) into uniform superposition and load the matching
  // message state, controlled on both coins.
  const std::vector<Index> alice_dims{2, 2, 3, 2};
  Matrix prep = Matrix::Zero(12, 12);
  for (int b = 0; b < 2; ++b) {
    for (int x = 0; x < 2; ++x) {
      Matrix sel = Matrix::Zero(2, 2);
      sel(b, b) = 1.0;
      Matrix selx = Matrix::Zero(2, 2);
      selx(x, x) = 1.0;
      const Operator load = unitary_with_first_column(section3_message_state(b, x));
      prep += Eigen::kroneckerProduct(sel, Eigen::kroneckerProduct(selx, load.m).eval())
                  .eval();
    }
  }
  const Matrix coin_spread = embed_operator(hadamard(), alice_dims, {0}).m *
                             embed_operator(hadamard(), alice_dims, {1}).m;
  Round round1{Party::Alice,
               Operator(embed_operator(Operator(prep), alice_dims, {0, 1, 2}).m *
                        coin_spread),
               {ProtocolSpec::kMessage}};

  // Round 2: Bob flips his coin in superposition and copies it onto the
  // qubit he sends back. His registers here are (message, b', copy of b').
  const Matrix flip_and_copy =
      cnot().m *
      Eigen::kroneckerProduct(hadamard().m, Matrix::Identity(2, 2)).eval();
  Round round2{Party::Bob,
               embed_operator(Operator(flip_and_copy), {3, 2, 2}, {1, 2}),
               {ProtocolSpec::kCoinCopyB}};

  // Round 3: Alice copies b onto the opening register and sends it together
  // with x. Her registers at this point are {0, 1, 3, 5}.
  Round round3{Party::Alice, embed_operator(cnot(), {2, 2, 2, 2}, {0, 2}),
               {ProtocolSpec::kIndexA, ProtocolSpec::kCoinCopyA}};

  // Alice ends with {0, 5} = (b, copy of b'): outcome is their XOR.
  Matrix axor0 = Matrix::Zero(4, 4);
  axor0(0, 0) = 1.0;
  axor0(3, 3) = 1.0;
  FinalMeasurement alice_final{Operator(axor0),
                               Operator(Matrix::Identity(4, 4) - axor0),
                               Operator::zero(4)};

  // Bob ends with {1, 2, 3, 4} = (x, message, b, b'): accept when the
  // message matches the opened (b, x) and report b xor b'.
  const std::vector<Index> bob_dims{2, 3, 2, 2};
  std::array<Matrix, 2> bacc{Matrix::Zero(24, 24), Matrix::Zero(24, 24)};
  for (int b = 0; b < 2; ++b) {
    for (int x = 0; x < 2; ++x) {
      for (int bp = 0; bp < 2; ++bp) {
        const Vector phi = section3_message_state(b, x).v;
        Matrix selx = Matrix::Zero(2, 2);
        selx(x, x) = 1.0;
        Matrix selb = Matrix::Zero(2, 2);
        selb(b, b) = 1.0;
        Matrix selbp = Matrix::Zero(2, 2);
        selbp(bp, bp) = 1.0;
        Matrix piece =
            Eigen::kroneckerProduct(
                selx, Eigen::kroneckerProduct(
                          (phi * phi.adjoint()).eval(),
                          Eigen::kroneckerProduct(selb, selbp).eval())
                          .eval())
                .eval();
        bacc[static_cast<size_t>(b ^ bp)] += piece;
      }
    }
  }
  FinalMeasurement bob_final{
      Operator(bacc[0]), Operator(bacc[1]),
      Operator(Matrix::Identity(24, 24) - bacc[0] - bacc[1])};

  return ProtocolSpec(std::move(layout), initial,
                      {std::move(round1), std::move(round2), std::move(round3)},
                      std::move(alice_final), std::move(bob_final),
                      /*family_shaped=*/true);
}

} // namespace coinflip
