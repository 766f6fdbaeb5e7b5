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

#include "coinflip/protocol.hpp"
#include "coinflip/protocol_json.hpp"

using namespace coinflip;

namespace {

// One-round toy: Alice entangles her coin with the message and sends it; both
// parties then read their register. Used as a minimal standard-form protocol.
const char* kToyProtocol = R"({
  "subsystems": [{"dim": 2, "owner": "alice"}, {"dim": 2, "owner": "alice"}],
  "initial": {"basis": 0},
  "rounds": [{
    "sender": "alice",
    "unitary": {"compose": [{"gate": "H", "on": [0]},
                            {"gate": "CNOT", "on": [0, 1]}]},
    "transfer": [1]
  }],
  "final": {
    "alice": {"outcome0": [[[1,0],[0,0]],[[0,0],[0,0]]],
              "outcome1": [[[0,0],[0,0]],[[0,0],[1,0]]],
              "abort":    [[[0,0],[0,0]],[[0,0],[0,0]]]},
    "bob":   {"outcome0": [[[1,0],[0,0]],[[0,0],[0,0]]],
              "outcome1": [[[0,0],[0,0]],[[0,0],[1,0]]],
              "abort":    [[[0,0],[0,0]],[[0,0],[0,0]]]}
  }
})";

} // namespace

TEST_CASE("built-in protocol is fair and abort-free") {
  const ProtocolSpec spec = section3_spec();
  CHECK(spec.round_count() == 3);
  CHECK(spec.family_shaped());

  const OutcomeDistribution dist = spec.exact_outcome_distribution();
  CHECK(std::abs(dist.p0 - 0.5) < 1e-9);
  CHECK(std::abs(dist.p1 - 0.5) < 1e-9);
  CHECK(dist.p_abort < 1e-9);

  CHECK(spec.joint_probability(Outcome::Zero, Outcome::One) < 1e-12);
  CHECK(spec.joint_probability(Outcome::One, Outcome::Zero) < 1e-12);
  CHECK(std::abs(spec.joint_probability(Outcome::Zero, Outcome::Zero) - 0.5) <
        1e-9);
}

TEST_CASE("message states of the built-in protocol") {
  const double s = 1.0 / std::sqrt(2.0);
  Vector expected(3);
  expected << s, -s, 0.0;
  CHECK((section3_message_state(0, 1).v - expected).norm() < 1e-12);
  expected << s, 0.0, s;
  CHECK((section3_message_state(1, 0).v - expected).norm() < 1e-12);
  CHECK_THROWS_AS(section3_message_state(2, 0), InvariantError);
}

TEST_CASE("honest runs are seed-deterministic and roughly fair") {
  const ProtocolSpec spec = section3_spec();
  CHECK(honest_run(spec, 42) == honest_run(spec, 42));

  const TrialCounts counts = run_honest_trials(spec, 2000, 5);
  CHECK(counts.n0 + counts.n1 + counts.n_abort == 2000);
  CHECK(counts.n_abort == 0);
  CHECK(std::abs(static_cast<double>(counts.n0) / 2000.0 - 0.5) < 0.05);
}

TEST_CASE("state evolution matches a manual replay") {
  const ProtocolSpec spec = section3_spec();
  Vector state = spec.initial_state().v;
  for (int r = 1; r <= spec.round_count(); ++r) {
    state = spec.embedded_unitary(r).m * state;
    CHECK((state - spec.state_after(r).v).norm() < 1e-12);
  }
  CHECK(std::abs(state.norm() - 1.0) < 1e-12);
}

TEST_CASE("layouts track transfers") {
  const ProtocolSpec spec = section3_spec();
  CHECK(spec.layout_at(0).positions(Party::Alice) ==
        std::vector<Index>{0, 1, 2, 3});
  CHECK(spec.layout_at(1).positions(Party::Alice) == std::vector<Index>{0, 1, 3});
  CHECK(spec.layout_at(2).positions(Party::Alice) ==
        std::vector<Index>{0, 1, 3, 5});
  CHECK(spec.layout_at(3).positions(Party::Alice) == std::vector<Index>{0, 5});
}

TEST_CASE("branch decomposition: weights, forward consistency, orthogonality") {
  const ProtocolSpec spec = section3_spec();
  const BranchDecomposition dec = branch_states(spec);
  const int k = spec.round_count();

  for (int i = 0; i <= k; ++i) {
    for (int c = 0; c < 2; ++c) {
      CHECK(std::abs(dec.branch[static_cast<size_t>(i)][static_cast<size_t>(c)]
                         .squared_norm() -
                     0.5) < 1e-9);
    }
  }

  // The backward-defined branches must evolve forward like the full state.
  for (int i = 1; i <= k; ++i) {
    for (int c = 0; c < 2; ++c) {
      const Vector forward =
          spec.embedded_unitary(i).m *
          dec.branch[static_cast<size_t>(i - 1)][static_cast<size_t>(c)].v;
      CHECK((forward - dec.branch[static_cast<size_t>(i)][static_cast<size_t>(c)].v)
                .norm() < 1e-9);
    }
  }

  // Final branches are perpendicular and sum to the final state.
  const Vector b0 = dec.branch[static_cast<size_t>(k)][0].v;
  const Vector b1 = dec.branch[static_cast<size_t>(k)][1].v;
  CHECK(std::abs(b0.dot(b1)) < 1e-9);
  CHECK((b0 + b1 - spec.state_after(k).v).norm() < 1e-7);
}

TEST_CASE("json round trip preserves behavior") {
  const ProtocolSpec spec = section3_spec();
  const ProtocolSpec reloaded = protocol_from_json(protocol_to_json(spec));

  CHECK(reloaded.round_count() == spec.round_count());
  CHECK(reloaded.family_shaped() == spec.family_shaped());
  const OutcomeDistribution dist = reloaded.exact_outcome_distribution();
  CHECK(std::abs(dist.p0 - 0.5) < 1e-9);
  CHECK(std::abs(dist.p_abort) < 1e-9);
  CHECK((reloaded.state_after(3).v - spec.state_after(3).v).norm() < 1e-12);
}

TEST_CASE("compose-form documents build gate by gate") {
  const ProtocolSpec toy = protocol_from_json(nlohmann::json::parse(kToyProtocol));
  CHECK(toy.round_count() == 1);

  // H then CNOT on |00> is the Bell state, so the verdicts agree and split
  // evenly.
  const OutcomeDistribution dist = toy.exact_outcome_distribution();
  CHECK(std::abs(dist.p0 - 0.5) < 1e-12);
  CHECK(std::abs(dist.p1 - 0.5) < 1e-12);
  CHECK(dist.p_abort < 1e-12);

  const double s = 1.0 / std::sqrt(2.0);
  Vector bell(4);
  bell << s, 0.0, 0.0, s;
  CHECK((toy.state_after(1).v - bell).norm() < 1e-12);
}

TEST_CASE("construction rejects malformed specs") {
  const SubsystemLayout layout({{2, Party::Alice}, {2, Party::Alice}});
  const FinalMeasurement read0{
      Operator(StateVector::basis(2, 0).v * StateVector::basis(2, 0).v.adjoint()),
      Operator(StateVector::basis(2, 1).v * StateVector::basis(2, 1).v.adjoint()),
      Operator::zero(2)};
  const Operator bell_prep =
      Operator(cnot().m * embed_operator(hadamard(), {2, 2}, {0}).m);

  // Working baseline.
  const ProtocolSpec ok(layout, StateVector::basis(4, 0),
                        {Round{Party::Alice, bell_prep, {1}}}, read0, read0);
  CHECK(ok.round_count() == 1);

  // Subnormalized start.
  CHECK_THROWS_AS(ProtocolSpec(layout, StateVector(Vector(0.5 * StateVector::basis(4, 0).v)),
                               {Round{Party::Alice, bell_prep, {1}}}, read0, read0),
                  InvariantError);

  // Entangled start.
  Vector bell(4);
  bell << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
  CHECK_THROWS_AS(ProtocolSpec(layout, StateVector(bell),
                               {Round{Party::Alice, bell_prep, {1}}}, read0, read0),
                  InvariantError);

  // Transferring a register the sender does not own.
  const SubsystemLayout split({{2, Party::Alice}, {2, Party::Bob}});
  CHECK_THROWS_AS(ProtocolSpec(split, StateVector::basis(4, 0),
                               {Round{Party::Alice, hadamard(), {1}}}, read0, read0),
                  InvariantError);

  // Non-unitary round.
  Matrix shrink = Matrix::Identity(4, 4) * 0.5;
  CHECK_THROWS_AS(ProtocolSpec(layout, StateVector::basis(4, 0),
                               {Round{Party::Alice, Operator(shrink), {1}}}, read0,
                               read0),
                  InvariantError);

  // No rounds at all.
  CHECK_THROWS_AS(ProtocolSpec(layout, StateVector::basis(4, 0), {}, read0, read0),
                  InvariantError);
}

TEST_CASE("parse errors carry the right type") {
  CHECK_THROWS_AS(protocol_from_json(nlohmann::json::parse("{}")), ParseError);
  CHECK_THROWS_AS(protocol_from_json(nlohmann::json::parse("[1, 2]")), ParseError);
}
