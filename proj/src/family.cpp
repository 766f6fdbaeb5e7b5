/*
 * This code is part of coinflip-lab.
 *
 * (C) Copyright 2026, coinflip-lab contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "coinflip/family.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "coinflip/json_io.hpp"
#include "coinflip/qdist.hpp"
#include "coinflip/random.hpp"

namespace coinflip {

void check_family(const FamilySpec& spec) {
  if (spec.dim < 1) {
    throw InvariantError("message dimension must be positive");
  }
  for (const FamilyBranch& branch : spec.branches) {
    if (branch.states.empty() || branch.prior.size() != branch.states.size()) {
      throw InvariantError("each branch needs one prior weight per state");
    }
    double mass = 0.0;
    for (double p : branch.prior) {
      if (p < 0.0) {
        throw InvariantError("prior weights must be nonnegative");
      }
      mass += p;
    }
    if (std::abs(mass - 1.0) > 1e-12) {
      throw InvariantError("branch prior must sum to 1");
    }
    for (const StateVector& s : branch.states) {
      if (s.dim() != spec.dim) {
        throw InvariantError("state dimension does not match the family");
      }
      if (std::abs(s.norm() - 1.0) > tol::invariant) {
        throw InvariantError("family states must be unit vectors");
      }
    }
  }
}

namespace {

DensityMatrix branch_mixture(const FamilyBranch& branch, Index dim) {
  Matrix rho = Matrix::Zero(dim, dim);
  for (size_t x = 0; x < branch.states.size(); ++x) {
    rho += branch.prior[x] * (branch.states[x].v * branch.states[x].v.adjoint());
  }
  return DensityMatrix::from_operator(Operator(std::move(rho)));
}

} // namespace

FamilyReport analyze_family(const FamilySpec& spec) {
  check_family(spec);
  FamilyReport report{branch_mixture(spec.branches[0], spec.dim),
                      branch_mixture(spec.branches[1], spec.dim),
                      0.0,
                      0.0,
                      0.0};
  const double t = trace_distance(report.rho0, report.rho1);
  const double f = fidelity(report.rho0, report.rho1);
  report.bob_success = 0.5 + t / 4.0;
  report.alice_success = 0.5 + std::sqrt(f) / 2.0;
  report.max_bias = std::max(report.bob_success, report.alice_success) - 0.5;
  if (report.max_bias < 0.25 - 1e-9) {
    throw InvariantError("bias fell below 1/4; distance computations are inconsistent");
  }
  return report;
}

RestrictedBoundCheck restricted_bound_check(const FamilySpec& spec) {
  const FamilyReport report = analyze_family(spec);
  const double root_f = 2.0 * (report.alice_success - 0.5);

  RestrictedBoundCheck check;
  check.max_bias = report.max_bias;
  check.alice_certificate = root_f / 2.0;
  check.bob_certificate = (1.0 - root_f) / 2.0;
  if (root_f * root_f >= 0.25 - 1e-12) {
    check.witness = Party::Alice;
    check.certificate = check.alice_certificate;
  } else {
    check.witness = Party::Bob;
    check.certificate = check.bob_certificate;
  }
  return check;
}

FamilySpec section3_family() {
  FamilySpec spec;
  spec.dim = 3;
  for (int b = 0; b < 2; ++b) {
    spec.branches[b].prior = {0.5, 0.5};
    spec.branches[b].states = {section3_message_state(b, 0),
                               section3_message_state(b, 1)};
  }
  return spec;
}

FamilySpec random_family(Rng& rng) {
  FamilySpec spec;
  spec.dim = 2 + static_cast<Index>(rng.next_u64() % 4);
  for (int b = 0; b < 2; ++b) {
    const Index count = 1 + static_cast<Index>(rng.next_u64() % 4);
    spec.branches[b].prior = random_prior(count, rng);
    for (Index x = 0; x < count; ++x) {
      spec.branches[b].states.push_back(random_state_vector(spec.dim, rng));
    }
  }
  return spec;
}

FamilySpec random_family_from_seed(std::uint64_t seed) {
  Rng rng(seed);
  return random_family(rng);
}

namespace {

Index padded_index_dim(const FamilySpec& spec) {
  return static_cast<Index>(
      std::max(spec.branches[0].states.size(), spec.branches[1].states.size()));
}

// Canonical purification of branch b on (index, message).
StateVector branch_purification(const FamilySpec& spec, int b, Index index_dim) {
  const FamilyBranch& branch = spec.branches[static_cast<size_t>(b)];
  Vector psi = Vector::Zero(index_dim * spec.dim);
  for (size_t x = 0; x < branch.states.size(); ++x) {
    psi.segment(static_cast<Index>(x) * spec.dim, spec.dim) +=
        std::sqrt(branch.prior[x]) * branch.states[x].v;
  }
  return StateVector(std::move(psi));
}

} // namespace

double alice_construction_overlap(const FamilySpec& spec) {
  check_family(spec);
  const Index n = padded_index_dim(spec);
  const SubsystemLayout layout({{n, Party::Alice}, {spec.dim, Party::Bob}});
  const StateVector psi0 = branch_purification(spec, 0, n);
  const StateVector psi1 = branch_purification(spec, 1, n);
  const Operator u = purification_alignment(psi0, psi1, layout, Party::Alice);
  const Operator embedded = embed_operator(u, layout.dims(), {0});
  return std::abs(psi0.v.dot(embedded.m * psi1.v));
}

ProtocolSpec to_protocol_spec(const FamilySpec& spec) {
  check_family(spec);
  const Index n = padded_index_dim(spec);
  const Index d = spec.dim;

  const SubsystemLayout layout({{2, Party::Alice},
                                {n, Party::Alice},
                                {d, Party::Alice},
                                {2, Party::Alice},
                                {2, Party::Bob},
                                {2, Party::Bob}});
  const StateVector initial = StateVector::basis(layout.total_dim(), 0);

  // Round 1: build the coin-indexed commit superposition from |000> on
  // (coin, index, message), leave the coin-copy register alone.
  Vector omega = Vector::Zero(2 * n * d);
  for (int b = 0; b < 2; ++b) {
    const FamilyBranch& branch = spec.branches[static_cast<size_t>(b)];
    for (size_t x = 0; x < branch.states.size(); ++x) {
      omega.segment((b * n + static_cast<Index>(x)) * d, d) +=
          std::sqrt(0.5 * branch.prior[x]) * branch.states[x].v;
    }
  }
  const Operator commit = unitary_with_first_column(StateVector(std::move(omega)));
  const std::vector<Index> alice_start_dims{2, n, d, 2};
  Round round1{Party::Alice, embed_operator(commit, alice_start_dims, {0, 1, 2}),
               {ProtocolSpec::kMessage}};

  // Round 2: Bob flips his coin and copies it into the register he sends.
  const std::vector<Index> bob_dims{d, 2, 2};
  Round round2{Party::Bob,
               Operator(embed_operator(cnot(), bob_dims, {1, 2}).m *
                        embed_operator(hadamard(), bob_dims, {1}).m),
               {ProtocolSpec::kCoinCopyB}};

  // Round 3: Alice copies her coin and reveals (index, coin copy).
  const std::vector<Index> alice_open_dims{2, n, 2, 2};
  Round round3{Party::Alice, embed_operator(cnot(), alice_open_dims, {0, 2}),
               {ProtocolSpec::kIndexA, ProtocolSpec::kCoinCopyA}};

  // Alice ends with (her coin, Bob's coin copy) and reads their parity.
  Matrix a0 = Matrix::Zero(4, 4);
  a0(0, 0) = 1.0;
  a0(3, 3) = 1.0;
  const FinalMeasurement alice_final{Operator(a0),
                                     Operator((Matrix::Identity(4, 4) - a0).eval()),
                                     Operator::zero(4)};

  // Bob ends with (index, message, Alice's coin copy, his coin); he accepts
  // exactly the named state for the revealed pair and reads the coin parity.
  const Index bob_final_dim = n * d * 2 * 2;
  std::array<Matrix, 2> accept{Matrix::Zero(bob_final_dim, bob_final_dim),
                               Matrix::Zero(bob_final_dim, bob_final_dim)};
  for (int b = 0; b < 2; ++b) {
    const FamilyBranch& branch = spec.branches[static_cast<size_t>(b)];
    for (size_t x = 0; x < branch.states.size(); ++x) {
      Matrix sel_x = Matrix::Zero(n, n);
      sel_x(static_cast<Index>(x), static_cast<Index>(x)) = 1.0;
      const Matrix message_check =
          branch.states[x].v * branch.states[x].v.adjoint();
      for (int bp = 0; bp < 2; ++bp) {
        Matrix sel_b = Matrix::Zero(2, 2);
        sel_b(b, b) = 1.0;
        Matrix sel_bp = Matrix::Zero(2, 2);
        sel_bp(bp, bp) = 1.0;
        accept[static_cast<size_t>(b ^ bp)] +=
            tensor_product(Operator(sel_x),
                           tensor_product(Operator(message_check),
                                          tensor_product(Operator(sel_b),
                                                         Operator(sel_bp))))
                .m;
      }
    }
  }
  const FinalMeasurement bob_final{
      Operator(accept[0]), Operator(accept[1]),
      Operator((Matrix::Identity(bob_final_dim, bob_final_dim) - accept[0] -
                accept[1])
                   .eval())};

  return ProtocolSpec(layout, initial, {round1, round2, round3}, alice_final,
                      bob_final, true);
}

//------------------------------------------------------------------------
// JSON form
//------------------------------------------------------------------------

namespace {

const nlohmann::json& family_field(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(std::string("missing field '") + key + "'");
  }
  return *it;
}

} // namespace

FamilySpec family_from_json_text(const std::string& text) {
  const nlohmann::json j = parse_json_text(text);
  if (!j.is_object()) {
    throw ParseError("family document must be a JSON object");
  }
  FamilySpec spec;
  if (!family_field(j, "dim").is_number_integer()) {
    throw ParseError("'dim' must be an integer");
  }
  spec.dim = family_field(j, "dim").get<Index>();
  const nlohmann::json& branches = family_field(j, "branches");
  if (!branches.is_array() || branches.size() != 2) {
    throw ParseError("'branches' must be an array of two entries");
  }
  for (int b = 0; b < 2; ++b) {
    const nlohmann::json& jb = branches[static_cast<size_t>(b)];
    const nlohmann::json& prior = family_field(jb, "prior");
    if (!prior.is_array()) {
      throw ParseError("'prior' must be an array");
    }
    for (const auto& p : prior) {
      if (!p.is_number()) {
        throw ParseError("prior weights must be numbers");
      }
      spec.branches[b].prior.push_back(p.get<double>());
    }
    const nlohmann::json& states = family_field(jb, "states");
    if (!states.is_array()) {
      throw ParseError("'states' must be an array");
    }
    for (const auto& s : states) {
      spec.branches[b].states.emplace_back(vector_from_json(s));
    }
  }
  check_family(spec);
  return spec;
}

FamilySpec load_family_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return family_from_json_text(buffer.str());
}

std::string family_to_json_text(const FamilySpec& spec) {
  nlohmann::ordered_json j;
  j["dim"] = spec.dim;
  j["branches"] = nlohmann::ordered_json::array();
  for (const FamilyBranch& branch : spec.branches) {
    nlohmann::ordered_json jb;
    jb["prior"] = branch.prior;
    jb["states"] = nlohmann::ordered_json::array();
    for (const StateVector& s : branch.states) {
      jb["states"].push_back(nlohmann::ordered_json(vector_to_json(s.v)));
    }
    j["branches"].push_back(std::move(jb));
  }
  return j.dump(2) + "\n";
}

} // namespace coinflip
