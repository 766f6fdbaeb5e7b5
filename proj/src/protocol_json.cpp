/*
 * This code is part of coinflip-lab.
 *
 * (C) Copyright 2026, coinflip-lab contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "coinflip/protocol_json.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "coinflip/json_io.hpp"

namespace coinflip {

using nlohmann::json;

//------------------------------------------------------------------------
// Shared JSON primitives
//------------------------------------------------------------------------

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError("complex number must be a [re, im] pair");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

Vector vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw ParseError("vector must be a nonempty array");
  }
  Vector v(static_cast<Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Index>(i)) = complex_from_json(j[i]);
  }
  return v;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw ParseError("matrix must be a nonempty array of rows");
  }
  const size_t rows = j.size();
  const size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) {
    throw ParseError("matrix rows must be nonempty arrays");
  }
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw ParseError("matrix rows must all have the same length");
    }
    for (size_t c = 0; c < cols; ++c) {
      m(static_cast<Index>(r), static_cast<Index>(c)) = complex_from_json(j[r][c]);
    }
  }
  return m;
}

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) {
    out.push_back(complex_to_json(v(i)));
  }
  return out;
}

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) {
      row.push_back(complex_to_json(m(r, c)));
    }
    out.push_back(std::move(row));
  }
  return out;
}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str());
}

//------------------------------------------------------------------------
// Protocol documents
//------------------------------------------------------------------------

namespace {

const json& require_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(std::string("missing field '") + key + "'");
  }
  return *it;
}

StateVector parse_initial(const json& j, const SubsystemLayout& layout) {
  if (j.contains("basis")) {
    return StateVector::basis(layout.total_dim(), j["basis"].get<Index>());
  }
  if (j.contains("amplitudes")) {
    return StateVector(vector_from_json(j["amplitudes"]));
  }
  if (j.contains("product")) {
    const json& parts = j["product"];
    if (!parts.is_array() || static_cast<Index>(parts.size()) != layout.count()) {
      throw ParseError("'product' needs one amplitude list per register");
    }
    StateVector state(Vector::Ones(1));
    for (const auto& part : parts) {
      state = tensor_product(state, StateVector(vector_from_json(part)));
    }
    return state;
  }
  throw ParseError("initial state needs 'basis', 'amplitudes', or 'product'");
}

Operator single_gate(const std::string& name, const json& spec) {
  if (name == "H") {
    return hadamard();
  }
  if (name == "X") {
    return pauli_x();
  }
  if (name == "CNOT") {
    return cnot();
  }
  if (name == "matrix") {
    return Operator(matrix_from_json(require_field(spec, "matrix")));
  }
  throw ParseError("unknown gate '" + name + "'");
}

Operator parse_round_unitary(const json& j, const SubsystemLayout& current, Party sender) {
  if (j.contains("matrix")) {
    return Operator(matrix_from_json(j["matrix"]));
  }
  if (!j.contains("compose")) {
    throw ParseError("round unitary needs 'matrix' or 'compose'");
  }

  const std::vector<Index> sender_pos = current.positions(sender);
  std::vector<Index> sender_dims;
  for (Index p : sender_pos) {
    sender_dims.push_back(current.dim(p));
  }
  Index dim = 1;
  for (Index d : sender_dims) {
    dim *= d;
  }

  Matrix acc = Matrix::Identity(dim, dim);
  for (const auto& step : j["compose"]) {
    const std::string name = require_field(step, "gate").get<std::string>();
    const json& on = require_field(step, "on");
    std::vector<Index> local;
    for (const auto& g : on) {
      const Index global = g.get<Index>();
      const auto it = std::find(sender_pos.begin(), sender_pos.end(), global);
      if (it == sender_pos.end()) {
        throw InvariantError("compose gate targets register " + std::to_string(global) +
                             " which the sender does not own at that round");
      }
      local.push_back(static_cast<Index>(it - sender_pos.begin()));
    }
    const Operator gate = single_gate(name, step);
    acc = embed_operator(gate, sender_dims, local).m * acc;
  }
  return Operator(std::move(acc));
}

FinalMeasurement parse_final(const json& j) {
  return FinalMeasurement{Operator(matrix_from_json(require_field(j, "outcome0"))),
                          Operator(matrix_from_json(require_field(j, "outcome1"))),
                          Operator(matrix_from_json(require_field(j, "abort")))};
}

} // namespace

ProtocolSpec protocol_from_json(const json& j) {
  if (!j.is_object()) {
    throw ParseError("protocol document must be a JSON object");
  }

  std::vector<Subsystem> subs;
  for (const auto& s : require_field(j, "subsystems")) {
    subs.push_back(Subsystem{require_field(s, "dim").get<Index>(),
                             party_from_string(require_field(s, "owner").get<std::string>())});
  }
  SubsystemLayout layout(std::move(subs));

  StateVector initial = parse_initial(require_field(j, "initial"), layout);

  std::vector<Round> rounds;
  SubsystemLayout current = layout;
  for (const auto& r : require_field(j, "rounds")) {
    const Party sender = party_from_string(require_field(r, "sender").get<std::string>());
    Round round{sender, parse_round_unitary(require_field(r, "unitary"), current, sender), {}};
    for (const auto& t : require_field(r, "transfer")) {
      round.transfer.push_back(t.get<Index>());
      if (round.transfer.back() < 0 || round.transfer.back() >= current.count()) {
        throw ParseError("transfer index out of range");
      }
      current = current.with_owner(round.transfer.back(), other(sender));
    }
    rounds.push_back(std::move(round));
  }

  const json& fin = require_field(j, "final");
  FinalMeasurement alice_final = parse_final(require_field(fin, "alice"));
  FinalMeasurement bob_final = parse_final(require_field(fin, "bob"));

  const bool family = j.contains("shape") && j["shape"].get<std::string>() == "family";

  return ProtocolSpec(std::move(layout), std::move(initial), std::move(rounds),
                      std::move(alice_final), std::move(bob_final), family);
}

json protocol_to_json(const ProtocolSpec& spec) {
  json j = json::object();
  if (spec.family_shaped()) {
    j["shape"] = "family";
  }

  json subs = json::array();
  const SubsystemLayout& layout = spec.layout_at(0);
  for (Index i = 0; i < layout.count(); ++i) {
    subs.push_back({{"dim", layout.dim(i)}, {"owner", to_string(layout.owner(i))}});
  }
  j["subsystems"] = std::move(subs);
  j["initial"] = {{"amplitudes", vector_to_json(spec.initial_state().v)}};

  json rounds = json::array();
  for (int i = 1; i <= spec.round_count(); ++i) {
    const Round& r = spec.round(i);
    json rj = {{"sender", to_string(r.sender)},
               {"unitary", {{"matrix", matrix_to_json(r.unitary.m)}}},
               {"transfer", r.transfer}};
    rounds.push_back(std::move(rj));
  }
  j["rounds"] = std::move(rounds);

  const auto fm_json = [](const FinalMeasurement& fm) {
    return json{{"outcome0", matrix_to_json(fm.outcome0.m)},
                {"outcome1", matrix_to_json(fm.outcome1.m)},
                {"abort", matrix_to_json(fm.abort.m)}};
  };
  j["final"] = {{"alice", fm_json(spec.final_measurement(Party::Alice))},
                {"bob", fm_json(spec.final_measurement(Party::Bob))}};
  return j;
}

ProtocolSpec load_protocol_file(const std::string& path) {
  return protocol_from_json(load_json_file(path));
}

} // namespace coinflip
