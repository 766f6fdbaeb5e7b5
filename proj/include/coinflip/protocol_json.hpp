/*
 * This code is part of coinflip-lab.
 *
 * (C) Copyright 2026, coinflip-lab contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <json.hpp>

#include "coinflip/protocol.hpp"

namespace coinflip {

/// Protocol document layout:
///   subsystems: [{dim, owner}, ...]           owner in {"alice", "bob"}
///   initial:    {"basis": i} | {"amplitudes": [[re,im], ...]}
///               | {"product": [per-register amplitude lists]}
///   rounds:     [{sender, unitary, transfer: [indices]}, ...] where unitary
///               is {"matrix": rows} on the sender's registers (ascending) or
///               {"compose": [{gate, on: [global indices], matrix?}, ...]}
///               with gates H, X, CNOT, matrix, applied in list order
///   final:      {alice: {outcome0, outcome1, abort}, bob: {...}} as
///               matrices on each party's final registers (ascending)
///   shape:      optional "family" marker for the canonical 3-round layout
ProtocolSpec protocol_from_json(const nlohmann::json& j);
nlohmann::json protocol_to_json(const ProtocolSpec& spec);
ProtocolSpec load_protocol_file(const std::string& path);

} // namespace coinflip
