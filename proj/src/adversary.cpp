/*
 * This code is part of coinflip-lab.
 *
 * (C) Copyright 2026, coinflip-lab contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "coinflip/adversary.hpp"

#include <algorithm>
#include <cmath>

#include "coinflip/qdist.hpp"

namespace coinflip {

const char* to_string(AnalyticKind k) {
  switch (k) {
  case AnalyticKind::Exact:
    return "exact";
  case AnalyticKind::Floor:
    return "floor";
  default:
    return "none";
  }
}

//------------------------------------------------------------------------
// Strategy execution
//------------------------------------------------------------------------

namespace {

void check_target(int target) {
  if (target != 0 && target != 1) {
    throw InvariantError("target outcome must be 0 or 1");
  }
}

// Rebuild the full initial state with the cheater's factor replaced.
// The honest party's factor is recovered from the (rank-one) cross-party
// coefficient matrix of the protocol's own start state.
StateVector substitute_start(const ProtocolSpec& spec, Party cheater,
                             const StateVector& replacement) {
  const SubsystemLayout& layout = spec.layout_at(0);
  if (replacement.dim() != layout.party_dim(cheater)) {
    throw InvariantError("start substitution does not match the cheater's registers");
  }
  if (std::abs(replacement.norm() - 1.0) > tol::invariant) {
    throw InvariantError("start substitution must be a unit vector");
  }

  const Matrix c = party_coefficient_matrix(spec.initial_state(), layout, cheater);
  Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector honest_factor = svd.matrixV().col(0).conjugate();

  const std::vector<Index> dims = layout.dims();
  const std::vector<Index> cheat_pos = layout.positions(cheater);
  const std::vector<Index> honest_pos = layout.positions(other(cheater));
  std::vector<Index> cheat_dims, honest_dims;
  for (Index p : cheat_pos) {
    cheat_dims.push_back(layout.dim(p));
  }
  for (Index p : honest_pos) {
    honest_dims.push_back(layout.dim(p));
  }

  Vector full = Vector::Zero(layout.total_dim());
  std::vector<Index> digits(dims.size());
  for (Index kc = 0; kc < replacement.dim(); ++kc) {
    const std::vector<Index> cd = index_digits(kc, cheat_dims);
    for (Index kh = 0; kh < honest_factor.size(); ++kh) {
      const std::vector<Index> hd = index_digits(kh, honest_dims);
      for (size_t i = 0; i < cheat_pos.size(); ++i) {
        digits[static_cast<size_t>(cheat_pos[i])] = cd[i];
      }
      for (size_t i = 0; i < honest_pos.size(); ++i) {
        digits[static_cast<size_t>(honest_pos[i])] = hd[i];
      }
      full(flat_index(digits, dims)) = replacement.v(kc) * honest_factor(kh);
    }
  }
  return StateVector(std::move(full));
}

} // namespace

AttackReport simulate_attack(const ProtocolSpec& spec, const Attack& attack,
                             long long trials, std::uint64_t seed) {
  const CheatStrategy& strategy = attack.strategy;
  check_target(strategy.target_outcome);
  if (trials < 1) {
    throw InvariantError("trial count must be positive");
  }
  for (size_t i = 1; i < strategy.interventions.size(); ++i) {
    if (strategy.interventions[i].before_round <
        strategy.interventions[i - 1].before_round) {
      throw InvariantError("interventions must be ordered by round");
    }
  }

  const Party cheater = strategy.cheater;
  const Party honest = other(cheater);
  const std::vector<Index> dims = spec.layout_at(0).dims();

  Vector start = spec.initial_state().v;
  if (strategy.start_substitution) {
    start = substitute_start(spec, cheater, *strategy.start_substitution).v;
  }

  // Exact evolution of all measurement branches. Vectors stay unnormalized,
  // so a branch's squared norm is the probability of reaching it.
  std::vector<Vector> branches{std::move(start)};
  size_t next_intervention = 0;
  for (int r = 1; r <= spec.round_count(); ++r) {
    bool skip_honest = false;
    while (next_intervention < strategy.interventions.size() &&
           strategy.interventions[next_intervention].before_round == r) {
      const Intervention& iv = strategy.interventions[next_intervention];
      ++next_intervention;

      const SubsystemLayout& layout = spec.layout_at(r - 1);
      const std::vector<Index> pos = layout.positions(cheater);
      const Index local_dim = layout.party_dim(cheater);

      std::vector<Operator> embedded_actions;
      for (const Operator& a : iv.actions) {
        if (a.dim() != local_dim) {
          throw InvariantError("intervention action does not match the cheater's registers");
        }
        if (!a.is_unitary()) {
          throw InvariantError("intervention action must be unitary");
        }
        embedded_actions.push_back(embed_operator(a, dims, pos));
      }

      if (iv.measurement.empty()) {
        if (embedded_actions.size() != 1) {
          throw InvariantError("unconditional intervention needs exactly one action");
        }
        for (Vector& b : branches) {
          b = embedded_actions[0].m * b;
        }
      } else {
        validate_projector_partition(iv.measurement);
        if (iv.measurement.front().dim() != local_dim) {
          throw InvariantError("intervention measurement does not match the cheater's "
                               "registers");
        }
        if (embedded_actions.size() != iv.measurement.size()) {
          throw InvariantError("conditional intervention needs one action per outcome");
        }
        std::vector<Operator> embedded_measurement;
        for (const Operator& p : iv.measurement) {
          embedded_measurement.push_back(embed_operator(p, dims, pos));
        }
        std::vector<Vector> split;
        for (const Vector& b : branches) {
          for (size_t g = 0; g < embedded_measurement.size(); ++g) {
            Vector piece = embedded_measurement[g].m * b;
            if (piece.squaredNorm() > 1e-30) {
              split.push_back(embedded_actions[g].m * piece);
            }
          }
        }
        branches = std::move(split);
      }

      if (iv.replaces_round_unitary) {
        if (spec.round(r).sender != cheater) {
          throw InvariantError("only the round's sender can replace its unitary");
        }
        skip_honest = true;
      }
    }

    if (!skip_honest) {
      const Matrix& u = spec.embedded_unitary(r).m;
      for (Vector& b : branches) {
        b = u * b;
      }
    }
  }
  if (next_intervention != strategy.interventions.size()) {
    throw InvariantError("intervention round index out of range");
  }

  // The verdict that matters is the honest party's.
  std::array<double, 3> verdict{0.0, 0.0, 0.0};
  for (const Vector& b : branches) {
    for (size_t o = 0; o < 3; ++o) {
      verdict[o] +=
          (spec.final_projector(honest, static_cast<Outcome>(o)).m * b).squaredNorm();
    }
  }

  AttackReport report;
  report.cheater = cheater;
  report.target_outcome = strategy.target_outcome;
  report.analytic_kind = attack.analytic_kind;
  report.analytic_success = attack.analytic_success;
  report.exact_success = verdict[static_cast<size_t>(strategy.target_outcome)];
  report.exact_abort = verdict[2];
  report.trials = trials;
  report.seed = seed;

  long long hits = 0;
  long long aborts = 0;
  for (long long t = 0; t < trials; ++t) {
    Rng rng = Rng::for_trial(seed, static_cast<std::uint64_t>(t));
    const double u = rng.uniform();
    // Sample the honest verdict from its exact distribution; rounding
    // leftovers land on abort, matching the projector remainder.
    if (u < verdict[static_cast<size_t>(strategy.target_outcome)]) {
      ++hits;
    } else if (u >= verdict[0] + verdict[1]) {
      ++aborts;
    }
  }
  report.empirical_success = static_cast<double>(hits) / static_cast<double>(trials);
  report.empirical_abort = static_cast<double>(aborts) / static_cast<double>(trials);
  return report;
}

AttackReport simulate_attack(const ProtocolSpec& spec, const CheatStrategy& strategy,
                             long long trials, std::uint64_t seed) {
  return simulate_attack(spec, Attack{strategy, AnalyticKind::None,
                                      std::numeric_limits<double>::quiet_NaN()},
                         trials, seed);
}

//------------------------------------------------------------------------
// Bob: discriminate the commit message
//------------------------------------------------------------------------

DensityMatrix conditional_message_state(const ProtocolSpec& spec, int b) {
  if (!spec.family_shaped()) {
    throw InvariantError("conditional message states need a family-shaped spec");
  }
  if (b != 0 && b != 1) {
    throw InvariantError("coin value must be 0 or 1");
  }
  const std::vector<Index> dims = spec.layout_at(0).dims();
  Matrix sel = Matrix::Zero(2, 2);
  sel(b, b) = 1.0;
  const Operator proj = embed_operator(Operator(sel), dims, {ProtocolSpec::kCoinA});
  Vector v = proj.m * spec.state_after(1).v;
  const double p = v.squaredNorm();
  if (std::abs(p - 0.5) > tol::invariant) {
    throw InvariantError("honest coin is not uniform");
  }
  const Matrix rho =
      partial_trace_positions((v * v.adjoint() / p).eval(), dims, {ProtocolSpec::kMessage});
  return DensityMatrix::from_operator(Operator(rho));
}

Attack bob_helstrom_attack(const ProtocolSpec& spec, int target) {
  check_target(target);
  const DensityMatrix rho0 = conditional_message_state(spec, 0);
  const DensityMatrix rho1 = conditional_message_state(spec, 1);
  const HelstromMeasurement meas = helstrom_measurement(rho0, rho1);

  const SubsystemLayout& layout = spec.layout_at(1);
  const std::vector<Index> pos = layout.positions(Party::Bob);
  std::vector<Index> local_dims;
  for (Index p : pos) {
    local_dims.push_back(layout.dim(p));
  }
  const auto local_of = [&](Index global) {
    const auto it = std::find(pos.begin(), pos.end(), global);
    if (it == pos.end()) {
      throw InvariantError("register is not bob's after round 1");
    }
    return static_cast<Index>(it - pos.begin());
  };
  const Index msg = local_of(ProtocolSpec::kMessage);

  Intervention iv;
  iv.before_round = 2;
  iv.measurement = {embed_operator(meas.projector0, local_dims, {msg}),
                    embed_operator(meas.projector1, local_dims, {msg})};
  for (int guess = 0; guess < 2; ++guess) {
    const int claim = guess ^ target;
    Operator action = Operator::identity(layout.party_dim(Party::Bob));
    if (claim == 1) {
      action = Operator(embed_operator(pauli_x(), local_dims,
                                       {local_of(ProtocolSpec::kCoinB)})
                            .m *
                        embed_operator(pauli_x(), local_dims,
                                       {local_of(ProtocolSpec::kCoinCopyB)})
                            .m);
    }
    iv.actions.push_back(std::move(action));
  }
  iv.replaces_round_unitary = true;

  Attack attack;
  attack.strategy.cheater = Party::Bob;
  attack.strategy.target_outcome = target;
  attack.strategy.interventions = {std::move(iv)};
  attack.analytic_kind = AnalyticKind::Exact;
  attack.analytic_success = 0.5 + meas.achieved_distance / 4.0;
  return attack;
}

//------------------------------------------------------------------------
// Alice: symmetrized commit
//------------------------------------------------------------------------

DensityMatrix symmetrize(const DensityMatrix& rho) {
  if (rho.dim() != 3) {
    throw InvariantError("symmetrize acts on qutrit states");
  }
  Matrix acc = Matrix::Zero(3, 3);
  for (int s1 : {1, -1}) {
    for (int s2 : {1, -1}) {
      Vector d(3);
      d << 1.0, static_cast<double>(s1), static_cast<double>(s2);
      acc += d.asDiagonal() * rho.mat() * d.asDiagonal();
    }
  }
  return DensityMatrix::from_operator(Operator((acc / 4.0).eval()));
}

double alice_symmetrized_bound(double delta1, double delta2) {
  if (delta1 < 0.0 || delta2 < 0.0 || delta1 + delta2 > 1.0 + 1e-15) {
    throw InvariantError("the deltas must be nonnegative with sum at most 1");
  }
  const double head = 1.0 - delta1 - delta2;
  return 0.5 * (head + 0.5 * delta1 + 0.5 * delta2 +
                std::sqrt(std::max(0.0, head)) *
                    (std::sqrt(delta1) + std::sqrt(delta2)));
}

namespace {

// Honest branch state on Alice's four starting registers plus the message,
// conditioned on her coin: project the post-commit state, normalize, and
// strip Bob's (still untouched) registers.
StateVector honest_commit_branch(const ProtocolSpec& spec, int b) {
  const std::vector<Index> dims = spec.layout_at(0).dims();
  Matrix sel = Matrix::Zero(2, 2);
  sel(b, b) = 1.0;
  const Operator proj = embed_operator(Operator(sel), dims, {ProtocolSpec::kCoinA});
  Vector v = proj.m * spec.state_after(1).v;
  v /= v.norm();

  const Index head_dim = dims[0] * dims[1] * dims[2] * dims[3];
  const Index tail_dim = dims[4] * dims[5];
  Vector out(head_dim);
  for (Index i = 0; i < head_dim; ++i) {
    out(i) = v(i * tail_dim); // Bob's registers sit in |0...0>
  }
  StateVector branch(std::move(out));
  if (std::abs(branch.norm() - 1.0) > tol::invariant) {
    throw InvariantError("commit branch is entangled with bob's untouched registers");
  }
  return branch;
}

} // namespace

Attack alice_symmetrized_attack(const ProtocolSpec& spec, double delta1, double delta2,
                                int target) {
  check_target(target);
  if (!spec.family_shaped() ||
      spec.layout_at(0).dim(ProtocolSpec::kMessage) != 3) {
    throw InvariantError("the symmetrized attack needs the built-in qutrit shape");
  }
  if (delta1 < 0.0 || delta2 < 0.0 || delta1 + delta2 > 1.0 + 1e-15) {
    throw InvariantError("the deltas must be nonnegative with sum at most 1");
  }

  // Purification of diag(1-d1-d2, d1, d2) across (coin, index, copy) x message,
  // written on the layout of Alice's four starting registers.
  const SubsystemLayout commit_layout({{2, Party::Alice},
                                       {2, Party::Alice},
                                       {3, Party::Bob},
                                       {2, Party::Alice}});
  const std::array<double, 3> lambda{1.0 - delta1 - delta2, delta1, delta2};
  // Local basis states pairing with message levels 0, 1, 2: (b, x, copy) digits.
  const std::array<std::array<Index, 3>, 3> pair_digits{
      {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}}};
  Vector chi = Vector::Zero(commit_layout.total_dim());
  const std::vector<Index> cdims = commit_layout.dims();
  for (int j = 0; j < 3; ++j) {
    const auto& d = pair_digits[static_cast<size_t>(j)];
    chi(flat_index({d[0], d[1], j, d[2]}, cdims)) =
        std::sqrt(std::max(0.0, lambda[static_cast<size_t>(j)]));
  }
  const StateVector chi_state{chi};

  Intervention commit;
  commit.before_round = 1;
  commit.actions = {unitary_with_first_column(chi_state)};
  commit.replaces_round_unitary = true;

  // After Bob's reply Alice reads his coin from the received copy and
  // rotates her purification onto the honest branch she now wants to open.
  const SubsystemLayout& layout2 = spec.layout_at(2);
  const std::vector<Index> pos2 = layout2.positions(Party::Alice); // {0, 1, 3, 5}
  std::vector<Index> local_dims;
  for (Index p : pos2) {
    local_dims.push_back(layout2.dim(p));
  }
  const Index copy_local =
      static_cast<Index>(std::find(pos2.begin(), pos2.end(), ProtocolSpec::kCoinCopyB) -
                         pos2.begin());

  Intervention open;
  open.before_round = 3;
  for (int coin = 0; coin < 2; ++coin) {
    Matrix sel = Matrix::Zero(2, 2);
    sel(coin, coin) = 1.0;
    open.measurement.push_back(embed_operator(Operator(sel), local_dims, {copy_local}));
    const int claim = coin ^ target;
    const Operator align = uhlmann_unitary(honest_commit_branch(spec, claim), chi_state,
                                           commit_layout, Party::Alice);
    // The alignment acts on (coin, index, copy): local registers 0, 1, 2.
    open.actions.push_back(embed_operator(align, local_dims, {0, 1, 2}));
  }

  Attack attack;
  attack.strategy.cheater = Party::Alice;
  attack.strategy.target_outcome = target;
  attack.strategy.interventions = {std::move(commit), std::move(open)};
  attack.analytic_kind = AnalyticKind::Exact;

  Matrix sym = Matrix::Zero(3, 3);
  sym(0, 0) = lambda[0];
  sym(1, 1) = lambda[1];
  sym(2, 2) = lambda[2];
  const DensityMatrix commit_state = DensityMatrix::from_operator(Operator(sym));
  attack.analytic_success = 0.5 * (fidelity(commit_state, conditional_message_state(spec, 0)) +
                                   fidelity(commit_state, conditional_message_state(spec, 1)));
  return attack;
}

Eq2Optimum optimize_eq2(double grid_step) {
  if (grid_step <= 0.0 || grid_step > 0.5) {
    throw InvariantError("grid step must be in (0, 0.5]");
  }

  Eq2Optimum best{0.0, 0.0, alice_symmetrized_bound(0.0, 0.0), grid_step};
  const auto consider = [&best](double d1, double d2) {
    if (d1 < 0.0 || d2 < 0.0 || d1 + d2 > 1.0) {
      return;
    }
    const double v = alice_symmetrized_bound(d1, d2);
    if (v > best.value) {
      best.value = v;
      best.delta1 = d1;
      best.delta2 = d2;
    }
  };

  const long long n = static_cast<long long>(std::floor(1.0 / grid_step)) + 1;
  for (long long i = 0; i < n; ++i) {
    for (long long j = 0; i * grid_step + j * grid_step <= 1.0 && j < n; ++j) {
      consider(static_cast<double>(i) * grid_step, static_cast<double>(j) * grid_step);
    }
  }

  // Shrinking local grids around the incumbent until ~1e-9 resolution.
  double step = grid_step;
  while (step > 1e-10) {
    step /= 10.0;
    const double c1 = best.delta1;
    const double c2 = best.delta2;
    for (int i = -15; i <= 15; ++i) {
      for (int j = -15; j <= 15; ++j) {
        consider(c1 + static_cast<double>(i) * step, c2 + static_cast<double>(j) * step);
      }
    }
  }
  return best;
}

} // namespace coinflip
