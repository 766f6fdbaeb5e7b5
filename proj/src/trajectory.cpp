/*
 * This code is part of coinflip-lab.
 *
 * (C) Copyright 2026, coinflip-lab contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "coinflip/trajectory.hpp"

#include <cmath>
#include <sstream>

#include "coinflip/qdist.hpp"
#include "coinflip/report_io.hpp"

namespace coinflip {

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

StateVector normalized_branch(const StateVector& branch) {
  return StateVector(Vector(branch.v / branch.norm()));
}

} // namespace

FidelityTrajectory fidelity_trajectory(const ProtocolSpec& spec) {
  const BranchDecomposition dec = branch_states(spec);
  FidelityTrajectory traj;
  traj.k = spec.round_count();
  for (int i = 0; i <= traj.k; ++i) {
    const SubsystemLayout& layout = spec.layout_at(i);
    const StateVector b0 = normalized_branch(dec.branch[static_cast<size_t>(i)][0]);
    const StateVector b1 = normalized_branch(dec.branch[static_cast<size_t>(i)][1]);
    FidelityTrajectory::Row row;
    row.i = i;
    row.f_alice = clamp01(fidelity(partial_trace(b0, layout, Party::Alice),
                                   partial_trace(b1, layout, Party::Alice)));
    row.f_bob = clamp01(fidelity(partial_trace(b0, layout, Party::Bob),
                                 partial_trace(b1, layout, Party::Bob)));
    traj.rows.push_back(row);
  }
  return traj;
}

BoundAudit maincor_audit(const FidelityTrajectory& traj, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 0.5)) {
    throw InvariantError("epsilon must lie in [0, 1/2]");
  }
  BoundAudit audit;
  audit.epsilon = epsilon;
  for (const FidelityTrajectory::Row& r : traj.rows) {
    BoundAudit::Row row;
    row.i = r.i;
    row.f_alice = r.f_alice;
    row.f_bob = r.f_bob;
    row.bound_on_alice = 2.0 * epsilon + 6.0 * std::pow(r.f_bob, 0.25);
    row.bound_on_bob = 2.0 * epsilon + 6.0 * std::pow(r.f_alice, 0.25);
    row.residual_alice = row.bound_on_alice - r.f_alice;
    row.residual_bob = row.bound_on_bob - r.f_bob;
    row.pass_alice = r.f_alice <= row.bound_on_alice + 1e-9;
    row.pass_bob = r.f_bob <= row.bound_on_bob + 1e-9;
    audit.all_pass = audit.all_pass && row.pass_alice && row.pass_bob;
    audit.rows.push_back(row);
  }
  if (epsilon > 0.0 && epsilon < 0.25 && traj.k >= 1) {
    audit.induction = induction_bound(traj.k, epsilon);
  }
  return audit;
}

std::vector<double> induction_bound(int k, double epsilon) {
  if (k < 1) {
    throw InvariantError("round count must be at least 1");
  }
  if (!(epsilon > 0.0 && epsilon < 0.25)) {
    throw InvariantError("epsilon must lie in (0, 1/4)");
  }
  std::vector<double> bounds;
  for (int i = 0; i < k; ++i) {
    bounds.push_back(14.0 * std::pow(epsilon, 1.0 / std::pow(4.0, k - i - 1)));
  }
  return bounds;
}

namespace {

int smallest_round_count(double epsilon, double threshold) {
  if (!(epsilon > 0.0 && epsilon < 0.25)) {
    throw InvariantError("epsilon must lie in (0, 1/4)");
  }
  for (int k = 1; k <= 64; ++k) {
    if (14.0 * std::pow(epsilon, 1.0 / std::pow(4.0, k - 1)) >= threshold) {
      return k;
    }
  }
  throw InvariantError("round bound search did not converge");
}

} // namespace

int round_lower_bound(double epsilon) {
  return smallest_round_count(epsilon, (0.5 - epsilon) * (0.5 - epsilon));
}

int round_lower_bound_simplified(double epsilon) {
  return smallest_round_count(epsilon, 1.0 / 16.0);
}

double attack_success_floor(double f_alice, double f_bob) {
  if (f_alice < -1e-12 || f_alice > 1.0 + 1e-12 || f_bob < -1e-12 ||
      f_bob > 1.0 + 1e-12) {
    throw InvariantError("fidelities must lie in [0, 1]");
  }
  const double q = std::pow(clamp01(f_alice), 0.25);
  const double t0 = std::max(0.0, 1.0 / std::sqrt(2.0) - q);
  const double t1 = std::max(0.0, std::sqrt(clamp01(f_bob)) / std::sqrt(2.0) - q);
  return t0 * t0 + t1 * t1;
}

//------------------------------------------------------------------------
// Executable lemma attacks
//------------------------------------------------------------------------

LemmaAttack start_lemma_attack(const ProtocolSpec& spec, int target, long long trials,
                               std::uint64_t seed) {
  if (target != 0 && target != 1) {
    throw InvariantError("target outcome must be 0 or 1");
  }
  const BranchDecomposition dec = branch_states(spec);
  const SubsystemLayout& layout = spec.layout_at(0);
  const StateVector b0 = normalized_branch(dec.branch[0][0]);
  const StateVector b1 = normalized_branch(dec.branch[0][1]);
  const DensityMatrix rho0 = partial_trace(b0, layout, Party::Alice);
  const DensityMatrix rho1 = partial_trace(b1, layout, Party::Alice);
  const double f0 = clamp01(fidelity(rho0, rho1));
  const HelstromMeasurement meas = helstrom_measurement(rho0, rho1);

  // Alice's own starting factor (the constructor guarantees a product start,
  // so the coefficient matrix has rank one).
  const Matrix c = party_coefficient_matrix(spec.initial_state(), layout, Party::Alice);
  Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeThinU);
  const Vector factor = svd.matrixU().col(0);

  const Vector piece0 = meas.projector0.m * factor;
  const Vector piece1 = meas.projector1.m * factor;
  const int majority = piece1.squaredNorm() > piece0.squaredNorm() ? 1 : 0;
  const Vector& chosen = target == 0 ? piece0 : piece1;

  Attack attack;
  attack.strategy.cheater = Party::Alice;
  attack.strategy.target_outcome = target;
  if (chosen.squaredNorm() > 1e-12) {
    attack.strategy.start_substitution = StateVector(Vector(chosen / chosen.norm()));
  }
  if (target == majority) {
    attack.analytic_kind = AnalyticKind::Floor;
    attack.analytic_success = 1.0 - std::sqrt(f0);
  } else {
    attack.analytic_kind = AnalyticKind::None;
    attack.analytic_success = std::numeric_limits<double>::quiet_NaN();
  }

  LemmaAttack result;
  result.report = simulate_attack(spec, attack, trials, seed);
  result.strategy = std::move(attack.strategy);
  return result;
}

LemmaAttack main_lemma_attack(const ProtocolSpec& spec, int i, long long trials,
                              std::uint64_t seed, Party analyzing) {
  const int k = spec.round_count();
  if (i < 1 || i > k - 1) {
    throw InvariantError("round index must lie between 1 and k-1");
  }
  if (trials < 1) {
    throw InvariantError("trial count must be positive");
  }
  const BranchDecomposition dec = branch_states(spec);
  const SubsystemLayout& layout = spec.layout_at(i);
  const StateVector b0 = normalized_branch(dec.branch[static_cast<size_t>(i)][0]);
  const StateVector b1 = normalized_branch(dec.branch[static_cast<size_t>(i)][1]);

  const DensityMatrix own0 = partial_trace(b0, layout, analyzing);
  const DensityMatrix own1 = partial_trace(b1, layout, analyzing);
  const double f_own = clamp01(fidelity(own0, own1));
  const double f_other = clamp01(fidelity(partial_trace(b0, layout, other(analyzing)),
                                          partial_trace(b1, layout, other(analyzing))));

  const HelstromMeasurement meas = helstrom_measurement(own0, own1);
  const Operator align = purification_alignment(b0, b1, layout, analyzing);

  CheatStrategy strategy;
  strategy.cheater = analyzing;
  strategy.target_outcome = 0;
  Intervention iv;
  iv.before_round = i + 1;
  iv.measurement = {meas.projector0, meas.projector1};
  iv.actions = {Operator::identity(layout.party_dim(analyzing)), align};
  strategy.interventions = {iv};

  // Success metric: mass carried into the subspace the remaining rounds map
  // onto joint outcome 0. Evolve the two measurement branches to the end.
  const std::vector<Index> dims = layout.dims();
  const std::vector<Index> pos = layout.positions(analyzing);
  std::vector<Vector> branches{
      embed_operator(meas.projector0, dims, pos).m * spec.state_after(i).v,
      embed_operator(align, dims, pos).m *
          (embed_operator(meas.projector1, dims, pos).m * spec.state_after(i).v)};
  for (int r = i + 1; r <= k; ++r) {
    for (Vector& b : branches) {
      b = spec.embedded_unitary(r).m * b;
    }
  }
  const Matrix joint0 = spec.final_projector(Party::Alice, Outcome::Zero).m *
                        spec.final_projector(Party::Bob, Outcome::Zero).m;
  const Matrix honest_abort =
      spec.final_projector(other(analyzing), Outcome::Abort).m;
  double success = 0.0;
  double abort_mass = 0.0;
  for (const Vector& b : branches) {
    success += (joint0 * b).squaredNorm();
    abort_mass += (honest_abort * b).squaredNorm();
  }

  LemmaAttack result;
  result.strategy = strategy;
  result.report.cheater = analyzing;
  result.report.target_outcome = 0;
  result.report.analytic_kind = AnalyticKind::Floor;
  result.report.analytic_success = attack_success_floor(f_own, f_other);
  result.report.exact_success = success;
  result.report.exact_abort = abort_mass;
  result.report.trials = trials;
  result.report.seed = seed;

  long long hits = 0;
  long long aborts = 0;
  for (long long t = 0; t < trials; ++t) {
    Rng rng = Rng::for_trial(seed, static_cast<std::uint64_t>(t));
    const double u = rng.uniform();
    if (u < success) {
      ++hits;
    } else if (u < success + abort_mass) {
      ++aborts;
    }
  }
  result.report.empirical_success =
      static_cast<double>(hits) / static_cast<double>(trials);
  result.report.empirical_abort =
      static_cast<double>(aborts) / static_cast<double>(trials);
  return result;
}

std::string trajectory_csv(const FidelityTrajectory& traj, double epsilon) {
  const BoundAudit audit = maincor_audit(traj, epsilon);
  std::ostringstream out;
  out << "round,F_A,F_B,bound_A,bound_B,maincor_AB_pass,maincor_BA_pass\n";
  for (const BoundAudit::Row& row : audit.rows) {
    out << row.i << ',' << format_double(row.f_alice) << ','
        << format_double(row.f_bob) << ',' << format_double(row.bound_on_alice)
        << ',' << format_double(row.bound_on_bob) << ',' << (row.pass_alice ? 1 : 0)
        << ',' << (row.pass_bob ? 1 : 0) << '\n';
  }
  return out.str();
}

} // namespace coinflip
