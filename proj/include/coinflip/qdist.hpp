/*
 * This code is part of coinflip-lab.
 *
 * (C) Copyright 2026, coinflip-lab contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include "coinflip/qmatrix.hpp"

namespace coinflip {

/// Optimal two-outcome discrimination of r1 vs r2: projector0 spans the
/// nonnegative eigenspace of r1 - r2 (so outcome 0 is at least as likely
/// under r1 as under r2), projector1 the rest. achieved_distance is the
/// variational distance between the two induced outcome distributions, which
/// equals the trace distance.
struct HelstromMeasurement {
  Operator projector0;
  Operator projector1;
  double achieved_distance;
};

struct DistanceReport {
  double trace_distance;
  double fidelity;
  double fvdg_lower; // 2 * (1 - sqrt(F)) <= trace_distance
  double fvdg_upper; // trace_distance <= 2 * sqrt(1 - F)
};

/// Trace norm of r1 - r2 (sum of absolute eigenvalues of the difference).
/// Ranges over [0, 2]; 2 exactly for orthogonal supports.
double trace_distance(const DensityMatrix& r1, const DensityMatrix& r2);

/// Square of the trace norm of sqrt(r1) * sqrt(r2), computed as
/// (tr sqrt(sqrt(r1) r2 sqrt(r1)))^2 and clamped into [0, 1].
double fidelity(const DensityMatrix& r1, const DensityMatrix& r2);

DistanceReport distance_report(const DensityMatrix& r1, const DensityMatrix& r2);

HelstromMeasurement helstrom_measurement(const DensityMatrix& r1, const DensityMatrix& r2);

/// Unitary on `acting`'s registers aligning phi2's purification frame with
/// phi1's: the overlap <phi1| (U embedded) |phi2> becomes real nonnegative
/// with square equal to the fidelity of the two reduced states on the
/// *other* party's registers. Both states must be unit vectors on `layout`.
/// Requires acting's total dimension >= the other side's total dimension;
/// see purification_alignment for the unchecked construction.
Operator uhlmann_unitary(const StateVector& phi1, const StateVector& phi2,
                         const SubsystemLayout& layout, Party acting);

/// The construction behind uhlmann_unitary, without the dimension
/// precondition. For purifications that already exist on the given layout
/// the polar-decomposition argument needs no size condition (the acting side
/// is automatically at least as large as the reduced ranks), and mid-protocol
/// alignment steps routinely act from the smaller side.
Operator purification_alignment(const StateVector& phi1, const StateVector& phi2,
                                const SubsystemLayout& layout, Party acting);

} // namespace coinflip
