/*
 * This code is part of coinflip-lab.
 *
 * (C) Copyright 2026, coinflip-lab contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "coinflip/qdist.hpp"

#include <algorithm>
#include <cmath>

namespace coinflip {

namespace {

// Eigenvalues of r1 - r2 exactly at zero belong to neither state; they are
// assigned to outcome 0 so the split is deterministic. The tiny negative
// margin keeps rounding noise on true zeros from flipping the assignment.
constexpr double kTieFloor = -1e-12;

void check_same_dim(const DensityMatrix& r1, const DensityMatrix& r2) {
  if (r1.dim() != r2.dim()) {
    throw InvariantError("states must share a dimension");
  }
}

} // namespace

double trace_distance(const DensityMatrix& r1, const DensityMatrix& r2) {
  check_same_dim(r1, r2);
  Eigen::SelfAdjointEigenSolver<Matrix> es(r1.mat() - r2.mat(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double fidelity(const DensityMatrix& r1, const DensityMatrix& r2) {
  check_same_dim(r1, r2);
  const Operator s1 = hermitian_sqrt(Operator(r1.mat()));
  const Operator inner = hermitian_sqrt(Operator((s1.m * r2.mat() * s1.m).eval()));
  const double root = inner.trace().real();
  return std::clamp(root * root, 0.0, 1.0);
}

DistanceReport distance_report(const DensityMatrix& r1, const DensityMatrix& r2) {
  DistanceReport rep{};
  rep.trace_distance = trace_distance(r1, r2);
  rep.fidelity = fidelity(r1, r2);
  const double sf = std::sqrt(rep.fidelity);
  rep.fvdg_lower = 2.0 * (1.0 - sf);
  rep.fvdg_upper = 2.0 * std::sqrt(std::max(0.0, 1.0 - rep.fidelity));
  return rep;
}

HelstromMeasurement helstrom_measurement(const DensityMatrix& r1, const DensityMatrix& r2) {
  check_same_dim(r1, r2);
  const Index d = r1.dim();
  Eigen::SelfAdjointEigenSolver<Matrix> es(r1.mat() - r2.mat());
  if (es.info() != Eigen::Success) {
    throw InvariantError("eigendecomposition failed");
  }

  Matrix p0 = Matrix::Zero(d, d);
  double distance = 0.0;
  for (Index i = 0; i < d; ++i) {
    const double lambda = es.eigenvalues()(i);
    distance += std::abs(lambda);
    if (lambda >= kTieFloor) {
      const Vector vec = es.eigenvectors().col(i);
      p0 += vec * vec.adjoint();
    }
  }

  HelstromMeasurement out{Operator(p0), Operator(Matrix::Identity(d, d) - p0), distance};
  return out;
}

Operator purification_alignment(const StateVector& phi1, const StateVector& phi2,
                                const SubsystemLayout& layout, Party acting) {
  if (phi1.dim() != layout.total_dim() || phi2.dim() != layout.total_dim()) {
    throw InvariantError("states must live on the given layout");
  }
  if (std::abs(phi1.norm() - 1.0) > tol::invariant ||
      std::abs(phi2.norm() - 1.0) > tol::invariant) {
    throw InvariantError("purifications must be unit vectors");
  }

  // Coefficient matrices with the non-acting side on rows, acting side on
  // columns; the cross matrix C1^dagger C2 carries the overlap structure and
  // its unitary polar factor is the alignment.
  const Party passive = other(acting);
  const Matrix c1 = party_coefficient_matrix(phi1, layout, passive);
  const Matrix c2 = party_coefficient_matrix(phi2, layout, passive);
  const Matrix a = c1.adjoint() * c2;

  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  // With a = W S V^dagger, the choice U^T = V W^dagger turns the overlap
  // tr(a U^T) into tr(S) = sqrt(fidelity of the reduced states).
  const Matrix u = (svd.matrixV() * svd.matrixU().adjoint()).transpose();
  return Operator(u);
}

Operator uhlmann_unitary(const StateVector& phi1, const StateVector& phi2,
                         const SubsystemLayout& layout, Party acting) {
  if (layout.party_dim(acting) < layout.party_dim(other(acting))) {
    throw InvariantError("acting side is smaller than the side being purified; "
                         "the purifying register must be at least as large");
  }
  return purification_alignment(phi1, phi2, layout, acting);
}

} // namespace coinflip
