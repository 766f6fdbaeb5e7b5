/*
 * This code is part of coinflip-lab.
 *
 * (C) Copyright 2026, coinflip-lab contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "coinflip/qmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

namespace coinflip {

const char* to_string(Party p) { return p == Party::Alice ? "alice" : "bob"; }

Party party_from_string(const std::string& s) {
  if (s == "alice") {
    return Party::Alice;
  }
  if (s == "bob") {
    return Party::Bob;
  }
  throw ParseError("unknown party '" + s + "' (expected 'alice' or 'bob')");
}

//------------------------------------------------------------------------
// Operator / StateVector / DensityMatrix
//------------------------------------------------------------------------

Operator::Operator(Matrix mat) : m(std::move(mat)) {
  if (m.rows() != m.cols()) {
    throw InvariantError("operator must be square, got " + std::to_string(m.rows()) +
                         "x" + std::to_string(m.cols()));
  }
}

Operator Operator::identity(Index dim) { return Operator(Matrix::Identity(dim, dim)); }

Operator Operator::zero(Index dim) { return Operator(Matrix::Zero(dim, dim)); }

bool Operator::is_hermitian(double tolerance) const {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

bool Operator::is_unitary(double tolerance) const {
  Matrix d = m.adjoint() * m - Matrix::Identity(dim(), dim());
  return d.cwiseAbs().maxCoeff() <= tolerance;
}

bool Operator::is_projector(double tolerance) const {
  return is_hermitian(tolerance) &&
         (m * m - m).cwiseAbs().maxCoeff() <= tolerance;
}

StateVector StateVector::basis(Index dim, Index index) {
  if (index < 0 || index >= dim) {
    throw InvariantError("basis index out of range");
  }
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return StateVector(std::move(v));
}

StateVector StateVector::normalized() const {
  const double n = norm();
  if (n < 1e-12) {
    throw InvariantError("cannot normalize a (near-)zero state vector");
  }
  return StateVector(v / n);
}

DensityMatrix DensityMatrix::from_operator(const Operator& op) {
  if (!op.is_hermitian()) {
    throw InvariantError("density matrix must be Hermitian");
  }
  if (std::abs(op.trace() - Complex(1.0, 0.0)) > tol::invariant) {
    throw InvariantError("density matrix must have unit trace");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(op.m, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < tol::eig_floor) {
    throw InvariantError("density matrix has eigenvalue below the clipping floor: " +
                         std::to_string(es.eigenvalues().minCoeff()));
  }
  return DensityMatrix(op.m);
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  if (std::abs(psi.norm() - 1.0) > tol::invariant) {
    throw InvariantError("pure density matrix needs a unit state vector");
  }
  return DensityMatrix(psi.v * psi.v.adjoint());
}

//------------------------------------------------------------------------
// SubsystemLayout
//------------------------------------------------------------------------

SubsystemLayout::SubsystemLayout(std::vector<Subsystem> subsystems)
    : subsystems_(std::move(subsystems)) {
  if (subsystems_.empty()) {
    throw InvariantError("layout needs at least one subsystem");
  }
  total_dim_ = 1;
  for (const auto& s : subsystems_) {
    if (s.dim < 1) {
      throw InvariantError("subsystem dimension must be >= 1");
    }
    if (total_dim_ > (1 << 24) / s.dim) {
      throw InvariantError("total layout dimension is too large for dense storage");
    }
    total_dim_ *= s.dim;
  }
}

std::vector<Index> SubsystemLayout::dims() const {
  std::vector<Index> d;
  d.reserve(subsystems_.size());
  for (const auto& s : subsystems_) {
    d.push_back(s.dim);
  }
  return d;
}

std::vector<Index> SubsystemLayout::positions(Party p) const {
  std::vector<Index> pos;
  for (Index i = 0; i < count(); ++i) {
    if (owner(i) == p) {
      pos.push_back(i);
    }
  }
  return pos;
}

Index SubsystemLayout::party_dim(Party p) const {
  Index d = 1;
  for (Index i = 0; i < count(); ++i) {
    if (owner(i) == p) {
      d *= dim(i);
    }
  }
  return d;
}

SubsystemLayout SubsystemLayout::with_owner(Index i, Party new_owner) const {
  if (i < 0 || i >= count()) {
    throw InvariantError("subsystem index out of range");
  }
  std::vector<Subsystem> copy = subsystems_;
  copy[static_cast<size_t>(i)].owner = new_owner;
  return SubsystemLayout(std::move(copy));
}

//------------------------------------------------------------------------
// Index arithmetic
//------------------------------------------------------------------------

std::vector<Index> index_digits(Index flat, const std::vector<Index>& dims) {
  std::vector<Index> digits(dims.size());
  for (size_t i = dims.size(); i-- > 0;) {
    digits[i] = flat % dims[i];
    flat /= dims[i];
  }
  return digits;
}

Index flat_index(const std::vector<Index>& digits, const std::vector<Index>& dims) {
  if (digits.size() != dims.size()) {
    throw InvariantError("digit/dimension count mismatch");
  }
  Index flat = 0;
  for (size_t i = 0; i < dims.size(); ++i) {
    if (digits[i] < 0 || digits[i] >= dims[i]) {
      throw InvariantError("digit out of range");
    }
    flat = flat * dims[i] + digits[i];
  }
  return flat;
}

//------------------------------------------------------------------------
// Tensor algebra
//------------------------------------------------------------------------

Operator tensor_product(const Operator& a, const Operator& b) {
  return Operator(Eigen::kroneckerProduct(a.m, b.m).eval());
}

StateVector tensor_product(const StateVector& a, const StateVector& b) {
  Vector out(a.dim() * b.dim());
  for (Index i = 0; i < a.dim(); ++i) {
    out.segment(i * b.dim(), b.dim()) = a.v(i) * b.v;
  }
  return StateVector(std::move(out));
}

Operator embed_operator(const Operator& op, const std::vector<Index>& dims,
                        const std::vector<Index>& positions) {
  const Index n = static_cast<Index>(dims.size());
  std::vector<bool> used(dims.size(), false);
  Index op_dim = 1;
  for (Index p : positions) {
    if (p < 0 || p >= n) {
      throw InvariantError("embed position out of range");
    }
    if (used[static_cast<size_t>(p)]) {
      throw InvariantError("embed positions must be distinct");
    }
    used[static_cast<size_t>(p)] = true;
    op_dim *= dims[static_cast<size_t>(p)];
  }
  if (op.dim() != op_dim) {
    throw InvariantError("operator dimension does not match the targeted registers");
  }

  std::vector<Index> rest;
  std::vector<Index> rest_dims;
  for (Index i = 0; i < n; ++i) {
    if (!used[static_cast<size_t>(i)]) {
      rest.push_back(i);
      rest_dims.push_back(dims[static_cast<size_t>(i)]);
    }
  }
  Index rest_dim = 1;
  for (Index d : rest_dims) {
    rest_dim *= d;
  }
  std::vector<Index> target_dims;
  for (Index p : positions) {
    target_dims.push_back(dims[static_cast<size_t>(p)]);
  }

  Index total = 1;
  for (Index d : dims) {
    total *= d;
  }
  Matrix out = Matrix::Zero(total, total);
  std::vector<Index> digits_row(dims.size()), digits_col(dims.size());
  for (Index ctx = 0; ctx < rest_dim; ++ctx) {
    const std::vector<Index> ctx_digits = index_digits(ctx, rest_dims);
    for (Index kr = 0; kr < op_dim; ++kr) {
      const std::vector<Index> row_digits = index_digits(kr, target_dims);
      for (Index kc = 0; kc < op_dim; ++kc) {
        const Complex value = op.m(kr, kc);
        if (value == Complex(0.0, 0.0)) {
          continue;
        }
        const std::vector<Index> col_digits = index_digits(kc, target_dims);
        for (size_t i = 0; i < rest.size(); ++i) {
          digits_row[static_cast<size_t>(rest[i])] = ctx_digits[i];
          digits_col[static_cast<size_t>(rest[i])] = ctx_digits[i];
        }
        for (size_t i = 0; i < positions.size(); ++i) {
          digits_row[static_cast<size_t>(positions[i])] = row_digits[i];
          digits_col[static_cast<size_t>(positions[i])] = col_digits[i];
        }
        out(flat_index(digits_row, dims), flat_index(digits_col, dims)) = value;
      }
    }
  }
  return Operator(std::move(out));
}

Matrix partial_trace_positions(const Matrix& rho, const std::vector<Index>& dims,
                               const std::vector<Index>& keep) {
  Index total = 1;
  for (Index d : dims) {
    total *= d;
  }
  if (rho.rows() != total || rho.cols() != total) {
    throw InvariantError("matrix dimension does not match the layout");
  }
  for (size_t i = 1; i < keep.size(); ++i) {
    if (keep[i] <= keep[i - 1]) {
      throw InvariantError("keep positions must be strictly ascending");
    }
  }

  std::vector<Index> keep_dims;
  std::vector<Index> traced;
  std::vector<Index> traced_dims;
  {
    size_t ki = 0;
    for (Index i = 0; i < static_cast<Index>(dims.size()); ++i) {
      if (ki < keep.size() && keep[ki] == i) {
        keep_dims.push_back(dims[static_cast<size_t>(i)]);
        ++ki;
      } else {
        traced.push_back(i);
        traced_dims.push_back(dims[static_cast<size_t>(i)]);
      }
    }
    if (ki != keep.size()) {
      throw InvariantError("keep position out of range");
    }
  }

  Index keep_dim = 1;
  for (Index d : keep_dims) {
    keep_dim *= d;
  }
  Index traced_dim = 1;
  for (Index d : traced_dims) {
    traced_dim *= d;
  }

  Matrix out = Matrix::Zero(keep_dim, keep_dim);
  std::vector<Index> digits_row(dims.size()), digits_col(dims.size());
  for (Index t = 0; t < traced_dim; ++t) {
    const std::vector<Index> t_digits = index_digits(t, traced_dims);
    for (size_t i = 0; i < traced.size(); ++i) {
      digits_row[static_cast<size_t>(traced[i])] = t_digits[i];
      digits_col[static_cast<size_t>(traced[i])] = t_digits[i];
    }
    for (Index r = 0; r < keep_dim; ++r) {
      const std::vector<Index> r_digits = index_digits(r, keep_dims);
      for (size_t i = 0; i < keep.size(); ++i) {
        digits_row[static_cast<size_t>(keep[i])] = r_digits[i];
      }
      const Index row = flat_index(digits_row, dims);
      for (Index c = 0; c < keep_dim; ++c) {
        const std::vector<Index> c_digits = index_digits(c, keep_dims);
        for (size_t i = 0; i < keep.size(); ++i) {
          digits_col[static_cast<size_t>(keep[i])] = c_digits[i];
        }
        out(r, c) += rho(row, flat_index(digits_col, dims));
      }
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& state, const SubsystemLayout& layout,
                            Party keep) {
  Matrix reduced = partial_trace_positions(state.mat(), layout.dims(), layout.positions(keep));
  return DensityMatrix::from_operator(Operator(std::move(reduced)));
}

DensityMatrix partial_trace(const StateVector& state, const SubsystemLayout& layout,
                            Party keep) {
  const Matrix c = party_coefficient_matrix(state, layout, keep);
  return DensityMatrix::from_operator(Operator(c * c.adjoint()));
}

Matrix party_coefficient_matrix(const StateVector& state, const SubsystemLayout& layout,
                                Party rows) {
  if (state.dim() != layout.total_dim()) {
    throw InvariantError("state dimension does not match the layout");
  }
  const std::vector<Index> dims = layout.dims();
  const std::vector<Index> row_pos = layout.positions(rows);
  const std::vector<Index> col_pos = layout.positions(other(rows));
  std::vector<Index> row_dims, col_dims;
  for (Index p : row_pos) {
    row_dims.push_back(dims[static_cast<size_t>(p)]);
  }
  for (Index p : col_pos) {
    col_dims.push_back(dims[static_cast<size_t>(p)]);
  }
  Index rd = 1, cd = 1;
  for (Index d : row_dims) {
    rd *= d;
  }
  for (Index d : col_dims) {
    cd *= d;
  }

  Matrix c(rd, cd);
  std::vector<Index> digits(dims.size());
  for (Index flat = 0; flat < state.dim(); ++flat) {
    digits = index_digits(flat, dims);
    std::vector<Index> rdig, cdig;
    for (Index p : row_pos) {
      rdig.push_back(digits[static_cast<size_t>(p)]);
    }
    for (Index p : col_pos) {
      cdig.push_back(digits[static_cast<size_t>(p)]);
    }
    const Index r = row_dims.empty() ? 0 : flat_index(rdig, row_dims);
    const Index col = col_dims.empty() ? 0 : flat_index(cdig, col_dims);
    c(r, col) = state.v(flat);
  }
  return c;
}

//------------------------------------------------------------------------
// Hermitian square root
//------------------------------------------------------------------------

Operator hermitian_sqrt(const Operator& m) {
  if (!m.is_hermitian()) {
    throw InvariantError("hermitian_sqrt requires a Hermitian matrix");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.m);
  if (es.info() != Eigen::Success) {
    throw InvariantError("eigendecomposition failed");
  }
  Eigen::VectorXd vals = es.eigenvalues();
  for (Index i = 0; i < vals.size(); ++i) {
    if (vals(i) < tol::eig_floor) {
      throw InvariantError("matrix is not positive semidefinite (eigenvalue " +
                           std::to_string(vals(i)) + ")");
    }
    vals(i) = vals(i) < 0.0 ? 0.0 : std::sqrt(vals(i));
  }
  return Operator(es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint());
}

//------------------------------------------------------------------------
// Projective measurement
//------------------------------------------------------------------------

void validate_projector_partition(const std::vector<Operator>& projectors, double tolerance) {
  if (projectors.empty()) {
    throw InvariantError("measurement needs at least one projector");
  }
  const Index d = projectors.front().dim();
  Matrix sum = Matrix::Zero(d, d);
  for (size_t i = 0; i < projectors.size(); ++i) {
    const Operator& p = projectors[i];
    if (p.dim() != d) {
      throw InvariantError("projectors must share a dimension");
    }
    if (!p.is_projector(tolerance)) {
      throw InvariantError("measurement element " + std::to_string(i) +
                           " is not an orthogonal projector");
    }
    for (size_t j = 0; j < i; ++j) {
      if ((p.m * projectors[j].m).cwiseAbs().maxCoeff() > tolerance) {
        throw InvariantError("measurement projectors are not pairwise orthogonal");
      }
    }
    sum += p.m;
  }
  if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > tolerance) {
    throw InvariantError("measurement projectors do not sum to the identity");
  }
}

MeasurementOutcome measure_projective(const StateVector& state,
                                      const std::vector<Operator>& projectors,
                                      std::uint64_t seed) {
  Rng rng(seed);
  return measure_projective(state, projectors, rng);
}

MeasurementOutcome measure_projective(const StateVector& state,
                                      const std::vector<Operator>& projectors, Rng& rng) {
  if (std::abs(state.norm() - 1.0) > tol::invariant) {
    throw InvariantError("measured state must have unit norm");
  }
  validate_projector_partition(projectors);
  if (projectors.front().dim() != state.dim()) {
    throw InvariantError("projector dimension does not match the state");
  }

  std::vector<double> probs(projectors.size());
  std::vector<Vector> branches(projectors.size());
  for (size_t i = 0; i < projectors.size(); ++i) {
    branches[i] = projectors[i].m * state.v;
    probs[i] = branches[i].squaredNorm();
  }

  const double u = rng.uniform();
  double acc = 0.0;
  size_t pick = projectors.size();
  for (size_t i = 0; i < projectors.size(); ++i) {
    acc += probs[i];
    if (u < acc) {
      pick = i;
      break;
    }
  }
  if (pick == projectors.size()) {
    // Rounding pushed the cumulative sum below u; take the last outcome with
    // nonzero probability.
    for (size_t i = projectors.size(); i-- > 0;) {
      if (probs[i] > 0.0) {
        pick = i;
        break;
      }
    }
  }
  if (pick == projectors.size()) {
    throw InvariantError("measurement probabilities sum to zero");
  }

  return MeasurementOutcome{static_cast<int>(pick),
                            StateVector(branches[pick] / std::sqrt(probs[pick])),
                            probs[pick]};
}

//------------------------------------------------------------------------
// Gate constructors
//------------------------------------------------------------------------

Operator hadamard() {
  Matrix h(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return Operator(std::move(h));
}

Operator pauli_x() {
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  return Operator(std::move(x));
}

Operator cnot() {
  Matrix c = Matrix::Zero(4, 4);
  c(0, 0) = 1;
  c(1, 1) = 1;
  c(2, 3) = 1;
  c(3, 2) = 1;
  return Operator(std::move(c));
}

Operator unitary_with_first_column(const StateVector& target) {
  if (std::abs(target.norm() - 1.0) > tol::invariant) {
    throw InvariantError("column must be a unit vector");
  }
  const Index d = target.dim();
  const Vector& v = target.v;
  Complex alpha(1.0, 0.0);
  if (std::abs(v(0)) > 1e-14) {
    alpha = v(0) / std::abs(v(0));
  }
  Vector u = v;
  u(0) -= alpha;
  const double uu = u.squaredNorm();
  Matrix h = Matrix::Identity(d, d);
  if (uu > 1e-28) {
    h -= (2.0 / uu) * (u * u.adjoint());
  }
  // h maps e0 to conj(alpha) * v; absorb the phase into the first column.
  h.col(0) *= alpha;
  return Operator(std::move(h));
}

} // namespace coinflip
