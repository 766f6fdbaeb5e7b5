/*
 * This code is part of coinflip-lab.
 *
 * (C) Copyright 2026, coinflip-lab contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "coinflip/errors.hpp"
#include "coinflip/rng.hpp"

namespace coinflip {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

namespace tol {
// Invariant checks (unitarity, trace preservation, projector algebra).
inline constexpr double invariant = 1e-9;
// Comparisons between independently derived quantities.
inline constexpr double derived = 1e-8;
// Eigenvalues in [eig_floor, 0) are rounding noise and get clipped to zero;
// anything below eig_floor means the input was not positive semidefinite.
inline constexpr double eig_floor = -1e-9;
} // namespace tol

enum class Party { Alice, Bob };

inline Party other(Party p) { return p == Party::Alice ? Party::Bob : Party::Alice; }
const char* to_string(Party p);
Party party_from_string(const std::string& s);

//------------------------------------------------------------------------
// Core value types
//------------------------------------------------------------------------

/// Square complex matrix. The wrapper exists for dimension bookkeeping and
/// for the handful of predicates the rest of the library leans on.
struct Operator {
  Matrix m;

  Operator() = default;
  explicit Operator(Matrix mat);

  static Operator identity(Index dim);
  static Operator zero(Index dim);

  Index dim() const { return m.rows(); }
  Operator adjoint() const { return Operator(m.adjoint()); }
  Complex trace() const { return m.trace(); }

  bool is_hermitian(double tolerance = tol::invariant) const;
  bool is_unitary(double tolerance = tol::invariant) const;
  bool is_projector(double tolerance = tol::invariant) const;
};

/// Pure state amplitudes. Not forced to unit norm: intermediate branch
/// vectors are deliberately subnormalized.
struct StateVector {
  Vector v;

  StateVector() = default;
  explicit StateVector(Vector vec) : v(std::move(vec)) {}

  static StateVector basis(Index dim, Index index);

  Index dim() const { return v.size(); }
  double norm() const { return v.norm(); }
  double squared_norm() const { return v.squaredNorm(); }
  StateVector normalized() const;
};

/// Unit-trace positive semidefinite matrix. Construction validates, so a
/// DensityMatrix in hand is always a legal quantum state.
class DensityMatrix {
public:
  static DensityMatrix from_operator(const Operator& op);
  static DensityMatrix pure(const StateVector& psi);

  const Matrix& mat() const { return m_; }
  Index dim() const { return m_.rows(); }

private:
  explicit DensityMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

/// One register in a fixed tensor-product decomposition. Positions never
/// move; sending a register to the other party only flips its owner.
struct Subsystem {
  Index dim;
  Party owner;
};

class SubsystemLayout {
public:
  explicit SubsystemLayout(std::vector<Subsystem> subsystems);

  Index count() const { return static_cast<Index>(subsystems_.size()); }
  Index dim(Index i) const { return subsystems_.at(static_cast<size_t>(i)).dim; }
  Party owner(Index i) const { return subsystems_.at(static_cast<size_t>(i)).owner; }
  Index total_dim() const { return total_dim_; }

  std::vector<Index> dims() const;
  /// Ascending positions owned by `p`.
  std::vector<Index> positions(Party p) const;
  /// Product of the dimensions owned by `p` (1 if it owns nothing).
  Index party_dim(Party p) const;
  /// Copy of the layout with subsystem `i` handed to `new_owner`.
  SubsystemLayout with_owner(Index i, Party new_owner) const;

private:
  std::vector<Subsystem> subsystems_;
  Index total_dim_;
};

//------------------------------------------------------------------------
// Index arithmetic
//------------------------------------------------------------------------

// Flat indices use the Kronecker convention: the first subsystem is the most
// significant digit, so kron(A, B) acts on flat index i*dim(B)+j.

std::vector<Index> index_digits(Index flat, const std::vector<Index>& dims);
Index flat_index(const std::vector<Index>& digits, const std::vector<Index>& dims);

//------------------------------------------------------------------------
// Operations
//------------------------------------------------------------------------

Operator tensor_product(const Operator& a, const Operator& b);
StateVector tensor_product(const StateVector& a, const StateVector& b);

/// Expand `op`, acting on the registers listed in `positions` (in that
/// order), to the full product space described by `dims`. Positions may be
/// given in any order; repeats are rejected.
Operator embed_operator(const Operator& op, const std::vector<Index>& dims,
                        const std::vector<Index>& positions);

/// Trace out every register not listed in `keep` (ascending positions).
Matrix partial_trace_positions(const Matrix& rho, const std::vector<Index>& dims,
                               const std::vector<Index>& keep);

/// Reduced state of the registers owned by `keep`.
DensityMatrix partial_trace(const DensityMatrix& state, const SubsystemLayout& layout,
                            Party keep);
DensityMatrix partial_trace(const StateVector& state, const SubsystemLayout& layout,
                            Party keep);

/// Coefficient matrix C of a pure state with C(r, c) indexed by the `rows`
/// party's registers (ascending) and the other party's registers (ascending).
/// The reduced state on `rows` is C * C.adjoint().
Matrix party_coefficient_matrix(const StateVector& state, const SubsystemLayout& layout,
                                Party rows);

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Eigenvalues in [-1e-9, 0) are clipped to zero; anything more negative is
/// an InvariantError, as is a non-Hermitian input.
Operator hermitian_sqrt(const Operator& m);

/// A complete set of orthogonal projectors (pairwise orthogonal, summing to
/// the identity). Throws InvariantError if the partition property fails.
void validate_projector_partition(const std::vector<Operator>& projectors,
                                  double tolerance = tol::invariant);

struct MeasurementOutcome {
  int outcome;
  StateVector post_state;
  double probability;
};

/// Projective measurement of a unit state. Validates the projector set, then
/// samples an outcome and renormalizes. Deterministic in `seed`.
MeasurementOutcome measure_projective(const StateVector& state,
                                      const std::vector<Operator>& projectors,
                                      std::uint64_t seed);
MeasurementOutcome measure_projective(const StateVector& state,
                                      const std::vector<Operator>& projectors, Rng& rng);

//------------------------------------------------------------------------
// Small constructors used when assembling protocols
//------------------------------------------------------------------------

Operator hadamard();
Operator pauli_x();
/// 4x4 controlled-NOT, control = first factor.
Operator cnot();
/// Any unitary whose first column is the given unit vector (Householder
/// completion). Used to turn "prepare this state from |0...0>" into a round.
Operator unitary_with_first_column(const StateVector& target);

} // namespace coinflip
