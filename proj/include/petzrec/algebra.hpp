/**
 * This code is part of petzrec.
 *
 * (C) Copyright petzrec developers 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef PETZREC_ALGEBRA_HPP_
#define PETZREC_ALGEBRA_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "petzrec/types.hpp"

namespace petzrec {

//=============================================================================
// TracialAlgebra
//=============================================================================

// Finite direct sum of complex matrix blocks M_{n_0} + ... + M_{n_{k-1}}
// carrying the normalized tracial state
//
//     tau(X) = sum_i w_i * Tr(X_i),    sum_i w_i * n_i = 1,  w_i > 0.
//
// All elements, channels and superoperators refer back to a shared instance
// of this descriptor.
class TracialAlgebra {
 public:
  static std::shared_ptr<const TracialAlgebra> make(
      std::vector<int> block_dims, std::vector<double> trace_weights);

  // (M_n, Tr/n).
  static std::shared_ptr<const TracialAlgebra> single_block(int n);

  int num_blocks() const { return static_cast<int>(dims_.size()); }
  int block_dim(int i) const { return dims_[i]; }
  double weight(int i) const { return weights_[i]; }
  const std::vector<int> &block_dims() const { return dims_; }
  const std::vector<double> &trace_weights() const { return weights_; }

  // N = sum n_i; side of the embedding space M_N.
  int total_dim() const { return total_dim_; }
  // D = sum n_i^2; dimension of the weighted-L^2 coordinate space.
  int coord_dim() const { return coord_dim_; }
  // Offset of block i inside the embedding space.
  int block_offset(int i) const { return block_offsets_[i]; }
  // Offset of block i's coordinates inside the L^2 coordinate vector.
  int coord_offset(int i) const { return coord_offsets_[i]; }

  // Diagonal of the weight operator W on the embedding space (w_i repeated
  // n_i times).
  const RealVector &weight_diagonal() const { return weight_diag_; }

  bool operator==(const TracialAlgebra &other) const {
    return dims_ == other.dims_ && weights_ == other.weights_;
  }
  bool operator!=(const TracialAlgebra &other) const {
    return !(*this == other);
  }

 private:
  TracialAlgebra(std::vector<int> dims, std::vector<double> weights);

  std::vector<int> dims_;
  std::vector<double> weights_;
  std::vector<int> block_offsets_;
  std::vector<int> coord_offsets_;
  int total_dim_ = 0;
  int coord_dim_ = 0;
  RealVector weight_diag_;
};

using AlgebraPtr = std::shared_ptr<const TracialAlgebra>;

inline bool same_algebra(const AlgebraPtr &a, const AlgebraPtr &b) {
  return a == b || (a && b && *a == *b);
}

//=============================================================================
// AlgebraElement and refinements
//=============================================================================

// A block-diagonal element of a TracialAlgebra, stored one dense complex
// matrix per block. Immutable value type; all arithmetic returns new values.
class AlgebraElement {
 public:
  AlgebraElement(AlgebraPtr algebra, std::vector<Matrix> blocks);

  static AlgebraElement zero(const AlgebraPtr &algebra);
  static AlgebraElement identity(const AlgebraPtr &algebra);

  const AlgebraPtr &algebra() const { return algebra_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const Matrix &block(int i) const { return blocks_[i]; }
  const std::vector<Matrix> &blocks() const { return blocks_; }

  AlgebraElement operator+(const AlgebraElement &other) const;
  AlgebraElement operator-(const AlgebraElement &other) const;
  AlgebraElement operator*(const AlgebraElement &other) const;
  AlgebraElement operator*(Complex scalar) const;
  AlgebraElement operator*(double scalar) const {
    return *this * Complex(scalar, 0.0);
  }
  AlgebraElement adjoint() const;

  // Block-diagonal embedding into M_N.
  Matrix embedded() const;
  // Inverse of embedded(); if residual is non-null it receives the Frobenius
  // norm of the discarded off-block part.
  static AlgebraElement from_embedded(const AlgebraPtr &algebra,
                                      const Matrix &big,
                                      double *off_block_residual = nullptr);

  double max_abs_entry() const;

 protected:
  AlgebraPtr algebra_;
  std::vector<Matrix> blocks_;
};

inline AlgebraElement operator*(Complex scalar, const AlgebraElement &x) {
  return x * scalar;
}
inline AlgebraElement operator*(double scalar, const AlgebraElement &x) {
  return x * scalar;
}

// Hermitian within 1e-12 entrywise; the stored blocks are symmetrized.
class HermitianElement : public AlgebraElement {
 public:
  explicit HermitianElement(const AlgebraElement &x,
                            double hermiticity_tol = 1e-12);
};

// Positive semidefinite (eigenvalues >= -1e-12) with tau(A) = 1 within 1e-10.
class StateElement : public HermitianElement {
 public:
  explicit StateElement(const AlgebraElement &x);
};

// State with spectrum bounded below by an invertibility floor, so that
// negative powers are well conditioned.
class ReferenceState : public StateElement {
 public:
  ReferenceState(const AlgebraElement &x, double floor_delta = 1e-6);

  double min_eigenvalue() const { return min_eig_; }
  double floor_delta() const { return floor_; }

 private:
  double min_eig_ = 0.0;
  double floor_ = 0.0;
};

//=============================================================================
// Trace, norms, inner product
//=============================================================================

// tau(X) = sum_i w_i Tr(X_i).
Complex trace(const AlgebraElement &x);

// ||X||_p = tau(|X|^p)^(1/p) via singular values per block. Requires p >= 1.
double p_norm(const AlgebraElement &x, double p);

// <X, Y>_tau = tau(Y^* X); linear in X, conjugate-linear in Y.
Complex inner(const AlgebraElement &x, const AlgebraElement &y);

// ||X||_2 = sqrt(<X, X>_tau).
double l2_norm(const AlgebraElement &x);

// Operator norm: largest singular value over blocks.
double operator_norm(const AlgebraElement &x);

//=============================================================================
// Spectral calculus
//=============================================================================

// Eigenvalues of a Hermitian element, ascending, pooled over blocks. The
// element is symmetrized before decomposition.
std::vector<double> eigenvalues(const AlgebraElement &x);
double min_eigenvalue(const AlgebraElement &x);
double max_eigenvalue(const AlgebraElement &x);

// Applies f blockwise to the eigenvalues of a Hermitian element. Enforces
// the 1e-12 Hermiticity gate; callers apply their own spectrum guards.
AlgebraElement spectral_apply(const AlgebraElement &x,
                              const std::function<double(double)> &f,
                              double hermiticity_tol = 1e-12);

// sqrt with eigenvalues in [-1e-12, 0] clamped to 0; below that is an error.
AlgebraElement sqrt_psd(const AlgebraElement &x);

// |X| = (X^* X)^(1/2) for Hermitian X (eigenvalue absolute values).
AlgebraElement abs_hermitian(const AlgebraElement &x);

// x^e for arbitrary real e; requires the spectrum to lie strictly above
// `floor` when e < 0 or e is fractional-on-negatives.
AlgebraElement pow_floor(const AlgebraElement &x, double exponent,
                         double floor);

// log with the same floor guard.
AlgebraElement log_floor(const AlgebraElement &x, double floor);

// (X + X^*)/2.
AlgebraElement hermitian_part(const AlgebraElement &x);

bool is_hermitian(const AlgebraElement &x, double tol = 1e-12);

//=============================================================================
// Randomized generators (deterministic per seed)
//=============================================================================

// Wishart density: G G^* per block, normalized to unit tau-trace.
StateElement random_state(const AlgebraPtr &algebra, std::uint64_t seed);

// Rectangular-Wishart density mixed toward the identity element just enough
// to push the smallest eigenvalue above floor_delta.
ReferenceState random_reference_state(const AlgebraPtr &algebra,
                                      std::uint64_t seed,
                                      double floor_delta = 1e-6);

HermitianElement random_hermitian(const AlgebraPtr &algebra,
                                  std::uint64_t seed);

// Block-diagonal Haar unitary.
AlgebraElement random_unitary(const AlgebraPtr &algebra, std::uint64_t seed);

// Largest feasible invertibility floor for this algebra.
double max_feasible_floor(const TracialAlgebra &algebra);

}  // namespace petzrec

#endif  // PETZREC_ALGEBRA_HPP_
