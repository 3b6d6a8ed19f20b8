/**
 * This code is part of petzrec.
 *
 * (C) Copyright petzrec developers 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "petzrec/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "petzrec/rng.hpp"

namespace petzrec {

namespace {

void require_same_algebra(const AlgebraElement &x, const AlgebraElement &y,
                          const char *op) {
  if (!same_algebra(x.algebra(), y.algebra())) {
    std::ostringstream msg;
    msg << "algebra mismatch in " << op;
    throw AlgebraMismatchError(msg.str());
  }
}

}  // namespace

//=============================================================================
// TracialAlgebra
//=============================================================================

TracialAlgebra::TracialAlgebra(std::vector<int> dims,
                               std::vector<double> weights)
    : dims_(std::move(dims)), weights_(std::move(weights)) {
  if (dims_.empty() || dims_.size() != weights_.size()) {
    throw InvariantError("TracialAlgebra: need matching nonempty dims/weights");
  }
  double mass = 0.0;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (dims_[i] < 1) throw InvariantError("TracialAlgebra: block dim < 1");
    if (!(weights_[i] > 0.0))
      throw InvariantError("TracialAlgebra: trace weight <= 0");
    mass += weights_[i] * dims_[i];
  }
  if (std::abs(mass - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "TracialAlgebra: sum w_i*n_i = " << mass << ", expected 1";
    throw InvariantError(msg.str());
  }
  block_offsets_.resize(dims_.size());
  coord_offsets_.resize(dims_.size());
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    block_offsets_[i] = total_dim_;
    coord_offsets_[i] = coord_dim_;
    total_dim_ += dims_[i];
    coord_dim_ += dims_[i] * dims_[i];
  }
  weight_diag_.resize(total_dim_);
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    weight_diag_.segment(block_offsets_[i], dims_[i]).setConstant(weights_[i]);
  }
}

std::shared_ptr<const TracialAlgebra> TracialAlgebra::make(
    std::vector<int> block_dims, std::vector<double> trace_weights) {
  return std::shared_ptr<const TracialAlgebra>(
      new TracialAlgebra(std::move(block_dims), std::move(trace_weights)));
}

std::shared_ptr<const TracialAlgebra> TracialAlgebra::single_block(int n) {
  return make({n}, {1.0 / n});
}

//=============================================================================
// AlgebraElement
//=============================================================================

AlgebraElement::AlgebraElement(AlgebraPtr algebra, std::vector<Matrix> blocks)
    : algebra_(std::move(algebra)), blocks_(std::move(blocks)) {
  if (!algebra_) throw InvariantError("AlgebraElement: null algebra");
  if (static_cast<int>(blocks_.size()) != algebra_->num_blocks()) {
    throw InvariantError("AlgebraElement: block count mismatch");
  }
  for (int i = 0; i < algebra_->num_blocks(); ++i) {
    const int n = algebra_->block_dim(i);
    if (blocks_[i].rows() != n || blocks_[i].cols() != n) {
      throw InvariantError("AlgebraElement: block shape mismatch");
    }
  }
}

AlgebraElement AlgebraElement::zero(const AlgebraPtr &algebra) {
  std::vector<Matrix> blocks;
  blocks.reserve(algebra->num_blocks());
  for (int i = 0; i < algebra->num_blocks(); ++i) {
    blocks.push_back(Matrix::Zero(algebra->block_dim(i), algebra->block_dim(i)));
  }
  return AlgebraElement(algebra, std::move(blocks));
}

AlgebraElement AlgebraElement::identity(const AlgebraPtr &algebra) {
  std::vector<Matrix> blocks;
  blocks.reserve(algebra->num_blocks());
  for (int i = 0; i < algebra->num_blocks(); ++i) {
    blocks.push_back(
        Matrix::Identity(algebra->block_dim(i), algebra->block_dim(i)));
  }
  return AlgebraElement(algebra, std::move(blocks));
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement &other) const {
  require_same_algebra(*this, other, "operator+");
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    blocks.push_back(blocks_[i] + other.blocks_[i]);
  }
  return AlgebraElement(algebra_, std::move(blocks));
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement &other) const {
  require_same_algebra(*this, other, "operator-");
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    blocks.push_back(blocks_[i] - other.blocks_[i]);
  }
  return AlgebraElement(algebra_, std::move(blocks));
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement &other) const {
  require_same_algebra(*this, other, "operator*");
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    blocks.push_back(blocks_[i] * other.blocks_[i]);
  }
  return AlgebraElement(algebra_, std::move(blocks));
}

AlgebraElement AlgebraElement::operator*(Complex scalar) const {
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (const auto &b : blocks_) blocks.push_back(scalar * b);
  return AlgebraElement(algebra_, std::move(blocks));
}

AlgebraElement AlgebraElement::adjoint() const {
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (const auto &b : blocks_) blocks.push_back(b.adjoint());
  return AlgebraElement(algebra_, std::move(blocks));
}

Matrix AlgebraElement::embedded() const {
  const int n = algebra_->total_dim();
  Matrix big = Matrix::Zero(n, n);
  for (int i = 0; i < algebra_->num_blocks(); ++i) {
    const int off = algebra_->block_offset(i);
    const int d = algebra_->block_dim(i);
    big.block(off, off, d, d) = blocks_[i];
  }
  return big;
}

AlgebraElement AlgebraElement::from_embedded(const AlgebraPtr &algebra,
                                             const Matrix &big,
                                             double *off_block_residual) {
  const int n = algebra->total_dim();
  if (big.rows() != n || big.cols() != n) {
    throw InvariantError("from_embedded: matrix size mismatch");
  }
  std::vector<Matrix> blocks;
  blocks.reserve(algebra->num_blocks());
  for (int i = 0; i < algebra->num_blocks(); ++i) {
    const int off = algebra->block_offset(i);
    const int d = algebra->block_dim(i);
    blocks.push_back(big.block(off, off, d, d));
  }
  if (off_block_residual) {
    // Summed directly off the discarded entries; a total-minus-kept
    // subtraction would turn cancellation noise into a phantom residual.
    Matrix rest = big;
    for (int i = 0; i < algebra->num_blocks(); ++i) {
      const int off = algebra->block_offset(i);
      const int d = algebra->block_dim(i);
      rest.block(off, off, d, d).setZero();
    }
    *off_block_residual = rest.norm();
  }
  return AlgebraElement(algebra, std::move(blocks));
}

double AlgebraElement::max_abs_entry() const {
  double m = 0.0;
  for (const auto &b : blocks_) m = std::max(m, b.cwiseAbs().maxCoeff());
  return m;
}

//=============================================================================
// Refinements
//=============================================================================

HermitianElement::HermitianElement(const AlgebraElement &x,
                                   double hermiticity_tol)
    : AlgebraElement(x) {
  const AlgebraElement asym = x - x.adjoint();
  const double residual = 0.5 * asym.max_abs_entry();
  if (residual > hermiticity_tol) {
    std::ostringstream msg;
    msg << "HermitianElement: entry asymmetry " << residual << " exceeds "
        << hermiticity_tol;
    throw InvariantError(msg.str());
  }
  for (auto &b : blocks_) b = 0.5 * (b + b.adjoint()).eval();
}

StateElement::StateElement(const AlgebraElement &x) : HermitianElement(x) {
  const double lambda_min = min_eigenvalue(*this);
  if (lambda_min < -1e-12) {
    std::ostringstream msg;
    msg << "StateElement: eigenvalue " << lambda_min << " below -1e-12";
    throw InvariantError(msg.str());
  }
  const double t = trace(*this).real();
  if (std::abs(t - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << "StateElement: trace " << t << " deviates from 1 beyond 1e-10";
    throw InvariantError(msg.str());
  }
}

ReferenceState::ReferenceState(const AlgebraElement &x, double floor_delta)
    : StateElement(x), floor_(floor_delta) {
  min_eig_ = eigenvalues(*this).front();
  if (min_eig_ < floor_ * (1.0 - 1e-9)) {
    std::ostringstream msg;
    msg << "ReferenceState: min eigenvalue " << min_eig_
        << " below invertibility floor " << floor_;
    throw InvariantError(msg.str());
  }
}

//=============================================================================
// Trace, norms, inner product
//=============================================================================

Complex trace(const AlgebraElement &x) {
  Complex t(0.0, 0.0);
  const auto &alg = *x.algebra();
  for (int i = 0; i < alg.num_blocks(); ++i) {
    t += alg.weight(i) * x.block(i).trace();
  }
  return t;
}

double p_norm(const AlgebraElement &x, double p) {
  if (p < 1.0) throw InvariantError("p_norm: p must be >= 1");
  const auto &alg = *x.algebra();
  double acc = 0.0;
  for (int i = 0; i < alg.num_blocks(); ++i) {
    Eigen::JacobiSVD<Matrix> svd(x.block(i));
    const auto &sv = svd.singularValues();
    for (int k = 0; k < sv.size(); ++k) {
      acc += alg.weight(i) * std::pow(sv(k), p);
    }
  }
  return std::pow(acc, 1.0 / p);
}

Complex inner(const AlgebraElement &x, const AlgebraElement &y) {
  require_same_algebra(x, y, "inner");
  Complex t(0.0, 0.0);
  const auto &alg = *x.algebra();
  for (int i = 0; i < alg.num_blocks(); ++i) {
    t += alg.weight(i) * (y.block(i).adjoint() * x.block(i)).trace();
  }
  return t;
}

double l2_norm(const AlgebraElement &x) {
  return std::sqrt(std::max(0.0, inner(x, x).real()));
}

double operator_norm(const AlgebraElement &x) {
  double m = 0.0;
  for (const auto &b : x.blocks()) {
    Eigen::JacobiSVD<Matrix> svd(b);
    if (svd.singularValues().size() > 0) {
      m = std::max(m, svd.singularValues()(0));
    }
  }
  return m;
}

//=============================================================================
// Spectral calculus
//=============================================================================

std::vector<double> eigenvalues(const AlgebraElement &x) {
  std::vector<double> evals;
  for (const auto &b : x.blocks()) {
    const Matrix h = 0.5 * (b + b.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h,
                                             Eigen::EigenvaluesOnly);
    for (int k = 0; k < es.eigenvalues().size(); ++k) {
      evals.push_back(es.eigenvalues()(k));
    }
  }
  std::sort(evals.begin(), evals.end());
  return evals;
}

double min_eigenvalue(const AlgebraElement &x) {
  const auto ev = eigenvalues(x);
  return ev.front();
}

double max_eigenvalue(const AlgebraElement &x) {
  const auto ev = eigenvalues(x);
  return ev.back();
}

AlgebraElement spectral_apply(const AlgebraElement &x,
                              const std::function<double(double)> &f,
                              double hermiticity_tol) {
  const AlgebraElement asym = x - x.adjoint();
  if (0.5 * asym.max_abs_entry() > hermiticity_tol) {
    throw InvariantError("spectral_apply: input not Hermitian within tolerance");
  }
  std::vector<Matrix> blocks;
  blocks.reserve(x.num_blocks());
  for (const auto &b : x.blocks()) {
    const Matrix h = 0.5 * (b + b.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    RealVector vals = es.eigenvalues();
    for (int k = 0; k < vals.size(); ++k) vals(k) = f(vals(k));
    blocks.push_back(es.eigenvectors() * vals.asDiagonal() *
                     es.eigenvectors().adjoint());
  }
  return AlgebraElement(x.algebra(), std::move(blocks));
}

AlgebraElement sqrt_psd(const AlgebraElement &x) {
  const double lambda_min = min_eigenvalue(x);
  if (lambda_min < -1e-12) {
    std::ostringstream msg;
    msg << "sqrt_psd: eigenvalue " << lambda_min << " below clamp window";
    throw InvariantError(msg.str());
  }
  return spectral_apply(
      x, [](double v) { return std::sqrt(std::max(0.0, v)); });
}

AlgebraElement abs_hermitian(const AlgebraElement &x) {
  return spectral_apply(x, [](double v) { return std::abs(v); });
}

AlgebraElement pow_floor(const AlgebraElement &x, double exponent,
                         double floor) {
  const bool needs_floor =
      exponent < 0.0 || exponent != std::round(exponent);
  if (needs_floor) {
    const double lambda_min = min_eigenvalue(x);
    if (lambda_min <= floor * (1.0 - 1e-9) && exponent < 0.0) {
      std::ostringstream msg;
      msg << "pow_floor: spectrum reaches " << lambda_min
          << ", at or below floor " << floor << " for exponent " << exponent;
      throw InvariantError(msg.str());
    }
    if (lambda_min < -1e-12) {
      throw InvariantError("pow_floor: negative spectrum for fractional power");
    }
  }
  return spectral_apply(x, [exponent](double v) {
    return std::pow(std::max(0.0, v), exponent);
  });
}

AlgebraElement log_floor(const AlgebraElement &x, double floor) {
  const double lambda_min = min_eigenvalue(x);
  if (lambda_min <= floor * (1.0 - 1e-9)) {
    std::ostringstream msg;
    msg << "log_floor: spectrum reaches " << lambda_min
        << ", at or below floor " << floor;
    throw InvariantError(msg.str());
  }
  return spectral_apply(x, [](double v) { return std::log(v); });
}

AlgebraElement hermitian_part(const AlgebraElement &x) {
  return 0.5 * (x + x.adjoint());
}

bool is_hermitian(const AlgebraElement &x, double tol) {
  const AlgebraElement asym = x - x.adjoint();
  return 0.5 * asym.max_abs_entry() <= tol;
}

//=============================================================================
// Randomized generators
//=============================================================================

double max_feasible_floor(const TracialAlgebra &algebra) {
  double max_w = 0.0;
  for (int i = 0; i < algebra.num_blocks(); ++i) {
    max_w = std::max(max_w, algebra.weight(i));
  }
  return 1.0 / (algebra.total_dim() * max_w);
}

namespace {

AlgebraElement wishart_density(const AlgebraPtr &algebra, Rng &rng,
                               int extra_cols) {
  std::vector<Matrix> blocks;
  blocks.reserve(algebra->num_blocks());
  for (int i = 0; i < algebra->num_blocks(); ++i) {
    const int n = algebra->block_dim(i);
    Matrix g = rng.ginibre(n, n + extra_cols);
    blocks.push_back(g * g.adjoint());
  }
  AlgebraElement a(algebra, std::move(blocks));
  const double t = trace(a).real();
  return a * (1.0 / t);
}

}  // namespace

StateElement random_state(const AlgebraPtr &algebra, std::uint64_t seed) {
  Rng rng(seed);
  return StateElement(wishart_density(algebra, rng, 0));
}

ReferenceState random_reference_state(const AlgebraPtr &algebra,
                                      std::uint64_t seed, double floor_delta) {
  if (!(floor_delta > 0.0) || floor_delta >= max_feasible_floor(*algebra)) {
    std::ostringstream msg;
    msg << "random_reference_state: floor " << floor_delta
        << " infeasible for this algebra (max "
        << max_feasible_floor(*algebra) << ")";
    throw InvariantError(msg.str());
  }
  Rng rng(seed);
  // Rectangular Wishart keeps the spectrum away from zero, so the floor
  // mixture below is a rare correction rather than the typical path.
  AlgebraElement a = wishart_density(algebra, rng, algebra->total_dim());
  const double lambda_min = min_eigenvalue(a);
  const double target = floor_delta * 1.01;
  if (lambda_min < target) {
    const double t = (target - lambda_min) / (1.0 - lambda_min);
    a = (1.0 - t) * a + t * AlgebraElement::identity(algebra);
  }
  return ReferenceState(a, floor_delta);
}

HermitianElement random_hermitian(const AlgebraPtr &algebra,
                                  std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Matrix> blocks;
  blocks.reserve(algebra->num_blocks());
  for (int i = 0; i < algebra->num_blocks(); ++i) {
    const int n = algebra->block_dim(i);
    Matrix g = rng.ginibre(n, n);
    blocks.push_back(0.5 * (g + g.adjoint()));
  }
  return HermitianElement(AlgebraElement(algebra, std::move(blocks)));
}

AlgebraElement random_unitary(const AlgebraPtr &algebra, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Matrix> blocks;
  blocks.reserve(algebra->num_blocks());
  for (int i = 0; i < algebra->num_blocks(); ++i) {
    blocks.push_back(rng.haar_unitary(algebra->block_dim(i)));
  }
  return AlgebraElement(algebra, std::move(blocks));
}

}  // namespace petzrec
