/**
 * This code is part of petzrec.
 *
 * (C) Copyright petzrec developers 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "petzrec/superop_checks.hpp"

#include <cmath>
#include <sstream>

namespace petzrec {

namespace {

Matrix kron(const Matrix &a, const Matrix &b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

double min_eig_sym(const Matrix &m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Matrix sqrt_psd_matrix(const Matrix &m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
  RealVector vals = es.eigenvalues();
  for (int k = 0; k < vals.size(); ++k) {
    vals(k) = std::sqrt(std::max(0.0, vals(k)));
  }
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

void require_strict(const Channel &phi, const ReferenceState &b,
                    double strictness_floor, const char *op) {
  const StrictnessResult strict = is_strict(phi, b, strictness_floor);
  if (!strict.strict) {
    std::ostringstream msg;
    msg << op << ": channel not strict for B (margin " << strict.margin << ")";
    throw StrictnessError(msg.str());
  }
}

}  // namespace

Superoperator build_mult(const AlgebraElement &x, MultKind kind) {
  const AlgebraPtr &alg = x.algebra();
  Matrix m = Matrix::Zero(alg->coord_dim(), alg->coord_dim());
  for (int i = 0; i < alg->num_blocks(); ++i) {
    const int n = alg->block_dim(i);
    const int off = alg->coord_offset(i);
    const Matrix eye = Matrix::Identity(n, n);
    // Row-major vec within each block: vec(AYB) = (A kron B^T) vec(Y).
    const Matrix blk = (kind == MultKind::Left)
                           ? kron(x.block(i), eye)
                           : kron(eye, x.block(i).transpose());
    m.block(off, off, n * n, n * n) = blk;
  }
  return Superoperator{alg, alg, std::move(m)};
}

Matrix sandwich_matrix(const AlgebraElement &m) {
  const AlgebraPtr &alg = m.algebra();
  Matrix out = Matrix::Zero(alg->coord_dim(), alg->coord_dim());
  for (int i = 0; i < alg->num_blocks(); ++i) {
    const int n = alg->block_dim(i);
    const int off = alg->coord_offset(i);
    out.block(off, off, n * n, n * n) =
        kron(m.block(i), m.block(i).transpose());
  }
  return out;
}

Superoperator am_contraction_operator(const Channel &phi, const ReferenceState &b,
                                 double strictness_floor) {
  require_strict(phi, b, strictness_floor, "am_contraction_operator");
  const ReferenceState phi_b(phi.apply(b), strictness_floor);
  const AlgebraElement sqrt_b = sqrt_psd(b);
  const AlgebraElement inv_sqrt_phi_b =
      pow_floor(phi_b, -0.5, 0.5 * strictness_floor);
  const Matrix r_sqrt_b = build_mult(sqrt_b, MultKind::Right).mat;
  const Matrix r_inv = build_mult(inv_sqrt_phi_b, MultKind::Right).mat;
  return Superoperator{
      phi.target(), phi.source(),
      r_sqrt_b * phi.superoperator_matrix().adjoint() * r_inv};
}

double contraction_norm_margin(const Channel &phi, const ReferenceState &b,
                                 double strictness_floor) {
  return 1.0 - am_contraction_operator(phi, b, strictness_floor).operator_norm();
}

double modular_domination_margin(const Channel &phi, const ReferenceState &b,
                         double strictness_floor) {
  const Superoperator v = am_contraction_operator(phi, b, strictness_floor);
  const ReferenceState phi_b(phi.apply(b), strictness_floor);
  const AlgebraElement inv_b = pow_floor(b, -1.0, 0.5 * b.floor_delta());
  const AlgebraElement inv_phi_b =
      pow_floor(phi_b, -1.0, 0.5 * strictness_floor);
  const Matrix delta = build_mult(b, MultKind::Left).mat *
                       build_mult(inv_b, MultKind::Right).mat;
  const Matrix delta0 = build_mult(phi_b, MultKind::Left).mat *
                        build_mult(inv_phi_b, MultKind::Right).mat;
  return min_eig_sym(delta0 - v.mat.adjoint() * delta * v.mat);
}

double sandwich_domination_margin(const Channel &phi, const ReferenceState &b,
                      double strictness_floor) {
  require_strict(phi, b, strictness_floor, "sandwich_domination_margin");
  const ReferenceState phi_b(phi.apply(b), strictness_floor);
  const Matrix s_b = sandwich_matrix(sqrt_psd(b));
  const Matrix s_phi_b = sandwich_matrix(sqrt_psd(phi_b));
  const Matrix &m = phi.superoperator_matrix();
  return min_eig_sym(s_phi_b - m * s_b * m.adjoint());
}

double operator_concavity_margin(const Channel &phi, const ReferenceState &b,
                                 double strictness_floor) {
  const Superoperator v = am_contraction_operator(phi, b, strictness_floor);
  const ReferenceState phi_b(phi.apply(b), strictness_floor);
  const AlgebraElement inv_b = pow_floor(b, -1.0, 0.5 * b.floor_delta());
  const AlgebraElement inv_phi_b =
      pow_floor(phi_b, -1.0, 0.5 * strictness_floor);
  const Matrix delta = build_mult(b, MultKind::Left).mat *
                       build_mult(inv_b, MultKind::Right).mat;
  const Matrix delta0 = build_mult(phi_b, MultKind::Left).mat *
                        build_mult(inv_phi_b, MultKind::Right).mat;
  const Matrix sqrt_delta = sqrt_psd_matrix(delta);
  const Matrix sqrt_delta0 = sqrt_psd_matrix(delta0);
  return min_eig_sym(sqrt_delta0 - v.mat.adjoint() * sqrt_delta * v.mat);
}

double amgm_psd_margin(const ReferenceState &b) {
  const AlgebraElement inv_sqrt_b = pow_floor(b, -0.5, 0.5 * b.floor_delta());
  const Matrix lhs = sandwich_matrix(inv_sqrt_b);
  const Matrix sum = build_mult(b, MultKind::Left).mat +
                     build_mult(b, MultKind::Right).mat;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (sum + sum.adjoint()));
  RealVector vals = es.eigenvalues();
  for (int k = 0; k < vals.size(); ++k) vals(k) = 1.0 / vals(k);
  const Matrix inv_sum =
      es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
  return min_eig_sym(lhs - 2.0 * inv_sum);
}

double trace_vs_am_margin(const AlgebraElement &x, const ReferenceState &b) {
  if (!same_algebra(x.algebra(), b.algebra())) {
    throw AlgebraMismatchError("trace_vs_am_margin: algebra mismatch");
  }
  const EntropyContext ctx(b);
  const double am = am_norm(x, ctx, 2.0);
  const double tr = p_norm(x, 1.0);
  return am * am - tr * tr;
}

double am_contraction_margin(const AlgebraElement &x, const ReferenceState &b,
                             const Channel &phi, double strictness_floor) {
  require_strict(phi, b, strictness_floor, "am_contraction_margin");
  const ReferenceState phi_b(phi.apply(b), strictness_floor);
  const EntropyContext src_ctx(b);
  const EntropyContext tgt_ctx(phi_b);
  return am_norm(x, src_ctx, 2.0) - am_norm(phi.apply(x), tgt_ctx, 2.0);
}

}  // namespace petzrec
