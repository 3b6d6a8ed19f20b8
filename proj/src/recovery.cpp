/**
 * This code is part of petzrec.
 *
 * (C) Copyright petzrec developers 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "petzrec/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "petzrec/superop_checks.hpp"

namespace petzrec {

//=============================================================================
// Petz map
//=============================================================================

PetzResult petz_map(const Channel &phi, const ReferenceState &b,
                    double strictness_floor) {
  if (!same_algebra(b.algebra(), phi.source())) {
    throw AlgebraMismatchError("petz_map: B not in the channel's source");
  }
  const StrictnessResult strict = is_strict(phi, b, strictness_floor);
  if (!strict.strict) {
    std::ostringstream msg;
    msg << "petz_map: channel not strict for B (margin " << strict.margin
        << ")";
    throw StrictnessError(msg.str());
  }
  const ReferenceState phi_b(phi.apply(b), strictness_floor);

  // Superoperator of R = (B^{1/2} . B^{1/2}) o phi^* o (C^{-1/2} . C^{-1/2})
  // in orthonormal coordinates, mapping target coordinates to source ones.
  const Matrix sandwich_b = sandwich_matrix(sqrt_psd(b));
  const Matrix sandwich_c =
      sandwich_matrix(pow_floor(phi_b, -0.5, 0.5 * strictness_floor));
  const Matrix r_mat =
      sandwich_b * phi.superoperator_matrix().adjoint() * sandwich_c;

  // Extend to the embedding space by pre-pinching onto the target blocks,
  // then take the Choi matrix of the extended map. Matrix units across
  // different blocks are annihilated; units inside block j carry coordinate
  // weight sqrt(w'_j).
  const AlgebraPtr &src = phi.target();   // source of R
  const AlgebraPtr &tgt = phi.source();   // target of R
  const int ns = src->total_dim();
  const int nt = tgt->total_dim();
  Matrix choi = Matrix::Zero(ns * nt, ns * nt);
  for (int j = 0; j < src->num_blocks(); ++j) {
    const int dj = src->block_dim(j);
    const int boff = src->block_offset(j);
    const int coff = src->coord_offset(j);
    const double sw = std::sqrt(src->weight(j));
    for (int r = 0; r < dj; ++r) {
      for (int c = 0; c < dj; ++c) {
        Vector in_coords = Vector::Zero(src->coord_dim());
        in_coords(coff + r * dj + c) = Complex(sw, 0.0);
        const AlgebraElement out = from_coords(tgt, r_mat * in_coords);
        const Matrix big = out.embedded();
        const int a = boff + r;
        const int bcol = boff + c;
        for (int m = 0; m < nt; ++m) {
          for (int n = 0; n < nt; ++n) {
            choi(a * nt + m, bcol * nt + n) = big(m, n);
          }
        }
      }
    }
  }

  double choi_min_eig = 0.0;
  std::vector<Matrix> kraus =
      choi_to_kraus(choi, ns, nt, /*breakdown=*/1e-8,
                    &choi_min_eig);
  Channel recovery(src, tgt, std::move(kraus));
  return PetzResult{std::move(recovery), choi_min_eig};
}

namespace {

Channel build_recovery(const Channel &phi, const ReferenceState &b,
                       double strictness_floor, double *choi_min_eig_out) {
  PetzResult petz = petz_map(phi, b, strictness_floor);
  *choi_min_eig_out = petz.choi_min_eigenvalue;
  return std::move(petz.channel);
}

}  // namespace

RecoverySetup::RecoverySetup(Channel phi, ReferenceState b,
                             double strictness_floor)
    : phi_(std::move(phi)),
      b_(std::move(b)),
      phi_b_(phi_.apply(b_), strictness_floor),
      strictness_floor_(strictness_floor),
      recovery_(build_recovery(phi_, b_, strictness_floor,
                               &petz_choi_min_eig_)) {
  strictness_margin_ = phi_b_.min_eigenvalue();
  fixed_point_residual_ = l2_norm(recovery_.apply(phi_b_) - b_);
  src_ctx_ = std::make_shared<EntropyContext>(b_);
  tgt_ctx_ = std::make_shared<EntropyContext>(phi_b_);
}

//=============================================================================
// Chain checks
//=============================================================================

double am_adjoint_residual(const RecoverySetup &setup) {
  // <phi(X), Y>_{phi(B)} = vec(Y)^H T_C Phi vec(X)
  // <X, R(Y)>_B          = vec(Y)^H R^H T_B vec(X)
  const Matrix t_b = sandwich_matrix(setup.source_context().inv_sqrt_b());
  const Matrix t_c = sandwich_matrix(setup.target_context().inv_sqrt_b());
  const Matrix lhs = t_c * setup.channel().superoperator_matrix();
  const Matrix rhs =
      setup.recovery().superoperator_matrix().adjoint() * t_b;
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

double ChainReport::min_margin() const {
  return std::min(std::min(margin_am_bound(), margin_norm_comparison()),
                  std::min(margin_l1_bound(), margin_fidelity_bound()));
}

void ChainReport::verify(double tol) const {
  if (min_margin() < -tol) {
    std::ostringstream msg;
    msg << "ChainReport: margin " << min_margin() << " below -" << tol
        << " (am bound " << margin_am_bound() << ", norm comparison "
        << margin_norm_comparison() << ", l1 bound " << margin_l1_bound()
        << ", fidelity bound " << margin_fidelity_bound() << ")";
    throw InvariantError(msg.str());
  }
}

ChainReport chain_report(const StateElement &a, const RecoverySetup &setup) {
  if (!same_algebra(a.algebra(), setup.channel().source())) {
    throw AlgebraMismatchError("chain_report: state not in source algebra");
  }
  ChainReport rep;
  const StateElement phi_a(setup.channel().apply(a));
  const StateElement recovered(setup.recovery().apply(phi_a));
  rep.s2_source = sandwiched_entropy(a, setup.source_context(), 2.0);
  rep.s2_target = sandwiched_entropy(phi_a, setup.target_context(), 2.0);
  rep.entropy_gap = rep.s2_source - rep.s2_target;

  const AlgebraElement residual = a - recovered;
  rep.am_residual_sq =
      am_inner(residual, residual, setup.source_context()).real();
  const double l1 = p_norm(residual, 1.0);
  rep.l1_residual_sq = l1 * l1;

  const double f = fidelity(FidelityPair(a, recovered));
  rep.fidelity_term = 4.0 * (1.0 - f) * (1.0 - f);
  return rep;
}

double contraction_defect_slack(const Superoperator &t, const Vector &x) {
  const double norm = t.operator_norm();
  if (norm > 1.0 + 1e-10) {
    std::ostringstream msg;
    msg << "contraction_defect_slack: operator norm " << norm << " exceeds 1";
    throw InvariantError(msg.str());
  }
  const Vector tx = t.mat * x;
  const Vector residual = x - t.mat.adjoint() * tx;
  return (x.squaredNorm() - tx.squaredNorm()) - residual.squaredNorm();
}

double swb_gap(const StateElement &a, const RecoverySetup &setup) {
  const StateElement phi_a(setup.channel().apply(a));
  const StateElement recovered(setup.recovery().apply(phi_a));
  const double kl_gap = kl_divergence(a, setup.source_context()) -
                        kl_divergence(phi_a, setup.target_context());
  const double f = fidelity(FidelityPair(a, recovered));
  if (!(f > 0.0)) {
    throw InvariantError("swb_gap: vanishing fidelity, log undefined");
  }
  return kl_gap - (-2.0 * std::log(std::min(1.0, f)));
}

double SufficiencyResult::margin() const {
  if (!hypothesis) return 1.0;
  return 1e-6 - std::max(std::abs(kl_gap), std::abs(s2_gap));
}

SufficiencyResult petz_sufficiency_check(const StateElement &a,
                                         const RecoverySetup &setup) {
  SufficiencyResult out;
  const StateElement phi_a(setup.channel().apply(a));
  const StateElement recovered(setup.recovery().apply(phi_a));
  out.recovery_residual = l2_norm(recovered - a);
  out.hypothesis = out.recovery_residual <= 1e-8;
  if (!out.hypothesis) return out;
  out.kl_gap = kl_divergence(a, setup.source_context()) -
               kl_divergence(phi_a, setup.target_context());
  out.s2_gap = sandwiched_entropy(a, setup.source_context(), 2.0) -
               sandwiched_entropy(phi_a, setup.target_context(), 2.0);
  out.pass = std::abs(out.kl_gap) <= 1e-6 && std::abs(out.s2_gap) <= 1e-6;
  return out;
}

}  // namespace petzrec
