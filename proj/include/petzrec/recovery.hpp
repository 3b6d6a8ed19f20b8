/**
 * This code is part of petzrec.
 *
 * (C) Copyright petzrec developers 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef PETZREC_RECOVERY_HPP_
#define PETZREC_RECOVERY_HPP_

#include <optional>

#include "petzrec/algebra.hpp"
#include "petzrec/channel.hpp"
#include "petzrec/entropy.hpp"
#include "petzrec/fidelity.hpp"
#include "petzrec/types.hpp"

namespace petzrec {

//=============================================================================
// Petz recovery map
//=============================================================================

struct PetzResult {
  Channel channel;
  // Smallest Choi eigenvalue seen before clamping; a completeness-of-
  // positivity certificate for the assembled map.
  double choi_min_eigenvalue = 0.0;
};

// R(Y) = B^{1/2} phi^*(phi(B)^{-1/2} Y phi(B)^{-1/2}) B^{1/2}, materialized
// as a Channel: the map is assembled as a superoperator, extended to the
// embedding space by pre-pinching, and converted to Kraus form through the
// Choi eigendecomposition (eigenvalues in [-1e-10, 0] clamped, negativity
// beyond -1e-8 aborts as numerical breakdown).
PetzResult petz_map(const Channel &phi, const ReferenceState &b,
                    double strictness_floor = 1e-8);

// A channel, its reference state, the image reference, and the materialized
// Petz map, bundled for the chain checks.
class RecoverySetup {
 public:
  RecoverySetup(Channel phi, ReferenceState b, double strictness_floor = 1e-8);

  const Channel &channel() const { return phi_; }
  const ReferenceState &reference() const { return b_; }
  const ReferenceState &image_reference() const { return phi_b_; }
  const Channel &recovery() const { return recovery_; }
  double strictness_margin() const { return strictness_margin_; }
  double petz_choi_min_eigenvalue() const { return petz_choi_min_eig_; }
  // ||R(phi(B)) - B||_2; the fixed-point certificate.
  double fixed_point_residual() const { return fixed_point_residual_; }
  double strictness_floor() const { return strictness_floor_; }

  const EntropyContext &source_context() const { return *src_ctx_; }
  const EntropyContext &target_context() const { return *tgt_ctx_; }

 private:
  Channel phi_;
  ReferenceState b_;
  ReferenceState phi_b_;
  double strictness_margin_ = 0.0;
  double petz_choi_min_eig_ = 0.0;
  double fixed_point_residual_ = 0.0;
  double strictness_floor_ = 0.0;
  Channel recovery_;
  std::shared_ptr<EntropyContext> src_ctx_;
  std::shared_ptr<EntropyContext> tgt_ctx_;
};

//=============================================================================
// Chain checks
//=============================================================================

// max over basis pairs of |<phi(X), Y>_{phi(B)} - <X, R(Y)>_B|: how far the
// materialized recovery channel sits from the Araki-Masuda adjoint of phi.
double am_adjoint_residual(const RecoverySetup &setup);

// All quantities in the recoverability chain for one state:
//   4 (1 - F)^2 <= ||A - R(phi(A))||_1^2 <= S_2(A|B) - S_2(phi(A)|phi(B))
// plus ||A - R(phi(A))||_{B,2}^2 <= entropy gap and
// ||.||_1^2 <= ||.||_{B,2}^2.
struct ChainReport {
  double s2_source = 0.0;        // S_2(A|B)
  double s2_target = 0.0;        // S_2(phi(A)|phi(B))
  double entropy_gap = 0.0;      // s2_source - s2_target
  double am_residual_sq = 0.0;   // ||A - R(phi(A))||_{B,2}^2
  double l1_residual_sq = 0.0;   // ||A - R(phi(A))||_1^2
  double fidelity_term = 0.0;    // 4 (1 - F(A | R(phi(A))))^2

  double margin_am_bound() const { return entropy_gap - am_residual_sq; }
  double margin_norm_comparison() const { return am_residual_sq - l1_residual_sq; }
  double margin_l1_bound() const { return entropy_gap - l1_residual_sq; }
  double margin_fidelity_bound() const { return l1_residual_sq - fidelity_term; }
  double min_margin() const;

  // Throws InvariantError if any chain margin falls below -tol.
  void verify(double tol = 1e-9) const;
};

ChainReport chain_report(const StateElement &a, const RecoverySetup &setup);

// (||x||^2 - ||Tx||^2) - ||x - T*Tx||^2 for a contraction T; >= 0.
double contraction_defect_slack(const Superoperator &t, const Vector &x);

// [D(A|B) - D(phi(A)|phi(B))] - [-2 ln F(A | R(phi(A)))]. Evaluated and
// logged only; the inequality this would certify is known to fail in
// general, so no sign contract is attached.
double swb_gap(const StateElement &a, const RecoverySetup &setup);

// Sufficiency direction of Petz's theorem: exact recovery forces both
// entropy gaps to vanish. Vacuous when recovery is inexact.
struct SufficiencyResult {
  bool hypothesis = false;          // ||R(phi(A)) - A||_2 <= 1e-8
  double recovery_residual = 0.0;
  double kl_gap = 0.0;              // only meaningful when hypothesis holds
  double s2_gap = 0.0;
  bool pass = true;

  // >= 0 iff pass; +1 when vacuous.
  double margin() const;
};

SufficiencyResult petz_sufficiency_check(const StateElement &a,
                                         const RecoverySetup &setup);

}  // namespace petzrec

#endif  // PETZREC_RECOVERY_HPP_
