/**
 * This code is part of petzrec.
 *
 * (C) Copyright petzrec developers 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef PETZREC_SUPEROP_CHECKS_HPP_
#define PETZREC_SUPEROP_CHECKS_HPP_

#include "petzrec/algebra.hpp"
#include "petzrec/channel.hpp"
#include "petzrec/entropy.hpp"
#include "petzrec/types.hpp"

namespace petzrec {

// Verification layer for the operator inequalities behind the Araki-Masuda
// contraction: multiplication superoperators, the contraction V, the
// modular-type operators Delta / Delta_0, and the PSD margins they satisfy.
// All matrices live in the orthonormal weighted-L^2 coordinates, where every
// adjoint is a literal conjugate transpose and PSD checks reduce to plain
// Hermitian eigenvalue bounds.

enum class MultKind { Left, Right };

// Matrix of Y -> XY (Left) or Y -> YX (Right) on the algebra's coordinates.
Superoperator build_mult(const AlgebraElement &x, MultKind kind);

// Matrix of Y -> M Y M for Hermitian M (i.e. L_M R_M).
Matrix sandwich_matrix(const AlgebraElement &m);

// V = R_{B^{1/2}} phi^* R_{phi(B)^{-1/2}} : L^2(target) -> L^2(source).
Superoperator am_contraction_operator(const Channel &phi, const ReferenceState &b,
                                 double strictness_floor = 1e-8);

// 1 - ||V||; nonnegative when V is a contraction.
double contraction_norm_margin(const Channel &phi, const ReferenceState &b,
                                 double strictness_floor = 1e-8);

// min eig(Delta_0 - V* Delta V) with Delta = L_B R_{B^{-1}},
// Delta_0 = L_{phi(B)} R_{phi(B)^{-1}}.
double modular_domination_margin(const Channel &phi, const ReferenceState &b,
                         double strictness_floor = 1e-8);

// min eig(L_{phi(B)^{1/2}} R_{phi(B)^{1/2}} - Phi L_{B^{1/2}} R_{B^{1/2}} Phi*).
double sandwich_domination_margin(const Channel &phi, const ReferenceState &b,
                      double strictness_floor = 1e-8);

// min eig(Delta_0^{1/2} - V* Delta^{1/2} V); operator concavity of sqrt.
double operator_concavity_margin(const Channel &phi, const ReferenceState &b,
                                 double strictness_floor = 1e-8);

// min eig(L_{B^{-1/2}} R_{B^{-1/2}} - 2 (L_B + R_B)^{-1}).
double amgm_psd_margin(const ReferenceState &b);

// ||X||_{B,2}^2 - ||X||_1^2.
double trace_vs_am_margin(const AlgebraElement &x, const ReferenceState &b);

// ||X||_{B,2} - ||phi(X)||_{phi(B),2}; the contraction measured directly.
double am_contraction_margin(const AlgebraElement &x, const ReferenceState &b,
                             const Channel &phi,
                             double strictness_floor = 1e-8);

}  // namespace petzrec

#endif  // PETZREC_SUPEROP_CHECKS_HPP_
