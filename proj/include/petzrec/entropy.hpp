/**
 * This code is part of petzrec.
 *
 * (C) Copyright petzrec developers 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef PETZREC_ENTROPY_HPP_
#define PETZREC_ENTROPY_HPP_

#include <map>
#include <memory>

#include "petzrec/algebra.hpp"
#include "petzrec/channel.hpp"
#include "petzrec/types.hpp"

namespace petzrec {

// Reference state B with eagerly cached fractional powers. The sandwich
// power for Hoelder exponent p is B^(-1/(2q)) with 1/p + 1/q = 1; p = 2 hits
// the cached B^(-1/4), other exponents are recomputed per call. Immutable
// after construction, safe to share across threads.
class EntropyContext {
 public:
  explicit EntropyContext(ReferenceState b);

  const AlgebraPtr &algebra() const { return b_.algebra(); }
  const ReferenceState &reference() const { return b_; }
  const AlgebraElement &sqrt_b() const { return sqrt_b_; }
  const AlgebraElement &inv_sqrt_b() const { return inv_sqrt_b_; }

  // B^(-(p-1)/(2p)); p = 2 gives the cached B^(-1/4).
  AlgebraElement sandwich_power(double p) const;

  // B^(-1/2) X B^(-1/2).
  AlgebraElement conjugate_inv_sqrt(const AlgebraElement &x) const;

 private:
  ReferenceState b_;
  AlgebraElement sqrt_b_;
  AlgebraElement inv_sqrt_b_;
  AlgebraElement inv_fourth_root_b_;
};

// Sandwiched quasi-relative entropy
//   S_p(A|B) = tau[(B^(-1/2q) A B^(-1/2q))^p],   p > 1.
// Note this follows the trace-power convention without a logarithm; the
// common log-normalized Renyi divergence is (p-1)^(-1) log of this quantity.
double sandwiched_entropy(const StateElement &a, const EntropyContext &ctx,
                          double p);

// Araki-Masuda norm ||X||_{B,p} = ||B^(-1/2q) X B^(-1/2q)||_p for p >= 1.
double am_norm(const AlgebraElement &x, const EntropyContext &ctx, double p);

// <X, Y>_B = <X, B^(-1/2) Y B^(-1/2)>_tau; the inner product of ||.||_{B,2}.
Complex am_inner(const AlgebraElement &x, const AlgebraElement &y,
                 const EntropyContext &ctx);

// Kullback-Leibler divergence tau(A ln A) - tau(A ln B), with 0 ln 0 = 0 on
// the kernel of A.
double kl_divergence(const StateElement &a, const EntropyContext &ctx);

// S_p(A|B) - S_p(phi(A)|phi(B)). Requires phi strict for B. For p = 2 this
// is nonnegative (data processing); other p values are evaluated but carry
// no contract here. The operator-level certificate behind the p = 2 case is
// sandwich_domination_margin in superop_checks.
double dpi_margin(const StateElement &a, const ReferenceState &b,
                  const Channel &phi, double p,
                  double strictness_floor = 1e-8);

}  // namespace petzrec

#endif  // PETZREC_ENTROPY_HPP_
