/**
 * This code is part of petzrec.
 *
 * (C) Copyright petzrec developers 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "petzrec/entropy.hpp"

#include <cmath>
#include <sstream>

namespace petzrec {

namespace {

void require_in_algebra(const AlgebraElement &x, const EntropyContext &ctx,
                        const char *op) {
  if (!same_algebra(x.algebra(), ctx.algebra())) {
    std::ostringstream msg;
    msg << "algebra mismatch in " << op;
    throw AlgebraMismatchError(msg.str());
  }
}

double harmonic_conjugate_exponent(double p) {
  // exponent of B in the sandwich: -1/(2q) = -(p-1)/(2p)
  return -(p - 1.0) / (2.0 * p);
}

}  // namespace

EntropyContext::EntropyContext(ReferenceState b)
    : b_(std::move(b)),
      sqrt_b_(sqrt_psd(b_)),
      inv_sqrt_b_(pow_floor(b_, -0.5, 0.5 * b_.floor_delta())),
      inv_fourth_root_b_(pow_floor(b_, -0.25, 0.5 * b_.floor_delta())) {
  // Cached powers must invert each other to working precision.
  const AlgebraElement probe =
      sqrt_b_ * inv_sqrt_b_ - AlgebraElement::identity(b_.algebra());
  if (l2_norm(probe) > 1e-9) {
    throw NumericalBreakdownError(
        "EntropyContext: B^{1/2} B^{-1/2} deviates from identity");
  }
}

AlgebraElement EntropyContext::sandwich_power(double p) const {
  if (p < 1.0) throw InvariantError("sandwich_power: p must be >= 1");
  const double e = harmonic_conjugate_exponent(p);
  if (e == -0.25) return inv_fourth_root_b_;
  if (e == 0.0) return AlgebraElement::identity(b_.algebra());
  return pow_floor(b_, e, 0.5 * b_.floor_delta());
}

AlgebraElement EntropyContext::conjugate_inv_sqrt(
    const AlgebraElement &x) const {
  return inv_sqrt_b_ * x * inv_sqrt_b_;
}

double sandwiched_entropy(const StateElement &a, const EntropyContext &ctx,
                          double p) {
  if (!(p > 1.0)) throw InvariantError("sandwiched_entropy: p must be > 1");
  require_in_algebra(a, ctx, "sandwiched_entropy");
  const AlgebraElement g = ctx.sandwich_power(p);
  const AlgebraElement core = hermitian_part(g * a * g);
  // core is PSD up to rounding; clamp before the fractional power.
  double acc = 0.0;
  const auto &alg = *ctx.algebra();
  for (int i = 0; i < alg.num_blocks(); ++i) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(core.block(i),
                                             Eigen::EigenvaluesOnly);
    for (int k = 0; k < es.eigenvalues().size(); ++k) {
      const double lambda = std::max(0.0, es.eigenvalues()(k));
      acc += alg.weight(i) * std::pow(lambda, p);
    }
  }
  return acc;
}

double am_norm(const AlgebraElement &x, const EntropyContext &ctx, double p) {
  if (p < 1.0) throw InvariantError("am_norm: p must be >= 1");
  require_in_algebra(x, ctx, "am_norm");
  const AlgebraElement g = ctx.sandwich_power(p);
  return p_norm(g * x * g, p);
}

Complex am_inner(const AlgebraElement &x, const AlgebraElement &y,
                 const EntropyContext &ctx) {
  require_in_algebra(x, ctx, "am_inner");
  require_in_algebra(y, ctx, "am_inner");
  return inner(x, ctx.conjugate_inv_sqrt(y));
}

double kl_divergence(const StateElement &a, const EntropyContext &ctx) {
  require_in_algebra(a, ctx, "kl_divergence");
  const auto &alg = *ctx.algebra();
  // tau(A ln A) with the 0 ln 0 = 0 convention on the kernel of A.
  double a_ln_a = 0.0;
  for (int i = 0; i < alg.num_blocks(); ++i) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.block(i),
                                             Eigen::EigenvaluesOnly);
    for (int k = 0; k < es.eigenvalues().size(); ++k) {
      const double lambda = std::max(0.0, es.eigenvalues()(k));
      if (lambda > 0.0) a_ln_a += alg.weight(i) * lambda * std::log(lambda);
    }
  }
  const AlgebraElement ln_b =
      log_floor(ctx.reference(), 0.5 * ctx.reference().floor_delta());
  const double a_ln_b = trace(a * ln_b).real();
  return a_ln_a - a_ln_b;
}

double dpi_margin(const StateElement &a, const ReferenceState &b,
                  const Channel &phi, double p, double strictness_floor) {
  const StrictnessResult strict = is_strict(phi, b, strictness_floor);
  if (!strict.strict) {
    std::ostringstream msg;
    msg << "dpi_margin: channel not strict for B (margin " << strict.margin
        << ")";
    throw StrictnessError(msg.str());
  }
  const EntropyContext src_ctx(b);
  const StateElement phi_a(phi.apply(a));
  const ReferenceState phi_b(phi.apply(b), strictness_floor);
  const EntropyContext tgt_ctx(phi_b);
  return sandwiched_entropy(a, src_ctx, p) -
         sandwiched_entropy(phi_a, tgt_ctx, p);
}

}  // namespace petzrec
