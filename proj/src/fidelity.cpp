/**
 * This code is part of petzrec.
 *
 * (C) Copyright petzrec developers 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "petzrec/fidelity.hpp"

#include <algorithm>
#include <cmath>

#include "petzrec/rng.hpp"

namespace petzrec {

FidelityPair::FidelityPair(StateElement a_in, StateElement b_in)
    : a(std::move(a_in)), b(std::move(b_in)) {
  if (!same_algebra(a.algebra(), b.algebra())) {
    throw AlgebraMismatchError("FidelityPair: states from different algebras");
  }
}

double fidelity(const FidelityPair &pair) {
  const AlgebraElement m = sqrt_psd(pair.a) * sqrt_psd(pair.b);
  return p_norm(m, 1.0);
}

FidelityOracleResult fidelity_unitary_oracle(const FidelityPair &pair,
                                             int num_samples,
                                             std::uint64_t seed) {
  if (num_samples < 1) {
    throw InvariantError("fidelity_unitary_oracle: num_samples < 1");
  }
  const AlgebraPtr &alg = pair.a.algebra();
  const AlgebraElement sqrt_a = sqrt_psd(pair.a);
  const AlgebraElement sqrt_b = sqrt_psd(pair.b);

  // <U A^{1/2}, B^{1/2}>_tau = tau(B^{1/2} U A^{1/2}).
  const auto overlap = [&](const AlgebraElement &u) {
    return std::abs(trace(sqrt_b * u * sqrt_a));
  };

  FidelityOracleResult out;
  Rng rng(seed);
  for (int s = 0; s < num_samples; ++s) {
    std::vector<Matrix> blocks;
    blocks.reserve(alg->num_blocks());
    for (int i = 0; i < alg->num_blocks(); ++i) {
      blocks.push_back(rng.haar_unitary(alg->block_dim(i)));
    }
    const AlgebraElement u(alg, std::move(blocks));
    out.best_sampled = std::max(out.best_sampled, overlap(u));
  }

  // Polar unitary of B^{1/2} A^{1/2}, blockwise from the full SVD.
  std::vector<Matrix> polar_blocks;
  polar_blocks.reserve(alg->num_blocks());
  const AlgebraElement n = sqrt_b * sqrt_a;
  for (int i = 0; i < alg->num_blocks(); ++i) {
    Eigen::JacobiSVD<Matrix> svd(n.block(i),
                                 Eigen::ComputeFullU | Eigen::ComputeFullV);
    polar_blocks.push_back(svd.matrixU() * svd.matrixV().adjoint());
  }
  const AlgebraElement polar(alg, std::move(polar_blocks));
  out.polar_value = overlap(polar);
  out.polar_residual = std::abs(fidelity(pair) - out.polar_value);
  return out;
}

double bures_angle(const FidelityPair &pair) {
  const double f = std::clamp(fidelity(pair), 0.0, 1.0);
  return std::acos(f);
}

double powers_stormer_slack(const FidelityPair &pair) {
  const double l1 = p_norm(pair.a - pair.b, 1.0);
  const double l2 = l2_norm(sqrt_psd(pair.a) - sqrt_psd(pair.b));
  return l1 - l2 * l2;
}

double fidelity_bound_slack(const FidelityPair &pair) {
  return p_norm(pair.a - pair.b, 1.0) - 2.0 * (1.0 - fidelity(pair));
}

double monotonicity_slack(const FidelityPair &pair, const Channel &phi) {
  if (!same_algebra(pair.a.algebra(), phi.source())) {
    throw AlgebraMismatchError("monotonicity_slack: channel source mismatch");
  }
  const FidelityPair image(StateElement(phi.apply(pair.a)),
                           StateElement(phi.apply(pair.b)));
  return fidelity(image) - fidelity(pair);
}

double joint_concavity_slack(const FidelityPair &p1, const FidelityPair &p2,
                             double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw InvariantError("joint_concavity_slack: lambda outside [0, 1]");
  }
  if (!same_algebra(p1.a.algebra(), p2.a.algebra())) {
    throw AlgebraMismatchError("joint_concavity_slack: algebra mismatch");
  }
  const FidelityPair mixed(
      StateElement(lambda * p1.a + (1.0 - lambda) * p2.a),
      StateElement(lambda * p1.b + (1.0 - lambda) * p2.b));
  return fidelity(mixed) - (lambda * fidelity(p1) + (1.0 - lambda) * fidelity(p2));
}

}  // namespace petzrec
