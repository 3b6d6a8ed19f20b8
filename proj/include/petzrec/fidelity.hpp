/**
 * This code is part of petzrec.
 *
 * (C) Copyright petzrec developers 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef PETZREC_FIDELITY_HPP_
#define PETZREC_FIDELITY_HPP_

#include <cstdint>

#include "petzrec/algebra.hpp"
#include "petzrec/channel.hpp"
#include "petzrec/types.hpp"

namespace petzrec {

// Two states on one algebra; neither needs to be invertible.
struct FidelityPair {
  StateElement a;
  StateElement b;

  FidelityPair(StateElement a_in, StateElement b_in);
};

// Uhlmann fidelity tau(|A^{1/2} B^{1/2}|), the closed form that attains the
// unitary supremum sup_U |<U A^{1/2}, B^{1/2}>_tau| via the polar unitary.
double fidelity(const FidelityPair &pair);

struct FidelityOracleResult {
  double best_sampled = 0.0;   // max over sampled unitaries
  double polar_value = 0.0;    // value attained by the polar unitary
  double polar_residual = 0.0; // |fidelity - polar_value|
};

// Lower-bound evidence for the supremum formula: random block unitaries can
// only reach the closed form, and the polar unitary of B^{1/2}A^{1/2}
// attains it.
FidelityOracleResult fidelity_unitary_oracle(const FidelityPair &pair,
                                             int num_samples,
                                             std::uint64_t seed);

// Bures angle arccos(F), a metric on the state space.
double bures_angle(const FidelityPair &pair);

// ||A - B||_1 - ||A^{1/2} - B^{1/2}||_2^2  (Powers-Stormer), >= 0.
double powers_stormer_slack(const FidelityPair &pair);

// ||A - B||_1 - 2 (1 - F(A|B)), >= 0.
double fidelity_bound_slack(const FidelityPair &pair);

// F(phi(A)|phi(B)) - F(A|B), >= 0 for channels on the pair's algebra.
double monotonicity_slack(const FidelityPair &pair, const Channel &phi);

// F(l A1 + (1-l) A2 | l B1 + (1-l) B2) - [l F(A1|B1) + (1-l) F(A2|B2)], >= 0.
double joint_concavity_slack(const FidelityPair &p1, const FidelityPair &p2,
                             double lambda);

}  // namespace petzrec

#endif  // PETZREC_FIDELITY_HPP_
