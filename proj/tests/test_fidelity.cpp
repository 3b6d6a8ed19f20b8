#include <doctest.h>

#include <cmath>

#include "petzrec/fidelity.hpp"
#include "petzrec/rng.hpp"

using namespace petzrec;

namespace {

AlgebraPtr m2() { return TracialAlgebra::single_block(2); }

StateElement diag_state(const AlgebraPtr &alg, double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return StateElement(AlgebraElement(alg, {m}));
}

// Orthogonally supported states on C + C.
FidelityPair orthogonal_pair() {
  const AlgebraPtr alg = TracialAlgebra::make({1, 1}, {0.5, 0.5});
  Matrix a0(1, 1), a1(1, 1), b0(1, 1), b1(1, 1);
  a0 << Complex(2.0, 0.0);
  a1 << Complex(0.0, 0.0);
  b0 << Complex(0.0, 0.0);
  b1 << Complex(2.0, 0.0);
  return FidelityPair(StateElement(AlgebraElement(alg, {a0, a1})),
                      StateElement(AlgebraElement(alg, {b0, b1})));
}

FidelityPair commuting_pair() {
  const AlgebraPtr alg = m2();
  return FidelityPair(diag_state(alg, 1.5, 0.5), diag_state(alg, 0.5, 1.5));
}

}  // namespace

TEST_CASE("fidelity basic values") {
  const AlgebraPtr alg = m2();
  const StateElement a = random_state(alg, 1);
  CHECK(fidelity(FidelityPair(a, a)) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(fidelity(orthogonal_pair()) == doctest::Approx(0.0));

  CHECK(fidelity(commuting_pair()) ==
        doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("fidelity is symmetric and bounded") {
  const AlgebraPtr alg = TracialAlgebra::make({2, 2}, {1.0 / 8, 3.0 / 8});
  for (int t = 0; t < 100; ++t) {
    const StateElement a = random_state(alg, derive_seed(100, t));
    const StateElement b = random_state(alg, derive_seed(101, t));
    const double f = fidelity(FidelityPair(a, b));
    CHECK(f == doctest::Approx(fidelity(FidelityPair(b, a))).epsilon(1e-12));
    CHECK(f >= 0.0);
    CHECK(f <= 1.0 + 1e-12);
  }
}

TEST_CASE("unitary oracle: samples never beat the closed form") {
  const AlgebraPtr alg = m2();

  // A = B = 1: |tau(U)| <= 1 and the identity attains it.
  const StateElement one{AlgebraElement::identity(alg)};
  const FidelityPair ones(one, one);
  const FidelityOracleResult id_oracle = fidelity_unitary_oracle(ones, 64, 9);
  CHECK(id_oracle.best_sampled <= 1.0 + 1e-12);
  CHECK(id_oracle.polar_value == doctest::Approx(1.0).epsilon(1e-12));

  // Commuting example: the polar unitary is the identity, attaining sqrt(3)/2.
  const FidelityOracleResult com = fidelity_unitary_oracle(commuting_pair(), 64, 10);
  CHECK(com.polar_value == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-10));
  CHECK(com.polar_residual <= 1e-10);

  // Random pairs, 200 samples: oracle <= closed form, polar attains.
  const AlgebraPtr alg2 = TracialAlgebra::make({2, 2}, {1.0 / 8, 3.0 / 8});
  for (int t = 0; t < 25; ++t) {
    const FidelityPair pair(random_state(alg2, derive_seed(110, t)),
                            random_state(alg2, derive_seed(111, t)));
    const double f = fidelity(pair);
    const FidelityOracleResult oracle =
        fidelity_unitary_oracle(pair, 200, derive_seed(112, t));
    CHECK(oracle.best_sampled <= f + 1e-12);
    CHECK(oracle.polar_residual <= 1e-10);
  }
}

TEST_CASE("bures angle examples and metric axioms") {
  const AlgebraPtr alg = m2();
  const StateElement a = random_state(alg, 7);
  CHECK(bures_angle(FidelityPair(a, a)) == doctest::Approx(0.0));
  CHECK(bures_angle(orthogonal_pair()) == doctest::Approx(M_PI / 2));
  CHECK(bures_angle(commuting_pair()) == doctest::Approx(M_PI / 6).epsilon(1e-12));

  const AlgebraPtr alg2 = TracialAlgebra::make({2, 2}, {1.0 / 8, 3.0 / 8});
  for (int t = 0; t < 100; ++t) {
    const StateElement x = random_state(alg2, derive_seed(120, t));
    const StateElement y = random_state(alg2, derive_seed(121, t));
    const StateElement z = random_state(alg2, derive_seed(122, t));
    const double dxy = bures_angle(FidelityPair(x, y));
    const double dyz = bures_angle(FidelityPair(y, z));
    const double dxz = bures_angle(FidelityPair(x, z));
    CHECK(dxy == doctest::Approx(bures_angle(FidelityPair(y, x))));
    CHECK(dxy <= dxz + dyz + 1e-9);
  }
}

TEST_CASE("near-identical states have near-zero angle and vice versa") {
  const AlgebraPtr alg = m2();
  const StateElement a = random_state(alg, 33);
  const StateElement close(StateElement(
      a * (1.0 - 1e-8) + AlgebraElement::identity(alg) * 1e-8));
  const double d = bures_angle(FidelityPair(a, close));
  CHECK(d <= 1e-3);
  if (d <= 1e-6) {
    CHECK(l2_norm(a - close) <= 1e-3);
  }
}

TEST_CASE("powers-stormer slack") {
  CHECK(powers_stormer_slack(FidelityPair(
            random_state(m2(), 3), random_state(m2(), 3))) ==
        doctest::Approx(0.0));

  // Commuting example: slack = 1 - (sqrt(3/2) - sqrt(1/2))^2.
  const double gap = std::sqrt(1.5) - std::sqrt(0.5);
  CHECK(powers_stormer_slack(commuting_pair()) ==
        doctest::Approx(1.0 - gap * gap).epsilon(1e-12));
  CHECK(1.0 - gap * gap == doctest::Approx(0.73205).epsilon(1e-4));

  const AlgebraPtr alg = TracialAlgebra::make({2, 2}, {1.0 / 8, 3.0 / 8});
  for (int t = 0; t < 500; ++t) {
    const FidelityPair pair(random_state(alg, derive_seed(130, t)),
                            random_state(alg, derive_seed(131, t)));
    CHECK(powers_stormer_slack(pair) >= -1e-10);
  }
}

TEST_CASE("fidelity bound slack") {
  const StateElement a = random_state(m2(), 5);
  CHECK(fidelity_bound_slack(FidelityPair(a, a)) == doctest::Approx(0.0));

  CHECK(fidelity_bound_slack(commuting_pair()) ==
        doctest::Approx(std::sqrt(3.0) - 1.0).epsilon(1e-12));

  const AlgebraPtr alg = TracialAlgebra::make({2, 2}, {1.0 / 8, 3.0 / 8});
  for (int t = 0; t < 500; ++t) {
    const FidelityPair pair(random_state(alg, derive_seed(140, t)),
                            random_state(alg, derive_seed(141, t)));
    CHECK(fidelity_bound_slack(pair) >= -1e-10);
  }
}

TEST_CASE("monotonicity under channels") {
  const AlgebraPtr alg = m2();
  const FidelityPair pair(random_state(alg, 50), random_state(alg, 51));

  const Channel u = unitary_channel(alg, random_unitary(alg, 52));
  CHECK(std::abs(monotonicity_slack(pair, u)) < 1e-12);

  const Channel tr = trace_channel(alg);
  CHECK(monotonicity_slack(pair, tr) ==
        doctest::Approx(1.0 - fidelity(pair)).epsilon(1e-10));

  const Channel pinch = pinching_channel(alg);
  CHECK(monotonicity_slack(pair, pinch) >= -1e-9);

  for (int t = 0; t < 200; ++t) {
    const FidelityPair p(random_state(alg, derive_seed(150, t)),
                         random_state(alg, derive_seed(151, t)));
    const Channel phi = random_channel(alg, alg, 2 + t % 3, derive_seed(152, t));
    CHECK(monotonicity_slack(p, phi) >= -1e-9);
  }
}

TEST_CASE("joint concavity") {
  const AlgebraPtr alg = TracialAlgebra::make({2, 2}, {1.0 / 8, 3.0 / 8});
  const FidelityPair p1(random_state(alg, 60), random_state(alg, 61));
  const FidelityPair p2(random_state(alg, 62), random_state(alg, 63));

  CHECK(joint_concavity_slack(p1, p2, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(joint_concavity_slack(p1, p2, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(joint_concavity_slack(p1, p2, 1.5), InvariantError);

  // Both pairs identical states: both sides are 1.
  const StateElement a = random_state(alg, 64);
  const StateElement b = random_state(alg, 65);
  CHECK(joint_concavity_slack(FidelityPair(a, a), FidelityPair(b, b), 0.3) ==
        doctest::Approx(0.0).epsilon(1e-10));

  for (int t = 0; t < 500; ++t) {
    const FidelityPair q1(random_state(alg, derive_seed(160, t)),
                          random_state(alg, derive_seed(161, t)));
    const FidelityPair q2(random_state(alg, derive_seed(162, t)),
                          random_state(alg, derive_seed(163, t)));
    for (int k = 1; k <= 9; ++k) {
      CHECK(joint_concavity_slack(q1, q2, 0.1 * k) >= -1e-9);
    }
  }
}

TEST_CASE("separate concavity follows from the joint version") {
  const AlgebraPtr alg = m2();
  const StateElement rho = random_state(alg, 70);
  for (int t = 0; t < 50; ++t) {
    const StateElement a1 = random_state(alg, derive_seed(171, t));
    const StateElement a2 = random_state(alg, derive_seed(172, t));
    const double lambda = 0.37;
    const StateElement mix(a1 * lambda + a2 * (1.0 - lambda));
    const double lhs = fidelity(FidelityPair(mix, rho));
    const double rhs = lambda * fidelity(FidelityPair(a1, rho)) +
                       (1.0 - lambda) * fidelity(FidelityPair(a2, rho));
    CHECK(lhs >= rhs - 1e-9);
  }
}

TEST_CASE("pair construction rejects mismatched algebras") {
  CHECK_THROWS_AS(FidelityPair(random_state(m2(), 1),
                               random_state(TracialAlgebra::single_block(3), 1)),
                  AlgebraMismatchError);
}
