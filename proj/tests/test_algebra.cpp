#include <doctest.h>

#include <cmath>

#include "petzrec/algebra.hpp"
#include "petzrec/rng.hpp"

using namespace petzrec;

namespace {

AlgebraPtr m2() { return TracialAlgebra::single_block(2); }

AlgebraElement diag2(const AlgebraPtr &alg, double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return AlgebraElement(alg, {m});
}

}  // namespace

TEST_CASE("tracial algebra invariants") {
  CHECK_NOTHROW(TracialAlgebra::make({2, 2}, {1.0 / 8, 3.0 / 8}));
  CHECK_THROWS_AS(TracialAlgebra::make({2}, {1.0}), InvariantError);
  CHECK_THROWS_AS(TracialAlgebra::make({2, 2}, {0.25}), InvariantError);
  CHECK_THROWS_AS(TracialAlgebra::make({2}, {-0.5}), InvariantError);
  CHECK_THROWS_AS(TracialAlgebra::make({0}, {0.5}), InvariantError);

  const AlgebraPtr alg = TracialAlgebra::make({1, 1, 2}, {0.25, 0.25, 0.25});
  CHECK(alg->total_dim() == 4);
  CHECK(alg->coord_dim() == 6);
  CHECK(alg->block_offset(2) == 2);
  CHECK(alg->coord_offset(2) == 2);
}

TEST_CASE("trace of identity is 1 on several algebras") {
  for (const AlgebraPtr &alg :
       {TracialAlgebra::single_block(2), TracialAlgebra::single_block(5),
        TracialAlgebra::make({2, 2}, {1.0 / 8, 3.0 / 8}),
        TracialAlgebra::make({1, 1, 2}, {0.25, 0.25, 0.25})}) {
    CHECK(trace(AlgebraElement::identity(alg)).real() == doctest::Approx(1.0));
  }
}

TEST_CASE("trace on diagonal examples") {
  CHECK(trace(diag2(m2(), 1.5, 0.5)).real() == doctest::Approx(1.0));

  const AlgebraPtr two = TracialAlgebra::make({1, 1}, {0.5, 0.5});
  Matrix b0(1, 1), b1(1, 1);
  b0 << Complex(2.0, 0.0);
  b1 << Complex(0.0, 0.0);
  const AlgebraElement x(two, {b0, b1});
  CHECK(trace(x).real() == doctest::Approx(1.0));
}

TEST_CASE("trace is tracial on random pairs") {
  const AlgebraPtr alg = TracialAlgebra::make({2, 2}, {1.0 / 8, 3.0 / 8});
  for (int t = 0; t < 64; ++t) {
    Rng rng(derive_seed(101, t));
    std::vector<Matrix> xb, yb;
    for (int i = 0; i < 2; ++i) {
      xb.push_back(rng.ginibre(2, 2));
      yb.push_back(rng.ginibre(2, 2));
    }
    const AlgebraElement x(alg, xb), y(alg, yb);
    const Complex lhs = trace(x * y);
    const Complex rhs = trace(y * x);
    const double scale = std::max(1.0, std::abs(lhs));
    CHECK(std::abs(lhs - rhs) / scale < 1e-11);
  }
}

TEST_CASE("p_norm basic values") {
  CHECK(p_norm(AlgebraElement::zero(m2()), 2.0) == doctest::Approx(0.0));
  const AlgebraElement x = diag2(m2(), 0.5, -0.5);
  CHECK(p_norm(x, 1.0) == doctest::Approx(0.5));
  CHECK(p_norm(x, 2.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(p_norm(x, 0.5), InvariantError);

  // ||1||_p = 1 for all p on a weighted algebra.
  const AlgebraPtr alg = TracialAlgebra::make({2, 2}, {1.0 / 8, 3.0 / 8});
  for (double p : {1.0, 1.5, 2.0, 3.0, 7.0}) {
    CHECK(p_norm(AlgebraElement::identity(alg), p) == doctest::Approx(1.0));
  }
}

TEST_CASE("faithfulness: tiny 2-norm forces tiny entries") {
  const AlgebraPtr alg = TracialAlgebra::make({2, 2}, {1.0 / 8, 3.0 / 8});
  Rng rng(7);
  AlgebraElement x(alg, {rng.ginibre(2, 2), rng.ginibre(2, 2)});
  x = x * (1e-13 / l2_norm(x));
  REQUIRE(l2_norm(x) <= 1e-12);
  CHECK(x.max_abs_entry() <= 1e-10);
}

TEST_CASE("inner product examples and flip identity") {
  const AlgebraPtr alg = m2();
  const AlgebraElement one = AlgebraElement::identity(alg);
  CHECK(inner(one, one).real() == doctest::Approx(1.0));
  CHECK(inner(diag2(alg, 1.5, 0.5), one).real() == doctest::Approx(1.0));

  for (int t = 0; t < 32; ++t) {
    Rng rng(derive_seed(55, t));
    const AlgebraElement x(alg, {rng.ginibre(2, 2)});
    const AlgebraElement y(alg, {rng.ginibre(2, 2)});
    const Complex lhs = inner(x, y);
    const Complex rhs = inner(y.adjoint(), x.adjoint());
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(lhs)));
    // Cauchy-Schwarz at p = 2.
    CHECK(std::abs(lhs) <= l2_norm(x) * l2_norm(y) + 1e-12);
    // <X,X> = ||X||_2^2.
    CHECK(inner(x, x).real() ==
          doctest::Approx(l2_norm(x) * l2_norm(x)).epsilon(1e-12));
  }
}

TEST_CASE("inner rejects mismatched algebras") {
  const AlgebraElement x = AlgebraElement::identity(m2());
  const AlgebraElement y =
      AlgebraElement::identity(TracialAlgebra::single_block(3));
  CHECK_THROWS_AS(inner(x, y), AlgebraMismatchError);
  CHECK_THROWS_AS(x + y, AlgebraMismatchError);
}

TEST_CASE("spectral_apply fixed points and inverses") {
  const AlgebraPtr alg = m2();
  const AlgebraElement one = AlgebraElement::identity(alg);

  const AlgebraElement sqrt_one = sqrt_psd(one);
  CHECK(l2_norm(sqrt_one - one) < 1e-12);

  const AlgebraElement inv = pow_floor(diag2(alg, 2.0, 0.5), -1.0, 1e-9);
  CHECK(l2_norm(inv - diag2(alg, 0.5, 2.0)) < 1e-12);

  const AlgebraElement qroot = pow_floor(one, -0.25, 1e-9);
  CHECK(l2_norm(qroot - one) < 1e-12);
}

TEST_CASE("spectral_apply identity function and sqrt squared") {
  const AlgebraPtr alg = TracialAlgebra::make({2, 2}, {1.0 / 8, 3.0 / 8});
  for (int t = 0; t < 16; ++t) {
    const HermitianElement h = random_hermitian(alg, derive_seed(77, t));
    const AlgebraElement same = spectral_apply(h, [](double v) { return v; });
    CHECK(l2_norm(same - h) < 1e-12);

    const AlgebraElement pos = h * h;  // positive
    const AlgebraElement root = sqrt_psd(pos);
    CHECK(l2_norm(root * root - pos) < 1e-10);
  }
}

TEST_CASE("spectral_apply composes on a single element") {
  const AlgebraPtr alg = TracialAlgebra::make({2, 2}, {1.0 / 8, 3.0 / 8});
  const HermitianElement h = random_hermitian(alg, 913);
  const AlgebraElement pos =
      h * h + AlgebraElement::identity(alg) * 0.1;  // strictly positive
  const auto f = [](double v) { return std::sqrt(v); };
  const auto g = [](double v) { return v * v * v; };
  const AlgebraElement composed =
      spectral_apply(pos, [&](double v) { return f(g(v)); });
  const AlgebraElement chained = spectral_apply(spectral_apply(pos, g), f);
  CHECK(l2_norm(composed - chained) < 1e-10);
}

TEST_CASE("spectral_apply rejects non-Hermitian input") {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(1, 0), Complex(0, 0), Complex(0, 0);
  const AlgebraElement x(m2(), {m});
  CHECK_THROWS_AS(spectral_apply(x, [](double v) { return v; }),
                  InvariantError);
}

TEST_CASE("floor guards on log and negative powers") {
  const AlgebraElement x = diag2(m2(), 1.0, 1e-9);
  CHECK_THROWS_AS(pow_floor(x, -0.5, 1e-6), InvariantError);
  CHECK_THROWS_AS(log_floor(x, 1e-6), InvariantError);
}

TEST_CASE("random generators satisfy their contracts") {
  const AlgebraPtr alg = TracialAlgebra::make({2, 2}, {1.0 / 8, 3.0 / 8});

  const StateElement a = random_state(alg, 2024);
  CHECK(std::abs(trace(a).real() - 1.0) < 1e-10);
  CHECK(min_eigenvalue(a) >= -1e-12);

  const ReferenceState b = random_reference_state(alg, 2025, 1e-6);
  CHECK(b.min_eigenvalue() >= 1e-6);
  CHECK(std::abs(trace(b).real() - 1.0) < 1e-10);

  const AlgebraElement u = random_unitary(alg, 2026);
  CHECK(l2_norm(u.adjoint() * u - AlgebraElement::identity(alg)) <= 1e-10);

  // Determinism per seed.
  const StateElement a_again = random_state(alg, 2024);
  CHECK(l2_norm(a - a_again) == 0.0);

  CHECK_THROWS_AS(random_reference_state(alg, 1, 10.0), InvariantError);
}

TEST_CASE("reference state floor engages on degenerate input") {
  // Force the mixture path with a floor larger than typical Wishart minima.
  const AlgebraPtr alg = TracialAlgebra::single_block(4);
  const double delta = 0.2;
  REQUIRE(delta < max_feasible_floor(*alg));
  for (int t = 0; t < 8; ++t) {
    const ReferenceState b = random_reference_state(alg, derive_seed(5, t), delta);
    CHECK(b.min_eigenvalue() >= delta);
    CHECK(std::abs(trace(b).real() - 1.0) < 1e-10);
  }
}

TEST_CASE("state validation rejects bad inputs") {
  const AlgebraPtr alg = m2();
  CHECK_THROWS_AS(StateElement(diag2(alg, 1.5, -0.5)), InvariantError);
  CHECK_THROWS_AS(StateElement(diag2(alg, 3.0, 1.0)), InvariantError);
  CHECK_THROWS_AS(ReferenceState(diag2(alg, 2.0 - 1e-7, 1e-7), 1e-6),
                  InvariantError);
  CHECK_NOTHROW(ReferenceState(diag2(alg, 1.5, 0.5), 1e-6));
}

TEST_CASE("embedded round trip and off-block residual") {
  const AlgebraPtr alg = TracialAlgebra::make({1, 1, 2}, {0.25, 0.25, 0.25});
  const HermitianElement h = random_hermitian(alg, 31);
  double residual = -1.0;
  const AlgebraElement back =
      AlgebraElement::from_embedded(alg, h.embedded(), &residual);
  CHECK(l2_norm(back - h) == 0.0);
  CHECK(residual == 0.0);

  Matrix big = h.embedded();
  big(0, 3) = Complex(0.5, 0.0);  // off-block mass
  AlgebraElement::from_embedded(alg, big, &residual);
  CHECK(residual == doctest::Approx(0.5));
}
