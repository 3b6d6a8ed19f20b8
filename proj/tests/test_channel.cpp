#include <doctest.h>

#include <cmath>

#include "petzrec/channel.hpp"
#include "petzrec/rng.hpp"

using namespace petzrec;

namespace {

AlgebraPtr m2() { return TracialAlgebra::single_block(2); }

AlgebraElement offdiag_state(const AlgebraPtr &alg) {
  Matrix m(2, 2);
  m << Complex(1.0, 0.0), Complex(0.5, 0.0),  //
      Complex(0.5, 0.0), Complex(1.0, 0.0);
  return AlgebraElement(alg, {m});
}

}  // namespace

TEST_CASE("identity channel acts as identity") {
  const AlgebraPtr alg = TracialAlgebra::make({2, 2}, {1.0 / 8, 3.0 / 8});
  const Channel id = identity_channel(alg);
  const HermitianElement x = random_hermitian(alg, 11);
  CHECK(l2_norm(id.apply(x) - x) < 1e-14);
  CHECK((id.superoperator_matrix() -
         Matrix::Identity(alg->coord_dim(), alg->coord_dim()))
            .norm() < 1e-14);
}

TEST_CASE("pinching channel zeroes off-diagonals") {
  const AlgebraPtr alg = m2();
  const Channel pinch = pinching_channel(alg);
  const AlgebraElement out = pinch.apply(offdiag_state(alg));
  CHECK(l2_norm(out - AlgebraElement::identity(alg)) < 1e-14);

  // As a 4x4 L^2 matrix: rank-2 orthogonal projection.
  const Matrix &m = pinch.superoperator_matrix();
  CHECK((m * m - m).norm() < 1e-14);
  CHECK((m - m.adjoint()).norm() < 1e-14);
  CHECK(std::abs(m.trace().real() - 2.0) < 1e-14);
}

TEST_CASE("trace channel maps onto the identity line") {
  const AlgebraPtr alg = m2();
  const Channel tr = trace_channel(alg);
  Matrix d(2, 2);
  d << Complex(1.5, 0.0), Complex(0.0, 0.0),  //
      Complex(0.0, 0.0), Complex(0.5, 0.0);
  const AlgebraElement out = tr.apply(AlgebraElement(alg, {d}));
  CHECK(l2_norm(out - AlgebraElement::identity(alg)) < 1e-14);

  // Rank-1 projection onto span of the identity.
  const Matrix &m = tr.superoperator_matrix();
  CHECK((m * m - m).norm() < 1e-13);
  CHECK(std::abs(m.trace().real() - 1.0) < 1e-13);
  const Vector one_coords = to_coords(AlgebraElement::identity(alg));
  CHECK((m * one_coords - one_coords).norm() < 1e-13);
}

TEST_CASE("adjoint examples") {
  const AlgebraPtr alg = m2();

  const Channel id = identity_channel(alg);
  CHECK((id.adjoint_superoperator().mat - Matrix::Identity(4, 4)).norm() <
        1e-14);

  // Adjoint of the trace channel at 1_target is 1_source.
  const Channel tr = trace_channel(alg);
  const AlgebraElement back = tr.apply_adjoint(AlgebraElement::identity(alg));
  CHECK(l2_norm(back - AlgebraElement::identity(alg)) < 1e-13);

  // Pinching is L^2 self-adjoint.
  const Channel pinch = pinching_channel(alg);
  CHECK((pinch.superoperator_matrix() -
         pinch.superoperator_matrix().adjoint())
            .norm() < 1e-14);
}

TEST_CASE("adjoint pairing holds on random pairs") {
  const AlgebraPtr src = TracialAlgebra::single_block(3);
  const AlgebraPtr tgt = m2();
  const Channel phi = random_channel(src, tgt, 3, 404);
  for (int t = 0; t < 32; ++t) {
    Rng rng(derive_seed(21, t));
    const AlgebraElement x(src, {rng.ginibre(3, 3)});
    const AlgebraElement y(tgt, {rng.ginibre(2, 2)});
    const Complex lhs = inner(phi.apply(x), y);
    const Complex rhs = inner(x, phi.apply_adjoint(y));
    CHECK(std::abs(lhs - rhs) < 1e-11 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("strictness results") {
  const AlgebraPtr alg = m2();
  const ReferenceState b = random_reference_state(alg, 5150, 1e-6);

  const StrictnessResult id_strict = is_strict(identity_channel(alg), b);
  CHECK(id_strict.strict);
  CHECK(id_strict.margin == doctest::Approx(b.min_eigenvalue()));

  const StrictnessResult tr_strict = is_strict(trace_channel(alg), b);
  CHECK(tr_strict.strict);
  CHECK(tr_strict.margin == doctest::Approx(1.0));
}

TEST_CASE("rank-deficient compression onto one block is not strict") {
  // phi(x1, x2) = (x1 + x2, 0) on C + C with equal weights: trace preserving
  // via two rank-1 partial isometries, but it kills the second block.
  const AlgebraPtr alg = TracialAlgebra::make({1, 1}, {0.5, 0.5});
  Matrix k1 = Matrix::Zero(2, 2), k2 = Matrix::Zero(2, 2);
  k1(0, 0) = 1.0;
  k2(0, 1) = 1.0;
  const Channel compress(alg, alg, {k1, k2});
  Matrix b0(1, 1), b1(1, 1);
  b0 << Complex(1.2, 0.0);
  b1 << Complex(0.8, 0.0);
  const ReferenceState b(AlgebraElement(alg, {b0, b1}), 1e-6);
  const StrictnessResult s = is_strict(compress, b);
  CHECK_FALSE(s.strict);
  CHECK(s.margin == doctest::Approx(0.0));
}

TEST_CASE("unitary channels preserve every p-norm") {
  const AlgebraPtr alg = TracialAlgebra::make({2, 2}, {1.0 / 8, 3.0 / 8});
  const Channel u = unitary_channel(alg, random_unitary(alg, 88));
  const HermitianElement x = random_hermitian(alg, 89);
  for (double p : {1.0, 1.5, 2.0, 4.0}) {
    CHECK(p_norm(u.apply(x), p) ==
          doctest::Approx(p_norm(x, p)).epsilon(1e-12));
  }
}

TEST_CASE("direct sum of identities is the identity") {
  const Channel id2 = identity_channel(m2());
  const Channel id3 = identity_channel(TracialAlgebra::single_block(3));
  const Channel ds = direct_sum(id2, id3, 0.4);
  const HermitianElement x = random_hermitian(ds.source(), 90);
  CHECK(l2_norm(ds.apply(x) - x) < 1e-14);
  CHECK(ds.source()->num_blocks() == 2);
  CHECK(ds.source()->weight(0) == doctest::Approx(0.4 * 0.5));
  CHECK(ds.source()->weight(1) == doctest::Approx(0.6 / 3.0));
}

TEST_CASE("random channel invariants hold by construction") {
  const AlgebraPtr m3 = TracialAlgebra::single_block(3);
  const AlgebraPtr tgt = m2();
  const Channel phi = random_channel(m3, tgt, 4, 7777);
  CHECK(phi.choi_min_eigenvalue() >= -1e-10);
  CHECK(phi.trace_preservation_residual() <= 1e-10);
  CHECK(phi.block_preservation_residual() <= 1e-11);

  // Positive in, positive out; weighted trace preserved.
  const StateElement a = random_state(m3, 7778);
  const AlgebraElement out = phi.apply(a);
  CHECK(min_eigenvalue(out) >= -1e-12);
  CHECK(std::abs(trace(out).real() - 1.0) < 1e-10);

  CHECK_THROWS_AS(
      random_channel(TracialAlgebra::make({1, 1}, {0.5, 0.5}), tgt, 2, 1),
      InvariantError);
}

TEST_CASE("tensor of channels is a channel on the tensor algebra") {
  const Channel a = random_channel(m2(), m2(), 2, 31);
  const Channel b = random_channel(TracialAlgebra::single_block(3),
                                   TracialAlgebra::single_block(3), 2, 32);
  const Channel ab = tensor_channel(a, b);
  CHECK(ab.source()->total_dim() == 6);
  CHECK(ab.trace_preservation_residual() <= 1e-10);
  CHECK(ab.choi_min_eigenvalue() >= -1e-10);

  const AlgebraPtr two_block = TracialAlgebra::make({1, 1}, {0.5, 0.5});
  CHECK_THROWS_AS(tensor_channel(a, identity_channel(two_block)),
                  InvariantError);
}

TEST_CASE("apply rejects elements from the wrong algebra") {
  const Channel id = identity_channel(m2());
  const HermitianElement x =
      random_hermitian(TracialAlgebra::single_block(3), 1);
  CHECK_THROWS_AS(id.apply(x), AlgebraMismatchError);
  CHECK_THROWS_AS(id.apply_adjoint(x), AlgebraMismatchError);
}

TEST_CASE("boundedness and positivity over random draws") {
  const AlgebraPtr alg = m2();
  const AlgebraElement one = AlgebraElement::identity(alg);
  for (int t = 0; t < 500; ++t) {
    const Channel phi =
        random_channel(alg, alg, 2 + t % 3, derive_seed(600, t));
    Rng rng(derive_seed(601, t));
    const AlgebraElement x(alg, {rng.ginibre(2, 2)});

    // L2-boundedness: ||phi(X)||_2^2 <= ||phi(1)|| ||X||_2^2.
    const double bound = operator_norm(phi.apply(one));
    const double lhs = l2_norm(phi.apply(x));
    const double rhs = l2_norm(x);
    CHECK(lhs * lhs <= bound * rhs * rhs + 1e-9);

    // Adjoint positivity.
    const StateElement pos = random_state(alg, derive_seed(602, t));
    CHECK(min_eigenvalue(phi.apply_adjoint(pos)) >= -1e-9);
  }
}

TEST_CASE("superoperator of a composition is the matrix product") {
  const AlgebraPtr alg = m2();
  const Channel f = random_channel(alg, alg, 3, 41);
  const Channel g = random_channel(alg, alg, 2, 42);
  const Channel gf = compose(g, f);
  CHECK((gf.superoperator_matrix() -
         g.superoperator_matrix() * f.superoperator_matrix())
            .cwiseAbs()
            .maxCoeff() < 1e-11);
}

TEST_CASE("choi construction matches the matrix-unit definition") {
  // C[(a,m),(b,n)] = phi(E_ab)[m,n] assembled from the embedded map directly.
  const AlgebraPtr src = m2();
  const AlgebraPtr tgt = TracialAlgebra::single_block(3);
  const Channel phi = random_channel(src, tgt, 3, 4242);
  const int ns = 2, nt = 3;
  Matrix direct = Matrix::Zero(ns * nt, ns * nt);
  for (int a = 0; a < ns; ++a) {
    for (int b = 0; b < ns; ++b) {
      Matrix e = Matrix::Zero(ns, ns);
      e(a, b) = 1.0;
      Matrix out = Matrix::Zero(nt, nt);
      for (const auto &k : phi.kraus()) out += k * e * k.adjoint();
      for (int m = 0; m < nt; ++m)
        for (int n = 0; n < nt; ++n)
          direct(a * nt + m, b * nt + n) = out(m, n);
    }
  }
  CHECK((direct - phi.choi()).cwiseAbs().maxCoeff() < 1e-12);

  // Round trip through choi_to_kraus reproduces the superoperator.
  double min_eig = 0.0;
  const auto kraus = choi_to_kraus(phi.choi(), ns, nt, 1e-8, &min_eig);
  CHECK(min_eig >= -1e-12);
  const Channel rebuilt(src, tgt, kraus);
  CHECK((rebuilt.superoperator_matrix() - phi.superoperator_matrix())
            .cwiseAbs()
            .maxCoeff() < 1e-11);
}

TEST_CASE("complete positivity via phi tensor id") {
  // The lifted map on M_2(M) stays completely positive: Choi of
  // phi (x) id built from the lifted Kraus K (x) I at the doubled dimension.
  const AlgebraPtr alg = m2();
  const Channel phi = random_channel(alg, alg, 2, 515);
  const int n = 2;
  const int big = n * n;
  Matrix choi = Matrix::Zero(big * big, big * big);
  for (const auto &k : phi.kraus()) {
    Matrix lifted = Matrix::Zero(big, big);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        for (int s = 0; s < n; ++s) lifted(r * n + s, c * n + s) = k(r, c);
    Vector v(big * big);
    for (int a = 0; a < big; ++a)
      for (int m = 0; m < big; ++m) v(a * big + m) = lifted(m, a);
    choi += v * v.adjoint();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (choi + choi.adjoint()),
                                           Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10);
}

TEST_CASE("channel constructor rejects bad kraus sets") {
  const AlgebraPtr alg = m2();
  // Not trace preserving.
  Matrix k = Matrix::Identity(2, 2) * 1.1;
  CHECK_THROWS_AS(Channel(alg, alg, {k}), ChannelConstructionError);

  // Breaks block structure on a two-block algebra.
  const AlgebraPtr two = TracialAlgebra::make({1, 1}, {0.5, 0.5});
  Matrix mix(2, 2);
  mix << Complex(M_SQRT1_2, 0), Complex(M_SQRT1_2, 0),  //
      Complex(M_SQRT1_2, 0), Complex(-M_SQRT1_2, 0);
  CHECK_THROWS_AS(Channel(two, two, {mix}), ChannelConstructionError);
}
