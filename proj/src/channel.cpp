/**
 * This code is part of petzrec.
 *
 * (C) Copyright petzrec developers 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "petzrec/channel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "petzrec/rng.hpp"

namespace petzrec {

//=============================================================================
// Coordinates
//=============================================================================

Vector to_coords(const AlgebraElement &x) {
  const auto &alg = *x.algebra();
  Vector v(alg.coord_dim());
  for (int i = 0; i < alg.num_blocks(); ++i) {
    const int n = alg.block_dim(i);
    const double s = std::sqrt(alg.weight(i));
    const int off = alg.coord_offset(i);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) v(off + r * n + c) = s * x.block(i)(r, c);
  }
  return v;
}

AlgebraElement from_coords(const AlgebraPtr &algebra, const Vector &coords) {
  if (coords.size() != algebra->coord_dim()) {
    throw InvariantError("from_coords: coordinate length mismatch");
  }
  std::vector<Matrix> blocks;
  blocks.reserve(algebra->num_blocks());
  for (int i = 0; i < algebra->num_blocks(); ++i) {
    const int n = algebra->block_dim(i);
    const double s = 1.0 / std::sqrt(algebra->weight(i));
    const int off = algebra->coord_offset(i);
    Matrix b(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) b(r, c) = s * coords(off + r * n + c);
    blocks.push_back(std::move(b));
  }
  return AlgebraElement(algebra, std::move(blocks));
}

double Superoperator::operator_norm() const {
  Eigen::JacobiSVD<Matrix> svd(mat);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

//=============================================================================
// Channel
//=============================================================================

Channel::Channel(AlgebraPtr source, AlgebraPtr target,
                 std::vector<Matrix> kraus, ChannelTolerances tol)
    : source_(std::move(source)),
      target_(std::move(target)),
      kraus_(std::move(kraus)),
      tol_(tol) {
  if (!source_ || !target_) throw InvariantError("Channel: null algebra");
  if (kraus_.empty()) throw ChannelConstructionError("Channel: no Kraus ops");
  const int ns = source_->total_dim();
  const int nt = target_->total_dim();
  for (const auto &k : kraus_) {
    if (k.rows() != nt || k.cols() != ns) {
      throw ChannelConstructionError("Channel: Kraus shape mismatch");
    }
  }

  // Superoperator in orthonormal weighted-L^2 coordinates plus the
  // block-preservation residual, assembled from the action on matrix units.
  superop_ = Matrix::Zero(target_->coord_dim(), source_->coord_dim());
  block_residual_ = 0.0;
  for (int i = 0; i < source_->num_blocks(); ++i) {
    const int di = source_->block_dim(i);
    const int boff = source_->block_offset(i);
    const int coff = source_->coord_offset(i);
    const double wi = source_->weight(i);
    for (int r = 0; r < di; ++r) {
      for (int c = 0; c < di; ++c) {
        // Y = sum_j K_j E_rc K_j^* as outer products of Kraus columns.
        Matrix y = Matrix::Zero(nt, nt);
        for (const auto &k : kraus_) {
          y.noalias() += k.col(boff + r) * k.col(boff + c).adjoint();
        }
        for (int j = 0; j < target_->num_blocks(); ++j) {
          const int dj = target_->block_dim(j);
          const int toff = target_->block_offset(j);
          const double scale = std::sqrt(target_->weight(j) / wi);
          const int tcoff = target_->coord_offset(j);
          for (int m = 0; m < dj; ++m) {
            for (int n = 0; n < dj; ++n) {
              superop_(tcoff + m * dj + n, coff + r * di + c) =
                  scale * y(toff + m, toff + n);
            }
          }
          y.block(toff, toff, dj, dj).setZero();
        }
        block_residual_ = std::max(block_residual_, y.norm());
      }
    }
  }
  if (block_residual_ > tol_.block_preservation) {
    std::ostringstream msg;
    msg << "Channel: block-preservation residual " << block_residual_
        << " exceeds " << tol_.block_preservation;
    throw ChannelConstructionError(msg.str());
  }

  // Weighted trace preservation: the source-subalgebra compression of
  // S = sum_j K_j^* W' K_j must equal the source weight operator W.
  Matrix s = Matrix::Zero(ns, ns);
  const RealVector &wt = target_->weight_diagonal();
  for (const auto &k : kraus_) {
    s.noalias() += k.adjoint() * wt.asDiagonal() * k;
  }
  tp_residual_ = 0.0;
  for (int i = 0; i < source_->num_blocks(); ++i) {
    const int di = source_->block_dim(i);
    const int boff = source_->block_offset(i);
    Matrix diff = s.block(boff, boff, di, di) -
                  source_->weight(i) * Matrix::Identity(di, di);
    tp_residual_ = std::max(tp_residual_, diff.cwiseAbs().maxCoeff());
  }
  if (tp_residual_ > tol_.trace_preservation) {
    std::ostringstream msg;
    msg << "Channel: trace-preservation residual " << tp_residual_
        << " exceeds " << tol_.trace_preservation;
    throw ChannelConstructionError(msg.str());
  }

  // Complete positivity via the Choi matrix of the embedded map.
  choi_ = kraus_to_choi(kraus_, ns, nt);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (choi_ + choi_.adjoint()),
                                           Eigen::EigenvaluesOnly);
  choi_min_eig_ = es.eigenvalues().minCoeff();
  if (choi_min_eig_ < -tol_.choi_floor) {
    std::ostringstream msg;
    msg << "Channel: Choi eigenvalue " << choi_min_eig_ << " below -"
        << tol_.choi_floor;
    throw ChannelConstructionError(msg.str());
  }
}

AlgebraElement Channel::apply(const AlgebraElement &x) const {
  if (!same_algebra(x.algebra(), source_)) {
    throw AlgebraMismatchError("Channel::apply: element not in source algebra");
  }
  const Matrix big_in = x.embedded();
  Matrix big_out = Matrix::Zero(target_->total_dim(), target_->total_dim());
  for (const auto &k : kraus_) {
    big_out.noalias() += k * big_in * k.adjoint();
  }
  double residual = 0.0;
  AlgebraElement out =
      AlgebraElement::from_embedded(target_, big_out, &residual);
  const double scale = std::max(1.0, big_out.norm());
  if (residual > tol_.block_preservation * scale) {
    std::ostringstream msg;
    msg << "Channel::apply: off-block residual " << residual
        << " (malformed channel)";
    throw ChannelConstructionError(msg.str());
  }
  return out;
}

AlgebraElement Channel::apply_adjoint(const AlgebraElement &y) const {
  if (!same_algebra(y.algebra(), target_)) {
    throw AlgebraMismatchError(
        "Channel::apply_adjoint: element not in target algebra");
  }
  return from_coords(source_, superop_.adjoint() * to_coords(y));
}

StrictnessResult is_strict(const Channel &phi, const ReferenceState &b,
                           double strictness_floor) {
  const AlgebraElement image = phi.apply(b);
  const double margin = min_eigenvalue(image);
  return StrictnessResult{margin >= strictness_floor, margin};
}

//=============================================================================
// Builders
//=============================================================================

Channel identity_channel(const AlgebraPtr &algebra) {
  return Channel(algebra, algebra,
                 {Matrix::Identity(algebra->total_dim(), algebra->total_dim())});
}

Channel unitary_channel(const AlgebraPtr &algebra, const AlgebraElement &u) {
  if (!same_algebra(u.algebra(), algebra)) {
    throw AlgebraMismatchError("unitary_channel: unitary not in algebra");
  }
  const AlgebraElement gram = u.adjoint() * u;
  const AlgebraElement dev = gram - AlgebraElement::identity(algebra);
  if (l2_norm(dev) > 1e-10) {
    throw InvariantError("unitary_channel: input is not unitary");
  }
  return Channel(algebra, algebra, {u.embedded()});
}

Channel pinching_channel(const AlgebraPtr &algebra) {
  const int n = algebra->total_dim();
  std::vector<Matrix> kraus;
  kraus.reserve(n);
  for (int k = 0; k < n; ++k) {
    Matrix e = Matrix::Zero(n, n);
    e(k, k) = Complex(1.0, 0.0);
    kraus.push_back(std::move(e));
  }
  return Channel(algebra, algebra, std::move(kraus));
}

Channel trace_channel(const AlgebraPtr &algebra) {
  const int n = algebra->total_dim();
  const RealVector &w = algebra->weight_diagonal();
  std::vector<Matrix> kraus;
  kraus.reserve(n * n);
  for (int m = 0; m < n; ++m) {
    for (int a = 0; a < n; ++a) {
      Matrix k = Matrix::Zero(n, n);
      k(m, a) = Complex(std::sqrt(w(a)), 0.0);
      kraus.push_back(std::move(k));
    }
  }
  return Channel(algebra, algebra, std::move(kraus));
}

Channel direct_sum(const std::vector<Channel> &parts,
                   const std::vector<double> &masses) {
  if (parts.empty() || parts.size() != masses.size()) {
    throw InvariantError("direct_sum: parts/masses mismatch");
  }
  double total = 0.0;
  for (double m : masses) {
    if (!(m > 0.0)) throw InvariantError("direct_sum: mass <= 0");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvariantError("direct_sum: masses must sum to 1");
  }
  std::vector<int> src_dims, tgt_dims;
  std::vector<double> src_weights, tgt_weights;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto &src = *parts[k].source();
    const auto &tgt = *parts[k].target();
    for (int i = 0; i < src.num_blocks(); ++i) {
      src_dims.push_back(src.block_dim(i));
      src_weights.push_back(masses[k] * src.weight(i));
    }
    for (int i = 0; i < tgt.num_blocks(); ++i) {
      tgt_dims.push_back(tgt.block_dim(i));
      tgt_weights.push_back(masses[k] * tgt.weight(i));
    }
  }
  AlgebraPtr source = TracialAlgebra::make(src_dims, src_weights);
  AlgebraPtr target = TracialAlgebra::make(tgt_dims, tgt_weights);

  std::vector<Matrix> kraus;
  int src_off = 0, tgt_off = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const int ns = parts[k].source()->total_dim();
    const int nt = parts[k].target()->total_dim();
    for (const auto &kr : parts[k].kraus()) {
      Matrix big = Matrix::Zero(target->total_dim(), source->total_dim());
      big.block(tgt_off, src_off, nt, ns) = kr;
      kraus.push_back(std::move(big));
    }
    src_off += ns;
    tgt_off += nt;
  }
  return Channel(source, target, std::move(kraus));
}

Channel direct_sum(const Channel &a, const Channel &b, double mass_a) {
  return direct_sum(std::vector<Channel>{a, b}, {mass_a, 1.0 - mass_a});
}

namespace {

Matrix kron(const Matrix &a, const Matrix &b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

}  // namespace

Channel tensor_channel(const Channel &a, const Channel &b) {
  if (a.source()->num_blocks() != 1 || a.target()->num_blocks() != 1 ||
      b.source()->num_blocks() != 1 || b.target()->num_blocks() != 1) {
    throw InvariantError("tensor_channel: single-block algebras only");
  }
  AlgebraPtr source = TracialAlgebra::single_block(a.source()->total_dim() *
                                                   b.source()->total_dim());
  AlgebraPtr target = TracialAlgebra::single_block(a.target()->total_dim() *
                                                   b.target()->total_dim());
  std::vector<Matrix> kraus;
  for (const auto &ka : a.kraus())
    for (const auto &kb : b.kraus()) kraus.push_back(kron(ka, kb));
  return Channel(source, target, std::move(kraus));
}

Channel compose(const Channel &second, const Channel &first) {
  if (!same_algebra(first.target(), second.source())) {
    throw AlgebraMismatchError("compose: inner algebras do not match");
  }
  std::vector<Matrix> kraus;
  kraus.reserve(first.kraus().size() * second.kraus().size());
  for (const auto &k2 : second.kraus())
    for (const auto &k1 : first.kraus()) kraus.push_back(k2 * k1);
  return Channel(first.source(), second.target(), std::move(kraus));
}

Channel random_channel(const AlgebraPtr &source, const AlgebraPtr &target,
                       int num_kraus, std::uint64_t seed) {
  if (source->num_blocks() != 1 || target->num_blocks() != 1) {
    throw InvariantError("random_channel: single-block algebras only");
  }
  if (num_kraus < 1) throw InvariantError("random_channel: num_kraus < 1");
  const int ns = source->total_dim();
  const int nt = target->total_dim();
  const double w_src = source->weight(0);
  const double w_tgt = target->weight(0);

  for (int attempt = 0; attempt < 16; ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    std::vector<Matrix> g;
    g.reserve(num_kraus);
    Matrix s = Matrix::Zero(ns, ns);
    for (int j = 0; j < num_kraus; ++j) {
      g.push_back(rng.ginibre(nt, ns));
      s.noalias() += w_tgt * (g.back().adjoint() * g.back());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (s + s.adjoint()));
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (lo <= 1e-12 * std::max(1.0, hi)) continue;  // singular S: resample
    RealVector inv_sqrt = es.eigenvalues();
    for (int k = 0; k < inv_sqrt.size(); ++k) {
      inv_sqrt(k) = 1.0 / std::sqrt(inv_sqrt(k));
    }
    const Matrix corr = std::sqrt(w_src) * (es.eigenvectors() *
                                            inv_sqrt.asDiagonal() *
                                            es.eigenvectors().adjoint());
    std::vector<Matrix> kraus;
    kraus.reserve(num_kraus);
    for (auto &gj : g) kraus.push_back(gj * corr);
    return Channel(source, target, std::move(kraus));
  }
  throw NumericalBreakdownError("random_channel: persistent singular S");
}

//=============================================================================
// Choi helpers
//=============================================================================

Matrix kraus_to_choi(const std::vector<Matrix> &kraus, int source_dim,
                     int target_dim) {
  const int dim = source_dim * target_dim;
  Matrix choi = Matrix::Zero(dim, dim);
  for (const auto &k : kraus) {
    Vector v(dim);
    for (int a = 0; a < source_dim; ++a)
      for (int m = 0; m < target_dim; ++m) v(a * target_dim + m) = k(m, a);
    choi.noalias() += v * v.adjoint();
  }
  return choi;
}

std::vector<Matrix> choi_to_kraus(const Matrix &choi, int source_dim,
                                  int target_dim, double breakdown,
                                  double *min_eig_out) {
  const int dim = source_dim * target_dim;
  if (choi.rows() != dim || choi.cols() != dim) {
    throw InvariantError("choi_to_kraus: dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (choi + choi.adjoint()));
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig_out) *min_eig_out = min_eig;
  if (min_eig < -breakdown) {
    std::ostringstream msg;
    msg << "choi_to_kraus: eigenvalue " << min_eig
        << " signals numerical breakdown";
    throw NumericalBreakdownError(msg.str());
  }
  const double max_eig = std::max(0.0, es.eigenvalues().maxCoeff());
  const double cut = 1e-13 * std::max(1.0, max_eig);
  std::vector<Matrix> kraus;
  for (int k = 0; k < dim; ++k) {
    const double lambda = es.eigenvalues()(k);
    if (lambda <= cut) continue;
    const double coeff = std::sqrt(lambda);
    Matrix kr(target_dim, source_dim);
    for (int a = 0; a < source_dim; ++a)
      for (int m = 0; m < target_dim; ++m)
        kr(m, a) = coeff * es.eigenvectors()(a * target_dim + m, k);
    kraus.push_back(std::move(kr));
  }
  if (kraus.empty()) {
    throw NumericalBreakdownError("choi_to_kraus: zero map");
  }
  return kraus;
}

}  // namespace petzrec
