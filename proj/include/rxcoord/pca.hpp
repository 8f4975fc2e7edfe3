#ifndef RXCOORD_PCA_HPP
#define RXCOORD_PCA_HPP

// Two-component PCA of a kernel feature matrix.
//
// Columns are centered (optionally scaled to unit variance) and the
// covariance is normalized by F. The smaller of the A x A covariance and the
// F x F Gram matrix is diagonalized; Gram eigenvectors u map back to loadings
// through v = X^T u / sqrt(F * lambda).

#include <algorithm>
#include <cmath>
#include <string_view>

#include <Eigen/Dense>

#include "rxcoord/error.hpp"
#include "rxcoord/kernel.hpp"
#include "rxcoord/linalg.hpp"

namespace rxcoord {

enum class PcaScale { None, UnitVariance };

inline PcaScale pca_scale_from_string(std::string_view s) {
  if (s == "none") return PcaScale::None;
  if (s == "unit-variance") return PcaScale::UnitVariance;
  fail(ErrorKind::InvalidArgument, "pca scale must be 'none' or 'unit-variance'");
}

inline std::string_view to_string(PcaScale s) { return s == PcaScale::None ? "none" : "unit-variance"; }

enum class PcaBasis { Auto, Covariance, Gram };

struct PcaOptions {
  PcaScale scale = PcaScale::None;
  PcaBasis basis = PcaBasis::Auto;
  /// Dense Jacobi up to this dimension, subspace iteration above it.
  Eigen::Index jacobi_limit = 64;
};

struct Representation {
  Eigen::MatrixXd scores;       // F x 2
  Eigen::MatrixXd loadings;     // A x 2, orthonormal columns
  Eigen::Vector2d eigenvalues;  // descending, >= 0
  Eigen::VectorXd column_means;
  Eigen::VectorXd column_scales;  // all ones unless scale = unit-variance
  double total_variance = 0.0;    // trace of the covariance
  LambdaTriple lambda;
  Selection selection;
  PcaScale scale = PcaScale::None;
  bool rank_deficient = false;
  bool converged = true;

  Eigen::VectorXd pc1() const { return scores.col(0); }
};

namespace detail {

inline SymmetricEigen top2_eigen(const Eigen::MatrixXd& m, Eigen::Index jacobi_limit) {
  if (m.rows() <= jacobi_limit) {
    SymmetricEigen full = jacobi_eigen(m);
    full.values = full.values.head(2).eval();
    full.vectors = full.vectors.leftCols(2).eval();
    return full;
  }
  return subspace_eigen(m, 2);
}

/// Unit vector orthogonal to `v`, built from the standard basis vector that
/// overlaps `v` least.
inline Eigen::VectorXd orthogonal_complement(const Eigen::VectorXd& v) {
  Eigen::Index imin = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) < std::abs(v[imin])) imin = i;
  Eigen::VectorXd e = Eigen::VectorXd::Zero(v.size());
  e[imin] = 1.0;
  e -= v.dot(e) * v;
  return e.normalized();
}

inline void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index imax = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
  if (v[imax] < 0.0) v = -v;
}

}  // namespace detail

inline Representation pca2(const FeatureMatrix& features, const PcaOptions& opts = {}) {
  const Eigen::Index n = features.values.rows();
  const Eigen::Index d = features.values.cols();
  if (n < 3) fail(ErrorKind::InvalidArgument, "PCA needs at least 3 frames, got " + std::to_string(n));
  if (d < 2) fail(ErrorKind::InvalidArgument, "PCA needs at least 2 features, got " + std::to_string(d));

  Representation rep;
  rep.lambda = features.lambda;
  rep.selection = features.selection;
  rep.scale = opts.scale;
  rep.column_means = features.values.colwise().mean().transpose();
  Eigen::MatrixXd x = features.values.rowwise() - rep.column_means.transpose();
  rep.column_scales = Eigen::VectorXd::Ones(d);
  if (opts.scale == PcaScale::UnitVariance) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double sd = std::sqrt(x.col(j).squaredNorm() / static_cast<double>(n));
      if (sd > 0.0) rep.column_scales[j] = sd;
    }
    x = x * rep.column_scales.cwiseInverse().asDiagonal();
  }
  const double inv_n = 1.0 / static_cast<double>(n);

  const bool use_gram = opts.basis == PcaBasis::Gram || (opts.basis == PcaBasis::Auto && n < d);
  Eigen::MatrixXd loadings(d, 2);
  SymmetricEigen eig;
  if (use_gram) {
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(x, inv_n);
    gram = gram.selfadjointView<Eigen::Lower>();
    rep.total_variance = gram.trace();
    eig = detail::top2_eigen(gram, opts.jacobi_limit);
    for (Eigen::Index k = 0; k < 2; ++k) {
      const double lam = eig.values[k];
      if (lam > 1e-14 * std::max(eig.values[0], 0.0) && lam > 0.0)
        loadings.col(k) = (x.transpose() * eig.vectors.col(k)) / std::sqrt(static_cast<double>(n) * lam);
      else if (k == 0)
        loadings.col(0) = Eigen::VectorXd::Unit(d, 0);
      else
        loadings.col(1) = detail::orthogonal_complement(loadings.col(0));
    }
  } else {
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    cov.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose(), inv_n);
    cov = cov.selfadjointView<Eigen::Lower>();
    rep.total_variance = cov.trace();
    eig = detail::top2_eigen(cov, opts.jacobi_limit);
    loadings = eig.vectors;
  }
  rep.converged = eig.converged;

  for (Eigen::Index k = 0; k < 2; ++k) detail::fix_sign(loadings.col(k));
  rep.loadings = std::move(loadings);
  rep.eigenvalues = Eigen::Vector2d(std::max(eig.values[0], 0.0), std::max(eig.values[1], 0.0));
  rep.rank_deficient = rep.eigenvalues[1] <= 1e-12 * rep.eigenvalues[0];
  rep.scores = x * rep.loadings;
  return rep;
}

/// Projects frames onto a fitted basis: ((values - means) / scales) * loadings.
inline Eigen::MatrixXd project(const Representation& rep, const FeatureMatrix& features) {
  if (features.values.cols() != rep.loadings.rows() || features.selection.indices != rep.selection.indices)
    fail(ErrorKind::InvalidArgument, "features do not match the representation's selection");
  Eigen::MatrixXd x = features.values.rowwise() - rep.column_means.transpose();
  x = x * rep.column_scales.cwiseInverse().asDiagonal();
  return x * rep.loadings;
}

}  // namespace rxcoord

#endif  // RXCOORD_PCA_HPP
