#ifndef RXCOORD_LINALG_HPP
#define RXCOORD_LINALG_HPP

// Deterministic symmetric eigensolvers. Eigen is used for storage and
// products only; the decompositions are written out here so the iteration
// order is fixed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace rxcoord {

struct SymmetricEigen {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // column k pairs with values[k]
  int iterations = 0;
  bool converged = true;
};

namespace detail {

inline double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

inline void sort_descending(SymmetricEigen& e) {
  const auto n = e.values.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return e.values[a] > e.values[b]; });
  Eigen::VectorXd values(n);
  Eigen::MatrixXd vectors(e.vectors.rows(), n);
  for (Eigen::Index k = 0; k < n; ++k) {
    values[k] = e.values[order[static_cast<std::size_t>(k)]];
    vectors.col(k) = e.vectors.col(order[static_cast<std::size_t>(k)]);
  }
  e.values = std::move(values);
  e.vectors = std::move(vectors);
}

}  // namespace detail

/// Cyclic Jacobi. Sweeps run in row-major pivot order until the off-diagonal
/// Frobenius norm drops below tol * max(1, ||A||_F).
inline SymmetricEigen jacobi_eigen(Eigen::MatrixXd a, double tol = 1e-12, int max_sweeps = 100) {
  const Eigen::Index n = a.rows();
  SymmetricEigen out;
  out.vectors = Eigen::MatrixXd::Identity(n, n);
  const double threshold = tol * std::max(1.0, a.norm());

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (detail::off_diagonal_norm(a) < threshold) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = out.vectors(k, p), vkq = out.vectors(k, q);
          out.vectors(k, p) = c * vkp - s * vkq;
          out.vectors(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  out.iterations = sweep;
  out.converged = detail::off_diagonal_norm(a) < threshold;
  out.values = a.diagonal();
  detail::sort_descending(out);
  return out;
}

/// Leading `k` eigenpairs of a symmetric matrix by block orthogonal iteration
/// with Rayleigh-Ritz projection. The start block is a fixed pseudo-random
/// matrix, so results are reproducible. Stops when every wanted Ritz pair has
/// residual ||M v - theta v|| <= tol * |theta_0|.
inline SymmetricEigen subspace_eigen(const Eigen::MatrixXd& m, Eigen::Index k, double tol = 1e-12,
                                     int max_iterations = 20000) {
  const Eigen::Index n = m.rows();
  const Eigen::Index block = std::min<Eigen::Index>(n, std::max<Eigen::Index>(k + 6, 8));

  Eigen::MatrixXd q(n, block);
  std::uint64_t state = 0x9E3779B97F4A7C15ull;
  for (Eigen::Index j = 0; j < block; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      state = state * 6364136223846793005ull + 1442695040888963407ull;
      q(i, j) = static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
    }
  q = Eigen::HouseholderQR<Eigen::MatrixXd>(q).householderQ() * Eigen::MatrixXd::Identity(n, block);

  SymmetricEigen out;
  out.converged = false;
  Eigen::MatrixXd w;
  for (int it = 1; it <= max_iterations; ++it) {
    w.noalias() = m * q;
    const Eigen::MatrixXd h = q.transpose() * w;
    const SymmetricEigen ritz = jacobi_eigen(0.5 * (h + h.transpose()));
    q = q * ritz.vectors;
    w = w * ritz.vectors;

    const double scale = std::max(std::abs(ritz.values[0]), std::numeric_limits<double>::min());
    bool done = true;
    for (Eigen::Index j = 0; j < k && done; ++j)
      done = (w.col(j) - ritz.values[j] * q.col(j)).norm() <= tol * scale;
    out.iterations = it;
    if (done || ritz.values[0] == 0.0) {
      out.converged = true;
      out.values = ritz.values.head(k);
      out.vectors = q.leftCols(k);
      return out;
    }
    if (it == max_iterations) {
      out.values = ritz.values.head(k);
      out.vectors = q.leftCols(k);
      return out;
    }
    q = Eigen::HouseholderQR<Eigen::MatrixXd>(w).householderQ() * Eigen::MatrixXd::Identity(n, block);
  }
  return out;
}

}  // namespace rxcoord

#endif  // RXCOORD_LINALG_HPP
