#ifndef RXCOORD_KERNEL_HPP
#define RXCOORD_KERNEL_HPP

// Angular kernel feature map and the per-residue theta-angle feature.
//
//   K(p; l1, l2, l3) = l1 cos^2(x/r) + l2 cos^2(y/r) + l3 sin^2(z/r),  r = |p|
//
// with x/r, y/r, z/r taken as radians. Coordinates are expected to be
// centered at the origin, which is what r is measured from.

#include <algorithm>
#include <cmath>
#include <compare>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rxcoord/error.hpp"
#include "rxcoord/ingest.hpp"
#include "rxcoord/parallel.hpp"
#include "rxcoord/text.hpp"
#include "rxcoord/types.hpp"

namespace rxcoord {

/// Hyperparameters of the kernel: each in [0, 1], summing to 1.
struct LambdaTriple {
  double l1 = 1.0;
  double l2 = 0.0;
  double l3 = 0.0;

  static LambdaTriple make(double l1, double l2, double l3) {
    LambdaTriple t{l1, l2, l3};
    t.validate();
    return t;
  }

  void validate() const {
    for (double v : {l1, l2, l3})
      if (!(v >= 0.0 && v <= 1.0)) fail(ErrorKind::InvalidArgument, "lambda entries must lie in [0, 1]");
    if (std::abs(l1 + l2 + l3 - 1.0) > 1e-12) fail(ErrorKind::InvalidArgument, "lambda entries must sum to 1");
  }

  std::string label() const {
    return "K(" + format_double(l1) + "," + format_double(l2) + "," + format_double(l3) + ")";
  }

  friend auto operator<=>(const LambdaTriple&, const LambdaTriple&) = default;
};

/// All simplex points on a grid of spacing `step`, lexicographically ascending.
inline std::vector<LambdaTriple> lambda_grid(double step = 0.25) {
  if (!(step > 0.0)) fail(ErrorKind::InvalidArgument, "lambda step must be positive");
  const double inv = 1.0 / step;
  const long n = std::lround(inv);
  if (n < 1 || std::abs(inv - static_cast<double>(n)) > 1e-9)
    fail(ErrorKind::InvalidArgument, "1/step must be a positive integer");
  const auto frac = [n](long i) { return static_cast<double>(i) / static_cast<double>(n); };
  std::vector<LambdaTriple> grid;
  for (long i = 0; i <= n; ++i)
    for (long j = 0; j <= n - i; ++j) grid.push_back({frac(i), frac(j), frac(n - i - j)});
  return grid;
}

inline constexpr double kMinRadius = 1e-9;

struct RadialNorm {
  double r = 0.0;
  bool clamped = false;
};

/// Distance from the origin, clamped below at kMinRadius.
inline RadialNorm radial_norm(const Vec3& p) {
  const double r = p.norm();
  if (r < kMinRadius) return {kMinRadius, true};
  return {r, false};
}

inline double kernel_value(const Vec3& p, const LambdaTriple& lambda) {
  const double r = radial_norm(p).r;
  const double cx = std::cos(p.x() / r);
  const double cy = std::cos(p.y() / r);
  const double sz = std::sin(p.z() / r);
  return lambda.l1 * cx * cx + lambda.l2 * cy * cy + lambda.l3 * sz * sz;
}

struct FeatureMatrix {
  Eigen::MatrixXd values;  // frames x selected atoms
  LambdaTriple lambda;
  Selection selection;
  /// Atom-frame entries whose radius was clamped to kMinRadius.
  std::size_t clamped = 0;
};

inline FeatureMatrix kernel_features(const Trajectory& traj, const Selection& selection, const LambdaTriple& lambda,
                                     int threads = 1) {
  FeatureMatrix out;
  out.lambda = lambda;
  out.selection = selection;
  const auto n_frames = static_cast<Eigen::Index>(traj.n_frames());
  const auto n_sel = static_cast<Eigen::Index>(selection.size());
  out.values.resize(n_frames, n_sel);
  std::vector<std::size_t> clamped(traj.n_frames(), 0);
  parallel_for(threads, traj.n_frames(), [&](std::size_t f) {
    for (Eigen::Index j = 0; j < n_sel; ++j) {
      const Vec3 p = traj.at(f, selection.indices[static_cast<std::size_t>(j)]);
      if (radial_norm(p).clamped) ++clamped[f];
      out.values(static_cast<Eigen::Index>(f), j) = kernel_value(p, lambda);
    }
  });
  for (std::size_t c : clamped) out.clamped += c;
  return out;
}

/// Polar angle arccos(z / r) in [0, pi].
inline double theta_angle(const Vec3& p) {
  const double r = radial_norm(p).r;
  return std::acos(std::clamp(p.z() / r, -1.0, 1.0));
}

inline PropertySeries theta_series(const Trajectory& traj, int residue_seq) {
  const std::size_t ca = require_ca(traj.atoms(), residue_seq);
  PropertySeries out{"theta_" + std::to_string(residue_seq), "radian", {}};
  out.values.reserve(traj.n_frames());
  for (std::size_t f = 0; f < traj.n_frames(); ++f) out.values.push_back(theta_angle(traj.at(f, ca)));
  return out;
}

}  // namespace rxcoord

#endif  // RXCOORD_KERNEL_HPP
