#ifndef RXCOORD_ALIGN_HPP
#define RXCOORD_ALIGN_HPP

// Geometric preprocessing: centering, principal-axes orientation, Kabsch
// superposition and the per-frame RMSD / contact-distance properties.
// All atoms carry unit mass.

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rxcoord/error.hpp"
#include "rxcoord/ingest.hpp"
#include "rxcoord/linalg.hpp"
#include "rxcoord/parallel.hpp"
#include "rxcoord/types.hpp"

namespace rxcoord {

using RotationMatrix = Mat3;

struct AlignmentResult {
  RotationMatrix rotation = RotationMatrix::Identity();
  Vec3 translation = Vec3::Zero();
  double rmsd = 0.0;

  /// Maps a mobile-frame point onto the target frame.
  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
};

inline Vec3 centroid(const Coords& coords) {
  if (coords.empty()) fail(ErrorKind::InvalidArgument, "centroid of an empty point set");
  Vec3 sum = Vec3::Zero();
  for (const Vec3& p : coords) sum += p;
  return sum / static_cast<double>(coords.size());
}

inline Coords translate_to_origin(const Coords& coords) {
  const Vec3 c = centroid(coords);
  Coords out(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) out[i] = coords[i] - c;
  return out;
}

inline Coords transform(const Coords& coords, const RotationMatrix& r, const Vec3& t = Vec3::Zero()) {
  Coords out(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) out[i] = r * coords[i] + t;
  return out;
}

/// Second-moment tensor about the centroid, normalized by N.
inline Mat3 gyration_tensor(const Coords& coords) {
  const Vec3 c = centroid(coords);
  Mat3 g = Mat3::Zero();
  for (const Vec3& p : coords) {
    const Vec3 d = p - c;
    g.noalias() += d * d.transpose();
  }
  g /= static_cast<double>(coords.size());
  return 0.5 * (g + g.transpose());
}

/// Rows of the result are the gyration eigenvectors ordered by descending
/// eigenvalue, so R * p expresses p in the principal frame (longest axis on x).
/// Each eigenvector has its largest-magnitude entry positive; the third row is
/// negated if needed to keep det(R) = +1.
inline RotationMatrix principal_axes_rotation(const Coords& coords) {
  const Mat3 g = gyration_tensor(coords);
  const SymmetricEigen eig = jacobi_eigen(g, 1e-12);
  const double l0 = eig.values[0], l1 = eig.values[1];
  if (!(l0 > 0.0) || (l0 - l1) < 1e-9 * l0)
    fail(ErrorKind::DegenerateAxes, "two largest gyration eigenvalues coincide; orientation is underdetermined");

  RotationMatrix r;
  for (int k = 0; k < 3; ++k) {
    Vec3 v = eig.vectors.col(k);
    Eigen::Index imax = 0;
    for (Eigen::Index i = 1; i < 3; ++i)
      if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
    if (v[imax] < 0.0) v = -v;
    r.row(k) = v.normalized().transpose();
  }
  if (r.determinant() < 0.0) r.row(2) = -r.row(2);
  return r;
}

/// Centers the structure at the origin and rotates it into its principal frame.
inline Structure orient_structure(const Structure& s) {
  const Coords centered = translate_to_origin(s.coords);
  return Structure{s.atoms, transform(centered, principal_axes_rotation(centered))};
}

namespace detail {

inline Coords gather(const Coords& coords, const Selection& sel) {
  Coords out;
  out.reserve(sel.size());
  for (std::size_t i : sel.indices) {
    if (i >= coords.size()) fail(ErrorKind::InvalidArgument, "selection index out of range");
    out.push_back(coords[i]);
  }
  return out;
}

inline bool collinear(const Coords& pts) {
  const SymmetricEigen e = jacobi_eigen(gyration_tensor(pts), 1e-14);
  return !(e.values[0] > 0.0) || e.values[1] <= 1e-12 * e.values[0];
}

}  // namespace detail

/// Optimal proper rigid transform taking `mobile` onto `target` over the
/// selected atoms. A reflection is corrected by flipping the singular vector
/// with the smallest singular value.
inline AlignmentResult kabsch(const Coords& mobile, const Coords& target, const Selection& selection) {
  if (mobile.size() != target.size())
    fail(ErrorKind::LengthMismatch, "mobile and target atom counts differ");
  if (selection.size() < 3)
    fail(ErrorKind::TooFewAtoms, "superposition needs at least 3 atoms, got " + std::to_string(selection.size()));
  const Coords p = detail::gather(mobile, selection);
  const Coords q = detail::gather(target, selection);
  if (detail::collinear(p) || detail::collinear(q))
    fail(ErrorKind::CollinearSelection, "selected atoms are collinear");

  const Vec3 cp = centroid(p), cq = centroid(q);
  Mat3 h = Mat3::Zero();
  for (std::size_t i = 0; i < p.size(); ++i) h.noalias() += (p[i] - cp) * (q[i] - cq).transpose();

  const Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 v = svd.matrixV();
  const Mat3& u = svd.matrixU();
  if ((v * u.transpose()).determinant() < 0.0) v.col(2) = -v.col(2);

  AlignmentResult out;
  out.rotation = v * u.transpose();
  out.translation = cq - out.rotation * cp;
  double ss = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) ss += (out.apply(p[i]) - q[i]).squaredNorm();
  out.rmsd = std::sqrt(ss / static_cast<double>(p.size()));
  return out;
}

/// Superposes every frame on `reference` using its own fit over `selection`;
/// the fitted transform is applied to all atoms.
inline Trajectory align_trajectory(const Trajectory& traj, const Structure& reference, const Selection& selection,
                                   int threads = 1) {
  require_same_atom_order(reference.atoms, traj.atoms());
  const std::size_t n_atoms = traj.n_atoms();
  std::vector<double> xyz(traj.data().size());
  parallel_for(threads, traj.n_frames(), [&](std::size_t f) {
    const Coords frame = traj.frame(f);
    const AlignmentResult fit = kabsch(frame, reference.coords, selection);
    double* out = xyz.data() + f * n_atoms * 3;
    for (std::size_t a = 0; a < n_atoms; ++a) {
      const Vec3 p = fit.apply(frame[a]);
      out[3 * a] = p.x();
      out[3 * a + 1] = p.y();
      out[3 * a + 2] = p.z();
    }
  });
  return Trajectory(traj.atoms(), std::move(xyz), traj.frame_ids());
}

/// Per-frame RMSD over the selection without refitting.
inline PropertySeries rmsd_series(const Trajectory& traj, const Structure& reference, const Selection& selection) {
  require_same_atom_order(reference.atoms, traj.atoms());
  PropertySeries out{"rmsd", "angstrom", {}};
  out.values.reserve(traj.n_frames());
  for (std::size_t f = 0; f < traj.n_frames(); ++f) {
    double ss = 0.0;
    for (std::size_t i : selection.indices) ss += (traj.at(f, i) - reference.coords[i]).squaredNorm();
    out.values.push_back(std::sqrt(ss / static_cast<double>(selection.size())));
  }
  return out;
}

inline PropertySeries ca_contact_distance(const Trajectory& traj, int res_a, int res_b) {
  const std::size_t ia = require_ca(traj.atoms(), res_a);
  const std::size_t ib = require_ca(traj.atoms(), res_b);
  PropertySeries out{"ca_distance_" + std::to_string(res_a) + "_" + std::to_string(res_b), "angstrom", {}};
  out.values.reserve(traj.n_frames());
  for (std::size_t f = 0; f < traj.n_frames(); ++f) out.values.push_back((traj.at(f, ia) - traj.at(f, ib)).norm());
  return out;
}

}  // namespace rxcoord

#endif  // RXCOORD_ALIGN_HPP
