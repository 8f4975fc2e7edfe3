#ifndef RXCOORD_TYPES_HPP
#define RXCOORD_TYPES_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rxcoord/error.hpp"

namespace rxcoord {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Coords = std::vector<Vec3>;

struct AtomRecord {
  int serial = 1;
  std::string name;
  std::string residue_name;
  int residue_seq = 0;
  char chain = ' ';
  std::string element;
  bool hetero = false;

  friend bool operator==(const AtomRecord&, const AtomRecord&) = default;
};

struct Structure {
  std::vector<AtomRecord> atoms;
  Coords coords;

  std::size_t size() const { return atoms.size(); }
};

/// Frames share one atom table; coordinates are stored frame-major as
/// x,y,z triples (F * A * 3 doubles).
class Trajectory {
 public:
  Trajectory() = default;

  Trajectory(std::vector<AtomRecord> atoms, std::vector<double> xyz,
             std::vector<int> frame_ids)
      : atoms_(std::move(atoms)), xyz_(std::move(xyz)),
        frame_ids_(std::move(frame_ids)) {
    const std::size_t a = atoms_.size();
    if (a == 0) fail(ErrorKind::EmptyStructure, "trajectory has no atoms");
    if (frame_ids_.empty()) fail(ErrorKind::InvalidArgument, "trajectory has no frames");
    if (xyz_.size() != frame_ids_.size() * a * 3)
      fail(ErrorKind::InconsistentFrame, "coordinate array does not match F x A x 3");
    for (double v : xyz_)
      if (!std::isfinite(v)) fail(ErrorKind::MalformedRecord, "non-finite coordinate");
    for (std::size_t i = 1; i < frame_ids_.size(); ++i)
      if (frame_ids_[i] <= frame_ids_[i - 1])
        fail(ErrorKind::InvalidArgument, "frame ids must be strictly increasing");
  }

  std::size_t n_frames() const { return frame_ids_.size(); }
  std::size_t n_atoms() const { return atoms_.size(); }
  const std::vector<AtomRecord>& atoms() const { return atoms_; }
  const std::vector<int>& frame_ids() const { return frame_ids_; }
  const std::vector<double>& data() const { return xyz_; }

  Vec3 at(std::size_t frame, std::size_t atom) const {
    const double* p = xyz_.data() + (frame * atoms_.size() + atom) * 3;
    return {p[0], p[1], p[2]};
  }

  std::span<const double> frame_span(std::size_t frame) const {
    return {xyz_.data() + frame * atoms_.size() * 3, atoms_.size() * 3};
  }

  Coords frame(std::size_t f) const {
    Coords out(atoms_.size());
    for (std::size_t a = 0; a < atoms_.size(); ++a) out[a] = at(f, a);
    return out;
  }

  Structure frame_structure(std::size_t f) const { return {atoms_, frame(f)}; }

 private:
  std::vector<AtomRecord> atoms_;
  std::vector<double> xyz_;
  std::vector<int> frame_ids_;
};

struct Selection {
  std::vector<std::size_t> indices;
  std::string expr;

  std::size_t size() const { return indices.size(); }
};

struct PropertySeries {
  std::string name;
  std::string units;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

}  // namespace rxcoord

#endif  // RXCOORD_TYPES_HPP
