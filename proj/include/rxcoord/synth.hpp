#ifndef RXCOORD_SYNTH_HPP
#define RXCOORD_SYNTH_HPP

// Synthetic trajectories with a planted latent signal, for testing the
// pipeline without MD data.
//
// Every residue has N, CA, C, O, CB atoms clustered around a center on a
// shell around the origin. A latent scalar t ~ U(0, 1) per frame rotates the
// centers of the signal residues in polar angle (theta = theta0 + amp*(t - 1/2)),
// so their CA theta angles are linear in t. All other centers stay put. Every
// atom gets isotropic Gaussian jitter, and optionally each center moves along
// its own radial line by a per-frame Gaussian amount. The property is
// t + noise_sigma * N(0, 1).

#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rxcoord/error.hpp"
#include "rxcoord/types.hpp"

namespace rxcoord {

struct SynthOptions {
  double polar_amplitude = 0.6;  // radians swept by signal residues over t in [0, 1]
  double jitter = 0.3;           // per-coordinate Gaussian sigma, angstrom
  double radial_sigma = 0.0;     // per-frame radial breathing sigma, angstrom
  double shell_min = 8.0;
  double shell_max = 16.0;
};

struct SynthResult {
  Trajectory trajectory;
  PropertySeries property;
  std::vector<int> signal_residues;
  std::vector<double> latent;
};

inline SynthResult synth_planted(std::uint64_t seed, std::size_t n_frames, std::size_t n_residues,
                                 const std::vector<int>& signal_residues, double noise_sigma,
                                 const SynthOptions& opts = {}) {
  if (n_frames == 0 || n_residues == 0) fail(ErrorKind::InvalidArgument, "synth needs frames and residues");
  const std::set<int> signal(signal_residues.begin(), signal_residues.end());
  for (int r : signal)
    if (r < 1 || static_cast<std::size_t>(r) > n_residues)
      fail(ErrorKind::InvalidArgument, "signal residue " + std::to_string(r) + " is out of range");

  static const char* kNames[] = {"N", "CA", "C", "O", "CB"};
  static const char* kResidues[] = {"ALA", "LEU", "VAL", "ILE", "SER", "THR", "ASP", "GLU", "LYS", "ARG"};
  constexpr std::size_t kPerResidue = 5;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  constexpr double kPi = 3.14159265358979323846;
  // Draws in a fixed x, y, z order (argument evaluation order is unspecified).
  const auto gauss3 = [&]() {
    const double x = gauss(rng);
    const double y = gauss(rng);
    const double z = gauss(rng);
    return Vec3(x, y, z);
  };

  struct Residue {
    double radius, theta0, phi;
    std::vector<Vec3> offsets;
  };
  std::vector<Residue> residues(n_residues);
  std::vector<AtomRecord> atoms;
  for (std::size_t r = 0; r < n_residues; ++r) {
    Residue& res = residues[r];
    res.radius = opts.shell_min + (opts.shell_max - opts.shell_min) * unit(rng);
    res.theta0 = 0.9 + (kPi - 1.8) * unit(rng);
    res.phi = 2.0 * kPi * unit(rng);
    for (std::size_t k = 0; k < kPerResidue; ++k) {
      // CA sits on the residue center; the rest are spread around it.
      res.offsets.push_back(k == 1 ? Vec3(Vec3::Zero()) : Vec3(gauss3() * 0.8));
      AtomRecord a;
      a.serial = static_cast<int>(atoms.size()) + 1;
      a.name = kNames[k];
      a.element = std::string(1, kNames[k][0]);
      a.residue_name = kResidues[r % 10];
      a.residue_seq = static_cast<int>(r) + 1;
      a.chain = 'A';
      atoms.push_back(std::move(a));
    }
  }

  SynthResult out;
  out.signal_residues.assign(signal.begin(), signal.end());
  out.latent.resize(n_frames);
  out.property = {"planted", "arbitrary", std::vector<double>(n_frames)};
  std::vector<double> xyz;
  xyz.reserve(n_frames * atoms.size() * 3);
  std::vector<int> ids(n_frames);
  for (std::size_t f = 0; f < n_frames; ++f) {
    ids[f] = static_cast<int>(f);
    const double t = unit(rng);
    out.latent[f] = t;
    out.property.values[f] = t + noise_sigma * gauss(rng);
    for (std::size_t r = 0; r < n_residues; ++r) {
      const Residue& res = residues[r];
      const bool planted = signal.count(static_cast<int>(r) + 1) > 0;
      const double theta = planted ? res.theta0 + opts.polar_amplitude * (t - 0.5) : res.theta0;
      const double radius = res.radius + opts.radial_sigma * gauss(rng);
      const Vec3 center = radius * Vec3(std::sin(theta) * std::cos(res.phi), std::sin(theta) * std::sin(res.phi),
                                        std::cos(theta));
      for (const Vec3& off : res.offsets) {
        const Vec3 p = center + off + opts.jitter * gauss3();
        xyz.insert(xyz.end(), {p.x(), p.y(), p.z()});
      }
    }
  }
  out.trajectory = Trajectory(std::move(atoms), std::move(xyz), std::move(ids));
  return out;
}

}  // namespace rxcoord

#endif  // RXCOORD_SYNTH_HPP
