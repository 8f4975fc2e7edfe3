#ifndef RXCOORD_PIPELINE_HPP
#define RXCOORD_PIPELINE_HPP

// End-to-end studies built from the kernel, PCA and correlation-ratio pieces:
// lambda grid scan, reaction-coordinate ranking, the CB/all-atom ratio,
// single-axis baselines and the pairwise theta network.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rxcoord/corrratio.hpp"
#include "rxcoord/error.hpp"
#include "rxcoord/ingest.hpp"
#include "rxcoord/kernel.hpp"
#include "rxcoord/parallel.hpp"
#include "rxcoord/pca.hpp"
#include "rxcoord/types.hpp"

namespace rxcoord {

struct PipelineConfig {
  CorrRatioConfig corr;
  double lambda_step = 0.25;
  PcaOptions pca;
  int threads = 1;
};

struct GridScanEntry {
  LambdaTriple lambda;
  CorrRatioResult result;
  Eigen::Vector2d eigenvalues = Eigen::Vector2d::Zero();
  bool rank_deficient = false;
};

struct GridScanResult {
  std::vector<GridScanEntry> entries;
  std::size_t best = 0;
  Representation representation;  // fitted for entries[best].lambda

  const GridScanEntry& best_entry() const { return entries[best]; }

  std::vector<std::pair<LambdaTriple, CorrRatioResult>> pairs() const {
    std::vector<std::pair<LambdaTriple, CorrRatioResult>> out;
    for (const auto& e : entries) out.emplace_back(e.lambda, e.result);
    return out;
  }
};

namespace detail {

inline void require_property_length(const Trajectory& traj, const PropertySeries& property) {
  if (property.size() != traj.n_frames())
    fail(ErrorKind::LengthMismatch, "property '" + property.name + "' has " + std::to_string(property.size()) +
                                        " values but the trajectory has " + std::to_string(traj.n_frames()) +
                                        " frames");
}

/// Index of the largest non-degenerate cr; the first one wins ties.
inline std::optional<std::size_t> argmax_cr(const std::vector<GridScanEntry>& entries) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].result.degenerate) continue;
    if (!best || entries[i].result.cr > entries[*best].result.cr) best = i;
  }
  return best;
}

}  // namespace detail

/// Kernel features -> PCA -> C_r(PC1, property) for every lambda on the grid.
/// Work items are independent and results are stored by grid index.
inline GridScanResult grid_scan(const Trajectory& traj, const Selection& selection, const PropertySeries& property,
                                const PipelineConfig& cfg = {}) {
  detail::require_property_length(traj, property);
  cfg.corr.validate();
  if (traj.n_frames() < static_cast<std::size_t>(cfg.corr.n_bins))
    fail(ErrorKind::InvalidArgument, "grid scan: trajectory has " + std::to_string(traj.n_frames()) +
                                         " frames, fewer than n_bins = " + std::to_string(cfg.corr.n_bins));

  const std::vector<LambdaTriple> grid = lambda_grid(cfg.lambda_step);
  GridScanResult out;
  out.entries.resize(grid.size());
  std::vector<Representation> reps(grid.size());
  parallel_for(cfg.threads, grid.size(), [&](std::size_t i) {
    try {
      const FeatureMatrix features = kernel_features(traj, selection, grid[i]);
      reps[i] = pca2(features, cfg.pca);
      const Eigen::VectorXd pc1 = reps[i].pc1();
      GridScanEntry& e = out.entries[i];
      e.lambda = grid[i];
      e.result = correlation_ratio(std::span<const double>(pc1.data(), static_cast<std::size_t>(pc1.size())),
                                   property, cfg.corr);
      e.eigenvalues = reps[i].eigenvalues;
      e.rank_deficient = reps[i].rank_deficient;
    } catch (const Error& err) {
      throw Error(err.kind(), "grid scan at " + grid[i].label() + ": " + err.what());
    }
  });

  const auto best = detail::argmax_cr(out.entries);
  if (!best) fail(ErrorKind::AllDegenerate, "every lambda on the grid gave a degenerate correlation ratio");
  out.best = *best;
  out.representation = std::move(reps[*best]);
  return out;
}

struct RankedCoordinate {
  int residue_seq = 0;
  std::string residue_name;
  double cr = 0.0;
  int rank = 0;
  CorrRatioResult result;
};

struct Ranking {
  std::vector<RankedCoordinate> ranked;
  std::vector<int> skipped;  // residues without a CA atom

  std::vector<RankedCoordinate> top(std::size_t k) const {
    return {ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(std::min(k, ranked.size()))};
  }
};

/// Scores each residue's CA theta series against PC1 of `rep` and sorts by
/// C_r (descending; ties by ascending residue number).
inline Ranking rank_reaction_coordinates(const Trajectory& traj, const Eigen::VectorXd& pc1,
                                         const PipelineConfig& cfg = {}) {
  if (static_cast<std::size_t>(pc1.size()) != traj.n_frames())
    fail(ErrorKind::LengthMismatch, "representation has " + std::to_string(pc1.size()) +
                                        " frames, trajectory has " + std::to_string(traj.n_frames()));
  std::set<int> residues;
  for (const AtomRecord& a : traj.atoms()) residues.insert(a.residue_seq);
  const std::vector<int> order(residues.begin(), residues.end());

  std::vector<std::optional<RankedCoordinate>> slots(order.size());
  const std::span<const double> x(pc1.data(), static_cast<std::size_t>(pc1.size()));
  parallel_for(cfg.threads, order.size(), [&](std::size_t i) {
    const auto ca = find_atom(traj.atoms(), order[i], "CA");
    if (!ca) return;
    RankedCoordinate rc;
    rc.residue_seq = order[i];
    rc.residue_name = traj.atoms()[*ca].residue_name;
    rc.result = correlation_ratio(x, theta_series(traj, order[i]), cfg.corr);
    rc.cr = rc.result.cr;
    slots[i] = std::move(rc);
  });

  Ranking out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (slots[i]) out.ranked.push_back(std::move(*slots[i]));
    else out.skipped.push_back(order[i]);
  }
  std::stable_sort(out.ranked.begin(), out.ranked.end(), [](const RankedCoordinate& a, const RankedCoordinate& b) {
    if (a.cr != b.cr) return a.cr > b.cr;
    return a.residue_seq < b.residue_seq;
  });
  for (std::size_t i = 0; i < out.ranked.size(); ++i) out.ranked[i].rank = static_cast<int>(i) + 1;
  return out;
}

inline Ranking rank_reaction_coordinates(const Trajectory& traj, const Representation& rep,
                                         const PipelineConfig& cfg = {}) {
  return rank_reaction_coordinates(traj, rep.pc1(), cfg);
}

struct CbTotalRatio {
  double percent = 0.0;
  double cr_cb = 0.0;
  double cr_all = 0.0;
  GridScanResult cb;
  GridScanResult all;
};

/// 100 * best C_r using CB atoms only / best C_r using every atom.
inline CbTotalRatio cb_total_ratio(const Trajectory& traj, const PropertySeries& property,
                                   const PipelineConfig& cfg = {}) {
  CbTotalRatio out;
  out.cb = grid_scan(traj, select_atoms(traj.atoms(), "name CB"), property, cfg);
  out.all = grid_scan(traj, select_atoms(traj.atoms(), "all"), property, cfg);
  out.cr_cb = out.cb.best_entry().result.cr;
  out.cr_all = out.all.best_entry().result.cr;
  out.percent = 100.0 * out.cr_cb / out.cr_all;
  return out;
}

enum class Axis { X = 0, Y = 1, Z = 2 };

inline Axis axis_from_string(std::string_view s) {
  if (s == "x") return Axis::X;
  if (s == "y") return Axis::Y;
  if (s == "z") return Axis::Z;
  fail(ErrorKind::InvalidArgument, "axis must be x, y or z");
}

struct BaselineResult {
  CorrRatioResult result;
  Representation representation;
};

/// PCA + C_r on one raw Cartesian component of the selected atoms (no kernel).
inline BaselineResult single_axis_baseline(const Trajectory& traj, const Selection& selection, Axis axis,
                                           const PropertySeries& property, const PipelineConfig& cfg = {}) {
  detail::require_property_length(traj, property);
  FeatureMatrix raw;
  raw.selection = selection;
  raw.values.resize(static_cast<Eigen::Index>(traj.n_frames()), static_cast<Eigen::Index>(selection.size()));
  const int c = static_cast<int>(axis);
  for (std::size_t f = 0; f < traj.n_frames(); ++f)
    for (std::size_t j = 0; j < selection.size(); ++j)
      raw.values(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(j)) = traj.at(f, selection.indices[j])[c];
  BaselineResult out;
  out.representation = pca2(raw, cfg.pca);
  const Eigen::VectorXd pc1 = out.representation.pc1();
  out.result = correlation_ratio(std::span<const double>(pc1.data(), static_cast<std::size_t>(pc1.size())),
                                 property, cfg.corr);
  return out;
}

// ---------------------------------------------------------------------------
// Pairwise network

/// Two-pass Pearson correlation; 0 when either series is constant.
inline double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) fail(ErrorKind::LengthMismatch, "pearson: series lengths differ");
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

enum class PropertyState { Low = 0, Mid = 1, High = 2 };

inline const char* to_string(PropertyState s) {
  switch (s) {
    case PropertyState::Low: return "low";
    case PropertyState::Mid: return "mid";
    case PropertyState::High: return "high";
  }
  return "?";
}

/// Linear-interpolated quantile (0 <= q <= 1) of unsorted values.
inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) fail(ErrorKind::InvalidArgument, "quantile of empty series");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

struct Tertiles {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<PropertyState> states;
};

inline Tertiles property_tertiles(const PropertySeries& property) {
  Tertiles t;
  t.lower = quantile(property.values, 1.0 / 3.0);
  t.upper = quantile(property.values, 2.0 / 3.0);
  t.states.reserve(property.size());
  for (double v : property.values)
    t.states.push_back(v <= t.lower ? PropertyState::Low : v <= t.upper ? PropertyState::Mid : PropertyState::High);
  return t;
}

struct StateCorrelation {
  std::size_t frames = 0;
  std::optional<double> pearson;  // empty with < 2 frames or a constant series
};

struct NetworkEdge {
  int residue_a = 0;
  int residue_b = 0;
  double pearson = 0.0;
  std::array<StateCorrelation, 3> state_breakdown;
};

struct Network {
  std::vector<RankedCoordinate> nodes;
  std::vector<NetworkEdge> edges;
  Tertiles tertiles;
};

inline Network pairwise_network(const Trajectory& traj, const std::vector<RankedCoordinate>& ranked, std::size_t k,
                                const PropertySeries& property) {
  if (k < 2) fail(ErrorKind::InvalidArgument, "network needs k >= 2");
  detail::require_property_length(traj, property);
  Network out;
  out.nodes.assign(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(std::min(k, ranked.size())));
  out.tertiles = property_tertiles(property);

  std::map<int, std::vector<double>> theta;
  for (const RankedCoordinate& n : out.nodes) theta[n.residue_seq] = theta_series(traj, n.residue_seq).values;

  for (auto ia = theta.begin(); ia != theta.end(); ++ia) {
    for (auto ib = std::next(ia); ib != theta.end(); ++ib) {
      NetworkEdge e;
      e.residue_a = ia->first;
      e.residue_b = ib->first;
      e.pearson = pearson(ia->second, ib->second);
      for (int s = 0; s < 3; ++s) {
        std::vector<double> a, b;
        for (std::size_t f = 0; f < traj.n_frames(); ++f) {
          if (static_cast<int>(out.tertiles.states[f]) != s) continue;
          a.push_back(ia->second[f]);
          b.push_back(ib->second[f]);
        }
        StateCorrelation& sc = e.state_breakdown[static_cast<std::size_t>(s)];
        sc.frames = a.size();
        if (a.size() < 2) continue;
        const auto constant = [](const std::vector<double>& v) {
          return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
        };
        if (!constant(a) && !constant(b)) sc.pearson = pearson(a, b);
      }
      out.edges.push_back(std::move(e));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Frame subsampling

/// Uniform sample of `n` frames without replacement, kept in original order.
inline std::pair<Trajectory, PropertySeries> subsample_frames(const Trajectory& traj, const PropertySeries& property,
                                                              std::size_t n, std::uint64_t seed) {
  detail::require_property_length(traj, property);
  const std::size_t total = traj.n_frames();
  if (n == 0 || n > total)
    fail(ErrorKind::InvalidArgument, "cannot sample " + std::to_string(n) + " of " + std::to_string(total) + " frames");
  std::vector<std::size_t> idx(total);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, total - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(n);
  std::sort(idx.begin(), idx.end());

  const std::size_t stride = traj.n_atoms() * 3;
  std::vector<double> xyz;
  xyz.reserve(n * stride);
  std::vector<int> ids;
  PropertySeries prop{property.name, property.units, {}};
  for (std::size_t f : idx) {
    const auto span = traj.frame_span(f);
    xyz.insert(xyz.end(), span.begin(), span.end());
    ids.push_back(traj.frame_ids()[f]);
    prop.values.push_back(property.values[f]);
  }
  return {Trajectory(traj.atoms(), std::move(xyz), std::move(ids)), std::move(prop)};
}

}  // namespace rxcoord

#endif  // RXCOORD_PIPELINE_HPP
