#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rxcoord/pipeline.hpp"
#include "rxcoord/synth.hpp"

using namespace rxcoord;

namespace {

// Signal residues breathe radially, which hurts raw Cartesian features but
// leaves the direction-only kernel untouched.
SynthResult z_signal(std::uint64_t seed) {
  SynthOptions o;
  o.radial_sigma = 2.0;
  return synth_planted(seed, 1000, 12, {3, 7}, 0.05, o);
}

// Copies `src` but keeps the coordinates of atoms named `name` from `with`.
Trajectory splice(const Trajectory& src, const Trajectory& with, const std::string& name) {
  std::vector<double> xyz = src.data();
  for (std::size_t f = 0; f < src.n_frames(); ++f)
    for (std::size_t a = 0; a < src.n_atoms(); ++a)
      if (src.atoms()[a].name == name)
        for (int c = 0; c < 3; ++c) xyz[(f * src.n_atoms() + a) * 3 + c] = with.at(f, a)[c];
  return Trajectory(src.atoms(), std::move(xyz), src.frame_ids());
}

TEST(GridScan, FifteenEntriesAndBestIsMax) {
  const auto s = synth_planted(1, 400, 8, {2}, 0.05);
  const auto sel = select_atoms(s.trajectory.atoms(), "name CA");
  const auto g = grid_scan(s.trajectory, sel, s.property);
  ASSERT_EQ(g.entries.size(), 15u);
  double best = -1;
  for (const auto& e : g.entries)
    if (!e.result.degenerate) best = std::max(best, e.result.cr);
  EXPECT_EQ(g.best_entry().result.cr, best);
  EXPECT_EQ(g.representation.lambda, g.best_entry().lambda);
  EXPECT_EQ(g.representation.scores.rows(), 400);
  for (std::size_t i = 0; i < g.entries.size(); ++i) EXPECT_EQ(g.entries[i].lambda, lambda_grid(0.25)[i]);
}

TEST(GridScan, ThreadCountDoesNotChangeResults) {
  const auto s = synth_planted(2, 300, 10, {5}, 0.1);
  const auto sel = select_atoms(s.trajectory.atoms(), "name CB");
  PipelineConfig one, four;
  four.threads = 4;
  const auto a = grid_scan(s.trajectory, sel, s.property, one);
  const auto b = grid_scan(s.trajectory, sel, s.property, four);
  ASSERT_EQ(a.entries.size(), b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    EXPECT_EQ(a.entries[i].result.cr, b.entries[i].result.cr);
    EXPECT_EQ(a.entries[i].eigenvalues, b.entries[i].eigenvalues);
  }
  EXPECT_EQ(a.best, b.best);
}

TEST(GridScan, ZDirectionSignalPrefersSineTerm) {
  const auto s = z_signal(100);
  const auto g = grid_scan(s.trajectory, select_atoms(s.trajectory.atoms(), "name CA"), s.property);
  EXPECT_GT(g.best_entry().lambda.l3, 0.0);
}

TEST(GridScan, KernelBeatsSingleAxisBaselineOnZSignal) {
  const auto s = z_signal(101);
  const auto sel = select_atoms(s.trajectory.atoms(), "name CA");
  const double kernel = grid_scan(s.trajectory, sel, s.property).best_entry().result.cr;
  for (auto axis : {Axis::X, Axis::Y, Axis::Z})
    EXPECT_GE(kernel, single_axis_baseline(s.trajectory, sel, axis, s.property).result.cr);
}

TEST(GridScan, RejectsTooFewFramesAndMismatchedProperty) {
  const auto s = synth_planted(3, 15, 4, {1}, 0.1);
  const auto sel = select_atoms(s.trajectory.atoms(), "all");
  EXPECT_THROW(grid_scan(s.trajectory, sel, s.property), Error);
  const auto big = synth_planted(3, 60, 4, {1}, 0.1);
  try {
    grid_scan(big.trajectory, sel, s.property);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::LengthMismatch);
  }
}

TEST(GridScan, AllDegenerateWhenPropertyIsConstant) {
  auto s = synth_planted(4, 100, 5, {2}, 0.0);
  std::fill(s.property.values.begin(), s.property.values.end(), 1.0);
  try {
    grid_scan(s.trajectory, select_atoms(s.trajectory.atoms(), "all"), s.property);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AllDegenerate);
  }
}

TEST(Ranking, PlantedResidueComesFirst) {
  const auto s = synth_planted(5, 1000, 15, {4}, 0.05);
  const auto g = grid_scan(s.trajectory, select_atoms(s.trajectory.atoms(), "all"), s.property);
  const auto r = rank_reaction_coordinates(s.trajectory, g.representation);
  ASSERT_EQ(r.ranked.size(), 15u);
  EXPECT_EQ(r.ranked[0].residue_seq, 4);
  EXPECT_GT(r.ranked[0].cr, 10 * r.ranked[1].cr);
  EXPECT_EQ(r.top(10).size(), 10u);
  EXPECT_EQ(r.top(99).size(), 15u);
  EXPECT_TRUE(r.skipped.empty());
}

TEST(Ranking, IsAPermutationSortedByCr) {
  const auto s = synth_planted(6, 200, 9, {}, 0.5);
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  Eigen::VectorXd pc1(200);
  for (auto& v : pc1) v = g(rng);
  const auto r = rank_reaction_coordinates(s.trajectory, pc1);
  std::set<int> seen;
  for (std::size_t i = 0; i < r.ranked.size(); ++i) {
    seen.insert(r.ranked[i].residue_seq);
    EXPECT_EQ(r.ranked[i].rank, static_cast<int>(i) + 1);
    if (i) EXPECT_GE(r.ranked[i - 1].cr, r.ranked[i].cr);
    EXPECT_EQ(r.ranked[i].cr, correlation_ratio(std::span<const double>(pc1.data(), 200), theta_series(s.trajectory, r.ranked[i].residue_seq)).cr);
  }
  EXPECT_EQ(seen, (std::set<int>{1, 2, 3, 4, 5, 6, 7, 8, 9}));
  EXPECT_THROW(rank_reaction_coordinates(s.trajectory, Eigen::VectorXd(Eigen::VectorXd::Zero(5))), Error);
}

TEST(Ranking, SkipsResiduesWithoutCA) {
  const auto s = synth_planted(7, 60, 3, {}, 0.1);
  auto atoms = s.trajectory.atoms();
  for (auto& a : atoms)
    if (a.residue_seq == 2 && a.name == "CA") a.name = "CG";
  const Trajectory t(atoms, s.trajectory.data(), s.trajectory.frame_ids());
  const auto r = rank_reaction_coordinates(t, Eigen::VectorXd(Eigen::VectorXd::LinSpaced(60, 0, 1)));
  EXPECT_EQ(r.ranked.size(), 2u);
  EXPECT_EQ(r.skipped, std::vector<int>{2});
}

TEST(Ranking, StableUnderAtomPermutation) {
  const auto s = synth_planted(8, 500, 10, {6}, 0.05);
  const Trajectory& t = s.trajectory;
  std::vector<std::size_t> perm(t.n_atoms());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(8));
  std::vector<AtomRecord> atoms;
  std::vector<double> xyz;
  for (std::size_t f = 0; f < t.n_frames(); ++f)
    for (std::size_t a : perm) {
      const Vec3 p = t.at(f, a);
      xyz.insert(xyz.end(), {p.x(), p.y(), p.z()});
    }
  for (std::size_t a : perm) atoms.push_back(t.atoms()[a]);
  const Trajectory shuffled(atoms, xyz, t.frame_ids());

  const auto ga = grid_scan(t, select_atoms(t.atoms(), "all"), s.property);
  const auto gb = grid_scan(shuffled, select_atoms(atoms, "all"), s.property);
  EXPECT_EQ(ga.best_entry().lambda, gb.best_entry().lambda);
  EXPECT_NEAR(ga.best_entry().result.cr, gb.best_entry().result.cr, 1e-9 * ga.best_entry().result.cr);
  const auto ra = rank_reaction_coordinates(t, ga.representation);
  const auto rb = rank_reaction_coordinates(shuffled, gb.representation);
  for (std::size_t i = 0; i < ra.ranked.size(); ++i) {
    EXPECT_EQ(ra.ranked[i].residue_seq, rb.ranked[i].residue_seq);
    EXPECT_NEAR(ra.ranked[i].cr, rb.ranked[i].cr, 1e-9 * std::max(1.0, ra.ranked[i].cr));
  }
}

TEST(CbTotal, AboveHundredWhenOnlyCbCarriesSignal) {
  // Backbone atoms follow a decoy latent unrelated to the property.
  const auto signal = synth_planted(9, 600, 10, {3, 8}, 0.05);
  SynthOptions loud;
  loud.polar_amplitude = 1.2;
  const auto decoy = synth_planted(77, 600, 10, {1, 2, 5, 6, 9}, 0.05, loud);
  const Trajectory t = splice(decoy.trajectory, signal.trajectory, "CB");
  const auto r = cb_total_ratio(t, signal.property);
  EXPECT_GT(r.percent, 100.0);
  EXPECT_DOUBLE_EQ(r.percent, 100.0 * r.cb.best_entry().result.cr / r.all.best_entry().result.cr);
  EXPECT_EQ(r.cr_all, grid_scan(t, select_atoms(t.atoms(), "all"), signal.property).best_entry().result.cr);
}

TEST(CbTotal, ExactlyHundredWhenEveryAtomIsCb) {
  const auto s = synth_planted(10, 200, 4, {2}, 0.1);
  auto atoms = s.trajectory.atoms();
  for (auto& a : atoms) a.name = "CB";
  const Trajectory t(atoms, s.trajectory.data(), s.trajectory.frame_ids());
  EXPECT_EQ(cb_total_ratio(t, s.property).percent, 100.0);
}

TEST(Baseline, AxisFollowsTheMotion) {
  // Two atoms drift along z with the property; x and y carry only noise.
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  std::vector<AtomRecord> atoms(3);
  for (int i = 0; i < 3; ++i) atoms[i] = {i + 1, "CA", "ALA", i + 1, 'A', "C", false};
  std::vector<double> xyz;
  PropertySeries p{"p", "", {}};
  std::vector<int> ids;
  for (int f = 0; f < 300; ++f) {
    const double t = f / 300.0;
    p.values.push_back(t + 0.02 * g(rng));
    ids.push_back(f);
    for (int a = 0; a < 3; ++a) {
      const double x = 5 + a + 0.3 * g(rng), y = 2 * a + 0.3 * g(rng);
      const double z = (a < 2 ? 3 * t : 0.0) + 0.05 * g(rng);
      xyz.insert(xyz.end(), {x, y, z});
    }
  }
  const Trajectory tr(atoms, xyz, ids);
  const auto sel = select_all(3);
  const double cz = single_axis_baseline(tr, sel, Axis::Z, p).result.cr;
  EXPECT_GT(cz, 5 * single_axis_baseline(tr, sel, Axis::X, p).result.cr);
  EXPECT_GT(cz, 5 * single_axis_baseline(tr, sel, Axis::Y, p).result.cr);
  EXPECT_EQ(axis_from_string("y"), Axis::Y);
  EXPECT_THROW(axis_from_string("w"), Error);
}

TEST(Pearson, KnownValuesAndOracle) {
  const std::vector<double> a{1, 2, 3, 4, 5}, up{2, 4, 6, 8, 10}, down{5, 4, 3, 2, 1}, flat(5, 3.0);
  EXPECT_NEAR(pearson(a, up), 1.0, 1e-15);
  EXPECT_NEAR(pearson(a, down), -1.0, 1e-15);
  EXPECT_EQ(pearson(a, flat), 0.0);
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(100), y(100);
    for (int i = 0; i < 100; ++i) {
      x[i] = 1e3 + g(rng);
      y[i] = 0.5 * x[i] + g(rng);
    }
    EXPECT_NEAR(pearson(x, y), oracle::pearson(x, y), 1e-12);
  }
}

TEST(Tertiles, SplitIntoThirds) {
  PropertySeries p{"p", "", {}};
  for (int i = 0; i < 30; ++i) p.values.push_back(i);
  const auto t = property_tertiles(p);
  EXPECT_NEAR(t.lower, 29.0 / 3, 1e-12);
  EXPECT_NEAR(t.upper, 58.0 / 3, 1e-12);
  std::array<int, 3> counts{};
  for (auto s : t.states) ++counts[static_cast<std::size_t>(s)];
  EXPECT_EQ(counts, (std::array<int, 3>{10, 10, 10}));
  EXPECT_STREQ(to_string(PropertyState::Mid), "mid");
}

TEST(Network, PlantedPairIsStrongestEdge) {
  const auto s = synth_planted(13, 900, 8, {2, 6}, 0.05);
  const auto g = grid_scan(s.trajectory, select_atoms(s.trajectory.atoms(), "all"), s.property);
  const auto r = rank_reaction_coordinates(s.trajectory, g.representation);
  const auto net = pairwise_network(s.trajectory, r.ranked, 5, s.property);
  ASSERT_EQ(net.nodes.size(), 5u);
  ASSERT_EQ(net.edges.size(), 10u);
  const auto strongest = std::max_element(net.edges.begin(), net.edges.end(), [](const auto& a, const auto& b) {
    return std::abs(a.pearson) < std::abs(b.pearson);
  });
  EXPECT_EQ(std::pair(strongest->residue_a, strongest->residue_b), std::pair(2, 6));

  for (const auto& e : net.edges) {
    EXPECT_LT(e.residue_a, e.residue_b);
    const auto ta = theta_series(s.trajectory, e.residue_a).values;
    const auto tb = theta_series(s.trajectory, e.residue_b).values;
    EXPECT_NEAR(e.pearson, oracle::pearson(ta, tb), 1e-12);
    std::size_t frames = 0;
    for (int st = 0; st < 3; ++st) {
      std::vector<double> a, b;
      for (std::size_t f = 0; f < ta.size(); ++f)
        if (static_cast<int>(net.tertiles.states[f]) == st) a.push_back(ta[f]), b.push_back(tb[f]);
      const auto& sc = e.state_breakdown[static_cast<std::size_t>(st)];
      EXPECT_EQ(sc.frames, a.size());
      ASSERT_TRUE(sc.pearson.has_value());
      EXPECT_NEAR(*sc.pearson, oracle::pearson(a, b), 1e-12);
      frames += sc.frames;
    }
    EXPECT_EQ(frames, 900u);
  }
  EXPECT_THROW(pairwise_network(s.trajectory, r.ranked, 1, s.property), Error);
}

TEST(Subsample, ReproducibleAndOrdered) {
  const auto s = synth_planted(14, 100, 3, {1}, 0.1);
  const auto [t1, p1] = subsample_frames(s.trajectory, s.property, 30, 99);
  const auto [t2, p2] = subsample_frames(s.trajectory, s.property, 30, 99);
  EXPECT_EQ(t1.frame_ids(), t2.frame_ids());
  EXPECT_EQ(t1.data(), t2.data());
  EXPECT_EQ(p1.values, p2.values);
  EXPECT_TRUE(std::is_sorted(t1.frame_ids().begin(), t1.frame_ids().end()));
  for (std::size_t i = 0; i < 30; ++i) {
    const auto f = static_cast<std::size_t>(t1.frame_ids()[i]);
    EXPECT_EQ(p1.values[i], s.property.values[f]);
    EXPECT_EQ(t1.at(i, 4), s.trajectory.at(f, 4));
  }
  const auto [all, pall] = subsample_frames(s.trajectory, s.property, 100, 1);
  EXPECT_EQ(all.data(), s.trajectory.data());
  EXPECT_THROW(subsample_frames(s.trajectory, s.property, 101, 1), Error);
  EXPECT_THROW(subsample_frames(s.trajectory, s.property, 0, 1), Error);
}

TEST(Recovery, PlantedResidueAcrossSeeds) {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = synth_planted(seed, 1000, 20, {4, 11}, 0.05);
    const auto g = grid_scan(s.trajectory, select_atoms(s.trajectory.atoms(), "all"), s.property);
    const int top = rank_reaction_coordinates(s.trajectory, g.representation).ranked[0].residue_seq;
    hits += top == 4 || top == 11;
  }
  EXPECT_EQ(hits, 5);
}

}  // namespace
