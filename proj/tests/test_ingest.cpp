#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "rxcoord/ingest.hpp"
#include "rxcoord/synth.hpp"

using namespace rxcoord;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string data_path(const char* name) { return std::string(RXCOORD_TEST_DATA) + "/" + name; }

std::string atom_line(int serial, const char* name, const char* res, int seq, double x, double y, double z) {
  char buf[100];
  std::snprintf(buf, sizeof buf, "ATOM  %5d  %-3s %3s A%4d    %8.3f%8.3f%8.3f  1.00  0.00", serial, name, res, seq,
                x, y, z);
  return buf;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no rxcoord::Error thrown";
  return ErrorKind::Io;
}

std::vector<AtomRecord> three_residues() {
  std::vector<AtomRecord> atoms;
  int serial = 1;
  for (int r = 1; r <= 3; ++r)
    for (const char* n : {"N", "CA", "C", "O", "CB"})
      atoms.push_back({serial++, n, "ALA", r, 'A', std::string(1, n[0]), false});
  return atoms;
}

TEST(ParsePdb, SingleAtomLine) {
  const Structure s = parse_pdb(atom_line(1, "CA", "GLY", 1, 1.0, 2.0, 3.0) + "\n");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.atoms[0].name, "CA");
  EXPECT_EQ(s.atoms[0].residue_name, "GLY");
  EXPECT_EQ(s.atoms[0].element, "C");
  EXPECT_EQ(s.coords[0], Vec3(1, 2, 3));
}

TEST(ParsePdb, NoAtomRecordsIsEmptyStructure) {
  EXPECT_EQ(kind_of([] { parse_pdb("REMARK nothing here\nEND\n"); }), ErrorKind::EmptyStructure);
  EXPECT_EQ(kind_of([] { parse_pdb(""); }), ErrorKind::EmptyStructure);
}

TEST(ParsePdb, GoldenFileRoundTripsBitIdentically) {
  const std::string text = read_file(data_path("three_atoms.pdb"));
  const Structure s = parse_pdb(text);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_TRUE(s.atoms[2].hetero);
  EXPECT_EQ(s.atoms[2].residue_seq, 101);
  EXPECT_EQ(s.atoms[2].chain, 'B');

  const auto atom_lines = [](const std::string& t) {
    std::vector<std::string> out;
    for (auto l : lines(t))
      if (l.starts_with("ATOM") || l.starts_with("HETATM")) out.emplace_back(l);
    return out;
  };
  EXPECT_EQ(atom_lines(write_pdb(s)), atom_lines(text));
}

TEST(ParsePdb, MalformedCoordinateReportsLine) {
  std::string bad = "REMARK x\n" + atom_line(1, "CA", "GLY", 1, 1, 2, 3) + "\n";
  bad.replace(bad.find("   1.000"), 8, "   1.0x0");
  try {
    parse_pdb(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MalformedRecord);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_EQ(kind_of([] { parse_pdb("ATOM      1  CA  GLY A   1       1.000"); }), ErrorKind::MalformedRecord);
  EXPECT_EQ(kind_of([] { parse_pdb("ATOM  abcde  CA  GLY A   1       1.000   2.000   3.000"); }),
            ErrorKind::MalformedRecord);
}

TEST(ParsePdb, ToleratesShortLinesAndDerivesElement) {
  const Structure s = parse_pdb("ATOM      7  CB  SER A  12      -1.500   0.250  10.000\r\n");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.atoms[0].serial, 7);
  EXPECT_EQ(s.atoms[0].element, "C");
  EXPECT_EQ(s.coords[0], Vec3(-1.5, 0.25, 10.0));
}

TEST(ParsePdb, FirstAltLocWins) {
  std::string a = atom_line(1, "CA", "SER", 5, 1, 1, 1);
  std::string b = atom_line(2, "CA", "SER", 5, 9, 9, 9);
  a[16] = 'A';
  b[16] = 'B';
  std::vector<std::string> warnings;
  const Structure s = parse_pdb(a + "\n" + b + "\n", &warnings);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.coords[0], Vec3(1, 1, 1));
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("alternate location"), std::string::npos);
}

TEST(ParsePdb, WriteParseIdentityToThreeDecimals) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-999.0, 999.0);
  for (int trial = 0; trial < 20; ++trial) {
    Structure s;
    s.atoms = three_residues();
    for (std::size_t i = 0; i < s.atoms.size(); ++i) s.coords.emplace_back(u(rng), u(rng), u(rng));
    const Structure back = parse_pdb(write_pdb(s));
    ASSERT_EQ(back.atoms, s.atoms);
    for (std::size_t i = 0; i < s.size(); ++i)
      for (int c = 0; c < 3; ++c) EXPECT_NEAR(back.coords[i][c], s.coords[i][c], 5e-4 + 1e-9);
  }
}

TEST(ParseTrajectory, MultiModelPdb) {
  std::string text;
  for (int m = 1; m <= 2; ++m) {
    text += "MODEL        " + std::to_string(m) + "\n";
    for (int a = 0; a < 3; ++a) text += atom_line(a + 1, "CA", "ALA", a + 1, a, m, 0) + "\n";
    text += "ENDMDL\n";
  }
  const Trajectory t = parse_trajectory(text, TrajectoryFormat::Pdb);
  EXPECT_EQ(t.n_frames(), 2u);
  EXPECT_EQ(t.n_atoms(), 3u);
  EXPECT_EQ(t.frame_ids(), (std::vector<int>{1, 2}));
  EXPECT_EQ(t.at(1, 2), Vec3(2, 2, 0));
}

TEST(ParseTrajectory, InconsistentModelSize) {
  std::string text = "MODEL        1\n";
  for (int a = 0; a < 3; ++a) text += atom_line(a + 1, "CA", "ALA", a + 1, a, 0, 0) + "\n";
  text += "ENDMDL\nMODEL        2\n";
  for (int a = 0; a < 2; ++a) text += atom_line(a + 1, "CA", "ALA", a + 1, a, 0, 0) + "\n";
  text += "ENDMDL\n";
  try {
    parse_trajectory(text, TrajectoryFormat::Pdb);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InconsistentFrame);
    EXPECT_NE(std::string(e.what()).find("frame 1"), std::string::npos);
  }
}

TEST(ParseTrajectory, XyzRoundTripOfSyntheticFrames) {
  const auto synth = synth_planted(5, 10, 4, {2}, 0.05);
  const Trajectory& t = synth.trajectory;
  const Trajectory back = parse_trajectory(write_xyz(t), TrajectoryFormat::Xyz);
  ASSERT_EQ(back.n_frames(), 10u);
  EXPECT_EQ(back.frame_ids(), t.frame_ids());
  EXPECT_EQ(back.data(), t.data());
  for (std::size_t a = 0; a < t.n_atoms(); ++a) {
    EXPECT_EQ(back.atoms()[a].name, t.atoms()[a].name);
    EXPECT_EQ(back.atoms()[a].residue_seq, t.atoms()[a].residue_seq);
    EXPECT_EQ(back.atoms()[a].residue_name, t.atoms()[a].residue_name);
  }
}

TEST(ParseTrajectory, PlainXyzAndCountMismatch) {
  const Trajectory t = parse_trajectory("2\nwater\nO 0 0 0\nH 1 0 0\n2\n\nO 0 0 1\nH 1 0 1\n", TrajectoryFormat::Xyz);
  EXPECT_EQ(t.n_frames(), 2u);
  EXPECT_EQ(t.atoms()[1].name, "H");
  EXPECT_EQ(kind_of([] { parse_trajectory("2\n\nO 0 0 0\nH 1 0 0\n1\n\nO 0 0 1\n", TrajectoryFormat::Xyz); }),
            ErrorKind::InconsistentFrame);
  EXPECT_EQ(kind_of([] { parse_trajectory("2\n\nO 0 0 0\n", TrajectoryFormat::Xyz); }),
            ErrorKind::InconsistentFrame);
}

TEST(ParseTrajectory, CsvWithTopology) {
  const auto synth = synth_planted(9, 6, 3, {1}, 0.0);
  const Trajectory& t = synth.trajectory;
  const std::string csv = write_trajectory_csv(t);
  EXPECT_TRUE(csv.starts_with("frame,atom_index,x,y,z\n"));
  const Trajectory anon = parse_trajectory(csv, TrajectoryFormat::Csv);
  EXPECT_EQ(anon.data(), t.data());
  EXPECT_EQ(anon.atoms()[0].name, "X");
  const Trajectory named = parse_trajectory(csv, TrajectoryFormat::Csv, &t.atoms());
  EXPECT_EQ(named.atoms(), t.atoms());

  EXPECT_EQ(kind_of([] { parse_trajectory("frame,atom_index,x,y,z\n0,0,1,2,3\n0,1,1,2,3\n1,0,0,0,0\n",
                                          TrajectoryFormat::Csv); }),
            ErrorKind::InconsistentFrame);
  EXPECT_EQ(kind_of([] { parse_trajectory("f,a,x,y,z\n", TrajectoryFormat::Csv); }), ErrorKind::MalformedRecord);
}

TEST(ParseProperty, MetadataAndOrder) {
  std::vector<int> frames;
  const PropertySeries p =
      parse_property_csv("# name: rmsd\n# units: angstrom\nframe,value\n2,0.5\n0,1.5\n1,2.5\n", &frames);
  EXPECT_EQ(frames, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(p.name, "rmsd");
  EXPECT_EQ(p.units, "angstrom");
  EXPECT_EQ(p.values, (std::vector<double>{1.5, 2.5, 0.5}));
}

TEST(ParseProperty, Errors) {
  try {
    parse_property_csv("frame,value\n0,1.0\n1,abc\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonNumericValue);
    EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos);
  }
  EXPECT_EQ(kind_of([] { parse_property_csv("frame,value\n0,1\n0,2\n"); }), ErrorKind::DuplicateFrame);
  EXPECT_EQ(kind_of([] { parse_property_csv("0,1\n"); }), ErrorKind::MalformedRecord);
}

TEST(SelectAtoms, Grammar) {
  const auto atoms = three_residues();
  EXPECT_EQ(select_atoms(atoms, "name CA").indices, (std::vector<std::size_t>{1, 6, 11}));
  EXPECT_EQ(select_atoms(atoms, "resid 2 to 9").size(), 10u);
  EXPECT_EQ(select_atoms(atoms, "resid 2").size(), 5u);
  EXPECT_EQ(select_atoms(atoms, "backbone").size(), 12u);
  EXPECT_EQ(select_atoms(atoms, "all").size(), 15u);
  EXPECT_EQ(select_atoms(atoms, "name CA,CB and resid 3 to 3").indices, (std::vector<std::size_t>{11, 14}));
  EXPECT_EQ(select_atoms(atoms, "backbone and name CA").size(), 3u);
  EXPECT_EQ(select_atoms(atoms, "name CA").expr, "name CA");
}

TEST(SelectAtoms, Errors) {
  const auto atoms = three_residues();
  EXPECT_EQ(kind_of([&] { select_atoms(atoms, "name XX"); }), ErrorKind::EmptySelection);
  EXPECT_EQ(kind_of([&] { select_atoms(atoms, "resid 9 to 12"); }), ErrorKind::EmptySelection);
  for (const char* bad : {"", "nme CA", "name", "resid", "resid a to 3", "resid 3 to", "resid 4 to 2", "all or all",
                          "all and"})
    EXPECT_EQ(kind_of([&] { select_atoms(atoms, bad); }), ErrorKind::ParseError) << bad;
}

TEST(SelectAtoms, PermutationInvariant) {
  const auto atoms = three_residues();
  std::vector<std::size_t> perm(atoms.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(1);
  for (const char* expr : {"name CA", "backbone", "resid 2 to 3 and name C,O", "all"}) {
    for (int trial = 0; trial < 5; ++trial) {
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<AtomRecord> shuffled(atoms.size());
      for (std::size_t i = 0; i < perm.size(); ++i) shuffled[i] = atoms[perm[i]];
      std::vector<std::size_t> mapped;
      for (std::size_t i : select_atoms(shuffled, expr).indices) mapped.push_back(perm[i]);
      std::sort(mapped.begin(), mapped.end());
      EXPECT_EQ(mapped, select_atoms(atoms, expr).indices) << expr;
    }
  }
}

TEST(AtomOrder, MismatchIsReportedNotFixed) {
  auto a = three_residues();
  auto b = a;
  std::swap(b[0], b[1]);
  EXPECT_NO_THROW(require_same_atom_order(a, a));
  EXPECT_EQ(kind_of([&] { require_same_atom_order(a, b); }), ErrorKind::AtomOrderMismatch);
}

TEST(TrajectoryType, FrameIdsMustIncrease) {
  EXPECT_EQ(kind_of([] { Trajectory(three_residues(), std::vector<double>(90, 0.0), {1, 1}); }),
            ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { Trajectory(three_residues(), std::vector<double>(89, 0.0), {1, 2}); }),
            ErrorKind::InconsistentFrame);
}

TEST(PropertyWriter, RoundTrip) {
  const PropertySeries p{"dist", "angstrom", {8.4, 14.1, 0.1 + 0.2}};
  const PropertySeries back = parse_property_csv(write_property_csv(p));
  EXPECT_EQ(back.name, p.name);
  EXPECT_EQ(back.units, p.units);
  EXPECT_EQ(back.values, p.values);
}

}  // namespace
