#ifndef RXCOORD_INGEST_HPP
#define RXCOORD_INGEST_HPP

// Readers and writers for structures, trajectories and property series, plus
// the atom-selection mini-language.
//
// PDB handling follows the fixed-column ATOM/HETATM layout:
//   7-11 serial, 13-16 name, 17 altLoc, 18-20 resName, 22 chain,
//   23-26 resSeq, 31-38 x, 39-46 y, 47-54 z, 77-78 element.
// Records other than ATOM/HETATM/MODEL/ENDMDL/TER/END are ignored.

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "rxcoord/error.hpp"
#include "rxcoord/text.hpp"
#include "rxcoord/types.hpp"

namespace rxcoord {

enum class TrajectoryFormat { Pdb, Xyz, Csv };

inline TrajectoryFormat trajectory_format_from_string(std::string_view s) {
  if (s == "pdb" || s == "multi-model-pdb") return TrajectoryFormat::Pdb;
  if (s == "xyz") return TrajectoryFormat::Xyz;
  if (s == "csv") return TrajectoryFormat::Csv;
  fail(ErrorKind::InvalidArgument, "unknown trajectory format '" + std::string(s) + "'");
}

namespace detail {

inline std::string_view column(std::string_view line, std::size_t first, std::size_t last) {
  // 1-based inclusive columns; short lines yield a truncated or empty field.
  if (line.size() < first) return {};
  return line.substr(first - 1, std::min(last, line.size()) - first + 1);
}

inline std::string record_name(std::string_view line) {
  std::string rec(trim(column(line, 1, 6)));
  for (auto& c : rec) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return rec;
}

[[noreturn]] inline void malformed(std::size_t line_no, const std::string& what) {
  fail(ErrorKind::MalformedRecord, "line " + std::to_string(line_no) + ": " + what);
}

inline std::string element_from_name(std::string_view name) {
  for (char c : name)
    if (std::isalpha(static_cast<unsigned char>(c))) return std::string(1, c);
  return {};
}

struct PdbAtomLine {
  AtomRecord atom;
  Vec3 pos;
  char alt_loc = ' ';
};

inline PdbAtomLine parse_atom_line(std::string_view line, std::size_t line_no) {
  PdbAtomLine out;
  AtomRecord& a = out.atom;
  a.hetero = record_name(line) == "HETATM";

  const auto serial = to_int(column(line, 7, 11));
  if (!serial) malformed(line_no, "bad atom serial '" + std::string(column(line, 7, 11)) + "'");
  if (*serial < 1) malformed(line_no, "atom serial must be >= 1");
  a.serial = static_cast<int>(*serial);

  a.name = std::string(trim(column(line, 13, 16)));
  if (a.name.empty()) malformed(line_no, "empty atom name");
  const std::string_view alt = column(line, 17, 17);
  out.alt_loc = alt.empty() ? ' ' : alt.front();
  a.residue_name = std::string(trim(column(line, 18, 20)));
  const std::string_view chain = column(line, 22, 22);
  a.chain = chain.empty() ? ' ' : chain.front();

  const auto resseq = to_int(column(line, 23, 26));
  if (!resseq) malformed(line_no, "bad residue number '" + std::string(column(line, 23, 26)) + "'");
  a.residue_seq = static_cast<int>(*resseq);

  const auto x = to_double(column(line, 31, 38));
  const auto y = to_double(column(line, 39, 46));
  const auto z = to_double(column(line, 47, 54));
  if (!x || !y || !z) malformed(line_no, "bad coordinate field");
  out.pos = Vec3(*x, *y, *z);
  if (!out.pos.allFinite()) malformed(line_no, "non-finite coordinate");

  a.element = std::string(trim(column(line, 77, 78)));
  if (a.element.empty()) a.element = element_from_name(a.name);
  return out;
}

struct PdbModel {
  int model_id = 0;
  std::vector<AtomRecord> atoms;
  Coords coords;
};

/// Splits PDB text into models. Text without MODEL records is one model.
inline std::vector<PdbModel> parse_pdb_models(std::string_view text,
                                              std::vector<std::string>* warnings) {
  std::vector<PdbModel> models;
  PdbModel current;
  bool in_model = false;
  bool any_atoms = false;
  std::set<std::tuple<char, int, std::string, std::string>> seen;

  const auto flush = [&]() {
    if (!current.atoms.empty()) models.push_back(std::move(current));
    current = PdbModel{};
    seen.clear();
  };

  const auto all_lines = lines(text);
  for (std::size_t i = 0; i < all_lines.size(); ++i) {
    const std::string_view line = all_lines[i];
    const std::size_t line_no = i + 1;
    const std::string rec = record_name(line);
    if (rec == "MODEL") {
      flush();
      in_model = true;
      const auto id = to_int(line.substr(std::min<std::size_t>(5, line.size())));
      current.model_id = id ? static_cast<int>(*id) : static_cast<int>(models.size()) + 1;
    } else if (rec == "ENDMDL") {
      if (!in_model) malformed(line_no, "ENDMDL without MODEL");
      const int id = current.model_id;
      if (current.atoms.empty()) malformed(line_no, "empty MODEL " + std::to_string(id));
      flush();
      in_model = false;
    } else if (rec == "ATOM" || rec == "HETATM") {
      PdbAtomLine parsed = parse_atom_line(line, line_no);
      any_atoms = true;
      if (parsed.alt_loc != ' ') {
        auto key = std::make_tuple(parsed.atom.chain, parsed.atom.residue_seq,
                                   parsed.atom.residue_name, parsed.atom.name);
        if (!seen.insert(key).second) {
          if (warnings)
            warnings->push_back("line " + std::to_string(line_no) + ": dropped alternate location '" +
                                std::string(1, parsed.alt_loc) + "' of " + parsed.atom.name + " " +
                                std::to_string(parsed.atom.residue_seq));
          continue;
        }
      }
      current.atoms.push_back(std::move(parsed.atom));
      current.coords.push_back(parsed.pos);
    }
    // TER, END and all other records are ignored.
  }
  flush();
  if (!any_atoms) fail(ErrorKind::EmptyStructure, "no ATOM/HETATM records");
  return models;
}

inline bool same_identity(const std::vector<AtomRecord>& a, const std::vector<AtomRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].name != b[i].name || a[i].residue_seq != b[i].residue_seq) return false;
  return true;
}

}  // namespace detail

/// Parses the first model of a PDB file. Alternate locations after the first
/// are dropped and reported through `warnings` when given.
inline Structure parse_pdb(std::string_view text, std::vector<std::string>* warnings = nullptr) {
  auto models = detail::parse_pdb_models(text, warnings);
  return Structure{std::move(models.front().atoms), std::move(models.front().coords)};
}

/// Throws AtomOrderMismatch unless both tables list the same (name, residue_seq)
/// sequence. Atoms are never reordered automatically.
inline void require_same_atom_order(const std::vector<AtomRecord>& expected,
                                    const std::vector<AtomRecord>& actual) {
  if (expected.size() != actual.size())
    fail(ErrorKind::AtomOrderMismatch, "atom count differs: " + std::to_string(expected.size()) +
                                           " vs " + std::to_string(actual.size()));
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (expected[i].name != actual[i].name || expected[i].residue_seq != actual[i].residue_seq)
      fail(ErrorKind::AtomOrderMismatch,
           "atom " + std::to_string(i) + ": expected " + expected[i].name + " " +
               std::to_string(expected[i].residue_seq) + ", found " + actual[i].name + " " +
               std::to_string(actual[i].residue_seq));
  }
}

namespace detail {

inline Trajectory parse_pdb_trajectory(std::string_view text) {
  auto models = parse_pdb_models(text, nullptr);
  const std::size_t n_atoms = models.front().atoms.size();
  std::vector<double> xyz;
  xyz.reserve(models.size() * n_atoms * 3);
  std::vector<int> ids;
  for (std::size_t k = 0; k < models.size(); ++k) {
    const PdbModel& m = models[k];
    if (m.atoms.size() != n_atoms)
      fail(ErrorKind::InconsistentFrame, "frame " + std::to_string(k) + " has " +
                                             std::to_string(m.atoms.size()) + " atoms, expected " +
                                             std::to_string(n_atoms));
    if (!same_identity(models.front().atoms, m.atoms))
      fail(ErrorKind::InconsistentFrame, "frame " + std::to_string(k) + " atom order differs from frame 0");
    for (const Vec3& p : m.coords) xyz.insert(xyz.end(), {p.x(), p.y(), p.z()});
    int id = m.model_id != 0 ? m.model_id : static_cast<int>(k);
    if (!ids.empty() && id <= ids.back()) id = ids.back() + 1;
    ids.push_back(id);
  }
  return Trajectory(std::move(models.front().atoms), std::move(xyz), std::move(ids));
}

inline Trajectory parse_xyz_trajectory(std::string_view text) {
  const auto ls = lines(text);
  std::size_t i = 0;
  std::vector<AtomRecord> atoms;
  std::vector<double> xyz;
  std::vector<int> ids;
  std::size_t frame = 0;
  while (i < ls.size()) {
    if (trim(ls[i]).empty()) {
      ++i;
      continue;
    }
    const auto count = to_int(ls[i]);
    if (!count || *count <= 0) malformed(i + 1, "expected atom count");
    const auto n = static_cast<std::size_t>(*count);
    if (frame > 0 && n != atoms.size())
      fail(ErrorKind::InconsistentFrame, "frame " + std::to_string(frame) + " has " + std::to_string(n) +
                                             " atoms, expected " + std::to_string(atoms.size()));
    if (i + 1 >= ls.size()) malformed(i + 1, "truncated frame");

    int id = static_cast<int>(frame);
    const std::string_view comment = ls[i + 1];
    if (auto pos = comment.find("frame="); pos != std::string_view::npos) {
      auto tok = comment.substr(pos + 6);
      tok = tok.substr(0, tok.find_first_of(" \t"));
      if (auto v = to_int(tok)) id = static_cast<int>(*v);
    }
    if (!ids.empty() && id <= ids.back()) malformed(i + 2, "frame ids must increase");
    ids.push_back(id);

    for (std::size_t a = 0; a < n; ++a) {
      const std::size_t ln = i + 2 + a;
      if (ln >= ls.size())
        fail(ErrorKind::InconsistentFrame, "frame " + std::to_string(frame) + " is truncated");
      const auto tok = split_ws(ls[ln]);
      if (tok.size() < 4) malformed(ln + 1, "expected 'name x y z'");
      const auto x = to_double(tok[1]), y = to_double(tok[2]), z = to_double(tok[3]);
      if (!x || !y || !z) malformed(ln + 1, "bad coordinate");
      xyz.insert(xyz.end(), {*x, *y, *z});
      AtomRecord rec;
      rec.serial = static_cast<int>(a) + 1;
      rec.name = std::string(tok[0]);
      rec.element = element_from_name(rec.name);
      rec.residue_seq = 1;
      if (tok.size() >= 6) {
        rec.residue_name = std::string(tok[4]);
        const auto rs = to_int(tok[5]);
        if (!rs) malformed(ln + 1, "bad residue number");
        rec.residue_seq = static_cast<int>(*rs);
      }
      if (tok.size() >= 7) rec.chain = tok[6].front();
      if (frame == 0) {
        atoms.push_back(std::move(rec));
      } else if (atoms[a].name != rec.name || atoms[a].residue_seq != rec.residue_seq) {
        fail(ErrorKind::InconsistentFrame, "frame " + std::to_string(frame) + " atom order differs from frame 0");
      }
    }
    i += 2 + n;
    ++frame;
  }
  if (frame == 0) fail(ErrorKind::EmptyStructure, "no frames in XYZ text");
  return Trajectory(std::move(atoms), std::move(xyz), std::move(ids));
}

inline Trajectory parse_csv_trajectory(std::string_view text) {
  const auto ls = lines(text);
  std::size_t i = 0;
  while (i < ls.size() && (trim(ls[i]).empty() || trim(ls[i]).front() == '#')) ++i;
  if (i == ls.size()) fail(ErrorKind::EmptyStructure, "empty CSV trajectory");
  {
    std::string header;
    for (char c : ls[i])
      if (c != ' ') header += c;
    if (header != "frame,atom_index,x,y,z")
      malformed(i + 1, "expected header 'frame,atom_index,x,y,z'");
  }
  ++i;

  // frame id -> (atom index -> xyz), preserving first-seen frame order
  std::vector<int> ids;
  std::vector<std::map<long long, Vec3>> frames;
  for (; i < ls.size(); ++i) {
    if (trim(ls[i]).empty()) continue;
    const auto f = split(ls[i], ',');
    if (f.size() != 5) malformed(i + 1, "expected 5 columns");
    const auto fid = to_int(f[0]);
    const auto aid = to_int(f[1]);
    const auto x = to_double(f[2]), y = to_double(f[3]), z = to_double(f[4]);
    if (!fid || !aid || *aid < 0 || !x || !y || !z) malformed(i + 1, "bad numeric field");
    if (ids.empty() || ids.back() != *fid) {
      if (!ids.empty() && *fid < ids.back()) malformed(i + 1, "frame ids must be non-decreasing");
      ids.push_back(static_cast<int>(*fid));
      frames.emplace_back();
    }
    if (!frames.back().emplace(*aid, Vec3(*x, *y, *z)).second)
      malformed(i + 1, "duplicate atom_index " + std::to_string(*aid));
  }
  if (frames.empty()) fail(ErrorKind::EmptyStructure, "CSV trajectory has no rows");

  const std::size_t n_atoms = frames.front().size();
  std::vector<double> xyz;
  xyz.reserve(frames.size() * n_atoms * 3);
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const auto& fr = frames[k];
    if (fr.size() != n_atoms)
      fail(ErrorKind::InconsistentFrame, "frame " + std::to_string(k) + " has " + std::to_string(fr.size()) +
                                             " atoms, expected " + std::to_string(n_atoms));
    long long expect = 0;
    for (const auto& [idx, p] : fr) {
      if (idx != expect++)
        fail(ErrorKind::InconsistentFrame, "frame " + std::to_string(k) + " atom indices are not 0..A-1");
      xyz.insert(xyz.end(), {p.x(), p.y(), p.z()});
    }
  }
  std::vector<AtomRecord> atoms(n_atoms);
  for (std::size_t a = 0; a < n_atoms; ++a) {
    atoms[a].serial = static_cast<int>(a) + 1;
    atoms[a].name = "X";
    atoms[a].element = "X";
    atoms[a].residue_seq = 1;
  }
  return Trajectory(std::move(atoms), std::move(xyz), std::move(ids));
}

}  // namespace detail

/// Parses a multi-frame trajectory. When `topology` is given it supplies the
/// atom table (required for CSV, whose rows carry no atom identity); for PDB
/// and named XYZ input the parsed identities must match it.
inline Trajectory parse_trajectory(std::string_view text, TrajectoryFormat format,
                                   const std::vector<AtomRecord>* topology = nullptr) {
  Trajectory t;
  switch (format) {
    case TrajectoryFormat::Pdb: t = detail::parse_pdb_trajectory(text); break;
    case TrajectoryFormat::Xyz: t = detail::parse_xyz_trajectory(text); break;
    case TrajectoryFormat::Csv: t = detail::parse_csv_trajectory(text); break;
  }
  if (!topology) return t;
  if (topology->size() != t.n_atoms())
    fail(ErrorKind::InconsistentFrame, "topology has " + std::to_string(topology->size()) +
                                           " atoms, trajectory has " + std::to_string(t.n_atoms()));
  if (format == TrajectoryFormat::Pdb) require_same_atom_order(*topology, t.atoms());
  return Trajectory(*topology, t.data(), t.frame_ids());
}

/// Reads `frame,value` rows; `# name: ...` and `# units: ...` lines set metadata.
/// Values are returned sorted by frame; the sorted frame numbers go to `frames`
/// when given.
inline PropertySeries parse_property_csv(std::string_view text, std::vector<int>* frames = nullptr) {
  PropertySeries out;
  const auto ls = lines(text);
  bool have_header = false;
  std::map<long long, double> rows;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const std::string_view line = trim(ls[i]);
    const std::size_t row = i + 1;
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string_view body = trim(line.substr(1));
      const auto colon = body.find(':');
      if (colon == std::string_view::npos) continue;
      const std::string_view key = trim(body.substr(0, colon));
      const std::string_view value = trim(body.substr(colon + 1));
      if (key == "name") out.name = std::string(value);
      else if (key == "units") out.units = std::string(value);
      continue;
    }
    if (!have_header) {
      std::string header;
      for (char c : line)
        if (c != ' ') header += c;
      if (header != "frame,value")
        fail(ErrorKind::MalformedRecord, "line " + std::to_string(row) + ": expected header 'frame,value'");
      have_header = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 2)
      fail(ErrorKind::MalformedRecord, "line " + std::to_string(row) + ": expected 2 columns");
    const auto frame = to_int(f[0]);
    if (!frame)
      fail(ErrorKind::NonNumericValue, "row " + std::to_string(row) + ": bad frame '" + std::string(f[0]) + "'");
    const auto v = to_double(f[1]);
    if (!v || !std::isfinite(*v))
      fail(ErrorKind::NonNumericValue, "row " + std::to_string(row) + ": bad value '" + std::string(f[1]) + "'");
    if (!rows.emplace(*frame, *v).second)
      fail(ErrorKind::DuplicateFrame, "row " + std::to_string(row) + ": duplicate frame " + std::to_string(*frame));
  }
  if (!have_header) fail(ErrorKind::MalformedRecord, "missing 'frame,value' header");
  if (rows.empty()) fail(ErrorKind::EmptyStructure, "property file has no rows");
  out.values.reserve(rows.size());
  for (const auto& [frame, v] : rows) out.values.push_back(v);
  if (frames) {
    frames->clear();
    for (const auto& [frame, v] : rows) frames->push_back(static_cast<int>(frame));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Selection
//
//   expr   := term ('and' term)*
//   term   := 'all' | 'backbone' | 'name' ID[,ID...] | 'resid' INT ['to' INT]
//
// backbone is {N, CA, C, O}.

namespace detail {

struct SelectionTerm {
  enum class Kind { All, Backbone, Name, Resid } kind = Kind::All;
  std::set<std::string, std::less<>> names;
  long long lo = 0, hi = 0;

  bool matches(const AtomRecord& a) const {
    switch (kind) {
      case Kind::All: return true;
      case Kind::Backbone: return a.name == "N" || a.name == "CA" || a.name == "C" || a.name == "O";
      case Kind::Name: return names.count(a.name) > 0;
      case Kind::Resid: return a.residue_seq >= lo && a.residue_seq <= hi;
    }
    return false;
  }
};

inline std::vector<SelectionTerm> parse_selection(std::string_view expr) {
  const auto bad = [&](const std::string& why) -> void {
    fail(ErrorKind::ParseError, "selection '" + std::string(expr) + "': " + why);
  };
  const auto tok = split_ws(expr);
  if (tok.empty()) bad("empty expression");

  std::vector<SelectionTerm> terms;
  std::size_t i = 0;
  while (true) {
    if (i >= tok.size()) bad("expected a term");
    SelectionTerm t;
    const std::string_view kw = tok[i++];
    if (kw == "all") {
      t.kind = SelectionTerm::Kind::All;
    } else if (kw == "backbone") {
      t.kind = SelectionTerm::Kind::Backbone;
    } else if (kw == "name") {
      t.kind = SelectionTerm::Kind::Name;
      while (i < tok.size() && tok[i] != "and") {
        for (auto id : split(tok[i], ','))
          if (!id.empty()) t.names.emplace(id);
        ++i;
      }
      if (t.names.empty()) bad("'name' needs at least one identifier");
    } else if (kw == "resid") {
      t.kind = SelectionTerm::Kind::Resid;
      if (i >= tok.size()) bad("'resid' needs a number");
      const auto lo = to_int(tok[i++]);
      if (!lo) bad("bad residue number");
      t.lo = t.hi = *lo;
      if (i < tok.size() && tok[i] == "to") {
        ++i;
        if (i >= tok.size()) bad("'to' needs a number");
        const auto hi = to_int(tok[i++]);
        if (!hi) bad("bad residue number");
        t.hi = *hi;
        if (t.hi < t.lo) bad("empty residue range");
      }
    } else {
      bad("unknown keyword '" + std::string(kw) + "'");
    }
    terms.push_back(std::move(t));
    if (i == tok.size()) break;
    if (tok[i] != "and") bad("expected 'and', found '" + std::string(tok[i]) + "'");
    ++i;
  }
  return terms;
}

}  // namespace detail

inline Selection select_atoms(const std::vector<AtomRecord>& atoms, std::string_view expr) {
  const auto terms = detail::parse_selection(expr);
  Selection sel;
  sel.expr = std::string(expr);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const bool keep = std::all_of(terms.begin(), terms.end(),
                                  [&](const detail::SelectionTerm& t) { return t.matches(atoms[i]); });
    if (keep) sel.indices.push_back(i);
  }
  if (sel.indices.empty())
    fail(ErrorKind::EmptySelection, "selection '" + std::string(expr) + "' matched no atoms");
  return sel;
}

/// Index of the first atom named `name` in residue `residue_seq`.
inline std::optional<std::size_t> find_atom(const std::vector<AtomRecord>& atoms, int residue_seq,
                                            std::string_view name) {
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (atoms[i].residue_seq == residue_seq && atoms[i].name == name) return i;
  return std::nullopt;
}

inline std::size_t require_ca(const std::vector<AtomRecord>& atoms, int residue_seq) {
  if (auto i = find_atom(atoms, residue_seq, "CA")) return *i;
  fail(ErrorKind::MissingCA, "residue " + std::to_string(residue_seq) + " has no CA atom");
}

inline Selection select_all(std::size_t n_atoms) {
  Selection sel;
  sel.expr = "all";
  sel.indices.resize(n_atoms);
  for (std::size_t i = 0; i < n_atoms; ++i) sel.indices[i] = i;
  return sel;
}

// ---------------------------------------------------------------------------
// Writers

namespace detail {

inline void append_atom_line(std::string& out, const AtomRecord& a, const Vec3& p) {
  // Names shorter than four characters with a one-letter element start in
  // column 14, the usual PDB convention.
  char name[5];
  if (a.name.size() < 4 && a.element.size() <= 1)
    std::snprintf(name, sizeof name, " %-3s", a.name.c_str());
  else
    std::snprintf(name, sizeof name, "%-4.4s", a.name.c_str());
  char buf[96];
  std::snprintf(buf, sizeof buf, "%-6s%5d %-4s %3.3s %c%4d    %8.3f%8.3f%8.3f%6.2f%6.2f          %2.2s\n",
                a.hetero ? "HETATM" : "ATOM", a.serial % 100000, name, a.residue_name.c_str(), a.chain,
                a.residue_seq, p.x(), p.y(), p.z(), 1.0, 0.0, a.element.c_str());
  out += buf;
}

}  // namespace detail

inline std::string write_pdb(const Structure& s) {
  std::string out;
  for (std::size_t i = 0; i < s.atoms.size(); ++i) detail::append_atom_line(out, s.atoms[i], s.coords[i]);
  out += "END\n";
  return out;
}

inline std::string write_pdb_trajectory(const Trajectory& t) {
  std::string out;
  char buf[32];
  for (std::size_t f = 0; f < t.n_frames(); ++f) {
    std::snprintf(buf, sizeof buf, "MODEL     %4d\n", t.frame_ids()[f]);
    out += buf;
    for (std::size_t a = 0; a < t.n_atoms(); ++a) detail::append_atom_line(out, t.atoms()[a], t.at(f, a));
    out += "ENDMDL\n";
  }
  out += "END\n";
  return out;
}

/// XYZ blocks with an extended atom line `name x y z resname resseq chain`;
/// plain `element x y z` readers ignore the trailing columns.
inline std::string write_xyz(const Trajectory& t) {
  std::string out;
  for (std::size_t f = 0; f < t.n_frames(); ++f) {
    out += std::to_string(t.n_atoms()) + "\nframe=" + std::to_string(t.frame_ids()[f]) + "\n";
    for (std::size_t a = 0; a < t.n_atoms(); ++a) {
      const AtomRecord& rec = t.atoms()[a];
      const Vec3 p = t.at(f, a);
      out += rec.name + ' ' + format_double(p.x()) + ' ' + format_double(p.y()) + ' ' + format_double(p.z()) +
             ' ' + (rec.residue_name.empty() ? std::string("UNK") : rec.residue_name) + ' ' +
             std::to_string(rec.residue_seq) + ' ' + (rec.chain == ' ' ? '_' : rec.chain) + '\n';
    }
  }
  return out;
}

inline std::string write_trajectory_csv(const Trajectory& t) {
  std::string out = "frame,atom_index,x,y,z\n";
  for (std::size_t f = 0; f < t.n_frames(); ++f)
    for (std::size_t a = 0; a < t.n_atoms(); ++a) {
      const Vec3 p = t.at(f, a);
      out += std::to_string(t.frame_ids()[f]) + ',' + std::to_string(a) + ',' + format_double(p.x()) + ',' +
             format_double(p.y()) + ',' + format_double(p.z()) + '\n';
    }
  return out;
}

inline std::string write_property_csv(const PropertySeries& p, const std::vector<int>* frame_ids = nullptr) {
  std::string out;
  if (!p.name.empty()) out += "# name: " + p.name + "\n";
  if (!p.units.empty()) out += "# units: " + p.units + "\n";
  out += "frame,value\n";
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    const int id = frame_ids ? (*frame_ids)[i] : static_cast<int>(i);
    out += std::to_string(id) + ',' + format_double(p.values[i]) + '\n';
  }
  return out;
}

}  // namespace rxcoord

#endif  // RXCOORD_INGEST_HPP
