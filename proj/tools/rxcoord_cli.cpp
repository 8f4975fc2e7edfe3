// rxcoord command-line front end.
//
//   rxcoord synth | prep | rmsd | distance | scan | rank | network | report
//
// Exit codes: 0 ok, 1 internal error, 2 bad input, 3 degenerate result.
// Failures print one `error_code: message` line on stderr.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rxcoord/rxcoord.hpp"

namespace fs = std::filesystem;
using namespace rxcoord;

namespace {

struct Globals {
  int threads = 0;
  bool force = false;
  std::string out = ".";
  std::uint64_t seed = 42;
  std::vector<std::string> emit{"csv", "json", "svg"};

  bool emits(const std::string& kind) const { return std::find(emit.begin(), emit.end(), kind) != emit.end(); }
};

// Collects outputs as hidden partial files and renames them into place on
// commit. Anything not committed is removed, so a failed run leaves no
// half-written artifacts behind.
class Outputs {
 public:
  Outputs(fs::path dir, bool force) : dir_(std::move(dir)), force_(force) {}
  Outputs(const Outputs&) = delete;
  Outputs& operator=(const Outputs&) = delete;

  ~Outputs() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& [name, partial] : pending_) fs::remove(partial, ec);
    if (created_dir_ && fs::is_empty(dir_, ec)) fs::remove(dir_, ec);
  }

  void write(const std::string& name, const std::string& content) {
    const fs::path target = dir_ / name;
    if (std::any_of(pending_.begin(), pending_.end(), [&](const auto& p) { return p.first == name; }))
      fail(ErrorKind::InvalidArgument, "output written twice: " + target.string());
    if (fs::exists(target) && !force_)
      fail(ErrorKind::OutputExists, target.string() + " exists (use --force to overwrite)");
    if (!fs::exists(dir_)) {
      std::error_code ec;
      fs::create_directories(dir_, ec);
      if (ec) fail(ErrorKind::Io, "cannot create " + dir_.string() + ": " + ec.message());
      created_dir_ = true;
    }
    const fs::path partial = dir_ / ("." + name + ".partial");
    pending_.emplace_back(name, partial);
    std::ofstream f(partial, std::ios::binary);
    f << content;
    f.close();
    if (!f) fail(ErrorKind::Io, "cannot write " + partial.string());
  }

  void commit() {
    for (const auto& [name, partial] : pending_) {
      std::error_code ec;
      fs::rename(partial, dir_ / name, ec);
      if (ec) fail(ErrorKind::Io, "cannot move output into place: " + (dir_ / name).string());
    }
    committed_ = true;
    for (const auto& [name, partial] : pending_) std::cout << "wrote " << (dir_ / name).string() << '\n';
  }

 private:
  fs::path dir_;
  bool force_;
  bool created_dir_ = false;
  bool committed_ = false;
  std::vector<std::pair<std::string, fs::path>> pending_;
};

std::string read_text(const std::string& path) {
  if (path.empty()) fail(ErrorKind::InputMissing, "no input path given");
  if (!fs::is_regular_file(path)) fail(ErrorKind::InputMissing, path + ": no such file");
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::Io, path + ": cannot open");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

TrajectoryFormat format_for(const std::string& path, const std::string& format) {
  if (!format.empty()) return trajectory_format_from_string(format);
  std::string ext = fs::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".pdb" || ext == ".xyz" || ext == ".csv") return trajectory_format_from_string(ext.substr(1));
  fail(ErrorKind::InvalidArgument, path + ": cannot infer trajectory format, pass --format pdb|xyz|csv");
}

std::string extension(TrajectoryFormat f) {
  switch (f) {
    case TrajectoryFormat::Pdb: return "pdb";
    case TrajectoryFormat::Xyz: return "xyz";
    case TrajectoryFormat::Csv: return "csv";
  }
  return "pdb";
}

std::string write_trajectory(const Trajectory& t, TrajectoryFormat f) {
  switch (f) {
    case TrajectoryFormat::Pdb: return write_pdb_trajectory(t);
    case TrajectoryFormat::Xyz: return write_xyz(t);
    case TrajectoryFormat::Csv: return write_trajectory_csv(t);
  }
  return {};
}

struct TrajectoryInput {
  std::string path;
  std::string format;
  std::string topology;

  void add_to(CLI::App* cmd) {
    cmd->add_option("-t,--trajectory", path, "Trajectory file (.pdb, .xyz or .csv)")->required();
    cmd->add_option("--format", format, "Trajectory format, inferred from the extension by default")
        ->check(CLI::IsMember({"pdb", "xyz", "csv"}));
    cmd->add_option("--topology", topology, "PDB giving atom identities for CSV or plain XYZ input");
  }

  TrajectoryFormat resolved_format() const { return format_for(path, format); }

  Trajectory load(const std::vector<AtomRecord>* fallback_topology = nullptr) const {
    const TrajectoryFormat f = resolved_format();
    const std::string text = read_text(path);
    if (!topology.empty()) {
      const Structure top = parse_pdb(read_text(topology));
      return parse_trajectory(text, f, &top.atoms);
    }
    return parse_trajectory(text, f, fallback_topology);
  }
};

PropertySeries load_property(const std::string& path, const Trajectory& traj) {
  std::vector<int> frames;
  PropertySeries p = parse_property_csv(read_text(path), &frames);
  if (frames != traj.frame_ids())
    fail(ErrorKind::InconsistentFrame, path + ": property frames do not match the trajectory frames (" +
                                           std::to_string(frames.size()) + " vs " +
                                           std::to_string(traj.n_frames()) + " frames)");
  if (p.name.empty()) p.name = fs::path(path).stem().string();
  return p;
}

// Keeps the frames listed in `ids` (which must all be present).
Trajectory select_frames(const Trajectory& traj, const std::vector<int>& ids) {
  if (ids == traj.frame_ids()) return traj;
  std::map<int, std::size_t> index;
  for (std::size_t f = 0; f < traj.n_frames(); ++f) index[traj.frame_ids()[f]] = f;
  std::vector<double> xyz;
  xyz.reserve(ids.size() * traj.n_atoms() * 3);
  for (int id : ids) {
    const auto it = index.find(id);
    if (it == index.end())
      fail(ErrorKind::InconsistentFrame, "frame " + std::to_string(id) + " is not in the trajectory");
    const auto span = traj.frame_span(it->second);
    xyz.insert(xyz.end(), span.begin(), span.end());
  }
  return Trajectory(traj.atoms(), std::move(xyz), ids);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

struct CorrFlags {
  CorrRatioConfig cfg;
  bool no_standardize = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--n-bins", cfg.n_bins, "Sections along PC1")->capture_default_str();
    cmd->add_option("--min-bin-count", cfg.min_bin_count, "Drop sections with fewer frames")->capture_default_str();
    cmd->add_option("--epsilon-v", cfg.epsilon_v, "Floor for the within-section variance")->capture_default_str();
    cmd->add_flag("--no-standardize", no_standardize, "Fit on raw rather than z-scored series");
  }

  CorrRatioConfig resolved() const {
    CorrRatioConfig c = cfg;
    c.standardize = !no_standardize;
    c.validate();
    return c;
  }
};

// ---------------------------------------------------------------------------

struct SynthArgs {
  std::size_t frames = 400;
  std::size_t residues = 10;
  std::vector<int> signal{4};
  double noise = 0.05;
  double radial_sigma = 0.0;
  std::string format = "pdb";
};

void run_synth(const Globals& g, const SynthArgs& a) {
  SynthOptions opts;
  opts.radial_sigma = a.radial_sigma;
  const SynthResult s = synth_planted(g.seed, a.frames, a.residues, a.signal, a.noise, opts);
  const TrajectoryFormat f = trajectory_format_from_string(a.format);
  Outputs out(g.out, g.force);
  out.write("topology.pdb", write_pdb(s.trajectory.frame_structure(0)));
  out.write("trajectory." + extension(f), write_trajectory(s.trajectory, f));
  out.write("property.csv", write_property_csv(s.property, &s.trajectory.frame_ids()));
  out.commit();
}

struct PrepArgs {
  std::string reference;
  TrajectoryInput traj;
  std::string selection = "backbone";
};

void run_prep(const Globals& g, const PrepArgs& a) {
  const Structure ref = parse_pdb(read_text(a.reference));
  const Trajectory t = a.traj.load(&ref.atoms);
  const Structure oriented = orient_structure(ref);
  const Selection sel = select_atoms(ref.atoms, a.selection);
  const Trajectory aligned = align_trajectory(t, oriented, sel, resolve_threads(g.threads));
  PropertySeries fit = rmsd_series(aligned, oriented, sel);
  fit.name = "fit_rmsd";
  const TrajectoryFormat f = a.traj.resolved_format();
  Outputs out(g.out, g.force);
  out.write("reference.pdb", write_pdb(oriented));
  out.write("aligned." + extension(f), write_trajectory(aligned, f));
  out.write("fit_rmsd.csv", write_property_csv(fit, &aligned.frame_ids()));
  out.commit();
}

struct RmsdArgs {
  std::string reference;
  TrajectoryInput traj;
  std::string selection = "backbone";
  bool no_fit = false;
};

void run_rmsd(const Globals& g, const RmsdArgs& a) {
  const Structure ref = parse_pdb(read_text(a.reference));
  Trajectory t = a.traj.load(&ref.atoms);
  const Selection sel = select_atoms(ref.atoms, a.selection);
  if (!a.no_fit) t = align_trajectory(t, ref, sel, resolve_threads(g.threads));
  const PropertySeries r = rmsd_series(t, ref, sel);
  Outputs out(g.out, g.force);
  out.write("rmsd.csv", write_property_csv(r, &t.frame_ids()));
  out.commit();
}

struct DistanceArgs {
  TrajectoryInput traj;
  int res_a = 0;
  int res_b = 0;
};

void run_distance(const Globals& g, const DistanceArgs& a) {
  const Trajectory t = a.traj.load();
  const PropertySeries d = ca_contact_distance(t, a.res_a, a.res_b);
  Outputs out(g.out, g.force);
  out.write("distance.csv", write_property_csv(d, &t.frame_ids()));
  out.commit();
}

struct ScanArgs {
  TrajectoryInput traj;
  std::string property;
  std::string selection = "name CB";
  CorrFlags corr;
  double lambda_step = 0.25;
  std::string pca_scale = "none";
  std::size_t frames = 0;
};

void run_scan(const Globals& g, const ScanArgs& a) {
  read_text(a.property);  // fail early on a missing property file
  Trajectory t = a.traj.load();
  PropertySeries p = load_property(a.property, t);
  if (a.frames > 0 && a.frames < t.n_frames()) std::tie(t, p) = subsample_frames(t, p, a.frames, g.seed);

  PipelineConfig cfg;
  cfg.corr = a.corr.resolved();
  cfg.lambda_step = a.lambda_step;
  cfg.pca.scale = pca_scale_from_string(a.pca_scale);
  cfg.threads = resolve_threads(g.threads);
  const Selection sel = select_atoms(t.atoms(), a.selection);
  const GridScanResult scan = grid_scan(t, sel, p, cfg);
  const Representation& rep = scan.representation;

  Outputs out(g.out, g.force);
  if (g.emits("csv")) {
    out.write("grid.csv", grid_csv(scan));
    out.write("scores.csv", scores_csv(rep, t.frame_ids()));
  }
  if (g.emits("json")) out.write("representation.json", dump(representation_json(rep, t.frame_ids(), cfg.corr,
                                                                                  scan.best_entry().result)));
  if (g.emits("svg"))
    out.write("representation.svg",
              representation_svg(rep, p.values, p.name, "best representation " + rep.lambda.label() +
                                                            ", C_r = " + format_fixed(scan.best_entry().result.cr, 4)));
  out.commit();
}

struct RankArgs {
  TrajectoryInput traj;
  std::string representation;
  std::size_t top_k = 10;
};

void run_rank(const Globals& g, const RankArgs& a) {
  const StoredRepresentation stored = representation_from_json(Json::parse(read_text(a.representation)));
  const Trajectory full = a.traj.load();
  const Trajectory t = select_frames(full, stored.frame_ids);
  for (std::size_t i : stored.representation.selection.indices)
    if (i >= t.n_atoms()) fail(ErrorKind::AtomOrderMismatch, "representation selects atoms the trajectory lacks");
  PipelineConfig cfg;
  cfg.corr = stored.corr;
  cfg.threads = resolve_threads(g.threads);
  const Ranking ranking = rank_reaction_coordinates(t, stored.representation, cfg);
  if (ranking.ranked.empty()) fail(ErrorKind::MissingCA, "no residue has a CA atom");

  Outputs out(g.out, g.force);
  if (g.emits("csv")) out.write("ranking.csv", ranking_csv(ranking.ranked));
  if (g.emits("svg")) {
    for (const RankedCoordinate& r : ranking.top(a.top_k)) {
      const std::string label = "theta " + r.residue_name + std::to_string(r.residue_seq);
      out.write("residue_" + std::to_string(r.residue_seq) + ".svg",
                representation_svg(stored.representation, theta_series(t, r.residue_seq).values, label,
                                   "rank " + std::to_string(r.rank) + ": " + label + ", C_r = " + format_fixed(r.cr, 4)));
    }
  }
  out.commit();
}

struct NetworkArgs {
  TrajectoryInput traj;
  std::string ranking;
  std::string property;
  std::size_t k = 2;
};

void run_network(const Globals& g, const NetworkArgs& a) {
  const auto ranked = parse_ranking_csv(read_text(a.ranking));
  read_text(a.property);
  const Trajectory t = a.traj.load();
  const PropertySeries p = load_property(a.property, t);
  const Network net = pairwise_network(t, ranked, a.k, p);

  Outputs out(g.out, g.force);
  if (g.emits("json")) out.write("network.json", dump(network_json(net)));
  if (g.emits("svg")) {
    for (const NetworkEdge& e : net.edges) {
      const auto ta = theta_series(t, e.residue_a).values;
      const auto tb = theta_series(t, e.residue_b).values;
      std::vector<Point2> pts(ta.size());
      for (std::size_t i = 0; i < ta.size(); ++i) pts[i] = {ta[i], tb[i]};
      const std::string a_label = "theta " + std::to_string(e.residue_a), b_label = "theta " + std::to_string(e.residue_b);
      out.write("pair_" + std::to_string(e.residue_a) + "_" + std::to_string(e.residue_b) + ".svg",
                write_svg_scatter(pts, p.values, {a_label, b_label, p.name},
                                  a_label + " vs " + b_label + ", r = " + format_fixed(e.pearson, 3)));
    }
  }
  out.commit();
}

struct ReportArgs {
  std::string run;
};

Json property_summary(const std::string& file, const std::string& text) {
  std::vector<int> frames;
  const PropertySeries p = parse_property_csv(text, &frames);
  const auto [lo, hi] = std::minmax_element(p.values.begin(), p.values.end());
  double mean = 0.0;
  for (double v : p.values) mean += v / static_cast<double>(p.size());
  return Json{{"file", file}, {"name", p.name}, {"units", p.units}, {"frames", p.size()},
              {"min", *lo},     {"max", *hi},    {"mean", mean}};
}

void run_report(const Globals& g, const ReportArgs& a, bool out_given) {
  const fs::path run = a.run;
  if (!fs::is_directory(run)) fail(ErrorKind::InputMissing, a.run + ": no such directory");
  const fs::path out_dir = out_given ? fs::path(g.out) : run;

  std::set<std::string> files;
  for (const auto& entry : fs::directory_iterator(run))
    if (entry.is_regular_file()) files.insert(entry.path().filename().string());
  files.erase("report.json");
  files.erase("summary.txt");
  std::erase_if(files, [](const std::string& f) { return f.starts_with("."); });
  const auto has = [&](const std::string& f) { return files.count(f) > 0; };
  const auto text_of = [&](const std::string& f) { return read_text((run / f).string()); };

  Json report{{"schema", "rxcoord.report/1"}};
  Json artifacts = Json::array();
  for (const std::string& f : files)
    artifacts.push_back(Json{{"file", f}, {"bytes", static_cast<std::uint64_t>(fs::file_size(run / f))}});
  report["artifacts"] = artifacts;

  std::ostringstream summary;
  summary << "rxcoord run summary: " << run.filename().string() << "\n";
  bool any = false;

  if (has("grid.csv")) {
    any = true;
    const auto rows = parse_grid_csv(text_of("grid.csv"));
    std::size_t degenerate = 0, best = rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      degenerate += rows[i].degenerate;
      if (!rows[i].degenerate && (best == rows.size() || rows[i].cr > rows[best].cr)) best = i;
    }
    Json scan{{"entries", rows.size()}, {"degenerate", degenerate}};
    summary << "\ngrid scan: " << rows.size() << " kernels, " << degenerate << " degenerate\n";
    if (best < rows.size()) {
      const GridRow& r = rows[best];
      scan["best"] = Json{{"lambda", to_json(r.lambda)}, {"s", r.s}, {"r2", r.r2}, {"v", r.v}, {"cr", r.cr}};
      summary << "  best " << r.lambda.label() << "  C_r " << format_fixed(r.cr, 4) << "  (S " << format_fixed(r.s, 4)
              << ", R2 " << format_fixed(r.r2, 4) << ", V " << format_fixed(r.v, 4) << ")\n";
    }
    report["scan"] = scan;
  }
  if (has("representation.json")) {
    any = true;
    const StoredRepresentation s = representation_from_json(Json::parse(text_of("representation.json")));
    const Representation& rep = s.representation;
    report["representation"] =
        Json{{"lambda", to_json(rep.lambda)},
             {"selection", rep.selection.expr},
             {"atoms", rep.selection.size()},
             {"frames", s.frame_ids.size()},
             {"eigenvalues", Json::array({rep.eigenvalues[0], rep.eigenvalues[1]})},
             {"explained", rep.total_variance > 0 ? Json::array({rep.eigenvalues[0] / rep.total_variance,
                                                                 rep.eigenvalues[1] / rep.total_variance})
                                                  : Json::array({0.0, 0.0})}};
    summary << "\nrepresentation: " << rep.lambda.label() << " on '" << rep.selection.expr << "' ("
            << rep.selection.size() << " atoms, " << s.frame_ids.size() << " frames)\n";
  }
  if (has("ranking.csv")) {
    any = true;
    const auto ranked = parse_ranking_csv(text_of("ranking.csv"));
    Json top = Json::array();
    summary << "\nreaction coordinates (" << ranked.size() << " residues):\n";
    for (std::size_t i = 0; i < std::min<std::size_t>(10, ranked.size()); ++i) {
      const RankedCoordinate& r = ranked[i];
      top.push_back(
          Json{{"rank", r.rank}, {"residue_seq", r.residue_seq}, {"residue_name", r.residue_name}, {"cr", r.cr}});
      summary << "  " << r.rank << ". " << r.residue_name << r.residue_seq << "  C_r " << format_fixed(r.cr, 4) << "\n";
    }
    report["ranking"] = Json{{"residues", ranked.size()}, {"top", top}};
  }
  if (has("network.json")) {
    any = true;
    const Json net = Json::parse(text_of("network.json"));
    if (net.value("schema", "") != "rxcoord.network/1")
      fail(ErrorKind::MalformedRecord, "network.json is not a rxcoord.network/1 document");
    Json n{{"nodes", net.at("nodes").size()}, {"edges", net.at("edges").size()}};
    summary << "\nnetwork: " << net.at("nodes").size() << " nodes, " << net.at("edges").size() << " edges\n";
    const Json* strongest = nullptr;
    for (const Json& e : net.at("edges"))
      if (!strongest || std::abs(e.at("pearson").get<double>()) > std::abs(strongest->at("pearson").get<double>()))
        strongest = &e;
    if (strongest) {
      n["strongest"] = Json{{"residue_a", strongest->at("residue_a")},
                            {"residue_b", strongest->at("residue_b")},
                            {"pearson", strongest->at("pearson")}};
      summary << "  strongest edge " << strongest->at("residue_a").get<int>() << "-"
              << strongest->at("residue_b").get<int>() << "  r "
              << format_fixed(strongest->at("pearson").get<double>(), 4) << "\n";
    }
    report["network"] = n;
  }
  Json properties = Json::array();
  for (const char* f : {"property.csv", "rmsd.csv", "distance.csv", "fit_rmsd.csv"}) {
    if (!has(f)) continue;
    any = true;
    const Json s = property_summary(f, text_of(f));
    properties.push_back(s);
    summary << "\n" << f << ": " << s["name"].get<std::string>() << ", " << s["frames"].get<std::size_t>()
            << " frames, range [" << format_fixed(s["min"].get<double>(), 4) << ", "
            << format_fixed(s["max"].get<double>(), 4) << "]\n";
  }
  report["properties"] = properties;
  if (!any) fail(ErrorKind::InputMissing, a.run + ": no rxcoord artifacts found");

  Outputs out(out_dir, g.force);
  out.write("report.json", dump(report));
  out.write("summary.txt", summary.str());
  out.commit();
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::DegenerateAxes:
    case ErrorKind::AllDegenerate:
    case ErrorKind::CollinearSelection:
      return 3;
    default:
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel-PCA reaction coordinate discovery for MD trajectories", "rxcoord"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML-style file of option values; command-line flags take precedence");

  Globals g;
  app.add_option("--threads", g.threads, "Worker threads (default: RXCOORD_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--force", g.force, "Overwrite existing outputs");
  auto* out_opt = app.add_option("-o,--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for synthetic data and frame subsampling")->capture_default_str();
  app.add_option("--emit", g.emit, "Artifact kinds to write")
      ->delimiter(',')
      ->check(CLI::IsMember({"csv", "json", "svg"}))
      ->capture_default_str();

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Write a synthetic trajectory with planted signal residues");
  c_synth->add_option("--frames", synth.frames)->capture_default_str();
  c_synth->add_option("--residues", synth.residues)->capture_default_str();
  c_synth->add_option("--signal", synth.signal, "Planted residue numbers")->delimiter(',')->capture_default_str();
  c_synth->add_option("--noise", synth.noise, "Property noise sigma")->capture_default_str();
  c_synth->add_option("--radial-sigma", synth.radial_sigma, "Radial breathing sigma, angstrom")->capture_default_str();
  c_synth->add_option("--format", synth.format)->check(CLI::IsMember({"pdb", "xyz", "csv"}))->capture_default_str();

  PrepArgs prep;
  auto* c_prep = app.add_subcommand("prep", "Orient the reference on its principal axes and superpose every frame");
  c_prep->add_option("-r,--reference", prep.reference, "Reference PDB")->required();
  prep.traj.add_to(c_prep);
  c_prep->add_option("-s,--selection", prep.selection, "Atoms used for the fit")->capture_default_str();

  RmsdArgs rmsd;
  auto* c_rmsd = app.add_subcommand("rmsd", "Per-frame RMSD to a reference");
  c_rmsd->add_option("-r,--reference", rmsd.reference, "Reference PDB")->required();
  rmsd.traj.add_to(c_rmsd);
  c_rmsd->add_option("-s,--selection", rmsd.selection)->capture_default_str();
  c_rmsd->add_flag("--no-fit", rmsd.no_fit, "Use coordinates as given instead of superposing each frame");

  DistanceArgs dist;
  auto* c_dist = app.add_subcommand("distance", "CA-CA distance between two residues per frame");
  dist.traj.add_to(c_dist);
  c_dist->add_option("--res-a", dist.res_a)->required();
  c_dist->add_option("--res-b", dist.res_b)->required();

  ScanArgs scan;
  auto* c_scan = app.add_subcommand("scan", "Scan the kernel grid and keep the representation with the highest C_r");
  scan.traj.add_to(c_scan);
  c_scan->add_option("-p,--property", scan.property, "Property CSV (frame,value)")->required();
  c_scan->add_option("-s,--selection", scan.selection)->capture_default_str();
  scan.corr.add_to(c_scan);
  c_scan->add_option("--lambda-step", scan.lambda_step)->capture_default_str();
  c_scan->add_option("--pca-scale", scan.pca_scale)
      ->check(CLI::IsMember({"none", "unit-variance"}))
      ->capture_default_str();
  c_scan->add_option("--frames", scan.frames, "Randomly keep this many frames (0 keeps all)")->capture_default_str();

  RankArgs rank;
  auto* c_rank = app.add_subcommand("rank", "Rank per-residue CA theta angles against PC1");
  rank.traj.add_to(c_rank);
  c_rank->add_option("--representation", rank.representation, "representation.json from scan")->required();
  c_rank->add_option("-k,--top-k", rank.top_k, "Residues that get a projection plot")->capture_default_str();

  NetworkArgs network;
  auto* c_net = app.add_subcommand("network", "Pairwise correlations among the top-ranked theta angles");
  network.traj.add_to(c_net);
  c_net->add_option("--ranking", network.ranking, "ranking.csv from rank")->required();
  c_net->add_option("-p,--property", network.property, "Property CSV (frame,value)")->required();
  c_net->add_option("-k,--top-k", network.k, "Number of top residues")->capture_default_str();

  ReportArgs report;
  auto* c_report = app.add_subcommand("report", "Summarize the artifacts in a run directory");
  c_report->add_option("--run", report.run, "Run directory")->required();

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage_error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (c_synth->parsed()) run_synth(g, synth);
    else if (c_prep->parsed()) run_prep(g, prep);
    else if (c_rmsd->parsed()) run_rmsd(g, rmsd);
    else if (c_dist->parsed()) run_distance(g, dist);
    else if (c_scan->parsed()) run_scan(g, scan);
    else if (c_rank->parsed()) run_rank(g, rank);
    else if (c_net->parsed()) run_network(g, network);
    else if (c_report->parsed()) run_report(g, report, out_opt->count() > 0);
  } catch (const Error& e) {
    std::cerr << error_code(e.kind()) << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const Json::exception& e) {
    std::cerr << "malformed_record: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal_error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
