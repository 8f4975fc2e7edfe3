#ifndef RXCOORD_REPORT_HPP
#define RXCOORD_REPORT_HPP

// CSV, JSON and SVG emitters for scan, ranking and network results.
// Numbers go through format_double (shortest round-trip, '.' decimal point).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rxcoord/corrratio.hpp"
#include "rxcoord/pca.hpp"
#include "rxcoord/pipeline.hpp"
#include "rxcoord/text.hpp"

namespace rxcoord {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// CSV

inline std::string grid_csv(const GridScanResult& scan) {
  std::vector<double> normalized(scan.entries.size(), 0.0);
  const auto norm = normalize_grid(scan.pairs());
  for (std::size_t i = 0; i < norm.size(); ++i) normalized[i] = norm[i].second;

  std::string out = "l1,l2,l3,s,r2,v,cr,cr_normalized,degenerate\n";
  for (std::size_t i = 0; i < scan.entries.size(); ++i) {
    const GridScanEntry& e = scan.entries[i];
    out += format_double(e.lambda.l1) + ',' + format_double(e.lambda.l2) + ',' + format_double(e.lambda.l3) + ',' +
           format_double(e.result.s) + ',' + format_double(e.result.r2) + ',' + format_double(e.result.v) + ',' +
           format_double(e.result.cr) + ',' + format_double(normalized[i]) + ',' +
           (e.result.degenerate ? "true" : "false") + '\n';
  }
  return out;
}

inline std::string ranking_csv(const std::vector<RankedCoordinate>& ranked) {
  std::string out = "rank,residue_seq,residue_name,cr\n";
  for (const RankedCoordinate& r : ranked)
    out += std::to_string(r.rank) + ',' + std::to_string(r.residue_seq) + ',' + r.residue_name + ',' +
           format_double(r.cr) + '\n';
  return out;
}

inline std::string scores_csv(const Representation& rep, const std::vector<int>& frame_ids) {
  std::string out = "frame,pc1,pc2\n";
  for (Eigen::Index f = 0; f < rep.scores.rows(); ++f)
    out += std::to_string(frame_ids[static_cast<std::size_t>(f)]) + ',' + format_double(rep.scores(f, 0)) + ',' +
           format_double(rep.scores(f, 1)) + '\n';
  return out;
}

/// Reads rank,residue_seq,residue_name,cr rows back.
inline std::vector<RankedCoordinate> parse_ranking_csv(std::string_view text) {
  const auto ls = lines(text);
  if (ls.empty() || trim(ls[0]) != "rank,residue_seq,residue_name,cr")
    fail(ErrorKind::MalformedRecord, "line 1: expected header 'rank,residue_seq,residue_name,cr'");
  std::vector<RankedCoordinate> out;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    if (trim(ls[i]).empty()) continue;
    const auto f = split(ls[i], ',');
    RankedCoordinate r;
    const auto rank = f.size() == 4 ? to_int(f[0]) : std::nullopt;
    const auto seq = f.size() == 4 ? to_int(f[1]) : std::nullopt;
    const auto cr = f.size() == 4 ? to_double(f[3]) : std::nullopt;
    if (!rank || !seq || !cr) fail(ErrorKind::MalformedRecord, "line " + std::to_string(i + 1) + ": bad ranking row");
    r.rank = static_cast<int>(*rank);
    r.residue_seq = static_cast<int>(*seq);
    r.residue_name = std::string(trim(f[2]));
    r.cr = *cr;
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.rank < b.rank; });
  return out;
}

struct GridRow {
  LambdaTriple lambda;
  double s = 0.0, r2 = 0.0, v = 0.0, cr = 0.0, cr_normalized = 0.0;
  bool degenerate = false;
};

/// Reads a grid CSV written by grid_csv.
inline std::vector<GridRow> parse_grid_csv(std::string_view text) {
  static constexpr std::string_view kHeader = "l1,l2,l3,s,r2,v,cr,cr_normalized,degenerate";
  const auto ls = lines(text);
  if (ls.empty() || trim(ls[0]) != kHeader)
    fail(ErrorKind::MalformedRecord, "line 1: expected header '" + std::string(kHeader) + "'");
  std::vector<GridRow> out;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    if (trim(ls[i]).empty()) continue;
    const auto f = split(ls[i], ',');
    const std::string where = "line " + std::to_string(i + 1);
    if (f.size() != 9) fail(ErrorKind::MalformedRecord, where + ": expected 9 columns");
    std::array<double, 8> v{};
    for (std::size_t k = 0; k < 8; ++k) {
      const auto d = to_double(f[k]);
      if (!d) fail(ErrorKind::NonNumericValue, where + ": bad number '" + std::string(f[k]) + "'");
      v[k] = *d;
    }
    const std::string_view deg = trim(f[8]);
    if (deg != "true" && deg != "false") fail(ErrorKind::MalformedRecord, where + ": degenerate must be true/false");
    GridRow r;
    r.lambda = LambdaTriple::make(v[0], v[1], v[2]);
    r.s = v[3];
    r.r2 = v[4];
    r.v = v[5];
    r.cr = v[6];
    r.cr_normalized = v[7];
    r.degenerate = deg == "true";
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

inline Json to_json(const CorrRatioConfig& c) {
  return Json{{"n_bins", c.n_bins}, {"min_bin_count", c.min_bin_count}, {"standardize", c.standardize},
              {"epsilon_v", c.epsilon_v}};
}

inline CorrRatioConfig corr_config_from_json(const Json& j) {
  CorrRatioConfig c;
  c.n_bins = j.at("n_bins").get<int>();
  c.min_bin_count = j.at("min_bin_count").get<int>();
  c.standardize = j.at("standardize").get<bool>();
  c.epsilon_v = j.at("epsilon_v").get<double>();
  c.validate();
  return c;
}

inline Json to_json(const LambdaTriple& l) { return Json{{"l1", l.l1}, {"l2", l.l2}, {"l3", l.l3}}; }

inline Json to_json(const CorrRatioResult& r) {
  return Json{{"s", r.s},   {"r2", r.r2},         {"v", r.v},
              {"cr", r.cr}, {"bins_used", r.bins_used}, {"degenerate", r.degenerate},
              {"slope", r.slope}, {"intercept", r.intercept}};
}

namespace detail {

inline Json vector_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline Eigen::VectorXd vector_from_json(const Json& a) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  return v;
}

}  // namespace detail

/// Fitted representation plus the configuration it was selected under.
inline Json representation_json(const Representation& rep, const std::vector<int>& frame_ids,
                                 const CorrRatioConfig& corr, const CorrRatioResult& result) {
  Json sel_idx = Json::array();
  for (std::size_t i : rep.selection.indices) sel_idx.push_back(i);
  return Json{{"schema", "rxcoord.representation/1"},
              {"lambda", to_json(rep.lambda)},
              {"selection", Json{{"expr", rep.selection.expr}, {"indices", sel_idx}}},
              {"scale", std::string(to_string(rep.scale))},
              {"eigenvalues", Json::array({rep.eigenvalues[0], rep.eigenvalues[1]})},
              {"total_variance", rep.total_variance},
              {"rank_deficient", rep.rank_deficient},
              {"corr_ratio_config", to_json(corr)},
              {"corr_ratio", to_json(result)},
              {"frame_ids", frame_ids},
              {"pc1", detail::vector_json(rep.scores.col(0))},
              {"pc2", detail::vector_json(rep.scores.col(1))},
              {"column_means", detail::vector_json(rep.column_means)},
              {"column_scales", detail::vector_json(rep.column_scales)},
              {"loadings", Json::array({detail::vector_json(rep.loadings.col(0)),
                                        detail::vector_json(rep.loadings.col(1))})}};
}

struct StoredRepresentation {
  Representation representation;
  CorrRatioConfig corr;
  std::vector<int> frame_ids;
};

inline StoredRepresentation representation_from_json(const Json& j) {
  if (j.value("schema", "") != "rxcoord.representation/1")
    fail(ErrorKind::MalformedRecord, "not a rxcoord.representation/1 document");
  StoredRepresentation out;
  Representation& rep = out.representation;
  const Json& l = j.at("lambda");
  rep.lambda = LambdaTriple::make(l.at("l1").get<double>(), l.at("l2").get<double>(), l.at("l3").get<double>());
  rep.selection.expr = j.at("selection").at("expr").get<std::string>();
  rep.selection.indices = j.at("selection").at("indices").get<std::vector<std::size_t>>();
  rep.scale = pca_scale_from_string(j.at("scale").get<std::string>());
  rep.eigenvalues = Eigen::Vector2d(j.at("eigenvalues")[0].get<double>(), j.at("eigenvalues")[1].get<double>());
  rep.total_variance = j.at("total_variance").get<double>();
  rep.rank_deficient = j.at("rank_deficient").get<bool>();
  const Eigen::VectorXd pc1 = detail::vector_from_json(j.at("pc1"));
  const Eigen::VectorXd pc2 = detail::vector_from_json(j.at("pc2"));
  if (pc1.size() != pc2.size()) fail(ErrorKind::MalformedRecord, "pc1 and pc2 lengths differ");
  rep.scores.resize(pc1.size(), 2);
  rep.scores.col(0) = pc1;
  rep.scores.col(1) = pc2;
  rep.column_means = detail::vector_from_json(j.at("column_means"));
  rep.column_scales = detail::vector_from_json(j.at("column_scales"));
  const Json& ld = j.at("loadings");
  const Eigen::VectorXd l0 = detail::vector_from_json(ld.at(0)), l1 = detail::vector_from_json(ld.at(1));
  rep.loadings.resize(l0.size(), 2);
  rep.loadings.col(0) = l0;
  rep.loadings.col(1) = l1;
  out.corr = corr_config_from_json(j.at("corr_ratio_config"));
  out.frame_ids = j.at("frame_ids").get<std::vector<int>>();
  if (out.frame_ids.size() != static_cast<std::size_t>(pc1.size()))
    fail(ErrorKind::MalformedRecord, "frame_ids length differs from scores");
  return out;
}

inline Json network_json(const Network& net) {
  Json nodes = Json::array();
  for (const RankedCoordinate& n : net.nodes)
    nodes.push_back(Json{{"residue_seq", n.residue_seq}, {"residue_name", n.residue_name}, {"rank", n.rank},
                         {"cr", n.cr}});
  Json edges = Json::array();
  for (const NetworkEdge& e : net.edges) {
    Json states = Json::object();
    for (int s = 0; s < 3; ++s) {
      const StateCorrelation& sc = e.state_breakdown[static_cast<std::size_t>(s)];
      states[to_string(static_cast<PropertyState>(s))] =
          Json{{"frames", sc.frames}, {"pearson", sc.pearson ? Json(*sc.pearson) : Json(nullptr)}};
    }
    edges.push_back(Json{{"residue_a", e.residue_a}, {"residue_b", e.residue_b}, {"pearson", e.pearson},
                         {"states", states}});
  }
  std::array<std::size_t, 3> counts{};
  for (PropertyState s : net.tertiles.states) ++counts[static_cast<std::size_t>(s)];
  return Json{{"schema", "rxcoord.network/1"},
              {"tertiles", Json{{"lower", net.tertiles.lower},
                                {"upper", net.tertiles.upper},
                                {"frames", Json{{"low", counts[0]}, {"mid", counts[1]}, {"high", counts[2]}}}}},
              {"nodes", nodes},
              {"edges", edges}};
}

// ---------------------------------------------------------------------------
// SVG

/// Eight evenly spaced viridis stops, interpolated linearly in RGB.
inline std::array<int, 3> viridis(double t) {
  static constexpr std::array<std::array<int, 3>, 8> kStops{{{68, 1, 84},
                                                             {70, 50, 126},
                                                             {54, 92, 141},
                                                             {39, 127, 142},
                                                             {31, 161, 135},
                                                             {74, 193, 109},
                                                             {160, 218, 57},
                                                             {253, 231, 37}}};
  if (!std::isfinite(t)) t = 0.0;
  t = std::clamp(t, 0.0, 1.0) * 7.0;
  const int i = std::min(static_cast<int>(t), 6);
  const double u = t - i;
  std::array<int, 3> rgb{};
  for (int c = 0; c < 3; ++c)
    rgb[static_cast<std::size_t>(c)] = static_cast<int>(std::lround(
        kStops[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] * (1.0 - u) +
        kStops[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(c)] * u));
  return rgb;
}

inline std::string hex_color(const std::array<int, 3>& rgb) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

namespace detail {

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Scatter plot with one <circle> per point, filled by viridis over
/// [min, max] of `color_values`.
inline std::string write_svg_scatter(const std::vector<Point2>& points, const std::vector<double>& color_values,
                                     const std::array<std::string, 3>& labels /* x, y, color */,
                                     const std::string& title = {}) {
  if (points.size() != color_values.size())
    fail(ErrorKind::LengthMismatch, "svg scatter: points and colors differ in length");
  constexpr double W = 640, H = 480, L = 70, R = 110, T = 40, B = 60;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1, cmin = 0, cmax = 1;
  if (!points.empty()) {
    xmin = xmax = points[0].x;
    ymin = ymax = points[0].y;
    for (const Point2& p : points) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
    const auto [lo, hi] = std::minmax_element(color_values.begin(), color_values.end());
    cmin = *lo;
    cmax = *hi;
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  const double crange = cmax > cmin ? cmax - cmin : 1.0;
  const auto sx = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  const auto sy = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };
  const auto f = [](double v) { return format_fixed(v, 2); };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" viewBox=\"0 0 640 480\">\n";
  out += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  if (!title.empty()) out += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" + detail::xml_escape(title) + "</text>\n";
  out += "<rect x=\"" + f(L) + "\" y=\"" + f(T) + "\" width=\"" + f(W - L - R) + "\" height=\"" + f(H - T - B) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  out += "<text x=\"" + f((L + W - R) / 2) + "\" y=\"" + f(H - 20) + "\" text-anchor=\"middle\" font-size=\"12\">" +
         detail::xml_escape(labels[0]) + "</text>\n";
  out += "<text x=\"20\" y=\"" + f((T + H - B) / 2) + "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 20 " +
         f((T + H - B) / 2) + ")\">" + detail::xml_escape(labels[1]) + "</text>\n";
  out += "<text x=\"" + f(L) + "\" y=\"" + f(H - B + 16) + "\" font-size=\"10\">" + format_fixed(xmin, 3) + "</text>\n";
  out += "<text x=\"" + f(W - R) + "\" y=\"" + f(H - B + 16) + "\" text-anchor=\"end\" font-size=\"10\">" +
         format_fixed(xmax, 3) + "</text>\n";
  out += "<text x=\"" + f(L - 4) + "\" y=\"" + f(H - B) + "\" text-anchor=\"end\" font-size=\"10\">" +
         format_fixed(ymin, 3) + "</text>\n";
  out += "<text x=\"" + f(L - 4) + "\" y=\"" + f(T + 10) + "\" text-anchor=\"end\" font-size=\"10\">" +
         format_fixed(ymax, 3) + "</text>\n";

  out += "<g stroke=\"none\" fill-opacity=\"0.8\">\n";
  for (std::size_t i = 0; i < points.size(); ++i)
    out += "<circle cx=\"" + f(sx(points[i].x)) + "\" cy=\"" + f(sy(points[i].y)) + "\" r=\"2.5\" fill=\"" +
           hex_color(viridis((color_values[i] - cmin) / crange)) + "\"/>\n";
  out += "</g>\n";

  // Color bar.
  const double bx = W - R + 30, bh = H - T - B;
  for (int s = 0; s < 32; ++s) {
    const double t0 = s / 32.0;
    out += "<rect x=\"" + f(bx) + "\" y=\"" + f(T + bh * (1.0 - t0 - 1.0 / 32)) + "\" width=\"16\" height=\"" +
           f(bh / 32 + 0.5) + "\" fill=\"" + hex_color(viridis(t0 + 0.5 / 32)) + "\"/>\n";
  }
  out += "<text x=\"" + f(bx + 20) + "\" y=\"" + f(T + 10) + "\" font-size=\"10\">" + format_fixed(cmax, 3) + "</text>\n";
  out += "<text x=\"" + f(bx + 20) + "\" y=\"" + f(H - B) + "\" font-size=\"10\">" + format_fixed(cmin, 3) + "</text>\n";
  out += "<text x=\"" + f(bx + 8) + "\" y=\"" + f(T - 8) + "\" text-anchor=\"middle\" font-size=\"11\">" + detail::xml_escape(labels[2]) +
         "</text>\n";
  out += "</svg>\n";
  return out;
}

inline std::string representation_svg(const Representation& rep, const std::vector<double>& color,
                                      const std::string& color_label, const std::string& title) {
  std::vector<Point2> pts(static_cast<std::size_t>(rep.scores.rows()));
  for (std::size_t i = 0; i < pts.size(); ++i)
    pts[i] = {rep.scores(static_cast<Eigen::Index>(i), 0), rep.scores(static_cast<Eigen::Index>(i), 1)};
  return write_svg_scatter(pts, color, {"PC1", "PC2", color_label}, title);
}

}  // namespace rxcoord

#endif  // RXCOORD_REPORT_HPP
