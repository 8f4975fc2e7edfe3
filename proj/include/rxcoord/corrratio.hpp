#ifndef RXCOORD_CORRRATIO_HPP
#define RXCOORD_CORRRATIO_HPP

// Correlation ratio of a property against PC1:
//
//   C_r = S * R^2 / sqrt(V)
//
// PC1 is cut into equal-width sections; the per-section property means are
// regressed on the per-section PC1 means (S = |slope|, R^2 of that fit), and V
// is the mean within-section population variance of the property.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rxcoord/error.hpp"
#include "rxcoord/kernel.hpp"
#include "rxcoord/types.hpp"

namespace rxcoord {

struct CorrRatioConfig {
  int n_bins = 20;
  int min_bin_count = 3;
  bool standardize = true;
  double epsilon_v = 1e-12;

  void validate() const {
    if (n_bins < 2) fail(ErrorKind::InvalidArgument, "n_bins must be >= 2");
    if (min_bin_count < 2) fail(ErrorKind::InvalidArgument, "min_bin_count must be >= 2");
    if (!(epsilon_v > 0.0)) fail(ErrorKind::InvalidArgument, "epsilon_v must be positive");
  }
};

struct BinStat {
  int index = 0;
  int count = 0;
  double pc1_mean = 0.0;
  double property_mean = 0.0;
  double property_variance = 0.0;
};

struct CorrRatioResult {
  double s = 0.0;   // |slope|
  double r2 = 0.0;
  double v = 0.0;
  double cr = 0.0;
  int bins_used = 0;
  bool degenerate = true;
  double slope = 0.0;  // signed, in the (possibly standardized) units of the fit
  double intercept = 0.0;
  std::vector<BinStat> bins;  // retained sections only
};

namespace detail {

inline std::vector<double> zscore(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / n);
  std::vector<double> out(x.size(), 0.0);
  if (sd > 0.0)
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - mean) / sd;
  return out;
}

}  // namespace detail

inline CorrRatioResult correlation_ratio(std::span<const double> pc1, std::span<const double> property,
                                         const CorrRatioConfig& cfg = {}) {
  cfg.validate();
  if (pc1.size() != property.size())
    fail(ErrorKind::LengthMismatch, "pc1 has " + std::to_string(pc1.size()) + " values, property has " +
                                        std::to_string(property.size()));
  if (pc1.size() < static_cast<std::size_t>(cfg.n_bins))
    fail(ErrorKind::InvalidArgument, "need at least n_bins = " + std::to_string(cfg.n_bins) + " frames, got " +
                                         std::to_string(pc1.size()));

  std::vector<double> xs(pc1.begin(), pc1.end());
  std::vector<double> ys(property.begin(), property.end());
  if (cfg.standardize) {
    xs = detail::zscore(pc1);
    ys = detail::zscore(property);
  }

  const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
  const double lo = *lo_it, range = *hi_it - *lo_it;
  const int nb = cfg.n_bins;

  std::vector<int> count(nb, 0);
  std::vector<double> sum_x(nb, 0.0), sum_y(nb, 0.0);
  std::vector<int> bin_of(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    int b = 0;
    if (range > 0.0) b = std::clamp(static_cast<int>(std::floor((xs[i] - lo) / range * nb)), 0, nb - 1);
    bin_of[i] = b;
    ++count[b];
    sum_x[b] += xs[i];
    sum_y[b] += ys[i];
  }
  std::vector<double> ss_y(nb, 0.0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const int b = bin_of[i];
    const double d = ys[i] - sum_y[b] / count[b];
    ss_y[b] += d * d;
  }

  CorrRatioResult out;
  for (int b = 0; b < nb; ++b) {
    if (count[b] < cfg.min_bin_count) continue;
    out.bins.push_back({b, count[b], sum_x[b] / count[b], sum_y[b] / count[b], ss_y[b] / count[b]});
  }
  out.bins_used = static_cast<int>(out.bins.size());
  if (out.bins_used == 0) return out;

  for (const BinStat& bin : out.bins) out.v += bin.property_variance;
  out.v /= out.bins_used;

  if (out.bins_used >= 2) {
    const double m = out.bins_used;
    double mx = 0.0, my = 0.0;
    for (const BinStat& bin : out.bins) {
      mx += bin.pc1_mean;
      my += bin.property_mean;
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const BinStat& bin : out.bins) {
      const double dx = bin.pc1_mean - mx, dy = bin.property_mean - my;
      sxx += dx * dx;
      sxy += dx * dy;
      syy += dy * dy;
    }
    out.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    out.intercept = my - out.slope * mx;
    out.s = std::abs(out.slope);
    out.r2 = (sxx > 0.0 && syy > 0.0) ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 0.0;
  }
  out.cr = out.s * out.r2 / std::sqrt(std::max(out.v, cfg.epsilon_v));
  out.degenerate = out.v < cfg.epsilon_v || out.bins_used < 2;
  return out;
}

inline CorrRatioResult correlation_ratio(std::span<const double> pc1, const PropertySeries& property,
                                         const CorrRatioConfig& cfg = {}) {
  return correlation_ratio(pc1, std::span<const double>(property.values), cfg);
}

/// Divides every C_r by the largest non-degenerate one. Degenerate entries
/// are reported as 0.
inline std::vector<std::pair<LambdaTriple, double>> normalize_grid(
    const std::vector<std::pair<LambdaTriple, CorrRatioResult>>& results) {
  double best = -1.0;
  for (const auto& [lambda, r] : results)
    if (!r.degenerate) best = std::max(best, r.cr);
  if (best < 0.0) fail(ErrorKind::AllDegenerate, "every correlation ratio is degenerate");
  if (best == 0.0) fail(ErrorKind::AllDegenerate, "largest correlation ratio is zero");
  std::vector<std::pair<LambdaTriple, double>> out;
  out.reserve(results.size());
  for (const auto& [lambda, r] : results) out.emplace_back(lambda, r.degenerate ? 0.0 : r.cr / best);
  return out;
}

}  // namespace rxcoord

#endif  // RXCOORD_CORRRATIO_HPP
