#ifndef FRACTEN_STATS_HPP
#define FRACTEN_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fracten/core.hpp"

namespace fracten {

struct DistributionStats {
  double mean = 0.0;
  double std_dev = 0.0;
  double skewness = 0.0;
  double ex_kurtosis = 0.0;
  std::size_t n = 0;
};

/// Equal-width histogram normalized so the densities integrate to one.
struct Histogram {
  std::vector<double> bin_edges;  // B + 1 ascending edges
  std::vector<double> densities;  // B non-negative densities
};

/// k-th central moment with the population convention (divide by n).
inline double central_moment(std::span<const double> x, int k) {
  if (k < 2 || k > 4) raise(ErrorCode::bad_params, "central_moment: order must be 2, 3 or 4");
  require_min_length(x.size(), 1, "central_moment");
  const double m = mean(x);
  long double acc = 0.0L;
  for (double v : x) {
    const long double d = v - m;
    long double p = d * d;
    if (k >= 3) p *= d;
    if (k == 4) p *= d;
    acc += p;
  }
  return static_cast<double>(acc / static_cast<long double>(x.size()));
}

inline double central_moment(const Series& x, int k) {
  return central_moment(std::span<const double>(x.values), k);
}

/// Skewness mu3/sigma^3 and excess kurtosis mu4/sigma^4 - 3, population
/// moments throughout. A constant series has no shape to describe and is
/// rejected rather than returning NaNs.
inline DistributionStats distribution_stats(std::span<const double> x) {
  require_min_length(x.size(), 2, "distribution_stats");
  DistributionStats out;
  out.n = x.size();
  out.mean = mean(x);
  const double m2 = central_moment(x, 2);
  out.std_dev = std::sqrt(m2);
  if (out.std_dev <= 0.0) {
    raise(ErrorCode::degenerate_series, "distribution_stats: series is constant (sigma = 0)");
  }
  const double m3 = central_moment(x, 3);
  const double m4 = central_moment(x, 4);
  out.skewness = m3 / (m2 * out.std_dev);
  out.ex_kurtosis = m4 / (m2 * m2) - 3.0;
  return out;
}

inline DistributionStats distribution_stats(const Series& x) {
  return distribution_stats(std::span<const double>(x.values));
}

namespace detail {

/// Quantile with linear interpolation between order statistics.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

/// Freedman-Diaconis bin count, clamped below at 10. Falls back to the
/// minimum when the IQR is zero (heavily discrete data).
inline std::size_t fd_bin_count(std::span<const double> x, double lo, double hi) {
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  if (iqr <= 0.0) return 10;
  const double width = 2.0 * iqr / std::cbrt(static_cast<double>(x.size()));
  const double count = std::ceil((hi - lo) / width);
  if (!(count > 10.0)) return 10;
  return static_cast<std::size_t>(count);
}

}  // namespace detail

/// Histogram-based PDF estimate over [min, max]. When `bins` is omitted the
/// bin count comes from the Freedman-Diaconis rule (minimum 10).
inline Histogram histogram_pdf(std::span<const double> x, std::optional<std::size_t> bins = {}) {
  require_min_length(x.size(), 2, "histogram_pdf");
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) {
    raise(ErrorCode::degenerate_series, "histogram_pdf: series is constant (sigma = 0)");
  }
  std::size_t b;
  if (bins) {
    if (*bins < 1) raise(ErrorCode::bad_params, "histogram_pdf: bins must be >= 1");
    b = *bins;
  } else {
    b = detail::fd_bin_count(x, lo, hi);
  }

  const double width = (hi - lo) / static_cast<double>(b);
  std::vector<std::size_t> counts(b, 0);
  for (double v : x) {
    auto idx = static_cast<std::size_t>((v - lo) / width);
    if (idx >= b) idx = b - 1;  // v == max lands in the top bin
    ++counts[idx];
  }

  Histogram h;
  h.bin_edges.resize(b + 1);
  for (std::size_t i = 0; i <= b; ++i) {
    h.bin_edges[i] = lo + width * static_cast<double>(i);
  }
  h.bin_edges.back() = hi;
  h.densities.resize(b);
  const double norm = static_cast<double>(x.size()) * width;
  for (std::size_t i = 0; i < b; ++i) {
    h.densities[i] = static_cast<double>(counts[i]) / norm;
  }
  return h;
}

inline Histogram histogram_pdf(const Series& x, std::optional<std::size_t> bins = {}) {
  return histogram_pdf(std::span<const double>(x.values), bins);
}

}  // namespace fracten

#endif  // FRACTEN_STATS_HPP
