#ifndef FRACTEN_MFDFA_HPP
#define FRACTEN_MFDFA_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fracten/core.hpp"

namespace fracten {

struct MfdfaParams {
  std::vector<int> s_grid;      // window sizes, strictly increasing
  std::vector<double> q_grid;   // moment orders, strictly increasing; 0 allowed
  int poly_order = 1;           // detrending polynomial degree (DFA1, DFA2, ...)
  double variance_floor = 1e-30;
  std::optional<std::pair<int, int>> fit_range;  // inclusive s bounds for the h(q) fits

  void validate(std::size_t n) const {
    if (poly_order < 1 || poly_order > 8) {
      raise(ErrorCode::bad_params, "mfdfa: poly_order must be in [1, 8]");
    }
    if (s_grid.empty()) raise(ErrorCode::bad_params, "mfdfa: empty scale grid");
    for (std::size_t i = 1; i < s_grid.size(); ++i) {
      if (s_grid[i] <= s_grid[i - 1]) {
        raise(ErrorCode::bad_params, "mfdfa: scale grid must be strictly increasing");
      }
    }
    if (s_grid.front() < poly_order + 2) {
      raise(ErrorCode::bad_params,
            "mfdfa: smallest scale must be >= poly_order + 2 = " + std::to_string(poly_order + 2));
    }
    if (static_cast<std::size_t>(s_grid.back()) > n / 4) {
      raise(ErrorCode::bad_params, "mfdfa: largest scale exceeds N/4 = " + std::to_string(n / 4));
    }
    if (q_grid.empty()) raise(ErrorCode::bad_params, "mfdfa: empty q grid");
    for (std::size_t i = 1; i < q_grid.size(); ++i) {
      if (q_grid[i] <= q_grid[i - 1]) {
        raise(ErrorCode::bad_params, "mfdfa: q grid must be strictly increasing");
      }
    }
    if (!(variance_floor > 0.0)) {
      raise(ErrorCode::bad_params, "mfdfa: variance_floor must be > 0");
    }
    if (fit_range && fit_range->first > fit_range->second) {
      raise(ErrorCode::bad_params, "mfdfa: fit range lower bound exceeds upper bound");
    }
  }

  /// Default grids: 20 log-spaced scales from max(16, poly_order + 4) to
  /// N/4, and q from -5 to 5 in steps of 0.5.
  static MfdfaParams defaults(std::size_t n, int poly_order = 1) {
    MfdfaParams p;
    p.poly_order = poly_order;
    p.s_grid = default_s_grid(n, poly_order);
    p.q_grid = default_q_grid();
    return p;
  }

  static std::vector<int> default_s_grid(std::size_t n, int poly_order = 1, int count = 20) {
    const int s_min = std::max(16, poly_order + 4);
    const int s_max = static_cast<int>(n / 4);
    if (s_max < s_min) {
      raise(ErrorCode::too_short, "mfdfa: series too short for the default scale grid");
    }
    std::vector<int> grid;
    const double log_lo = std::log(static_cast<double>(s_min));
    const double log_hi = std::log(static_cast<double>(s_max));
    for (int i = 0; i < count; ++i) {
      const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
      const int s = static_cast<int>(std::lround(std::exp(log_lo + f * (log_hi - log_lo))));
      if (grid.empty() || s > grid.back()) grid.push_back(s);
    }
    return grid;
  }

  static std::vector<double> default_q_grid(double q_min = -5.0, double q_max = 5.0,
                                            double q_step = 0.5) {
    if (!(q_step > 0.0) || !(q_max >= q_min)) {
      raise(ErrorCode::bad_params, "mfdfa: bad q grid bounds");
    }
    std::vector<double> grid;
    const int steps = static_cast<int>(std::lround((q_max - q_min) / q_step));
    for (int i = 0; i <= steps; ++i) {
      double q = q_min + q_step * i;
      if (std::abs(q) < 1e-12) q = 0.0;  // snap so the q = 0 branch is taken exactly
      grid.push_back(q);
    }
    return grid;
  }
};

struct LogLogFit {
  double slope = 0.0;
  double std_error = 0.0;
};

/// Fluctuation values F_q(s) over the (q, s) grid with per-q log-log fits.
struct FluctuationSurface {
  std::vector<double> q;
  std::vector<int> s;
  std::vector<std::vector<double>> F;  // F[qi][si]
  std::vector<LogLogFit> h;            // generalized Hurst exponent per q
  std::pair<int, int> fit_range{0, 0};  // s bounds actually used in the fits
  std::size_t floored_segments = 0;     // segment variances below the floor
};

struct MultifractalSpectrum {
  std::vector<double> q;
  std::vector<double> tau;      // mass exponents q*h(q) - 1
  std::vector<double> alpha;    // Holder exponents dtau/dq
  std::vector<double> f_alpha;  // singularity spectrum q*alpha - tau
  double width = 0.0;           // alpha_max - alpha_min
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  LogLogFit hurst;              // h at the grid point nearest q = 2
};

/// Profile: cumulative sum of deviations from the mean. Its last element is
/// zero up to rounding.
inline Series profile(const Series& x) {
  require_min_length(x.size(), 2, "profile");
  require_finite(x.values, "profile");
  const double m = mean(x.values);
  Series out;
  out.name = x.name;
  out.values.resize(x.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += x.values[i] - m;
    out.values[i] = acc;
  }
  return out;
}

namespace detail {

inline constexpr int kMaxPolyCoef = 9;

/// Mean squared residual of a least-squares polynomial fit within one
/// segment. Positions are mapped to [-1, 1] and the normal equations solved
/// by Gaussian elimination; degrees stay small so this is well conditioned.
inline double detrend_variance(std::span<const double> seg, int order) {
  const std::size_t s = seg.size();
  const int nc = order + 1;
  double power_sums[2 * kMaxPolyCoef - 1] = {0.0};
  double rhs[kMaxPolyCoef] = {0.0};
  const double scale = s > 1 ? 2.0 / static_cast<double>(s - 1) : 0.0;
  for (std::size_t i = 0; i < s; ++i) {
    const double u = scale * static_cast<double>(i) - 1.0;
    double up = 1.0;
    for (int p = 0; p < 2 * nc - 1; ++p) {
      power_sums[p] += up;
      if (p < nc) rhs[p] += up * seg[i];
      up *= u;
    }
  }

  double g[kMaxPolyCoef][kMaxPolyCoef];
  double b[kMaxPolyCoef];
  for (int a = 0; a < nc; ++a) {
    for (int c = 0; c < nc; ++c) g[a][c] = power_sums[a + c];
    b[a] = rhs[a];
  }
  // Gaussian elimination with partial pivoting.
  for (int col = 0; col < nc; ++col) {
    int pivot = col;
    for (int row = col + 1; row < nc; ++row) {
      if (std::abs(g[row][col]) > std::abs(g[pivot][col])) pivot = row;
    }
    if (pivot != col) {
      for (int c = 0; c < nc; ++c) std::swap(g[col][c], g[pivot][c]);
      std::swap(b[col], b[pivot]);
    }
    const double diag = g[col][col];
    for (int row = col + 1; row < nc; ++row) {
      const double factor = g[row][col] / diag;
      for (int c = col; c < nc; ++c) g[row][c] -= factor * g[col][c];
      b[row] -= factor * b[col];
    }
  }
  double coef[kMaxPolyCoef];
  for (int row = nc - 1; row >= 0; --row) {
    double acc = b[row];
    for (int c = row + 1; c < nc; ++c) acc -= g[row][c] * coef[c];
    coef[row] = acc / g[row][row];
  }

  long double rss = 0.0L;
  for (std::size_t i = 0; i < s; ++i) {
    const double u = scale * static_cast<double>(i) - 1.0;
    double fit = coef[nc - 1];
    for (int c = nc - 2; c >= 0; --c) fit = fit * u + coef[c];
    const long double resid = seg[i] - fit;
    rss += resid * resid;
  }
  return static_cast<double>(rss / static_cast<long double>(s));
}

inline LogLogFit fit_loglog(std::span<const double> log_s, std::span<const double> log_f) {
  const std::size_t n = log_s.size();
  const double mx = mean(log_s);
  const double my = mean(log_f);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = log_s[i] - mx;
    sxx += dx * dx;
    sxy += dx * (log_f[i] - my);
  }
  LogLogFit fit;
  fit.slope = sxy / sxx;
  const double intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = log_f[i] - (intercept + fit.slope * log_s[i]);
    sse += e * e;
  }
  fit.std_error = n > 2 ? std::sqrt(sse / static_cast<double>(n - 2) / sxx) : 0.0;
  return fit;
}

}  // namespace detail

/// Per-segment detrended variances at window size s: floor(N/s) segments
/// tiling from the start, then the same number tiling from the end inward,
/// 2*N_s values in total.
inline std::vector<double> segment_variances(std::span<const double> profile_values, int s,
                                             int poly_order) {
  if (poly_order < 1) raise(ErrorCode::bad_params, "segment_variances: poly_order must be >= 1");
  if (s < poly_order + 2) {
    raise(ErrorCode::bad_params, "segment_variances: window must have more points than fit coefficients");
  }
  const std::size_t n = profile_values.size();
  const std::size_t n_s = n / static_cast<std::size_t>(s);
  if (n_s < 1) raise(ErrorCode::too_short, "segment_variances: window larger than the series");

  std::vector<double> variances;
  variances.reserve(2 * n_s);
  for (std::size_t v = 0; v < n_s; ++v) {
    variances.push_back(
        detail::detrend_variance(profile_values.subspan(v * s, static_cast<std::size_t>(s)), poly_order));
  }
  for (std::size_t w = 1; w <= n_s; ++w) {
    variances.push_back(detail::detrend_variance(
        profile_values.subspan(n - w * s, static_cast<std::size_t>(s)), poly_order));
  }
  return variances;
}

/// q-th order fluctuation over a set of segment variances. q = 0 uses the
/// logarithmic average; variances below the floor are lifted to it so
/// negative moments and logs stay finite.
inline double fluctuation(std::span<const double> variances, double q,
                          double variance_floor = 1e-30) {
  if (variances.empty()) raise(ErrorCode::bad_params, "fluctuation: no variances");
  bool any_positive = false;
  for (double v : variances) {
    if (v > 0.0) {
      any_positive = true;
      break;
    }
  }
  if (!any_positive) {
    raise(ErrorCode::all_zero_variances, "fluctuation: every segment variance is zero");
  }
  const auto count = static_cast<long double>(variances.size());
  if (q == 0.0) {
    long double acc = 0.0L;
    for (double v : variances) acc += std::log(std::max(v, variance_floor));
    return std::exp(static_cast<double>(0.5L * acc / count));
  }
  long double acc = 0.0L;
  for (double v : variances) acc += std::pow(std::max(v, variance_floor), q / 2.0);
  return std::pow(static_cast<double>(acc / count), 1.0 / q);
}

/// Full MF-DFA: profile, per-scale detrended segment variances (computed
/// once and reused across all q), the F_q(s) surface, and per-q log-log
/// fits h(q) over the requested fit range.
inline FluctuationSurface mfdfa(const Series& x, const MfdfaParams& params) {
  require_min_length(x.size(), 8, "mfdfa");
  params.validate(x.size());
  const Series prof = profile(x);

  FluctuationSurface surface;
  surface.q = params.q_grid;
  surface.s = params.s_grid;
  surface.F.assign(params.q_grid.size(), std::vector<double>(params.s_grid.size(), 0.0));

  std::vector<std::size_t> floored_per_scale(params.s_grid.size(), 0);
  parallel_for_index(params.s_grid.size(), [&](std::size_t si) {
    const auto variances = segment_variances(prof.values, params.s_grid[si], params.poly_order);
    std::size_t floored = 0;
    for (double v : variances) {
      if (v < params.variance_floor) ++floored;
    }
    floored_per_scale[si] = floored;
    for (std::size_t qi = 0; qi < params.q_grid.size(); ++qi) {
      surface.F[qi][si] = fluctuation(variances, params.q_grid[qi], params.variance_floor);
    }
  });
  for (std::size_t c : floored_per_scale) surface.floored_segments += c;

  std::vector<std::size_t> fit_idx;
  for (std::size_t si = 0; si < params.s_grid.size(); ++si) {
    const int s = params.s_grid[si];
    if (!params.fit_range || (s >= params.fit_range->first && s <= params.fit_range->second)) {
      fit_idx.push_back(si);
    }
  }
  if (fit_idx.size() < 3) {
    raise(ErrorCode::bad_params, "mfdfa: fit range must contain at least 3 scales");
  }
  surface.fit_range = {params.s_grid[fit_idx.front()], params.s_grid[fit_idx.back()]};

  std::vector<double> log_s(fit_idx.size());
  for (std::size_t i = 0; i < fit_idx.size(); ++i) {
    log_s[i] = std::log(static_cast<double>(params.s_grid[fit_idx[i]]));
  }
  surface.h.resize(params.q_grid.size());
  std::vector<double> log_f(fit_idx.size());
  for (std::size_t qi = 0; qi < params.q_grid.size(); ++qi) {
    for (std::size_t i = 0; i < fit_idx.size(); ++i) {
      log_f[i] = std::log(surface.F[qi][fit_idx[i]]);
    }
    surface.h[qi] = detail::fit_loglog(log_s, log_f);
  }
  return surface;
}

/// Mass exponents, Holder exponents and singularity spectrum from the fitted
/// h(q). alpha comes from central finite differences of tau(q) on the grid
/// (one-sided at the ends).
inline MultifractalSpectrum spectrum(const FluctuationSurface& surface) {
  const std::size_t nq = surface.q.size();
  if (nq < 5) {
    raise(ErrorCode::insufficient_q_points, "spectrum: need at least 5 q points");
  }
  MultifractalSpectrum spec;
  spec.q = surface.q;
  spec.tau.resize(nq);
  for (std::size_t i = 0; i < nq; ++i) {
    spec.tau[i] = surface.q[i] * surface.h[i].slope - 1.0;
  }
  spec.alpha.resize(nq);
  spec.alpha.front() = (spec.tau[1] - spec.tau[0]) / (surface.q[1] - surface.q[0]);
  spec.alpha.back() = (spec.tau[nq - 1] - spec.tau[nq - 2]) / (surface.q[nq - 1] - surface.q[nq - 2]);
  for (std::size_t i = 1; i + 1 < nq; ++i) {
    spec.alpha[i] = (spec.tau[i + 1] - spec.tau[i - 1]) / (surface.q[i + 1] - surface.q[i - 1]);
  }
  spec.f_alpha.resize(nq);
  for (std::size_t i = 0; i < nq; ++i) {
    spec.f_alpha[i] = surface.q[i] * spec.alpha[i] - spec.tau[i];
  }
  const auto [lo_it, hi_it] = std::minmax_element(spec.alpha.begin(), spec.alpha.end());
  spec.alpha_min = *lo_it;
  spec.alpha_max = *hi_it;
  spec.width = spec.alpha_max - spec.alpha_min;

  std::size_t nearest = 0;
  for (std::size_t i = 1; i < nq; ++i) {
    if (std::abs(surface.q[i] - 2.0) < std::abs(surface.q[nearest] - 2.0)) nearest = i;
  }
  spec.hurst = surface.h[nearest];
  return spec;
}

}  // namespace fracten

#endif  // FRACTEN_MFDFA_HPP
