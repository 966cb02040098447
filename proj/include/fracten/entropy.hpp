#ifndef FRACTEN_ENTROPY_HPP
#define FRACTEN_ENTROPY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracten/core.hpp"

namespace fracten {

struct EntropyParams {
  int m = 3;                 // embedding dimension
  double r_fraction = 0.15;  // tolerance as a fraction of the series' sigma
  int tau_max = 100;         // largest coarse-graining scale

  /// Checks the parameters against a series of length n. The coarsest grain
  /// must still be long enough to host at least one template pair.
  void validate(std::size_t n) const {
    if (m < 1) raise(ErrorCode::bad_params, "entropy: m must be >= 1");
    if (!(r_fraction > 0.0) || !(r_fraction < 1.0)) {
      raise(ErrorCode::bad_params, "entropy: r_fraction must be in (0, 1)");
    }
    if (tau_max < 1) raise(ErrorCode::bad_params, "entropy: tau_max must be >= 1");
    const std::size_t coarsest = n / static_cast<std::size_t>(tau_max);
    if (coarsest < static_cast<std::size_t>(m) + 2) {
      raise(ErrorCode::too_short,
            "entropy: floor(N/tau_max) = " + std::to_string(coarsest) +
                " is below m + 2 = " + std::to_string(m + 2));
    }
  }
};

/// Template-pair match counts at embedding dimensions m and m+1. Both
/// dimensions draw their templates from the same first N-m positions, so an
/// (m+1)-match always implies an m-match and n_m1 <= n_m.
struct MatchCounts {
  std::uint64_t n_m = 0;
  std::uint64_t n_m1 = 0;
};

/// Per-scale entropy profile; index i holds the value for scale i+1.
/// Undefined entropies (a zero match count) are real results, not errors.
struct EntropyProfile {
  std::vector<std::optional<double>> entropy;
  double complexity_index = 0.0;  // sum of the defined entries
  int undefined_count = 0;

  int scale_count() const { return static_cast<int>(entropy.size()); }
};

/// Counts unordered template pairs within Chebyshev distance r at dimensions
/// m and m+1 in one pass. Candidate pairs are pruned by sorting on the first
/// component: |x_i - x_j| <= r on component 0 is necessary for any match, so
/// only pairs inside that band are compared in full. Counts are exactly those
/// of the naive all-pairs scan.
inline MatchCounts match_counts(std::span<const double> x, int m, double r) {
  if (m < 1) raise(ErrorCode::bad_params, "match_counts: m must be >= 1");
  if (!(r > 0.0)) raise(ErrorCode::bad_params, "match_counts: r must be > 0");
  const std::size_t n = x.size();
  require_min_length(n, static_cast<std::size_t>(m) + 2, "match_counts");
  const std::size_t t = n - static_cast<std::size_t>(m);

  std::vector<std::uint32_t> order(t);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return x[a] < x[b]; });

  MatchCounts counts;
  std::size_t lo = 0;
  for (std::size_t a = 1; a < t; ++a) {
    const double va = x[order[a]];
    while (va - x[order[lo]] > r) ++lo;
    for (std::size_t b = lo; b < a; ++b) {
      const std::size_t i = order[a];
      const std::size_t j = order[b];
      bool match_m = true;
      for (int k = 1; k < m; ++k) {
        if (std::abs(x[i + k] - x[j + k]) > r) {
          match_m = false;
          break;
        }
      }
      if (!match_m) continue;
      ++counts.n_m;
      if (std::abs(x[i + m] - x[j + m]) <= r) ++counts.n_m1;
    }
  }
  return counts;
}

inline MatchCounts match_counts(const Series& x, int m, double r) {
  return match_counts(std::span<const double>(x.values), m, r);
}

/// Sample entropy -ln(n_m1 / n_m); nullopt when either count is zero.
inline std::optional<double> sample_entropy(std::span<const double> x, int m, double r) {
  require_finite(x, "sample_entropy");
  const MatchCounts c = match_counts(x, m, r);
  if (c.n_m == 0 || c.n_m1 == 0) return std::nullopt;
  return -std::log(static_cast<double>(c.n_m1) / static_cast<double>(c.n_m));
}

inline std::optional<double> sample_entropy(const Series& x, int m, double r) {
  return sample_entropy(std::span<const double>(x.values), m, r);
}

namespace detail {

/// Non-overlapping window means starting at 0-based offset `start`;
/// trailing samples that do not fill a window are discarded.
inline std::vector<double> window_means(std::span<const double> x, int tau, std::size_t start) {
  const std::size_t count = (x.size() - start) / static_cast<std::size_t>(tau);
  std::vector<double> out(count);
  for (std::size_t j = 0; j < count; ++j) {
    double acc = 0.0;
    const std::size_t base = start + j * static_cast<std::size_t>(tau);
    for (int i = 0; i < tau; ++i) acc += x[base + i];
    out[j] = acc / static_cast<double>(tau);
  }
  return out;
}

}  // namespace detail

/// Coarse-grained series at scale tau: consecutive non-overlapping window
/// means, length floor(N/tau).
inline Series coarse_grain(const Series& x, int tau) {
  if (tau < 1) raise(ErrorCode::bad_params, "coarse_grain: tau must be >= 1");
  if (x.size() / static_cast<std::size_t>(tau) < 1) {
    raise(ErrorCode::too_short, "coarse_grain: fewer than tau samples");
  }
  Series out;
  out.name = x.name;
  out.values = detail::window_means(x.values, tau, 0);
  return out;
}

/// k-th offset coarse-grained series (1 <= k <= tau): window means starting
/// at sample k. The window count floor((N-k+1)/tau) keeps every window fully
/// inside the series.
inline Series rcmse_coarse_grain(const Series& x, int tau, int k) {
  if (tau < 1) raise(ErrorCode::bad_params, "rcmse_coarse_grain: tau must be >= 1");
  if (k < 1 || k > tau) {
    raise(ErrorCode::bad_params, "rcmse_coarse_grain: k must satisfy 1 <= k <= tau");
  }
  const std::size_t start = static_cast<std::size_t>(k - 1);
  if (x.size() < start + static_cast<std::size_t>(tau)) {
    raise(ErrorCode::too_short, "rcmse_coarse_grain: fewer than tau samples after the offset");
  }
  Series out;
  out.name = x.name;
  out.values = detail::window_means(x.values, tau, start);
  return out;
}

namespace detail {

/// Entropy at one scale. Refined mode sums the match counts of all tau
/// offset grains before taking the ratio; plain mode uses only the first
/// grain. Offset grains too short to host a template pair contribute zero
/// counts.
inline std::optional<double> entropy_at_scale(std::span<const double> x, int tau, int m, double r,
                                              bool refined) {
  std::uint64_t sum_m = 0;
  std::uint64_t sum_m1 = 0;
  const int k_max = refined ? tau : 1;
  for (int k = 1; k <= k_max; ++k) {
    const std::size_t start = static_cast<std::size_t>(k - 1);
    const std::size_t len = (x.size() - start) / static_cast<std::size_t>(tau);
    if (len < static_cast<std::size_t>(m) + 2) continue;
    const std::vector<double> grain = window_means(x, tau, start);
    const MatchCounts c = match_counts(grain, m, r);
    sum_m += c.n_m;
    sum_m1 += c.n_m1;
  }
  if (sum_m == 0 || sum_m1 == 0) return std::nullopt;
  return -std::log(static_cast<double>(sum_m1) / static_cast<double>(sum_m));
}

inline EntropyProfile multiscale_profile(const Series& x, const EntropyParams& params,
                                         bool refined) {
  require_finite(x.values, "entropy profile");
  params.validate(x.size());
  const double sigma = population_std(x.values);
  if (!(sigma > 0.0)) {
    raise(ErrorCode::degenerate_series, "entropy profile: series is constant (sigma = 0)");
  }
  // r is fixed from the original series' sigma and reused at every scale.
  const double r = params.r_fraction * sigma;

  EntropyProfile profile;
  profile.entropy.resize(static_cast<std::size_t>(params.tau_max));
  parallel_for_index(profile.entropy.size(), [&](std::size_t i) {
    profile.entropy[i] = entropy_at_scale(x.values, static_cast<int>(i) + 1, params.m, r, refined);
  });

  long double acc = 0.0L;
  for (const auto& e : profile.entropy) {
    if (e) {
      acc += *e;
    } else {
      ++profile.undefined_count;
    }
  }
  profile.complexity_index = static_cast<double>(acc);
  return profile;
}

}  // namespace detail

/// Refined composite multiscale sample entropy over scales 1..tau_max.
inline EntropyProfile rcmse(const Series& x, const EntropyParams& params) {
  return detail::multiscale_profile(x, params, true);
}

/// Plain (single-grain) multiscale sample entropy, kept for comparison with
/// the refined variant; it goes undefined more readily on short series.
inline EntropyProfile mse(const Series& x, const EntropyParams& params) {
  return detail::multiscale_profile(x, params, false);
}

}  // namespace fracten

#endif  // FRACTEN_ENTROPY_HPP
