#ifndef FRACTEN_TEST_SUPPORT_HPP
#define FRACTEN_TEST_SUPPORT_HPP

// Deterministic series generators and independent oracles for the test
// suites. The oracles here are deliberately naive (straight double loops,
// no pruning, each embedding dimension scanned from scratch) so they share
// no code path with the library implementations they check.

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracten/core.hpp"
#include "fracten/entropy.hpp"
#include "fracten/rng.hpp"

namespace testsupport {

inline std::vector<double> uniform_values(std::size_t n, std::uint64_t seed) {
  fracten::SplitMix64 rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = rng.uniform01();
  return out;
}

inline fracten::Series uniform_series(std::size_t n, std::uint64_t seed,
                                      std::string name = "uniform") {
  fracten::Series s;
  s.name = std::move(name);
  s.values = uniform_values(n, seed);
  return s;
}

/// Standard normal draws via Box-Muller (one draw per u1/u2 pair).
inline std::vector<double> gaussian_values(std::size_t n, std::uint64_t seed) {
  fracten::SplitMix64 rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) {
    const double u1 = rng.uniform01_open_low();
    const double u2 = rng.uniform01();
    v = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  return out;
}

inline fracten::Series gaussian_series(std::size_t n, std::uint64_t seed,
                                       std::string name = "gauss") {
  fracten::Series s;
  s.name = std::move(name);
  s.values = gaussian_values(n, seed);
  return s;
}

/// Deterministic binomial multifractal series of length 2^levels: sample i
/// carries weight p^popcount(i) * (1-p)^(levels - popcount(i)).
inline fracten::Series binomial_cascade(int levels, double p) {
  fracten::Series s;
  s.name = "cascade";
  const std::size_t n = std::size_t{1} << levels;
  s.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int ones = std::popcount(i);
    s.values[i] = std::pow(p, ones) * std::pow(1.0 - p, levels - ones);
  }
  return s;
}

inline fracten::Series sine_series(std::size_t n, double step = 0.1) {
  fracten::Series s;
  s.name = "sine";
  s.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.values[i] = std::sin(step * static_cast<double>(i));
  return s;
}

// ---- closed-form binomial cascade exponents (q != 0) -----------------------

inline double cascade_h(double q, double p) {
  return 1.0 / q - std::log2(std::pow(p, q) + std::pow(1.0 - p, q)) / q;
}

inline double cascade_alpha(double q, double p) {
  const double a = std::pow(p, q);
  const double b = std::pow(1.0 - p, q);
  return -(a * std::log(p) + b * std::log(1.0 - p)) / ((a + b) * std::numbers::ln2);
}

inline double cascade_width(double q_min, double q_max, double p) {
  return cascade_alpha(q_min, p) - cascade_alpha(q_max, p);
}

// ---- naive O(N^2) match-count oracle ----------------------------------------

/// Counts unordered pairs among the first `t` templates whose first `len`
/// components all lie within r (Chebyshev).
inline std::uint64_t naive_vector_matches(std::span<const double> x, std::size_t t, int len,
                                          double r) {
  std::uint64_t count = 0;
  for (std::size_t i = 0; i + 1 < t; ++i) {
    for (std::size_t j = i + 1; j < t; ++j) {
      bool ok = true;
      for (int k = 0; k < len; ++k) {
        if (std::abs(x[i + k] - x[j + k]) > r) {
          ok = false;
          break;
        }
      }
      if (ok) ++count;
    }
  }
  return count;
}

inline fracten::MatchCounts naive_match_counts(std::span<const double> x, int m, double r) {
  const std::size_t t = x.size() - static_cast<std::size_t>(m);
  return {naive_vector_matches(x, t, m, r), naive_vector_matches(x, t, m + 1, r)};
}

inline std::optional<double> naive_sample_entropy(std::span<const double> x, int m, double r) {
  const fracten::MatchCounts c = naive_match_counts(x, m, r);
  if (c.n_m == 0 || c.n_m1 == 0) return std::nullopt;
  return -std::log(static_cast<double>(c.n_m1) / static_cast<double>(c.n_m));
}

/// Literal per-offset RCMSE at one scale: builds each offset grain by direct
/// window averaging and sums naive match counts over the offsets.
inline std::optional<double> naive_rcmse_scale(const std::vector<double>& x, int tau, int m,
                                               double r) {
  std::uint64_t sum_m = 0;
  std::uint64_t sum_m1 = 0;
  for (int k = 1; k <= tau; ++k) {
    const std::size_t usable = x.size() - static_cast<std::size_t>(k - 1);
    const std::size_t len = usable / static_cast<std::size_t>(tau);
    if (len < static_cast<std::size_t>(m) + 2) continue;
    std::vector<double> grain(len);
    for (std::size_t j = 0; j < len; ++j) {
      double acc = 0.0;
      for (int i = 0; i < tau; ++i) {
        acc += x[static_cast<std::size_t>(k - 1) + j * static_cast<std::size_t>(tau) + i];
      }
      grain[j] = acc / tau;
    }
    const fracten::MatchCounts c = naive_match_counts(grain, m, r);
    sum_m += c.n_m;
    sum_m1 += c.n_m1;
  }
  if (sum_m == 0 || sum_m1 == 0) return std::nullopt;
  return -std::log(static_cast<double>(sum_m1) / static_cast<double>(sum_m));
}

}  // namespace testsupport

#endif  // FRACTEN_TEST_SUPPORT_HPP
