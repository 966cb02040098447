#ifndef FRACTEN_SHUFFLE_HPP
#define FRACTEN_SHUFFLE_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fracten/core.hpp"
#include "fracten/entropy.hpp"
#include "fracten/mfdfa.hpp"
#include "fracten/rng.hpp"

namespace fracten {

struct ShuffleConfig {
  int n_shuffles = 100;
  std::uint64_t base_seed = 0;

  void validate() const {
    if (n_shuffles < 1) raise(ErrorCode::bad_params, "shuffle: n_shuffles must be >= 1");
  }
};

/// One metric evaluated on the original series and on a batch of shuffled
/// surrogates. Mean and standard deviation cover the defined realizations
/// only; undefined ones are counted.
struct SurrogateReport {
  std::string metric_name;
  std::optional<double> original_value;
  std::vector<std::optional<double>> shuffled_values;
  std::optional<double> shuffled_mean;
  std::optional<double> shuffled_std;  // population convention
  int undefined_count = 0;
};

/// Uniform random permutation via Fisher-Yates driven by SplitMix64. The
/// same seed always yields the same permutation. Date labels are dropped:
/// a shuffled sample no longer belongs to its original date.
inline Series shuffle(const Series& x, std::uint64_t seed) {
  require_min_length(x.size(), 1, "shuffle");
  Series out;
  out.name = x.name;
  out.values = x.values;
  SplitMix64 rng(seed);
  for (std::size_t i = out.values.size() - 1; i > 0; --i) {
    const std::uint64_t j = rng.bounded(i + 1);
    std::swap(out.values[i], out.values[j]);
  }
  return out;
}

namespace detail {

template <typename Metric>
SurrogateReport surrogate_test(const Series& x, const ShuffleConfig& cfg, std::string metric_name,
                               Metric&& metric) {
  cfg.validate();
  SurrogateReport report;
  report.metric_name = std::move(metric_name);
  report.original_value = metric(x);
  report.shuffled_values.resize(static_cast<std::size_t>(cfg.n_shuffles));
  parallel_for_index(report.shuffled_values.size(), [&](std::size_t i) {
    const Series surrogate = shuffle(x, realization_seed(cfg.base_seed, static_cast<int>(i)));
    report.shuffled_values[i] = metric(surrogate);
  });

  long double acc = 0.0L;
  std::size_t defined = 0;
  for (const auto& v : report.shuffled_values) {
    if (v) {
      acc += *v;
      ++defined;
    } else {
      ++report.undefined_count;
    }
  }
  if (defined > 0) {
    const double mu = static_cast<double>(acc / static_cast<long double>(defined));
    long double ss = 0.0L;
    for (const auto& v : report.shuffled_values) {
      if (v) {
        const long double d = *v - mu;
        ss += d * d;
      }
    }
    report.shuffled_mean = mu;
    report.shuffled_std = std::sqrt(static_cast<double>(ss / static_cast<long double>(defined)));
  }
  return report;
}

}  // namespace detail

/// Sample entropy before and after shuffling. The tolerance r comes from the
/// original series' sigma and is reused for every surrogate (shuffling
/// preserves sigma exactly, so this is also the surrogates' own tolerance).
inline SurrogateReport entropy_shuffle_test(const Series& x, const EntropyParams& params,
                                            const ShuffleConfig& cfg) {
  require_finite(x.values, "entropy_shuffle_test");
  require_min_length(x.size(), static_cast<std::size_t>(params.m) + 2, "entropy_shuffle_test");
  const double sigma = population_std(x.values);
  if (!(sigma > 0.0)) {
    raise(ErrorCode::degenerate_series, "entropy_shuffle_test: series is constant (sigma = 0)");
  }
  const double r = params.r_fraction * sigma;
  const int m = params.m;
  return detail::surrogate_test(x, cfg, "sampen", [m, r](const Series& s) {
    return sample_entropy(s, m, r);
  });
}

/// Singularity-spectrum width before and after shuffling.
inline SurrogateReport spectrum_shuffle_test(const Series& x, const MfdfaParams& params,
                                             const ShuffleConfig& cfg) {
  require_finite(x.values, "spectrum_shuffle_test");
  params.validate(x.size());
  return detail::surrogate_test(x, cfg, "mfdfa-width", [&params](const Series& s) {
    return std::optional<double>(spectrum(mfdfa(s, params)).width);
  });
}

}  // namespace fracten

#endif  // FRACTEN_SHUFFLE_HPP
