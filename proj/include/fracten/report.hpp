#ifndef FRACTEN_REPORT_HPP
#define FRACTEN_REPORT_HPP

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fracten/core.hpp"
#include "fracten/entropy.hpp"
#include "fracten/ingest.hpp"
#include "fracten/mfdfa.hpp"
#include "fracten/shuffle.hpp"
#include "fracten/stats.hpp"
#include "fracten/version.hpp"

namespace fracten {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline ordered_json json_optional(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}

inline std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Parameters of a full analysis run, echoed verbatim into the report so a
/// rerun with the same inputs reproduces it bit for bit.
struct ReportParams {
  EntropyParams entropy;
  std::string entropy_method = "rcmse";  // "rcmse" or "mse"
  MfdfaParams mfdfa;
  ShuffleConfig shuffle;
  std::optional<std::size_t> histogram_bins;  // nullopt: Freedman-Diaconis
  bool run_surrogates = true;
};

/// Everything one input series produced: distribution stats, the entropy
/// profile, the multifractal spectrum, and the shuffle comparisons.
struct AnalysisReport {
  std::string input_file;
  std::string column;  // "close" or "adj_close"
  std::string series_name;
  std::size_t n_prices = 0;
  std::size_t n_returns = 0;
  std::size_t dropped_rows = 0;
  std::optional<std::pair<Date, Date>> date_range;

  ReportParams params;
  std::uint64_t seed = 0;

  DistributionStats stats;
  Histogram histogram;
  EntropyProfile entropy;
  FluctuationSurface surface;
  MultifractalSpectrum mf_spectrum;
  std::optional<SurrogateReport> sampen_shuffle;
  std::optional<SurrogateReport> width_shuffle;
};

inline ordered_json to_json(const DistributionStats& s, const std::string& name) {
  return ordered_json{{"name", name},          {"n", s.n},
                      {"mean", s.mean},        {"std_dev", s.std_dev},
                      {"skewness", s.skewness}, {"ex_kurtosis", s.ex_kurtosis}};
}

inline ordered_json to_json(const EntropyProfile& p) {
  ordered_json values = ordered_json::array();
  for (const auto& e : p.entropy) values.push_back(detail::json_optional(e));
  return ordered_json{{"scales", p.scale_count()},
                      {"entropy", std::move(values)},
                      {"complexity_index", p.complexity_index},
                      {"undefined_count", p.undefined_count}};
}

inline ordered_json to_json(const LogLogFit& fit) {
  return ordered_json{{"value", fit.slope}, {"std_error", fit.std_error}};
}

/// Compact spectrum summary; the full arrays go to CSV instead.
inline ordered_json spectrum_summary_json(const FluctuationSurface& surface,
                                          const MultifractalSpectrum& spec) {
  return ordered_json{{"hurst", to_json(spec.hurst)},
                      {"width", spec.width},
                      {"alpha_min", spec.alpha_min},
                      {"alpha_max", spec.alpha_max},
                      {"fit_range", ordered_json::array({surface.fit_range.first, surface.fit_range.second})},
                      {"floored_segments", surface.floored_segments}};
}

inline ordered_json to_json(const SurrogateReport& r) {
  return ordered_json{{"metric", r.metric_name},
                      {"original", detail::json_optional(r.original_value)},
                      {"n_shuffles", r.shuffled_values.size()},
                      {"shuffled_mean", detail::json_optional(r.shuffled_mean)},
                      {"shuffled_std", detail::json_optional(r.shuffled_std)},
                      {"undefined_count", r.undefined_count}};
}

inline ordered_json params_json(const ReportParams& p) {
  ordered_json mf{{"poly_order", p.mfdfa.poly_order},
                  {"s_grid", p.mfdfa.s_grid},
                  {"q_grid", p.mfdfa.q_grid},
                  {"variance_floor", p.mfdfa.variance_floor}};
  if (p.mfdfa.fit_range) {
    mf["fit_range"] = ordered_json::array({p.mfdfa.fit_range->first, p.mfdfa.fit_range->second});
  } else {
    mf["fit_range"] = nullptr;
  }
  ordered_json out{{"entropy",
                    ordered_json{{"m", p.entropy.m},
                                 {"r_fraction", p.entropy.r_fraction},
                                 {"max_scale", p.entropy.tau_max},
                                 {"method", p.entropy_method}}},
                   {"mfdfa", std::move(mf)},
                   {"shuffle",
                    ordered_json{{"n_shuffles", p.shuffle.n_shuffles},
                                 {"base_seed", p.shuffle.base_seed}}}};
  out["histogram_bins"] = p.histogram_bins ? ordered_json(*p.histogram_bins) : ordered_json(nullptr);
  return out;
}

inline ordered_json report_to_json(const AnalysisReport& r) {
  ordered_json input{{"file", r.input_file},
                     {"column", r.column},
                     {"n_prices", r.n_prices},
                     {"n_returns", r.n_returns},
                     {"dropped_rows", r.dropped_rows}};
  if (r.date_range) {
    input["date_range"] = ordered_json::array(
        {r.date_range->first.to_string(), r.date_range->second.to_string()});
  } else {
    input["date_range"] = nullptr;
  }
  ordered_json out{{"tool_version", kVersion},
                   {"input", std::move(input)},
                   {"params", params_json(r.params)},
                   {"seed", r.seed},
                   {"stats", to_json(r.stats, r.series_name)},
                   {"entropy", to_json(r.entropy)},
                   {"mfdfa", spectrum_summary_json(r.surface, r.mf_spectrum)}};
  ordered_json surrogates = ordered_json::object();
  if (r.sampen_shuffle) surrogates["sampen"] = to_json(*r.sampen_shuffle);
  if (r.width_shuffle) surrogates["mfdfa_width"] = to_json(*r.width_shuffle);
  out["surrogates"] = std::move(surrogates);
  return out;
}

/// Full analysis pipeline on a return series: stats, entropy profile,
/// MF-DFA and (optionally) both shuffle tests. File metadata on the returned
/// report is left for the caller to fill in.
inline AnalysisReport analyze(const Series& returns, const ReportParams& params,
                              std::uint64_t seed) {
  AnalysisReport report;
  report.series_name = returns.name;
  report.n_returns = returns.size();
  report.params = params;
  report.seed = seed;

  report.stats = distribution_stats(returns);
  report.histogram = histogram_pdf(returns, params.histogram_bins);
  report.entropy = params.entropy_method == "mse" ? mse(returns, params.entropy)
                                                  : rcmse(returns, params.entropy);
  report.surface = mfdfa(returns, params.mfdfa);
  report.mf_spectrum = spectrum(report.surface);

  if (params.run_surrogates) {
    ShuffleConfig cfg = params.shuffle;
    cfg.base_seed = seed;
    report.sampen_shuffle = entropy_shuffle_test(returns, params.entropy, cfg);
    report.width_shuffle = spectrum_shuffle_test(returns, params.mfdfa, cfg);
  }
  if (returns.has_labels()) {
    report.date_range = std::make_pair(returns.labels.front(), returns.labels.back());
  }
  return report;
}

// ---- plot-data CSV emitters ------------------------------------------------

inline std::string entropy_profile_csv(const EntropyProfile& p) {
  std::string out = "scale,entropy,defined\n";
  for (std::size_t i = 0; i < p.entropy.size(); ++i) {
    out += std::to_string(i + 1);
    out += ',';
    if (p.entropy[i]) {
      out += detail::format_value(*p.entropy[i]);
      out += ",1\n";
    } else {
      out += ",0\n";
    }
  }
  return out;
}

inline std::string fluctuation_csv(const FluctuationSurface& surface) {
  std::string out = "q,s,F\n";
  for (std::size_t qi = 0; qi < surface.q.size(); ++qi) {
    for (std::size_t si = 0; si < surface.s.size(); ++si) {
      out += detail::format_value(surface.q[qi]);
      out += ',';
      out += std::to_string(surface.s[si]);
      out += ',';
      out += detail::format_value(surface.F[qi][si]);
      out += '\n';
    }
  }
  return out;
}

inline std::string spectrum_csv(const FluctuationSurface& surface,
                                const MultifractalSpectrum& spec) {
  std::string out = "q,h,h_stderr,tau,alpha,f_alpha\n";
  for (std::size_t i = 0; i < spec.q.size(); ++i) {
    out += detail::format_value(spec.q[i]);
    out += ',';
    out += detail::format_value(surface.h[i].slope);
    out += ',';
    out += detail::format_value(surface.h[i].std_error);
    out += ',';
    out += detail::format_value(spec.tau[i]);
    out += ',';
    out += detail::format_value(spec.alpha[i]);
    out += ',';
    out += detail::format_value(spec.f_alpha[i]);
    out += '\n';
  }
  return out;
}

inline std::string histogram_csv(const Histogram& h) {
  std::string out = "bin_left,bin_right,density\n";
  for (std::size_t i = 0; i < h.densities.size(); ++i) {
    out += detail::format_value(h.bin_edges[i]);
    out += ',';
    out += detail::format_value(h.bin_edges[i + 1]);
    out += ',';
    out += detail::format_value(h.densities[i]);
    out += '\n';
  }
  return out;
}

inline std::string surrogate_csv(const SurrogateReport& r) {
  std::string out = "realization,value\n";
  for (std::size_t i = 0; i < r.shuffled_values.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    if (r.shuffled_values[i]) out += detail::format_value(*r.shuffled_values[i]);
    out += '\n';
  }
  return out;
}

}  // namespace fracten

#endif  // FRACTEN_REPORT_HPP
