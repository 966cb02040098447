#ifndef FRACTEN_CORE_HPP
#define FRACTEN_CORE_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace fracten {

enum class ErrorCode {
  bad_header,
  duplicate_date,
  empty_input,
  too_short,
  non_positive_price,
  degenerate_series,
  all_zero_variances,
  insufficient_q_points,
  bad_params,
  io_error,
};

/// Distinguishes problems with the input data or arguments from numerical
/// failures of an analysis stage (the CLI maps them to exit codes 1 and 2).
constexpr bool is_input_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::degenerate_series:
    case ErrorCode::all_zero_variances:
    case ErrorCode::insufficient_q_points:
      return false;
    default:
      return true;
  }
}

constexpr const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::bad_header: return "bad_header";
    case ErrorCode::duplicate_date: return "duplicate_date";
    case ErrorCode::empty_input: return "empty_input";
    case ErrorCode::too_short: return "too_short";
    case ErrorCode::non_positive_price: return "non_positive_price";
    case ErrorCode::degenerate_series: return "degenerate_series";
    case ErrorCode::all_zero_variances: return "all_zero_variances";
    case ErrorCode::insufficient_q_points: return "insufficient_q_points";
    case ErrorCode::bad_params: return "bad_params";
    case ErrorCode::io_error: return "io_error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

/// Calendar date at day resolution; ordering is chronological.
struct Date {
  int year = 0;
  int month = 0;
  int day = 0;

  auto operator<=>(const Date&) const = default;

  bool valid() const {
    static constexpr int days_in[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month < 1 || month > 12 || day < 1) return false;
    int dmax = days_in[month - 1];
    const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    if (month == 2 && leap) dmax = 29;
    return day <= dmax;
  }

  /// Parses strict ISO-8601 `YYYY-MM-DD`; rejects malformed or impossible dates.
  static std::optional<Date> parse(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    auto number = [&](std::size_t pos, std::size_t len, int& out) {
      const char* first = text.data() + pos;
      auto [ptr, ec] = std::from_chars(first, first + len, out);
      return ec == std::errc{} && ptr == first + len;
    };
    Date d;
    if (!number(0, 4, d.year) || !number(5, 2, d.month) || !number(8, 2, d.day)) return std::nullopt;
    if (!d.valid()) return std::nullopt;
    return d;
  }

  std::string to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
  }
};

/// Ordered sequence of real samples with optional per-sample date labels.
struct Series {
  std::string name;
  std::vector<double> values;
  std::vector<Date> labels;  // empty, or one label per value

  std::size_t size() const { return values.size(); }
  bool has_labels() const { return !labels.empty(); }
};

inline void require_min_length(std::size_t n, std::size_t min_len, const char* op) {
  if (n < min_len) {
    raise(ErrorCode::too_short,
          std::string(op) + ": series has " + std::to_string(n) + " samples, needs at least " +
              std::to_string(min_len));
  }
}

inline void require_finite(std::span<const double> values, const char* op) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      raise(ErrorCode::bad_params,
            std::string(op) + ": non-finite value at index " + std::to_string(i));
    }
  }
}

inline double mean(std::span<const double> x) {
  long double acc = 0.0L;
  for (double v : x) acc += v;
  return static_cast<double>(acc / static_cast<long double>(x.size()));
}

/// Population variance (divide by n). All higher-moment code in this library
/// uses the population convention throughout.
inline double population_variance(std::span<const double> x) {
  const double m = mean(x);
  long double acc = 0.0L;
  for (double v : x) {
    const long double d = v - m;
    acc += d * d;
  }
  return static_cast<double>(acc / static_cast<long double>(x.size()));
}

inline double population_std(std::span<const double> x) {
  return std::sqrt(population_variance(x));
}

namespace detail {
inline bool& inside_parallel_region() {
  thread_local bool inside = false;
  return inside;
}
}  // namespace detail

/// Runs fn(i) for i in [0, n). Tasks must be independent and write only to
/// their own slots, so results are identical no matter how work is split.
/// Nested calls run serially rather than oversubscribing.
inline void parallel_for_index(std::size_t n, const std::function<void(std::size_t)>& fn,
                               unsigned n_threads = 0) {
  if (n == 0) return;
  if (n_threads == 0) n_threads = std::thread::hardware_concurrency();
  if (detail::inside_parallel_region() || n_threads <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, n));
  std::vector<std::thread> workers;
  workers.reserve(n_threads);
  std::mutex err_mutex;
  std::exception_ptr first_error;
  for (unsigned t = 0; t < n_threads; ++t) {
    workers.emplace_back([&, t] {
      detail::inside_parallel_region() = true;
      try {
        for (std::size_t i = t; i < n; i += n_threads) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace fracten

#endif  // FRACTEN_CORE_HPP
