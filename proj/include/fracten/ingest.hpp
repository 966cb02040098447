#ifndef FRACTEN_INGEST_HPP
#define FRACTEN_INGEST_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracten/core.hpp"

namespace fracten {

/// One daily OHLCV row. `close` is the price the analyses run on; everything
/// else is carried along when present.
struct PriceRecord {
  Date date;
  double close = 0.0;
  std::optional<double> open;
  std::optional<double> high;
  std::optional<double> low;
  std::optional<double> adj_close;
  std::optional<long long> volume;
};

/// Maps CSV header names to column roles. `close` names the column used as
/// the price source, so switching to adjusted close is just a remap.
struct ColumnMap {
  std::string date = "Date";
  std::string close = "Close";
  std::string open = "Open";
  std::string high = "High";
  std::string low = "Low";
  std::string adj_close = "Adj Close";
  std::string volume = "Volume";

  static ColumnMap yahoo() { return ColumnMap{}; }

  static ColumnMap yahoo_adjusted() {
    ColumnMap m;
    m.close = "Adj Close";
    return m;
  }
};

struct ParseResult {
  std::vector<PriceRecord> records;
  std::size_t dropped_rows = 0;  // rows without a usable date or close value
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

/// Splits one CSV line on commas; double quotes protect embedded commas.
inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

inline bool is_missing_token(std::string_view s) {
  return s.empty() || iequals(s, "null") || iequals(s, "nan") || iequals(s, "na");
}

/// Parses a full numeric token; missing-value sentinels and partial parses
/// yield nullopt rather than a best-effort number.
inline std::optional<double> parse_double(std::string_view raw) {
  const std::string_view s = trim(raw);
  if (is_missing_token(s)) return std::nullopt;
  std::string buf(s);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::optional<long long> parse_volume(std::string_view raw) {
  const std::string_view s = trim(raw);
  if (is_missing_token(s)) return std::nullopt;
  std::string buf(s);
  char* end = nullptr;
  const long long v = std::strtoll(buf.c_str(), &end, 10);
  if (end != buf.c_str() + buf.size() || v < 0) return std::nullopt;
  return v;
}

inline int find_column(const std::vector<std::string>& header, std::string_view name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (iequals(trim(header[i]), name)) return static_cast<int>(i);
  }
  return -1;
}

inline std::optional<double> field_at(const std::vector<std::string>& fields, int idx) {
  if (idx < 0 || idx >= static_cast<int>(fields.size())) return std::nullopt;
  return parse_double(fields[idx]);
}

}  // namespace detail

/// Parses OHLCV CSV text. Rows whose date or close value is missing or
/// unparsable (or whose close is not strictly positive) are dropped and
/// counted; the survivors are sorted by date. Two rows sharing a date is an
/// error, as is a header lacking the date or close column.
inline ParseResult parse_csv(std::string_view bytes, const ColumnMap& columns = ColumnMap::yahoo()) {
  std::size_t pos = 0;
  auto next_line = [&]() -> std::optional<std::string_view> {
    if (pos >= bytes.size()) return std::nullopt;
    const std::size_t nl = bytes.find('\n', pos);
    std::string_view line = bytes.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? bytes.size() : nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
  };

  std::optional<std::string_view> header_line;
  while ((header_line = next_line()) && detail::trim(*header_line).empty()) {
  }
  if (!header_line) raise(ErrorCode::empty_input, "parse_csv: no header row");

  const auto header = detail::split_csv_line(*header_line);
  const int date_idx = detail::find_column(header, columns.date);
  const int close_idx = detail::find_column(header, columns.close);
  if (date_idx < 0) raise(ErrorCode::bad_header, "parse_csv: missing column '" + columns.date + "'");
  if (close_idx < 0) raise(ErrorCode::bad_header, "parse_csv: missing column '" + columns.close + "'");
  const int open_idx = detail::find_column(header, columns.open);
  const int high_idx = detail::find_column(header, columns.high);
  const int low_idx = detail::find_column(header, columns.low);
  const int adj_idx = detail::find_column(header, columns.adj_close);
  const int vol_idx = detail::find_column(header, columns.volume);

  ParseResult result;
  while (auto line = next_line()) {
    if (detail::trim(*line).empty()) continue;
    const auto fields = detail::split_csv_line(*line);

    std::optional<Date> date;
    if (date_idx < static_cast<int>(fields.size())) {
      date = Date::parse(detail::trim(fields[date_idx]));
    }
    const std::optional<double> close = detail::field_at(fields, close_idx);
    if (!date || !close || *close <= 0.0) {
      ++result.dropped_rows;
      continue;
    }

    PriceRecord rec;
    rec.date = *date;
    rec.close = *close;
    rec.open = detail::field_at(fields, open_idx);
    rec.high = detail::field_at(fields, high_idx);
    rec.low = detail::field_at(fields, low_idx);
    rec.adj_close = detail::field_at(fields, adj_idx);
    if (vol_idx >= 0 && vol_idx < static_cast<int>(fields.size())) {
      rec.volume = detail::parse_volume(fields[vol_idx]);
    }
    result.records.push_back(std::move(rec));
  }

  if (result.records.empty()) raise(ErrorCode::empty_input, "parse_csv: no valid rows");

  std::stable_sort(result.records.begin(), result.records.end(),
                   [](const PriceRecord& a, const PriceRecord& b) { return a.date < b.date; });
  for (std::size_t i = 1; i < result.records.size(); ++i) {
    if (result.records[i].date == result.records[i - 1].date) {
      raise(ErrorCode::duplicate_date,
            "parse_csv: duplicate date " + result.records[i].date.to_string());
    }
  }
  return result;
}

/// Extracts the close-price series (with date labels) from parsed records.
inline Series close_series(const std::vector<PriceRecord>& records, std::string name) {
  if (records.empty()) raise(ErrorCode::empty_input, "close_series: no records");
  Series s;
  s.name = std::move(name);
  s.values.reserve(records.size());
  s.labels.reserve(records.size());
  for (const auto& r : records) {
    s.values.push_back(r.close);
    s.labels.push_back(r.date);
  }
  return s;
}

/// Log returns: element j is ln(P_{j+1} / P_j). Labels, when present, shift
/// to the later date of each ratio.
inline Series log_returns(const Series& prices) {
  require_min_length(prices.size(), 2, "log_returns");
  for (std::size_t i = 0; i < prices.values.size(); ++i) {
    const double p = prices.values[i];
    if (!(p > 0.0) || !std::isfinite(p)) {
      raise(ErrorCode::non_positive_price,
            "log_returns: non-positive price at index " + std::to_string(i));
    }
  }
  Series out;
  out.name = prices.name.empty() ? "returns" : prices.name + "_returns";
  out.values.reserve(prices.size() - 1);
  for (std::size_t i = 1; i < prices.size(); ++i) {
    out.values.push_back(std::log(prices.values[i] / prices.values[i - 1]));
  }
  if (prices.has_labels()) {
    out.labels.assign(prices.labels.begin() + 1, prices.labels.end());
  }
  return out;
}

/// Two-column `date,value` dump of a series; full `%.17g` precision so the
/// file round-trips exactly.
inline std::string series_to_csv(const Series& s) {
  std::string out = "date,value\n";
  char buf[40];
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.has_labels()) {
      out += s.labels[i].to_string();
    }
    std::snprintf(buf, sizeof buf, "%.17g", s.values[i]);
    out += ',';
    out += buf;
    out += '\n';
  }
  return out;
}

/// Reads a two-column `date,value` CSV back into a Series (the inverse of
/// series_to_csv). The date column may be empty for unlabeled series.
inline Series series_from_csv(std::string_view bytes, std::string name) {
  Series s;
  s.name = std::move(name);
  std::size_t pos = 0;
  bool header_seen = false;
  bool any_label = false;
  while (pos < bytes.size()) {
    const std::size_t nl = bytes.find('\n', pos);
    std::string_view line = bytes.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? bytes.size() : nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (detail::trim(line).empty()) continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != 2) raise(ErrorCode::bad_header, "series_from_csv: expected 2 columns");
    const auto value = detail::parse_double(fields[1]);
    if (!value) raise(ErrorCode::bad_params, "series_from_csv: bad value '" + fields[1] + "'");
    const std::string_view date_text = detail::trim(fields[0]);
    if (!date_text.empty()) {
      const auto date = Date::parse(date_text);
      if (!date) raise(ErrorCode::bad_params, "series_from_csv: bad date '" + fields[0] + "'");
      s.labels.push_back(*date);
      any_label = true;
    }
    s.values.push_back(*value);
  }
  if (s.values.empty()) raise(ErrorCode::empty_input, "series_from_csv: no rows");
  if (any_label && s.labels.size() != s.values.size()) {
    raise(ErrorCode::bad_params, "series_from_csv: mixed labeled and unlabeled rows");
  }
  return s;
}

}  // namespace fracten

#endif  // FRACTEN_INGEST_HPP
