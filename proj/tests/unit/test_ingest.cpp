#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fracten/ingest.hpp"
#include "fracten/rng.hpp"
#include "support/test_support.hpp"

using namespace fracten;

namespace {

const std::string kHeader = "Date,Open,High,Low,Close,Adj Close,Volume\n";

std::string yahoo_csv(const std::vector<std::string>& rows) {
  std::string out = kHeader;
  for (const auto& r : rows) out += r + "\n";
  return out;
}

}  // namespace

TEST_CASE("parse_csv reads and sorts valid rows") {
  const auto result = parse_csv(yahoo_csv({
      "2024-01-03,3,4,2,3.5,3.4,300",
      "2024-01-01,1,2,0.5,1.5,1.4,100",
      "2024-01-02,2,3,1.5,2.5,2.4,200",
  }));
  REQUIRE(result.records.size() == 3);
  CHECK(result.dropped_rows == 0);
  CHECK(result.records[0].date == Date{2024, 1, 1});
  CHECK(result.records[1].date == Date{2024, 1, 2});
  CHECK(result.records[2].date == Date{2024, 1, 3});
  CHECK(result.records[0].close == 1.5);
  CHECK(result.records[2].volume == 300);
  CHECK(result.records[1].adj_close == 2.4);
}

TEST_CASE("parse_csv drops rows with missing or bad close values") {
  const auto result = parse_csv(yahoo_csv({
      "2024-01-01,1,2,0.5,1.5,1.4,100",
      "2024-01-02,2,3,1.5,null,2.4,200",
      "2024-01-03,3,4,2,,3.4,300",
      "2024-01-04,3,4,2,NaN,3.4,300",
      "2024-01-05,3,4,2,-1.0,3.4,300",
      "2024-01-06,3,4,2,4.5,4.4,400",
  }));
  REQUIRE(result.records.size() == 2);
  CHECK(result.dropped_rows == 4);
}

TEST_CASE("parse_csv keeps rows whose optional fields are bad") {
  const auto result = parse_csv(yahoo_csv({"2024-01-01,null,2,0.5,1.5,,bogus"}));
  REQUIRE(result.records.size() == 1);
  CHECK_FALSE(result.records[0].open.has_value());
  CHECK_FALSE(result.records[0].adj_close.has_value());
  CHECK_FALSE(result.records[0].volume.has_value());
  CHECK(result.records[0].high == 2.0);
}

TEST_CASE("parse_csv rejects duplicate dates") {
  CHECK_THROWS_MATCHES(parse_csv(yahoo_csv({
                           "2024-01-01,1,2,0.5,1.5,1.4,100",
                           "2024-01-01,2,3,1.5,2.5,2.4,200",
                       })),
                       Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::duplicate_date;
                       }));
}

TEST_CASE("parse_csv rejects a header without the required columns") {
  CHECK_THROWS_MATCHES(parse_csv("Date,Open\n2024-01-01,1\n"), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::bad_header;
                       }));
}

TEST_CASE("parse_csv rejects input with no valid rows") {
  CHECK_THROWS_MATCHES(parse_csv(kHeader), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == ErrorCode::empty_input; }));
  CHECK_THROWS_MATCHES(parse_csv(yahoo_csv({"2024-01-01,1,2,0.5,null,1.4,100"})), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == ErrorCode::empty_input; }));
}

TEST_CASE("parse_csv output is independent of row order") {
  std::vector<std::string> rows;
  SplitMix64 rng(99);
  for (int i = 0; i < 25; ++i) {
    const double close = 10.0 + static_cast<double>(i);
    rows.push_back("2024-02-" + (i < 9 ? "0" + std::to_string(i + 1) : std::to_string(i + 1)) +
                   ",1,2,0.5," + std::to_string(close) + ",1,100");
  }
  const auto baseline = parse_csv(yahoo_csv(rows));
  for (int trial = 0; trial < 5; ++trial) {
    for (std::size_t i = rows.size() - 1; i > 0; --i) {
      std::swap(rows[i], rows[rng.bounded(i + 1)]);
    }
    const auto shuffled = parse_csv(yahoo_csv(rows));
    REQUIRE(shuffled.records.size() == baseline.records.size());
    for (std::size_t i = 0; i < baseline.records.size(); ++i) {
      CHECK(shuffled.records[i].date == baseline.records[i].date);
      CHECK(shuffled.records[i].close == baseline.records[i].close);
    }
  }
}

TEST_CASE("column map can source the price from the adjusted close") {
  const auto result = parse_csv(yahoo_csv({"2024-01-01,1,2,0.5,1.5,1.4,100"}),
                                ColumnMap::yahoo_adjusted());
  REQUIRE(result.records.size() == 1);
  CHECK(result.records[0].close == 1.4);
}

TEST_CASE("log_returns computes ln price ratios") {
  Series prices;
  prices.values = {100.0, 110.0};
  const Series r = log_returns(prices);
  REQUIRE(r.size() == 1);
  CHECK_THAT(r.values[0], Catch::Matchers::WithinAbs(std::log(1.1), 1e-15));

  Series flat;
  flat.values = {5.0, 5.0, 5.0};
  const Series rf = log_returns(flat);
  REQUIRE(rf.size() == 2);
  CHECK(rf.values[0] == 0.0);
  CHECK(rf.values[1] == 0.0);
}

TEST_CASE("log_returns shifts labels to the later date") {
  Series prices;
  prices.values = {1.0, 2.0, 3.0};
  prices.labels = {Date{2024, 1, 1}, Date{2024, 1, 2}, Date{2024, 1, 3}};
  const Series r = log_returns(prices);
  REQUIRE(r.labels.size() == 2);
  CHECK(r.labels[0] == Date{2024, 1, 2});
  CHECK(r.labels[1] == Date{2024, 1, 3});
}

TEST_CASE("log_returns errors") {
  Series one;
  one.values = {1.0};
  CHECK_THROWS_MATCHES(log_returns(one), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == ErrorCode::too_short; }));
  Series bad;
  bad.values = {1.0, -2.0, 3.0};
  CHECK_THROWS_MATCHES(log_returns(bad), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::non_positive_price;
                       }));
}

TEST_CASE("prices reconstruct from first price and log returns") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Series prices;
    prices.values.resize(50);
    double p = 50.0 + 100.0 * rng.uniform01();
    for (auto& v : prices.values) {
      p *= std::exp(0.1 * (rng.uniform01() - 0.5));
      v = p;
    }
    const Series r = log_returns(prices);
    double rebuilt = prices.values[0];
    for (std::size_t i = 0; i < r.size(); ++i) {
      rebuilt *= std::exp(r.values[i]);
      CHECK_THAT(rebuilt, Catch::Matchers::WithinRel(prices.values[i + 1], 1e-12));
    }
  }
}

TEST_CASE("log_returns is invariant under price rescaling") {
  const Series prices = [&] {
    Series s;
    s.values = testsupport::uniform_values(200, 11);
    for (auto& v : s.values) v += 0.5;  // keep strictly positive
    return s;
  }();
  Series scaled = prices;
  for (auto& v : scaled.values) v *= 3.25;
  const Series a = log_returns(prices);
  const Series b = log_returns(scaled);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK_THAT(a.values[i], Catch::Matchers::WithinAbs(b.values[i], 1e-12));
  }
}

TEST_CASE("series CSV dump round-trips exactly") {
  Series s;
  s.name = "r";
  s.values = testsupport::gaussian_values(100, 3);
  s.labels.resize(100);
  for (int i = 0; i < 100; ++i) s.labels[i] = Date{2020, 1 + i / 28, 1 + i % 28};
  const std::string csv = series_to_csv(s);
  const Series back = series_from_csv(csv, "r");
  REQUIRE(back.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(back.values[i] == s.values[i]);
    CHECK(back.labels[i] == s.labels[i]);
  }
}

TEST_CASE("date parsing is strict ISO-8601") {
  CHECK(Date::parse("2024-02-29").has_value());   // leap year
  CHECK_FALSE(Date::parse("2023-02-29").has_value());
  CHECK_FALSE(Date::parse("2024-13-01").has_value());
  CHECK_FALSE(Date::parse("2024-00-10").has_value());
  CHECK_FALSE(Date::parse("2024-1-1").has_value());
  CHECK_FALSE(Date::parse("20240101").has_value());
  CHECK(Date{2024, 1, 2} < Date{2024, 1, 10});
  CHECK(Date{2023, 12, 31} < Date{2024, 1, 1});
}
