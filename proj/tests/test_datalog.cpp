#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fairbid/datalog.hpp"

using namespace fairbid;

namespace {

const char* kTinyLog =
    "bucket,advertiser_id,keyword_id,bid\n"
    "0,a1,kw1,0.5\n"
    "0,a2,kw1,1.0\n"
    "3,a7,kw2,0.41\n"
    "1,a3,kw1,3.0\n";

BidLog parse_text(const std::string& text, bool lenient = true,
                  ParseReport* rep = nullptr) {
  std::istringstream in(text);
  return BidLog::parse(in, lenient, rep);
}

// invert the piecewise-linear cdf by bisection
double cdf_median(const BidDistribution& d) {
  double lo = 0.0, hi = d.samples().back();
  for (int i = 0; i < 200; ++i) {
    double mid = (lo + hi) / 2.0;
    (d.cdf(mid) < 0.5 ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

TEST_CASE("a header-only file parses to an empty log") {
  BidLog log = parse_text("bucket,advertiser_id,keyword_id,bid\n");
  CHECK(log.size() == 0);
  CHECK(log.keywords().empty());
}

TEST_CASE("rows parse into records with buckets and bids") {
  BidLog log = parse_text(kTinyLog);
  CHECK(log.size() == 4);
  const BidRecord& r = log.records()[2];
  CHECK(r.bucket == 3);
  CHECK(r.advertiser_id == "a7");
  CHECK(r.keyword_id == "kw2");
  CHECK(r.bid == doctest::Approx(0.41));
}

TEST_CASE("bad rows are reported with line numbers and skipped when lenient") {
  std::string text =
      "bucket,advertiser_id,keyword_id,bid\n"
      "0,a1,kw1,0.5\n"
      "1,a2,kw1,-1\n"      // non-positive bid
      "x,a3,kw1,0.2\n"     // bad bucket
      "2,a4,kw1,0.3\n";
  ParseReport rep;
  BidLog log = parse_text(text, true, &rep);
  CHECK(log.size() == 2);
  CHECK(rep.rows_ok == 2);
  CHECK(rep.rows_skipped == 2);
  REQUIRE(rep.errors.size() == 2);
  CHECK(rep.errors[0].first == 3);
  CHECK(rep.errors[1].first == 4);
  CHECK_THROWS_AS(parse_text(text, false), std::invalid_argument);
}

TEST_CASE("a missing header is a format error") {
  CHECK_THROWS_AS(parse_text("time,who,what,much\n1,a,b,0.5\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_text(""), std::invalid_argument);
}

TEST_CASE("empirical_cdf_for gathers a keyword's bids in a bucket range") {
  BidLog log = parse_text(
      "bucket,advertiser_id,keyword_id,bid\n"
      "0,a1,kw1,1.0\n"
      "1,a2,kw1,3.0\n"
      "9,a3,kw1,100.0\n");
  BidDistribution d = log.empirical_cdf_for("kw1", 0, 1);
  CHECK(d.cdf(2.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(log.empirical_cdf_for("kw1", 5, 6), std::runtime_error);
  CHECK_THROWS_AS(log.empirical_cdf_for("nope", 0, 9), std::out_of_range);
}

TEST_CASE("empirical_cdf_for is permutation invariant") {
  std::string a =
      "bucket,advertiser_id,keyword_id,bid\n"
      "0,a1,kw1,1.0\n1,a2,kw1,2.0\n0,a3,kw1,0.5\n";
  std::string b =
      "bucket,advertiser_id,keyword_id,bid\n"
      "0,a3,kw1,0.5\n0,a1,kw1,1.0\n1,a2,kw1,2.0\n";
  BidDistribution da = parse_text(a).empirical_cdf_for("kw1", 0, 1);
  BidDistribution db = parse_text(b).empirical_cdf_for("kw1", 0, 1);
  for (double x : {0.1, 0.6, 1.1, 1.9, 2.5})
    CHECK(da.cdf(x) == db.cdf(x));
}

TEST_CASE("synthetic two-day window recovers the generating median within 2%") {
  std::ostringstream out;
  write_synthetic_log(out, "2", -2.8, 0.7, 192, 60, 99);  // 192 buckets = 2 days
  BidLog log = parse_text(out.str());
  BidDistribution d = log.empirical_cdf_for("2", 0, 191);
  CHECK(cdf_median(d) == doctest::Approx(std::exp(-2.8)).epsilon(0.02));
}

TEST_CASE("a generated log with no buckets is header-only") {
  std::ostringstream out;
  write_synthetic_log(out, "kw", -2.8, 0.7, 0, 50, 1);
  BidLog log = parse_text(out.str());
  CHECK(log.size() == 0);
}

TEST_CASE("a hundred thousand generated records pin the median") {
  std::ostringstream out;
  write_synthetic_log(out, "kw", -2.8, 0.7, 100, 1000, 3);
  BidLog log = parse_text(out.str());
  REQUIRE(log.size() == 100000);
  BidDistribution d = log.empirical_cdf_for("kw", 0, 99);
  CHECK(cdf_median(d) == doctest::Approx(std::exp(-2.8)).epsilon(0.01));
}

TEST_CASE("stationarity distance: identical samples give zero, disjoint give one") {
  BidDistribution a = BidDistribution::empirical({0.1, 0.4, 1.0});
  BidDistribution b = BidDistribution::empirical({0.1, 0.4, 1.0});
  CHECK(stationarity_distance(a, b) == 0.0);
  BidDistribution lo = BidDistribution::empirical({0.0, 1.0});
  BidDistribution hi = BidDistribution::empirical({2.0, 3.0});
  CHECK(stationarity_distance(lo, hi) == 1.0);
  CHECK_THROWS_AS(
      stationarity_distance(lo, BidDistribution::log_normal(-2.8, 0.7)),
      std::invalid_argument);
}

TEST_CASE("stationarity distance is symmetric and within [0,1]") {
  Rng rng(12);
  std::vector<double> xs(400), ys(300);
  for (double& x : xs) x = rng.lognormal(-2.8, 0.83);
  for (double& y : ys) y = rng.lognormal(-3.0, 0.83);
  BidDistribution a = BidDistribution::empirical(xs);
  BidDistribution b = BidDistribution::empirical(ys);
  double d1 = stationarity_distance(a, b);
  double d2 = stationarity_distance(b, a);
  CHECK(d1 == d2);
  CHECK(d1 >= 0.0);
  CHECK(d1 <= 1.0);
}

TEST_CASE("two halves of one stream look stationary") {
  std::ostringstream out;
  write_synthetic_log(out, "kw", -2.8, 0.7, 100, 100, 5);
  BidLog log = parse_text(out.str());
  BidDistribution first = log.empirical_cdf_for("kw", 0, 49);
  BidDistribution second = log.empirical_cdf_for("kw", 50, 99);
  CHECK(stationarity_distance(first, second) < 0.05);
}

TEST_CASE("sample_auction_bids draws with replacement from one bucket") {
  BidLog log = parse_text(
      "bucket,advertiser_id,keyword_id,bid\n"
      "5,a1,kw1,0.7\n");
  Rng rng(1);
  std::vector<double> bids = log.sample_auction_bids("kw1", 5, 3, rng);
  REQUIRE(bids.size() == 3);
  for (double b : bids) CHECK(b == 0.7);
  CHECK_THROWS_AS(log.sample_auction_bids("kw1", 6, 1, rng), std::runtime_error);
}

TEST_CASE("sample_auction_bids delivers alpha-1 bids deterministically") {
  std::ostringstream out;
  write_synthetic_log(out, "kw", -2.8, 0.7, 4, 25, 77);
  BidLog log = parse_text(out.str());
  Rng a(42), b(42);
  std::vector<double> s1 = log.sample_auction_bids("kw", 2, 9, a);
  std::vector<double> s2 = log.sample_auction_bids("kw", 2, 9, b);
  CHECK(s1.size() == 9);
  CHECK(s1 == s2);
}

TEST_CASE("serialize(parse(x)) reproduces the accepted rows") {
  std::string text =
      "bucket,advertiser_id,keyword_id,bid\n"
      "0,a1,kw1,0.5\n"
      "1,bad,row\n"
      "3,a7,kw2,0.41\n";
  BidLog log = parse_text(text);
  std::ostringstream out;
  log.serialize(out);
  BidLog again = parse_text(out.str());
  REQUIRE(again.size() == log.size());
  for (std::size_t i = 0; i < log.size(); ++i) {
    CHECK(again.records()[i].bucket == log.records()[i].bucket);
    CHECK(again.records()[i].advertiser_id == log.records()[i].advertiser_id);
    CHECK(again.records()[i].keyword_id == log.records()[i].keyword_id);
    CHECK(again.records()[i].bid == log.records()[i].bid);
  }
}
