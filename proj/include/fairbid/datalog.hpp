#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fairbid/distributions.hpp"

namespace fairbid {

/// One bid-log row: coarse 15-minute period index, opaque advertiser and
/// keyword tokens, positive bid.
struct BidRecord {
  long bucket = 0;
  std::string advertiser_id;
  std::string keyword_id;
  double bid = 0.0;
};

struct ParseReport {
  long rows_ok = 0;
  long rows_skipped = 0;
  std::vector<std::pair<long, std::string>> errors;  // (line number, message)
};

/// Parsed bid log, indexed by keyword with per-keyword bucket ordering.
class BidLog {
 public:
  /// Streaming CSV parse; header must be `bucket,advertiser_id,keyword_id,bid`.
  /// In lenient mode malformed rows are reported and skipped; otherwise the
  /// first bad row throws.
  static BidLog parse(std::istream& in, bool lenient = true,
                      ParseReport* report = nullptr);

  void serialize(std::ostream& out) const;

  std::size_t size() const { return records_.size(); }
  const std::vector<BidRecord>& records() const { return records_; }
  std::vector<std::string> keywords() const;

  /// Empirical distribution of all bids for `keyword` with bucket in
  /// [bucket_lo, bucket_hi]. Needs at least 2 records.
  BidDistribution empirical_cdf_for(const std::string& keyword, long bucket_lo,
                                    long bucket_hi) const;

  /// `count` bids drawn uniformly with replacement from one bucket.
  std::vector<double> sample_auction_bids(const std::string& keyword, long bucket,
                                          int count, Rng& rng) const;

  std::pair<long, long> bucket_range(const std::string& keyword) const;

 private:
  std::vector<BidRecord> records_;                       // original row order
  std::map<std::string, std::vector<std::size_t>> by_keyword_;  // sorted by bucket
  const std::vector<std::size_t>& keyword_rows(const std::string& keyword) const;
};

/// Two-sample Kolmogorov-Smirnov statistic sup_x |F1(x) - F2(x)| for two
/// empirical distributions, evaluated on the union of sample points.
double stationarity_distance(const BidDistribution& d1, const BidDistribution& d2);

/// Deterministic log-normal bid log in the parseable CSV format.
void write_synthetic_log(std::ostream& out, const std::string& keyword, double mu,
                         double sigma_sq, long buckets, long per_bucket,
                         uint64_t seed);

/// Plain log-normal sample vector (the synthetic stand-in used where the
/// experiments need an empirical distribution without a file).
std::vector<double> lognormal_samples(std::size_t n, double mu, double sigma_sq,
                                      uint64_t seed);

}  // namespace fairbid
