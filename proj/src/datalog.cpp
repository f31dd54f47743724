#include "fairbid/datalog.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fairbid {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool split4(const std::string& line, std::string out[4]) {
  std::size_t start = 0;
  for (int f = 0; f < 3; ++f) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) return false;
    out[f] = line.substr(start, comma - start);
    start = comma + 1;
  }
  if (line.find(',', start) != std::string::npos) return false;
  out[3] = line.substr(start);
  return true;
}

constexpr const char* kHeader = "bucket,advertiser_id,keyword_id,bid";

}  // namespace

BidLog BidLog::parse(std::istream& in, bool lenient, ParseReport* report) {
  ParseReport local;
  ParseReport& rep = report ? *report : local;

  std::string line;
  if (!std::getline(in, line) || trim(line) != kHeader)
    throw std::invalid_argument("bid log: missing or malformed header (expected '" +
                                std::string(kHeader) + "')");

  BidLog log;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty()) continue;
    std::string f[4];
    std::string err;
    BidRecord rec;
    if (!split4(t, f)) {
      err = "expected 4 comma-separated fields";
    } else {
      try {
        std::size_t pos = 0;
        rec.bucket = std::stol(trim(f[0]), &pos);
        if (pos != trim(f[0]).size()) err = "bad bucket";
      } catch (const std::exception&) {
        err = "bad bucket";
      }
      rec.advertiser_id = trim(f[1]);
      rec.keyword_id = trim(f[2]);
      if (err.empty()) {
        try {
          std::size_t pos = 0;
          std::string bid_s = trim(f[3]);
          rec.bid = std::stod(bid_s, &pos);
          if (pos != bid_s.size() || !std::isfinite(rec.bid) || rec.bid <= 0.0)
            err = "bid must be a finite positive number";
        } catch (const std::exception&) {
          err = "bid must be a finite positive number";
        }
      }
    }
    if (!err.empty()) {
      rep.errors.emplace_back(line_no, err);
      ++rep.rows_skipped;
      if (!lenient)
        throw std::invalid_argument("bid log line " + std::to_string(line_no) +
                                    ": " + err);
      continue;
    }
    ++rep.rows_ok;
    log.records_.push_back(std::move(rec));
  }

  for (std::size_t i = 0; i < log.records_.size(); ++i)
    log.by_keyword_[log.records_[i].keyword_id].push_back(i);
  for (auto& [kw, rows] : log.by_keyword_)
    std::stable_sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
      return log.records_[a].bucket < log.records_[b].bucket;
    });
  return log;
}

void BidLog::serialize(std::ostream& out) const {
  out << kHeader << "\n";
  for (const BidRecord& r : records_) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", r.bid);
    out << r.bucket << ',' << r.advertiser_id << ',' << r.keyword_id << ','
        << buf << "\n";
  }
}

std::vector<std::string> BidLog::keywords() const {
  std::vector<std::string> out;
  out.reserve(by_keyword_.size());
  for (const auto& [kw, rows] : by_keyword_) out.push_back(kw);
  return out;
}

const std::vector<std::size_t>& BidLog::keyword_rows(
    const std::string& keyword) const {
  auto it = by_keyword_.find(keyword);
  if (it == by_keyword_.end())
    throw std::out_of_range("bid log: unknown keyword '" + keyword + "'");
  return it->second;
}

BidDistribution BidLog::empirical_cdf_for(const std::string& keyword,
                                          long bucket_lo, long bucket_hi) const {
  std::vector<double> bids;
  for (std::size_t i : keyword_rows(keyword)) {
    const BidRecord& r = records_[i];
    if (r.bucket < bucket_lo) continue;
    if (r.bucket > bucket_hi) break;  // rows sorted by bucket
    bids.push_back(r.bid);
  }
  if (bids.size() < 2)
    throw std::runtime_error("empirical_cdf_for: fewer than 2 records in range");
  return BidDistribution::empirical(std::move(bids));
}

std::vector<double> BidLog::sample_auction_bids(const std::string& keyword,
                                                long bucket, int count,
                                                Rng& rng) const {
  if (count < 1)
    throw std::invalid_argument("sample_auction_bids: count must be >= 1");
  const auto& rows = keyword_rows(keyword);
  auto lo = std::lower_bound(rows.begin(), rows.end(), bucket,
                             [&](std::size_t i, long b) {
                               return records_[i].bucket < b;
                             });
  auto hi = std::upper_bound(rows.begin(), rows.end(), bucket,
                             [&](long b, std::size_t i) {
                               return b < records_[i].bucket;
                             });
  const std::size_t n = static_cast<std::size_t>(hi - lo);
  if (n == 0)
    throw std::runtime_error("sample_auction_bids: bucket is empty");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (double& b : out)
    b = records_[*(lo + static_cast<long>(rng.uniform_index(n)))].bid;
  return out;
}

std::pair<long, long> BidLog::bucket_range(const std::string& keyword) const {
  const auto& rows = keyword_rows(keyword);
  return {records_[rows.front()].bucket, records_[rows.back()].bucket};
}

double stationarity_distance(const BidDistribution& d1, const BidDistribution& d2) {
  if (!d1.is_empirical() || !d2.is_empirical())
    throw std::invalid_argument("stationarity_distance: both inputs must be empirical");
  double sup = 0.0;
  for (const BidDistribution* d : {&d1, &d2})
    for (double x : d->samples())
      sup = std::max(sup, std::abs(d1.cdf(x) - d2.cdf(x)));
  return sup;
}

void write_synthetic_log(std::ostream& out, const std::string& keyword, double mu,
                         double sigma_sq, long buckets, long per_bucket,
                         uint64_t seed) {
  out << kHeader << "\n";
  const double sigma = std::sqrt(sigma_sq);
  for (long b = 0; b < buckets; ++b) {
    Rng rng(derive_stream(seed, static_cast<uint64_t>(b), 0x10c));
    for (long i = 0; i < per_bucket; ++i) {
      double bid = rng.lognormal(mu, sigma);
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", bid);
      out << b << ",a" << (rng.uniform_index(997)) << ',' << keyword << ',' << buf
          << "\n";
    }
  }
}

std::vector<double> lognormal_samples(std::size_t n, double mu, double sigma_sq,
                                      uint64_t seed) {
  std::vector<double> out(n);
  Rng rng(derive_stream(seed, 0x5a11, 0));
  const double sigma = std::sqrt(sigma_sq);
  for (double& x : out) x = rng.lognormal(mu, sigma);
  return out;
}

}  // namespace fairbid
