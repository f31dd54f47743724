#include "fairbid/distributions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fairbid {

Group group_from_name(const std::string& s) {
  if (s == "m" || s == "male") return Group::male;
  if (s == "w" || s == "female") return Group::female;
  throw std::invalid_argument("unknown group name: " + s);
}

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  while (n > 0) {
    if (n & 1) r *= x;
    x *= x;
    n >>= 1;
  }
  return r;
}

void hash_u64(uint64_t& h, uint64_t v) {
  // FNV-1a over the 8 bytes
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= 0x100000001b3ull;
  }
}

void hash_double(uint64_t& h, double d) { hash_u64(h, std::bit_cast<uint64_t>(d)); }

}  // namespace

BidDistribution BidDistribution::log_normal(double mu, double sigma_sq) {
  if (!std::isfinite(mu) || !std::isfinite(sigma_sq) || sigma_sq <= 0.0)
    throw std::invalid_argument("log_normal: sigma_sq must be finite and > 0");
  BidDistribution d;
  d.kind_ = Kind::log_normal;
  d.mu_ = mu;
  d.sigma_sq_ = sigma_sq;
  return d;
}

BidDistribution BidDistribution::empirical(std::vector<double> samples) {
  if (samples.size() < 2)
    throw std::invalid_argument("empirical: need at least 2 samples");
  for (double s : samples)
    if (!std::isfinite(s) || s < 0.0)
      throw std::invalid_argument("empirical: samples must be finite and >= 0");
  std::sort(samples.begin(), samples.end());
  BidDistribution d;
  d.kind_ = Kind::empirical;
  d.samples_ = std::move(samples);
  return d;
}

double BidDistribution::cdf(double x) const {
  if (!std::isfinite(x) || x < 0.0)
    throw std::invalid_argument("cdf: x must be finite and >= 0");
  if (kind_ == Kind::log_normal) {
    if (x <= 0.0) return 0.0;
    return normal_cdf((std::log(x) - mu_) / std::sqrt(sigma_sq_));
  }
  // Piecewise-linear interpolant of the empirical CDF: F(s_i) = i/(n-1),
  // 0 below the smallest sample, 1 above the largest.
  const auto& s = samples_;
  const std::size_t n = s.size();
  if (x <= s.front()) return 0.0;
  if (x >= s.back()) return 1.0;
  auto it = std::upper_bound(s.begin(), s.end(), x);
  std::size_t j = static_cast<std::size_t>(it - s.begin());  // first index > x
  std::size_t i = j - 1;                                     // last index <= x
  double frac = (x - s[i]) / (s[j] - s[i]);
  return (static_cast<double>(i) + frac) / static_cast<double>(n - 1);
}

double BidDistribution::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("quantile: p must be in [0,1]");
  if (kind_ == Kind::log_normal) {
    if (p == 0.0) return 0.0;
    if (p == 1.0)
      throw std::invalid_argument("quantile: p=1 unbounded for log-normal");
    return std::exp(mu_ + std::sqrt(sigma_sq_) * normal_quantile(p));
  }
  const auto& s = samples_;
  double pos = p * static_cast<double>(s.size() - 1);
  std::size_t i = static_cast<std::size_t>(pos);
  if (i >= s.size() - 1) return s.back();
  double frac = pos - static_cast<double>(i);
  return s[i] + frac * (s[i + 1] - s[i]);
}

double BidDistribution::sample(Rng& rng) const {
  if (kind_ == Kind::log_normal)
    return rng.lognormal(mu_, std::sqrt(sigma_sq_));
  return samples_[rng.uniform_index(samples_.size())];
}

double BidDistribution::mean() const {
  if (kind_ == Kind::log_normal) return std::exp(mu_ + sigma_sq_ / 2.0);
  return std::accumulate(samples_.begin(), samples_.end(), 0.0) /
         static_cast<double>(samples_.size());
}

double BidDistribution::default_b_max() const {
  if (kind_ == Kind::log_normal) return quantile(0.999);
  return samples_.back();
}

void BidDistribution::hash_into(uint64_t& h) const {
  hash_u64(h, kind_ == Kind::log_normal ? 1 : 2);
  if (kind_ == Kind::log_normal) {
    hash_double(h, mu_);
    hash_double(h, sigma_sq_);
  } else {
    hash_u64(h, samples_.size());
    for (double s : samples_) hash_double(h, s);
  }
}

double win_probability(const BidDistribution& dist, int alpha, double x) {
  if (alpha < 2) throw std::invalid_argument("win_probability: alpha must be >= 2");
  return ipow(dist.cdf(x), alpha - 1);
}

double expected_cost(const BidDistribution& dist, int alpha, double b,
                     double quad_step) {
  if (quad_step <= 0.0 || !std::isfinite(quad_step))
    throw std::invalid_argument("expected_cost: quad_step must be > 0");
  if (!std::isfinite(b) || b < 0.0)
    throw std::invalid_argument("expected_cost: b must be finite and >= 0");
  if (b == 0.0) return 0.0;

  const double qb = win_probability(dist, alpha, b);
  long cells = static_cast<long>(b / quad_step);
  double integral = 0.0;
  double x_prev = 0.0;
  double q_prev = win_probability(dist, alpha, 0.0);
  for (long i = 1; i <= cells; ++i) {
    double x = static_cast<double>(i) * quad_step;
    double q = win_probability(dist, alpha, x);
    integral += (x - x_prev) * (q_prev + q) / 2.0;
    x_prev = x;
    q_prev = q;
  }
  if (b > x_prev) integral += (b - x_prev) * (q_prev + qb) / 2.0;
  return qb * b - integral;
}

MarketModel::MarketModel(BidDistribution g_m_, BidDistribution g_w_, int alpha_,
                         double p_, double v_m_, double v_w_, double delta_)
    : g_m(std::move(g_m_)),
      g_w(std::move(g_w_)),
      alpha(alpha_),
      p(p_),
      v_m(v_m_),
      v_w(v_w_),
      delta(delta_) {
  if (alpha < 2) throw std::invalid_argument("MarketModel: alpha must be >= 2");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("MarketModel: p must be in [0,1]");
  if (!(delta >= 0.0 && delta < 1.0))
    throw std::invalid_argument("MarketModel: delta must be in [0,1)");
  if (!(v_m >= 0.0) || !(v_w >= 0.0))
    throw std::invalid_argument("MarketModel: values must be >= 0");
}

uint64_t MarketModel::fingerprint() const {
  uint64_t h = 0xcbf29ce484222325ull;
  g_m.hash_into(h);
  g_w.hash_into(h);
  hash_u64(h, static_cast<uint64_t>(alpha));
  hash_double(h, p);
  hash_double(h, v_m);
  hash_double(h, v_w);
  hash_double(h, delta);
  return h;
}

}  // namespace fairbid
