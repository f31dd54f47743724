#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fairbid/rng.hpp"

namespace fairbid {

enum class Group : int { male = 0, female = 1 };

inline constexpr Group other(Group g) {
  return g == Group::male ? Group::female : Group::male;
}
inline constexpr const char* group_name(Group g) {
  return g == Group::male ? "m" : "w";
}
Group group_from_name(const std::string& s);

/// CDF model of a single competing advertiser's bid for one slot type.
/// Either parametric log-normal or an empirical sample set with linear
/// interpolation between order statistics (the interpolation keeps the win
/// probability continuous, which the optimal-bid argument needs).
class BidDistribution {
 public:
  enum class Kind { log_normal, empirical };

  static BidDistribution log_normal(double mu, double sigma_sq);
  static BidDistribution empirical(std::vector<double> samples);

  Kind kind() const { return kind_; }
  bool is_empirical() const { return kind_ == Kind::empirical; }

  double cdf(double x) const;
  double quantile(double p) const;
  double sample(Rng& rng) const;
  double mean() const;

  /// Default bid-domain upper bound: the 99.9th percentile for log-normal,
  /// the largest sample for empirical.
  double default_b_max() const;

  double log_mu() const { return mu_; }
  double log_sigma_sq() const { return sigma_sq_; }
  std::span<const double> samples() const { return samples_; }

  void hash_into(uint64_t& h) const;

 private:
  BidDistribution() = default;
  Kind kind_ = Kind::log_normal;
  double mu_ = 0.0;
  double sigma_sq_ = 1.0;
  std::vector<double> samples_;  // sorted ascending
};

/// Win probability q(x) = G(x)^(alpha-1) of beating alpha-1 independent
/// competitors whose bids follow `dist`.
double win_probability(const BidDistribution& dist, int alpha, double x);

/// Expected second-price payment c(b) = q(b)*b - integral_0^b q(u) du,
/// the integral approximated by a composite trapezoid rule with uniform
/// step `quad_step` (final partial cell handled exactly).
double expected_cost(const BidDistribution& dist, int alpha, double b,
                     double quad_step);

/// Everything the focal advertiser estimates about the market.
struct MarketModel {
  BidDistribution g_m;
  BidDistribution g_w;
  int alpha = 10;       // advertisers per auction, >= 2
  double p = 0.5;       // probability of a male slot
  double v_m = 0.0;     // expected slot values to the focal advertiser
  double v_w = 0.0;
  double delta = 0.999; // continuation probability, in [0,1)

  MarketModel(BidDistribution g_m, BidDistribution g_w, int alpha, double p,
              double v_m, double v_w, double delta);

  const BidDistribution& dist(Group g) const {
    return g == Group::male ? g_m : g_w;
  }
  double value(Group g) const { return g == Group::male ? v_m : v_w; }
  double v_max() const { return v_m > v_w ? v_m : v_w; }

  uint64_t fingerprint() const;
};

}  // namespace fairbid
