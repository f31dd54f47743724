#include "fairbid/cost_curve.hpp"

#include <cmath>
#include <stdexcept>

namespace fairbid {

CostCurve::CostCurve(BidDistribution dist, int alpha, double b_max, double step)
    : dist_(std::move(dist)), alpha_(alpha), b_max_(b_max), step_(step) {
  if (b_max_ <= 0.0 || step_ <= 0.0)
    throw std::invalid_argument("CostCurve: b_max and step must be > 0");
  const std::size_t n = static_cast<std::size_t>(std::ceil(b_max_ / step_)) + 1;
  q_nodes_.resize(n);
  integral_.resize(n);
  q_nodes_[0] = q(0.0);
  integral_[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    q_nodes_[i] = q(static_cast<double>(i) * step_);
    integral_[i] =
        integral_[i - 1] + step_ * (q_nodes_[i - 1] + q_nodes_[i]) / 2.0;
  }
}

double CostCurve::integral_q_given(double b, double qb) const {
  if (b <= 0.0) return 0.0;
  const std::size_t last = q_nodes_.size() - 1;
  std::size_t i = static_cast<std::size_t>(b / step_);
  if (i < last) {
    double x_i = static_cast<double>(i) * step_;
    if (b == x_i) return integral_[i];
    return integral_[i] + (b - x_i) * (q_nodes_[i] + qb) / 2.0;
  }
  // beyond the cached grid: extend the composite rule step by step
  double x_prev = static_cast<double>(last) * step_;
  double q_prev = q_nodes_[last];
  double acc = integral_[last];
  while (x_prev + step_ < b) {
    double x = x_prev + step_;
    double qx = q(x);
    acc += step_ * (q_prev + qx) / 2.0;
    x_prev = x;
    q_prev = qx;
  }
  acc += (b - x_prev) * (q_prev + qb) / 2.0;
  return acc;
}

double resolve_b_max(double cfg_b_max, const BidDistribution& dist) {
  return cfg_b_max > 0.0 ? cfg_b_max : dist.default_b_max();
}

double resolve_quad_step(double cfg_quad_step, double b_max) {
  return cfg_quad_step > 0.0 ? cfg_quad_step : b_max / 1000.0;
}

}  // namespace fairbid
