#pragma once

#include <vector>

#include "fairbid/distributions.hpp"

namespace fairbid {

/// Precomputed win-probability grid and its running trapezoid integral over
/// [0, b_max]. Gives O(1) evaluations of the expected cost
/// c(b) = q(b)*b - integral_0^b q(u) du on the same uniform grid that
/// expected_cost() uses, so the two agree to rounding error. Queries beyond
/// b_max fall back to extending the quadrature step by step.
class CostCurve {
 public:
  CostCurve(BidDistribution dist, int alpha, double b_max, double step);

  double q(double b) const { return win_probability(dist_, alpha_, b); }
  double integral_q(double b) const { return integral_q_given(b, q(b)); }
  double cost(double b) const { return cost_given(b, q(b)); }
  double reward(double b, double v) const {
    double qb = q(b);
    return qb * v - cost_given(b, qb);
  }

  // variants taking a precomputed q(b), for callers that already have it
  double integral_q_given(double b, double qb) const;
  double cost_given(double b, double qb) const {
    return qb * b - integral_q_given(b, qb);
  }

  const BidDistribution& distribution() const { return dist_; }
  int alpha() const { return alpha_; }
  double b_max() const { return b_max_; }
  double step() const { return step_; }

 private:
  BidDistribution dist_;
  int alpha_;
  double b_max_;
  double step_;
  std::vector<double> q_nodes_;   // q at i*step
  std::vector<double> integral_;  // trapezoid integral of q up to i*step
};

/// b_max from config override or the distribution default.
double resolve_b_max(double cfg_b_max, const BidDistribution& dist);

/// quad_step from config override or b_max/1000.
double resolve_quad_step(double cfg_quad_step, double b_max);

}  // namespace fairbid
