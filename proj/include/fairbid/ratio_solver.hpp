#pragma once

#include <cstdint>
#include <vector>

#include "fairbid/parity_solver.hpp"

namespace fairbid {

/// Winning one more male slot would break r*(1-p)*(n_m+1) <= p*n_w + K.
bool male_win_blocked(double r, double K, double p, long n_m, long n_w);

/// Winning one more female slot would break r*p*(n_w+1) <= (1-p)*n_m + K.
bool female_win_blocked(double r, double K, double p, long n_m, long n_w);

/// The (r,K)-ratio constraint holds at (n_m, n_w) for both group orderings.
bool ratio_state_feasible(double r, double K, double p, long n_m, long n_w);

/// Female-count grid bound ceil(r*(1-p)/p*mu + K).
int ratio_female_grid_max(double r, double K, double p, int mu);

/// Solved value function for the (r,K)-ratio MDP on the bounded grid
/// n_m in [0,mu] x n_w in [0,n_w_max]. States whose win is blocked force a
/// zero bid; wins that would leave the grid reuse the current cell's value.
struct RatioValueTable {
  double r = 0.0;
  double K = 0.0;
  double p = 0.0;
  int mu = 0;
  int n_w_max = 0;
  std::vector<double> V;
  std::vector<double> Phi;  // 0 at blocked states
  double epsilon = 0.0;
  double converged_delta = 0.0;
  long iterations = 0;
  uint64_t model_fingerprint = 0;
  std::vector<double> delta_trace;

  int index(long n_m, long n_w, Group g) const {
    return static_cast<int>((n_m * (n_w_max + 1) + n_w) * 2 +
                            static_cast<long>(g));
  }
  bool in_grid(long n_m, long n_w) const {
    return n_m >= 0 && n_m <= mu && n_w >= 0 && n_w <= n_w_max;
  }
  bool blocked(long n_m, long n_w, Group g) const {
    return g == Group::male ? male_win_blocked(r, K, p, n_m, n_w)
                            : female_win_blocked(r, K, p, n_m, n_w);
  }
  double value(long n_m, long n_w, Group g) const { return V[index(n_m, n_w, g)]; }
  double phi(long n_m, long n_w, Group g) const { return Phi[index(n_m, n_w, g)]; }
};

RatioValueTable solve_ratio(const MarketModel& model, double r, double K, int mu,
                            const SolverConfig& cfg = {});

/// 0 when blocked; Phi look-up inside the solved grid; linear-interpolation
/// fallback when the state outgrew the assumed mu.
double optimal_ratio_bid(const RatioValueTable& table, long n_m, long n_w,
                         Group theta);

/// Projection onto the last fully-solved male row: rho = n_w/n_m*(mu-1),
/// interpolating Phi between floor(rho) and ceil(rho) (clamped).
double extrapolated_bid(const RatioValueTable& table, long n_m, long n_w,
                        Group theta);

double ratio_sweep(const MarketModel& model, const RatioValueTable& shape,
                   const CostCurve& curve_m, const CostCurve& curve_w,
                   const std::vector<double>& V_in, std::vector<double>& V_out);

}  // namespace fairbid
