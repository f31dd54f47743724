#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairbid/cost_curve.hpp"
#include "fairbid/distributions.hpp"

namespace fairbid {

struct SolverConfig {
  double epsilon = 1e-3;        // convergence tolerance on the max sweep change
  double quad_step = 0.0;       // 0: b_max/1000
  long max_iterations = 100000;
  double b_max = 0.0;           // 0: per-distribution default
  bool record_trace = false;    // keep the per-sweep delta sequence

  void validate() const {
    if (epsilon <= 0.0) throw std::invalid_argument("SolverConfig: epsilon must be > 0");
    if (max_iterations < 1)
      throw std::invalid_argument("SolverConfig: max_iterations must be >= 1");
  }
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double last_delta, long iterations)
      : std::runtime_error(what), last_delta_(last_delta), iterations_(iterations) {}
  double last_delta() const { return last_delta_; }
  long iterations() const { return iterations_; }

 private:
  double last_delta_;
  long iterations_;
};

/// Solved value function and conjoint valuations for the K-parity MDP.
/// States are (k, theta) with k = wins for men minus wins for women,
/// |k| <= K. The winning edge states <K,m> and <-K,w> force a zero bid.
struct ParityValueTable {
  int K = 0;
  std::vector<double> V;    // size 2*(2K+1), index (k+K)*2 + group
  std::vector<double> Phi;  // 0 at edge states
  double epsilon = 0.0;
  double converged_delta = 0.0;
  long iterations = 0;
  uint64_t model_fingerprint = 0;
  std::vector<double> delta_trace;

  int index(int k, Group g) const { return (k + K) * 2 + static_cast<int>(g); }
  bool contains(int k) const { return k >= -K && k <= K; }
  bool is_edge(int k, Group g) const {
    return (k == K && g == Group::male) || (k == -K && g == Group::female);
  }
  double value(int k, Group g) const { return V[index(k, g)]; }
  double phi(int k, Group g) const { return Phi[index(k, g)]; }
};

ParityValueTable solve_parity(const MarketModel& model, int K,
                              const SolverConfig& cfg = {});

/// Table look-up of the optimal bid: 0 at the edge states, Phi elsewhere.
double optimal_parity_bid(const ParityValueTable& table, int k, Group theta);

/// R^theta(b) = q(b) * v(theta) - c(b).
double immediate_reward(const MarketModel& model, Group theta, double b,
                        double quad_step = 0.0);

/// Future value N^theta(b, k): win/lose mixture of the successor values.
double future_value(const ParityValueTable& table, const MarketModel& model,
                    Group theta, int k, double b);

/// Conjoint valuation Phi^theta(k) recomputed from the table's V.
double conjoint_valuation(const ParityValueTable& table, const MarketModel& model,
                          Group theta, int k);

/// One Jacobi sweep of the parity update: reads `V_in`, writes `V_out`,
/// returns the max absolute change. Exposed for fixed-point tests.
double parity_sweep(const MarketModel& model, int K, const CostCurve& curve_m,
                    const CostCurve& curve_w, const std::vector<double>& V_in,
                    std::vector<double>& V_out);

}  // namespace fairbid
