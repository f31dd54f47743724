#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fairbid/ratio_solver.hpp"

namespace fairbid {

/// Brute-force argmax over the bid grid [0, b_max] of q(b)*phi - c(b),
/// with its own running quadrature for c. Ties go to the lower bid.
double grid_search_best_bid(const BidDistribution& dist, int alpha, double phi,
                            double b_max, double grid_step);

struct GridSearchReport {
  struct Row {
    std::string state;
    double best_bid = 0.0;
    double phi_bid = 0.0;
    double gap = 0.0;  // |best_bid - phi_bid|
  };
  std::vector<Row> rows;
  double grid_step = 0.0;

  double max_gap() const;
  void write_csv(std::ostream& out) const;
};

/// Grid-searches every non-edge (non-blocked) state of a solved table and
/// reports how far the stored Phi sits from the brute-force argmax.
GridSearchReport validate_parity_table(const ParityValueTable& table,
                                       const MarketModel& model, double grid_step);
GridSearchReport validate_ratio_table(const RatioValueTable& table,
                                      const MarketModel& model, double grid_step);

/// Discrete constraint-state space for the truncated backward induction:
/// per-state blocked flags and win successors for each slot gender.
struct ConstraintStateSpace {
  int n_states = 0;
  std::vector<uint8_t> blocked_m, blocked_w;
  std::vector<int> succ_m, succ_w;  // win successor state index
  std::vector<std::string> labels;

  static ConstraintStateSpace parity(int K);
  static ConstraintStateSpace ratio(double r, double K, double p, int mu);

  bool blocked(int s, Group g) const {
    return (g == Group::male ? blocked_m[s] : blocked_w[s]) != 0;
  }
  int successor(int s, Group g) const {
    return g == Group::male ? succ_m[s] : succ_w[s];
  }
};

/// Exact T-step backward induction over a discretized bid grid with zero
/// terminal values. Returns V_0 indexed by state*2+gender. Deliberately
/// small: refuses T > 8, more than 401 grid points or 200 MDP states.
std::vector<double> finite_horizon_expectimax(const MarketModel& model,
                                              const ConstraintStateSpace& space,
                                              int T, int bid_grid_points,
                                              double b_max = 0.0);

/// One known-in-advance auction round: the slot gender and the highest
/// competing bid (no variance).
struct DeterministicRound {
  Group gender;
  double competitor_max;
};

struct SequencePlan {
  double total_utility = 0.0;
  std::vector<double> bids;  // willingness at each round (0 = skip)
  std::vector<bool> wins;
};

/// Optimal play against a fully known bid sequence under K-parity, by exact
/// backward induction; a win requires bidding strictly above competitor_max.
SequencePlan plan_deterministic_sequence(std::span<const DeterministicRound> rounds,
                                         double v_m, double v_w, int parity_K,
                                         double delta);

/// Same sequence played truthfully behind the constraint screen.
SequencePlan play_sequence_truthful(std::span<const DeterministicRound> rounds,
                                    double v_m, double v_w, int parity_K,
                                    double delta);

/// Closed-form long-run participation probability of a screened (naive)
/// K-parity advertiser that wins whenever it participates. At p = 1/2 the
/// expression is 0/0 and the limit 2K/(2K+1) is returned.
double steady_state_participation(double p, int K);

/// Numeric stationary distribution of the reflecting win-difference chain
/// on [-K, K]; the independent oracle for the closed form.
std::vector<double> parity_chain_stationary(double p, int K);
double parity_chain_participation(double p, int K);

}  // namespace fairbid
