#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fairbid/strategies.hpp"

namespace fairbid {

/// Episode length model. Fixed mode runs T rounds with explicit delta^t
/// utility weights; geometric mode samples the lifespan T ~ Geometric(1-delta)
/// and sums utilities unweighted. Both have the same expected total utility.
struct Horizon {
  enum class Mode { fixed_discounted, geometric };
  Mode mode = Mode::fixed_discounted;
  long fixed_rounds = 1;

  static Horizon fixed(long T);
  /// Smallest T with delta^T * v_max below `tail`, so truncation error is
  /// negligible relative to per-round rewards.
  static Horizon fixed_auto(double delta, double v_max, double tail = 1e-6);
  static Horizon geometric();
};

struct ConstraintSpec {
  ConstraintLedger::Kind kind = ConstraintLedger::Kind::none;
  int parity_K = 0;
  double ratio_r = 0.0;
  double ratio_K = 0.0;

  static ConstraintSpec none();
  static ConstraintSpec parity(int K);
  static ConstraintSpec ratio(double r, double K);
  ConstraintLedger make_ledger(double p) const;
};

/// One experiment setting: the focal advertiser's market model, the true
/// competitor behavior (defaults to the model), the constraint, and the
/// episode protocol.
struct Scenario {
  MarketModel model;
  BidDistribution competitor_g_m;
  BidDistribution competitor_g_w;
  int restricted_count = 1;  // constrained advertisers among alpha
  ConstraintSpec constraint;
  Horizon horizon;
  long runs = 100;
  uint64_t seed = 1;
  std::string name;

  Scenario(MarketModel m, ConstraintSpec c, Horizon h, long runs_, uint64_t seed_,
           std::string name_ = "");

  const BidDistribution& competitor_dist(Group g) const {
    return g == Group::male ? competitor_g_m : competitor_g_w;
  }
};

struct SimulationResult {
  double total_utility = 0.0;  // focal advertiser, discounted per Horizon
  long wins_m = 0;
  long wins_w = 0;
  double sum_overbid_w = 0.0;  // sum of max(bid - v_w, 0) over female auctions entered
  long participations_w = 0;
  long participations = 0;
  double exchange_revenue = 0.0;  // undiscounted second prices, all winners
  long violations = 0;            // must stay 0
  long rounds = 0;
  // independent accumulations for the conservation check
  double discounted_payments = 0.0;
  double discounted_won_value = 0.0;
};

/// Second-price auction: highest bid wins, pays the highest remaining bid.
/// Exact ties go to the lowest index. Returns (winner index, price).
std::pair<int, double> run_auction(std::span<const double> bids);

/// One simulated focal advertiser configuration running against the shared
/// random draws: its policy is used by the focal slot and by the
/// restricted_count-1 constrained competitors.
struct Variant {
  BiddingPolicy policy;
  int restricted_count = 1;
};

/// Runs one episode for several variants on identical randomness: the gender
/// sequence and all competitor value draws are derived from
/// (seed, round, stream) and never depend on any variant's behavior.
std::vector<SimulationResult> run_coupled_episode(const Scenario& scenario,
                                                  std::span<const Variant> variants,
                                                  uint64_t seed);

SimulationResult run_episode(const Scenario& scenario, const BiddingPolicy& policy,
                             uint64_t seed);

struct RatioEstimate {
  double ratio = 0.0;
  double paired_se = 0.0;  // se of mean paired difference, scaled by mean denom
  double mean_numer = 0.0;
  double mean_denom = 0.0;
  std::vector<double> numer;  // per-episode
  std::vector<double> denom;
};

/// mean(U_constrained) / mean(U_truthful) over `scenario.runs` coupled
/// episode pairs.
RatioEstimate utility_ratio(const Scenario& scenario,
                            const BiddingPolicy& constrained, uint64_t seed);

/// mean exchange revenue with the scenario's restricted_count advertisers
/// following `restricted_policy`, over the revenue with the same advertisers
/// bidding truthfully, coupled seeds.
RatioEstimate revenue_ratio(const Scenario& scenario,
                            const BiddingPolicy& restricted_policy, uint64_t seed);

double average_overbid(std::span<const SimulationResult> results);

/// Paired standard error of mean(a-b)/scale for aligned per-episode values.
double paired_se(std::span<const double> a, std::span<const double> b, double scale);

uint64_t episode_seed(uint64_t base_seed, long episode);

}  // namespace fairbid
