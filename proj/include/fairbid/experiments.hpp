#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairbid/config.hpp"
#include "fairbid/datalog.hpp"
#include "fairbid/simulator.hpp"
#include "fairbid/table_io.hpp"

namespace fairbid {

// -------- reference market models --------

/// Competitors price both genders alike; the advertiser values women more.
MarketModel equal_price_female_valuable(double p, double delta, int alpha = 10);

/// Competitors pay up for women; the advertiser values both genders equally.
/// `value_mu_m` shifts the advertiser's male valuation (log-location).
MarketModel expensive_female_equal_value(double p, double delta, int alpha = 10,
                                         double value_mu_m = -2.8);

/// Symmetric market built from one empirical sample set used for both
/// genders, values equal to the sample mean.
MarketModel symmetric_empirical_model(double p, double delta, int alpha,
                                      std::size_t n_samples, uint64_t seed);

double lognormal_mean(double mu, double sigma_sq);

// -------- aggregation helpers --------

double mean(std::span<const double> xs);
double spearman(std::span<const double> xs, std::span<const double> ys);

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

struct CoupledSeries {
  std::vector<std::vector<double>> utilities;  // [variant][episode]
  std::vector<std::vector<double>> revenues;
  std::vector<SimulationResult> totals;        // summed per variant
  std::vector<std::vector<SimulationResult>> episodes;  // kept on request
};

/// Runs `runs` coupled episodes (parallelized across episodes), collecting
/// per-episode utility and revenue series per variant.
CoupledSeries run_coupled_series(const Scenario& scenario,
                                 std::span<const Variant> variants, long runs,
                                 uint64_t seed, int threads = 1,
                                 bool keep_episodes = false);

/// Memoizing solver front end shared by sweeps that revisit a setting.
class TableCache {
 public:
  std::shared_ptr<const ParityValueTable> parity(const MarketModel& model, int K,
                                                 const SolverConfig& cfg);
  std::shared_ptr<const RatioValueTable> ratio(const MarketModel& model, double r,
                                               double K, int mu,
                                               const SolverConfig& cfg);

 private:
  struct Impl;
  std::map<std::string, std::shared_ptr<const ParityValueTable>> parity_;
  std::map<std::string, std::shared_ptr<const RatioValueTable>> ratio_;
  std::mutex mu_;
};

// -------- config-driven experiments --------

struct ModelSpec {
  enum class Kind { lognormal, synthetic_log, logfile };
  Kind kind = Kind::lognormal;
  double sigma_sq = 0.7;
  double comp_mu_m = -2.8;
  double comp_mu_w = -2.8;
  double value_mu_m = -2.8;
  double value_mu_w = -2.8;
  bool explicit_values = false;
  double v_m = 0.0, v_w = 0.0;
  long log_samples = 20000;
  uint64_t log_seed = 7;
  std::string log_path;
  std::string log_keyword;
  long bucket_lo = 0, bucket_hi = 0;

  static ModelSpec load(const KeyValueConfig& cfg);
  MarketModel build(double p, double delta, int alpha,
                    std::optional<double> value_mu_m_override = std::nullopt) const;
};

struct ExperimentSpec {
  std::string name = "experiment";
  std::string measure = "utility";  // utility | overbid | revenue
  ModelSpec model;
  ConstraintLedger::Kind constraint_kind = ConstraintLedger::Kind::parity;
  double constraint_K = 10.0;
  double constraint_r = 0.8;
  int ratio_mu = 30;
  int alpha = 10;
  double p = 0.5;
  double delta = 0.999;
  int restricted_count = 1;
  SolverConfig solver;
  long runs = 100;
  uint64_t seed = 1;
  std::string horizon = "auto";  // auto | fixed:T | geometric
  std::vector<double> sweep_p, sweep_K, sweep_r, sweep_delta, sweep_value_mu_m,
      sweep_restricted;

  static ExperimentSpec load(const KeyValueConfig& cfg);
  Horizon make_horizon(double delta_val, double v_max) const;
};

struct SimulateOutput {
  std::string aggregate_csv;
  std::string episodes_csv;
};

SimulateOutput run_simulate(const ExperimentSpec& spec, int threads,
                            bool want_episodes = false);

/// Solves the configured table (scalar parameters), returning the serialized
/// table text plus a human-readable run manifest.
struct SolveOutput {
  std::string table_text;
  std::string manifest_text;
  std::string kind;
};
SolveOutput run_solve(const ExperimentSpec& spec);

}  // namespace fairbid
