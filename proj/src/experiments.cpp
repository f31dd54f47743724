#include "fairbid/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

namespace fairbid {

double lognormal_mean(double mu, double sigma_sq) {
  return std::exp(mu + sigma_sq / 2.0);
}

MarketModel equal_price_female_valuable(double p, double delta, int alpha) {
  const double s2 = 0.7;
  return MarketModel(BidDistribution::log_normal(-2.8, s2),
                     BidDistribution::log_normal(-2.8, s2), alpha, p,
                     lognormal_mean(-3.5, s2), lognormal_mean(-2.4, s2), delta);
}

MarketModel expensive_female_equal_value(double p, double delta, int alpha,
                                         double value_mu_m) {
  const double s2 = 0.7;
  return MarketModel(BidDistribution::log_normal(-3.5, s2),
                     BidDistribution::log_normal(-2.4, s2), alpha, p,
                     lognormal_mean(value_mu_m, s2), lognormal_mean(-2.8, s2),
                     delta);
}

MarketModel symmetric_empirical_model(double p, double delta, int alpha,
                                      std::size_t n_samples, uint64_t seed) {
  BidDistribution dist =
      BidDistribution::empirical(lognormal_samples(n_samples, -2.8, 0.7, seed));
  double v = dist.mean();
  return MarketModel(dist, dist, alpha, p, v, v, delta);
}

double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean: empty");
  return std::accumulate(xs.begin(), xs.end(), 0.0) /
         static_cast<double>(xs.size());
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("spearman: need two equal series of length >= 2");
  auto ranks = [](std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> rank(v.size());
    for (std::size_t i = 0; i < order.size();) {
      std::size_t j = i;
      while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
      double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0;
      for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
      i = j + 1;
    }
    return rank;
  };
  std::vector<double> rx = ranks(xs), ry = ranks(ys);
  double mx = mean(rx), my = mean(ry);
  double num = 0.0, dx = 0.0, dy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    num += (rx[i] - mx) * (ry[i] - my);
    dx += (rx[i] - mx) * (rx[i] - mx);
    dy += (ry[i] - my) * (ry[i] - my);
  }
  if (dx == 0.0 || dy == 0.0) return 0.0;
  return num / std::sqrt(dx * dy);
}

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  int workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

CoupledSeries run_coupled_series(const Scenario& scenario,
                                 std::span<const Variant> variants, long runs,
                                 uint64_t seed, int threads, bool keep_episodes) {
  const std::size_t nv = variants.size();
  CoupledSeries series;
  series.utilities.assign(nv, std::vector<double>(runs));
  series.revenues.assign(nv, std::vector<double>(runs));
  series.totals.assign(nv, SimulationResult{});
  if (keep_episodes)
    series.episodes.assign(nv, std::vector<SimulationResult>(runs));

  std::vector<std::vector<SimulationResult>> per_episode(runs);
  parallel_for(static_cast<std::size_t>(runs), threads, [&](std::size_t e) {
    per_episode[e] =
        run_coupled_episode(scenario, variants, episode_seed(seed, static_cast<long>(e)));
  });

  for (long e = 0; e < runs; ++e) {
    for (std::size_t v = 0; v < nv; ++v) {
      const SimulationResult& r = per_episode[e][v];
      series.utilities[v][e] = r.total_utility;
      series.revenues[v][e] = r.exchange_revenue;
      SimulationResult& t = series.totals[v];
      t.total_utility += r.total_utility;
      t.wins_m += r.wins_m;
      t.wins_w += r.wins_w;
      t.sum_overbid_w += r.sum_overbid_w;
      t.participations_w += r.participations_w;
      t.participations += r.participations;
      t.exchange_revenue += r.exchange_revenue;
      t.violations += r.violations;
      t.rounds += r.rounds;
      t.discounted_payments += r.discounted_payments;
      t.discounted_won_value += r.discounted_won_value;
      if (keep_episodes) series.episodes[v][e] = r;
    }
  }
  return series;
}

// -------- table cache --------

namespace {

std::string solver_key(const SolverConfig& cfg) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "e%.17g,q%.17g,b%.17g,i%ld", cfg.epsilon,
                cfg.quad_step, cfg.b_max, cfg.max_iterations);
  return buf;
}

}  // namespace

std::shared_ptr<const ParityValueTable> TableCache::parity(
    const MarketModel& model, int K, const SolverConfig& cfg) {
  char head[96];
  std::snprintf(head, sizeof head, "p:%016llx:K%d:",
                static_cast<unsigned long long>(model.fingerprint()), K);
  std::string key = head + solver_key(cfg);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = parity_.find(key);
    if (it != parity_.end()) return it->second;
  }
  auto table = std::make_shared<ParityValueTable>(solve_parity(model, K, cfg));
  std::lock_guard<std::mutex> lock(mu_);
  return parity_.emplace(key, std::move(table)).first->second;
}

std::shared_ptr<const RatioValueTable> TableCache::ratio(const MarketModel& model,
                                                         double r, double K,
                                                         int mu,
                                                         const SolverConfig& cfg) {
  char head[128];
  std::snprintf(head, sizeof head, "r:%016llx:r%.17g:K%.17g:m%d:",
                static_cast<unsigned long long>(model.fingerprint()), r, K, mu);
  std::string key = head + solver_key(cfg);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = ratio_.find(key);
    if (it != ratio_.end()) return it->second;
  }
  auto table = std::make_shared<RatioValueTable>(solve_ratio(model, r, K, mu, cfg));
  std::lock_guard<std::mutex> lock(mu_);
  return ratio_.emplace(key, std::move(table)).first->second;
}

// -------- config-driven experiments --------

ModelSpec ModelSpec::load(const KeyValueConfig& cfg) {
  ModelSpec m;
  std::string kind = cfg.get_string("model.kind", "lognormal");
  if (kind == "lognormal")
    m.kind = Kind::lognormal;
  else if (kind == "synthetic_log")
    m.kind = Kind::synthetic_log;
  else if (kind == "logfile")
    m.kind = Kind::logfile;
  else
    throw ConfigError("model.kind must be lognormal, synthetic_log or logfile");

  m.sigma_sq = cfg.get_double("model.sigma_sq", 0.7);
  m.comp_mu_m = cfg.get_double("model.competitor_mu_m", -2.8);
  m.comp_mu_w = cfg.get_double("model.competitor_mu_w", -2.8);
  m.value_mu_m = cfg.get_double("model.value_mu_m", -2.8);
  m.value_mu_w = cfg.get_double("model.value_mu_w", -2.8);
  if (cfg.has("model.v_m") != cfg.has("model.v_w"))
    throw ConfigError("model.v_m and model.v_w must be given together");
  if (cfg.has("model.v_m")) {
    m.explicit_values = true;
    m.v_m = cfg.get_double("model.v_m");
    m.v_w = cfg.get_double("model.v_w");
  }
  m.log_samples = cfg.get_long("model.log_samples", 20000);
  m.log_seed = static_cast<uint64_t>(cfg.get_long("model.log_seed", 7));
  m.log_path = cfg.get_string("model.log_path", "");
  m.log_keyword = cfg.get_string("model.log_keyword", "");
  m.bucket_lo = cfg.get_long("model.bucket_lo", 0);
  m.bucket_hi = cfg.get_long("model.bucket_hi", 1000000);
  if (m.kind == Kind::logfile) {
    if (m.log_path.empty() || m.log_keyword.empty())
      throw ConfigError("logfile model needs model.log_path and model.log_keyword");
    if (!std::filesystem::exists(m.log_path))
      throw ConfigError("model.log_path does not exist: " + m.log_path);
  }
  return m;
}

namespace {

// parsed log-file distributions are shared across sweep cells
const BidDistribution& cached_logfile_dist(const std::string& path,
                                           const std::string& keyword, long lo,
                                           long hi) {
  static std::map<std::string, BidDistribution> cache;
  static std::mutex mu;
  std::string key = path + "|" + keyword + "|" + std::to_string(lo) + ":" +
                    std::to_string(hi);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open bid log " + path);
  BidLog log = BidLog::parse(in);
  return cache.emplace(key, log.empirical_cdf_for(keyword, lo, hi)).first->second;
}

}  // namespace

MarketModel ModelSpec::build(double p, double delta, int alpha,
                             std::optional<double> value_mu_m_override) const {
  switch (kind) {
    case Kind::lognormal: {
      double vm_mu = value_mu_m_override.value_or(value_mu_m);
      double vm = explicit_values ? v_m : lognormal_mean(vm_mu, sigma_sq);
      double vw = explicit_values ? v_w : lognormal_mean(value_mu_w, sigma_sq);
      return MarketModel(BidDistribution::log_normal(comp_mu_m, sigma_sq),
                         BidDistribution::log_normal(comp_mu_w, sigma_sq), alpha,
                         p, vm, vw, delta);
    }
    case Kind::synthetic_log: {
      BidDistribution dist = BidDistribution::empirical(lognormal_samples(
          static_cast<std::size_t>(log_samples), comp_mu_m, sigma_sq, log_seed));
      double vm = explicit_values ? v_m : dist.mean();
      double vw = explicit_values ? v_w : dist.mean();
      return MarketModel(dist, dist, alpha, p, vm, vw, delta);
    }
    case Kind::logfile: {
      const BidDistribution& dist =
          cached_logfile_dist(log_path, log_keyword, bucket_lo, bucket_hi);
      double vm = explicit_values ? v_m : dist.mean();
      double vw = explicit_values ? v_w : dist.mean();
      return MarketModel(dist, dist, alpha, p, vm, vw, delta);
    }
  }
  throw std::logic_error("ModelSpec::build: bad kind");
}

ExperimentSpec ExperimentSpec::load(const KeyValueConfig& cfg) {
  ExperimentSpec spec;
  spec.name = cfg.get_string("scenario.name", "experiment");
  spec.measure = cfg.get_string("experiment.measure", "utility");
  if (spec.measure != "utility" && spec.measure != "overbid" &&
      spec.measure != "revenue")
    throw ConfigError("experiment.measure must be utility, overbid or revenue");
  spec.model = ModelSpec::load(cfg);

  std::string ck = cfg.get_string("constraint.kind", "parity");
  if (ck == "parity")
    spec.constraint_kind = ConstraintLedger::Kind::parity;
  else if (ck == "ratio")
    spec.constraint_kind = ConstraintLedger::Kind::ratio;
  else if (ck == "none")
    spec.constraint_kind = ConstraintLedger::Kind::none;
  else
    throw ConfigError("constraint.kind must be parity, ratio or none");
  spec.constraint_K = cfg.get_double("constraint.K", 10.0);
  spec.constraint_r = cfg.get_double("constraint.r", 0.8);
  spec.ratio_mu = static_cast<int>(cfg.get_long("constraint.mu", 30));

  spec.alpha = static_cast<int>(cfg.get_long("model.alpha", 10));
  spec.p = cfg.get_double("model.p", 0.5);
  spec.delta = cfg.get_double("model.delta", 0.999);

  spec.solver.epsilon = cfg.get_double("solver.epsilon", 1e-3);
  spec.solver.quad_step = cfg.get_double("solver.quad_step", 0.0);
  spec.solver.b_max = cfg.get_double("solver.b_max", 0.0);
  spec.solver.max_iterations = cfg.get_long("solver.max_iterations", 100000);

  spec.runs = cfg.get_long("sim.runs", 100);
  spec.seed = static_cast<uint64_t>(cfg.get_long("sim.seed", 1));
  spec.horizon = cfg.get_string("sim.horizon", "auto");
  spec.restricted_count = static_cast<int>(cfg.get_long("sim.restricted", 1));

  if (cfg.has("sweep.p")) spec.sweep_p = cfg.get_double_list("sweep.p");
  if (cfg.has("sweep.K")) spec.sweep_K = cfg.get_double_list("sweep.K");
  if (cfg.has("sweep.r")) spec.sweep_r = cfg.get_double_list("sweep.r");
  if (cfg.has("sweep.delta")) spec.sweep_delta = cfg.get_double_list("sweep.delta");
  if (cfg.has("sweep.value_mu_m"))
    spec.sweep_value_mu_m = cfg.get_double_list("sweep.value_mu_m");
  if (cfg.has("sweep.restricted"))
    spec.sweep_restricted = cfg.get_double_list("sweep.restricted");
  return spec;
}

Horizon ExperimentSpec::make_horizon(double delta_val, double v_max) const {
  if (horizon == "auto") return Horizon::fixed_auto(delta_val, v_max);
  if (horizon == "geometric") return Horizon::geometric();
  if (horizon.rfind("fixed:", 0) == 0)
    return Horizon::fixed(std::stol(horizon.substr(6)));
  throw ConfigError("sim.horizon must be auto, geometric or fixed:T");
}

namespace {

struct Cell {
  double p, K, r, delta, value_mu_m;
  int restricted;
};

std::vector<Cell> make_cells(const ExperimentSpec& spec) {
  auto axis = [](const std::vector<double>& sweep, double scalar) {
    return sweep.empty() ? std::vector<double>{scalar} : sweep;
  };
  std::vector<double> ps = axis(spec.sweep_p, spec.p);
  std::vector<double> Ks = axis(spec.sweep_K, spec.constraint_K);
  std::vector<double> rs = axis(spec.sweep_r, spec.constraint_r);
  std::vector<double> ds = axis(spec.sweep_delta, spec.delta);
  std::vector<double> vs = axis(spec.sweep_value_mu_m, spec.model.value_mu_m);
  std::vector<double> rc =
      axis(spec.sweep_restricted, static_cast<double>(spec.restricted_count));
  std::vector<Cell> cells;
  for (double p : ps)
    for (double K : Ks)
      for (double r : rs)
        for (double d : ds)
          for (double v : vs)
            for (double n : rc)
              cells.push_back({p, K, r, d, v, static_cast<int>(n)});
  return cells;
}

std::string fmt_num(double d) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", d);
  return buf;
}

struct CellOutput {
  std::string aggregate_row;
  std::string episode_rows;
};

}  // namespace

SimulateOutput run_simulate(const ExperimentSpec& spec, int threads,
                            bool want_episodes) {
  std::vector<Cell> cells = make_cells(spec);
  std::vector<CellOutput> outputs(cells.size());
  TableCache cache;

  parallel_for(cells.size(), threads, [&](std::size_t ci) {
    const Cell& cell = cells[ci];
    MarketModel model =
        spec.model.build(cell.p, cell.delta, spec.alpha, cell.value_mu_m);

    ConstraintSpec constraint;
    if (spec.constraint_kind == ConstraintLedger::Kind::parity) {
      constraint = ConstraintSpec::parity(static_cast<int>(std::lround(cell.K)));
    } else if (spec.constraint_kind == ConstraintLedger::Kind::ratio) {
      if (!(cell.p > 0.0 && cell.p < 1.0))
        throw ConfigError("ratio constraint needs p strictly inside (0,1)");
      constraint = ConstraintSpec::ratio(cell.r, cell.K);
    }

    Scenario scenario(model, constraint, spec.make_horizon(cell.delta, model.v_max()),
                      spec.runs, spec.seed, spec.name);
    scenario.restricted_count = cell.restricted;

    BiddingPolicy truthful = BiddingPolicy::truthful(model.v_m, model.v_w);
    BiddingPolicy optimal = truthful;
    BiddingPolicy naive = BiddingPolicy::naive(model.v_m, model.v_w);
    if (spec.constraint_kind == ConstraintLedger::Kind::parity) {
      auto table = cache.parity(model, constraint.parity_K, spec.solver);
      optimal = BiddingPolicy::optimal(table, model.v_m, model.v_w);
    } else if (spec.constraint_kind == ConstraintLedger::Kind::ratio) {
      auto table =
          cache.ratio(model, cell.r, cell.K, spec.ratio_mu, spec.solver);
      optimal = BiddingPolicy::optimal(table, model.v_m, model.v_w);
    } else {
      naive = truthful;
    }

    std::vector<Variant> variants;
    if (spec.measure == "utility") {
      variants = {{optimal, cell.restricted},
                  {naive, cell.restricted},
                  {truthful, cell.restricted}};
    } else if (spec.measure == "overbid") {
      variants = {{optimal, cell.restricted}};
    } else {  // revenue
      variants = {{optimal, cell.restricted}, {truthful, cell.restricted}};
    }

    CoupledSeries series = run_coupled_series(scenario, variants, spec.runs,
                                              spec.seed, 1, want_episodes);

    std::ostringstream row;
    row << fmt_num(cell.p) << ',' << fmt_num(cell.K) << ',' << fmt_num(cell.r)
        << ',' << fmt_num(cell.delta) << ',' << fmt_num(cell.value_mu_m) << ','
        << cell.restricted;
    auto overbid_of = [&](std::size_t v) {
      return series.totals[v].participations_w > 0
                 ? series.totals[v].sum_overbid_w /
                       static_cast<double>(series.totals[v].participations_w)
                 : 0.0;
    };
    if (spec.measure == "utility") {
      double mu_truth = mean(series.utilities[2]);
      double r_opt = mean(series.utilities[0]) / mu_truth;
      double r_naive = mean(series.utilities[1]) / mu_truth;
      row << ',' << fmt_num(r_opt) << ','
          << fmt_num(paired_se(series.utilities[0], series.utilities[2], mu_truth))
          << ',' << fmt_num(r_naive) << ','
          << fmt_num(paired_se(series.utilities[1], series.utilities[2], mu_truth))
          << ',' << fmt_num(overbid_of(0));
    } else if (spec.measure == "overbid") {
      row << ',' << fmt_num(overbid_of(0));
    } else {
      double mu_base = mean(series.revenues[1]);
      row << ',' << fmt_num(mean(series.revenues[0]) / mu_base) << ','
          << fmt_num(paired_se(series.revenues[0], series.revenues[1], mu_base));
    }
    row << "\n";
    outputs[ci].aggregate_row = row.str();

    if (want_episodes) {
      std::ostringstream eps;
      for (std::size_t v = 0; v < variants.size(); ++v) {
        for (long e = 0; e < spec.runs; ++e) {
          const SimulationResult& r = series.episodes[v][e];
          double ob = r.participations_w > 0
                          ? r.sum_overbid_w / static_cast<double>(r.participations_w)
                          : 0.0;
          eps << spec.name << "[p=" << fmt_num(cell.p) << ",K=" << fmt_num(cell.K)
              << ",r=" << fmt_num(cell.r) << ",delta=" << fmt_num(cell.delta)
              << ",value_mu_m=" << fmt_num(cell.value_mu_m)
              << ",restricted=" << cell.restricted << "]" << ','
              << variants[v].policy.name() << ','
              << episode_seed(spec.seed, e) << ',' << fmt_num(r.total_utility)
              << ',' << r.wins_m << ',' << r.wins_w << ',' << fmt_num(ob) << ','
              << fmt_num(r.exchange_revenue) << ',' << r.violations << "\n";
        }
      }
      outputs[ci].episode_rows = eps.str();
    }
  });

  SimulateOutput out;
  std::ostringstream agg;
  agg << "p,K,r,delta,value_mu_m,restricted";
  if (spec.measure == "utility")
    agg << ",utility_ratio_optimal,se_optimal,utility_ratio_naive,se_naive,"
           "avg_overbid_w";
  else if (spec.measure == "overbid")
    agg << ",avg_overbid_w";
  else
    agg << ",revenue_ratio,se_revenue";
  agg << "\n";
  for (const CellOutput& c : outputs) agg << c.aggregate_row;
  out.aggregate_csv = agg.str();

  if (want_episodes) {
    std::ostringstream eps;
    eps << "scenario_id,policy,seed,total_utility,wins_m,wins_w,avg_overbid_w,"
           "exchange_revenue,violations\n";
    for (const CellOutput& c : outputs) eps << c.episode_rows;
    out.episodes_csv = eps.str();
  }
  return out;
}

SolveOutput run_solve(const ExperimentSpec& spec) {
  if (spec.constraint_kind == ConstraintLedger::Kind::ratio &&
      !(spec.p > 0.0 && spec.p < 1.0))
    throw ConfigError("ratio constraint needs p strictly inside (0,1)");
  MarketModel model = spec.model.build(spec.p, spec.delta, spec.alpha);
  SolverConfig cfg = spec.solver;
  cfg.record_trace = true;

  SolveOutput out;
  std::ostringstream table_text, manifest;
  auto start = std::chrono::steady_clock::now();

  if (spec.constraint_kind == ConstraintLedger::Kind::parity) {
    ParityValueTable table =
        solve_parity(model, static_cast<int>(std::lround(spec.constraint_K)), cfg);
    save_table(table, table_text);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    manifest << "kind,parity\nK," << static_cast<int>(std::lround(spec.constraint_K))
             << "\nepsilon," << cfg.epsilon << "\niterations," << table.iterations
             << "\nconverged_delta," << table.converged_delta << "\nwall_ms,"
             << ms << "\ndelta_trace\n";
    for (double d : table.delta_trace) manifest << d << "\n";
    out.kind = "parity";
  } else if (spec.constraint_kind == ConstraintLedger::Kind::ratio) {
    RatioValueTable table =
        solve_ratio(model, spec.constraint_r, spec.constraint_K, spec.ratio_mu, cfg);
    save_table(table, table_text);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    manifest << "kind,ratio\nr," << spec.constraint_r << "\nK," << spec.constraint_K
             << "\nmu," << spec.ratio_mu << "\nepsilon," << cfg.epsilon
             << "\niterations," << table.iterations << "\nconverged_delta,"
             << table.converged_delta << "\nwall_ms," << ms << "\ndelta_trace\n";
    for (double d : table.delta_trace) manifest << d << "\n";
    out.kind = "ratio";
  } else {
    throw ConfigError("solve: constraint.kind must be parity or ratio");
  }

  out.table_text = table_text.str();
  out.manifest_text = manifest.str();
  return out;
}

}  // namespace fairbid
