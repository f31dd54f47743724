// fairbid command-line runner: solve bidding tables, run auction experiments,
// generate synthetic bid logs, and validate solved tables against the
// brute-force grid search.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "fairbid/datalog.hpp"
#include "fairbid/experiments.hpp"
#include "fairbid/oracle.hpp"
#include "fairbid/table_io.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitValidation = 4;

fairbid::ExperimentSpec load_spec(const std::string& config_path,
                                  long seed_override, long runs_override) {
  fairbid::KeyValueConfig cfg = fairbid::KeyValueConfig::parse_file(config_path);
  fairbid::ExperimentSpec spec = fairbid::ExperimentSpec::load(cfg);
  if (seed_override >= 0) spec.seed = static_cast<uint64_t>(seed_override);
  if (runs_override > 0) spec.runs = runs_override;
  return spec;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int cmd_solve(const std::string& config_path, const std::string& out_path,
              long seed_override) {
  fairbid::ExperimentSpec spec = load_spec(config_path, seed_override, 0);
  fairbid::SolveOutput solved;
  try {
    solved = fairbid::run_solve(spec);
  } catch (const fairbid::NonConvergenceError& e) {
    std::cerr << "solve failed: " << e.what() << "\n";
    return kExitNoConvergence;
  }
  write_file(out_path, solved.table_text);
  write_file(out_path + ".manifest", solved.manifest_text);
  std::cout << "wrote " << solved.kind << " table to " << out_path << "\n";
  return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 long seed_override, long runs_override, int threads,
                 const std::string& episodes_path) {
  fairbid::ExperimentSpec spec = load_spec(config_path, seed_override, runs_override);
  fairbid::SimulateOutput out =
      fairbid::run_simulate(spec, threads, !episodes_path.empty());
  write_file(out_path, out.aggregate_csv);
  if (!episodes_path.empty()) write_file(episodes_path, out.episodes_csv);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int cmd_genlog(const std::string& config_path, const std::string& out_path,
               long seed_override) {
  fairbid::KeyValueConfig cfg = fairbid::KeyValueConfig::parse_file(config_path);
  std::string keyword = cfg.get_string("genlog.keyword", "kw0");
  double mu = cfg.get_double("genlog.mu", -2.8);
  double sigma_sq = cfg.get_double("genlog.sigma_sq", 0.7);
  long buckets = cfg.get_long("genlog.buckets", 192);
  long per_bucket = cfg.get_long("genlog.per_bucket", 50);
  uint64_t seed = static_cast<uint64_t>(
      seed_override >= 0 ? seed_override : cfg.get_long("genlog.seed", 1));
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  fairbid::write_synthetic_log(out, keyword, mu, sigma_sq, buckets, per_bucket,
                               seed);
  std::cout << "wrote " << buckets * per_bucket << " records to " << out_path
            << "\n";
  return 0;
}

int cmd_validate(const std::string& table_path, const std::string& config_path,
                 const std::string& out_path, double grid_steps_tolerance) {
  fairbid::ExperimentSpec spec = load_spec(config_path, -1, 0);
  fairbid::MarketModel model = spec.model.build(spec.p, spec.delta, spec.alpha);

  std::string kind = fairbid::table_kind_of_file(table_path);
  fairbid::GridSearchReport report;
  double b_max = std::max(fairbid::resolve_b_max(spec.solver.b_max, model.g_m),
                          fairbid::resolve_b_max(spec.solver.b_max, model.g_w));
  double grid_step = b_max / 2000.0;
  if (kind == "parity") {
    fairbid::ParityValueTable table = fairbid::load_parity_table_file(table_path);
    if (table.model_fingerprint != model.fingerprint()) {
      std::cerr << "validate: table was solved for a different model\n";
      return kExitValidation;
    }
    report = fairbid::validate_parity_table(table, model, grid_step);
  } else {
    fairbid::RatioValueTable table = fairbid::load_ratio_table_file(table_path);
    if (table.model_fingerprint != model.fingerprint()) {
      std::cerr << "validate: table was solved for a different model\n";
      return kExitValidation;
    }
    report = fairbid::validate_ratio_table(table, model, grid_step);
  }

  if (!out_path.empty()) {
    std::ofstream out(out_path);
    report.write_csv(out);
  }
  double tolerance = grid_steps_tolerance * grid_step;
  long failures = 0;
  for (const auto& row : report.rows)
    if (row.gap > tolerance) {
      if (failures < 20)
        std::cerr << "gap " << row.gap << " at " << row.state << "\n";
      ++failures;
    }
  std::cout << "checked " << report.rows.size() << " states, max gap "
            << report.max_gap() << " (tolerance " << tolerance << ")\n";
  if (failures > 0) {
    std::cerr << failures << " states exceed tolerance\n";
    return kExitValidation;
  }
  return 0;
}

int cmd_stationarity(const std::string& log_path, const std::string& keyword,
                     const std::string& range_a, const std::string& range_b) {
  auto parse_range = [](const std::string& s) {
    std::size_t colon = s.find(':');
    if (colon == std::string::npos)
      throw fairbid::ConfigError("bucket range must be lo:hi");
    return std::pair<long, long>{std::stol(s.substr(0, colon)),
                                 std::stol(s.substr(colon + 1))};
  };
  std::ifstream in(log_path);
  if (!in) throw std::runtime_error("cannot open " + log_path);
  fairbid::BidLog log = fairbid::BidLog::parse(in);
  auto [alo, ahi] = parse_range(range_a);
  auto [blo, bhi] = parse_range(range_b);
  fairbid::BidDistribution d1 = log.empirical_cdf_for(keyword, alo, ahi);
  fairbid::BidDistribution d2 = log.empirical_cdf_for(keyword, blo, bhi);
  double ks = fairbid::stationarity_distance(d1, d2);
  std::cout << "ks_statistic," << ks << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairbid: optimal bidding under win-parity constraints in "
               "repeated second-price auctions"};
  app.require_subcommand(1);

  std::string config_path, out_path = "out.csv", episodes_path, table_path;
  std::string log_path, keyword, range_a, range_b;
  long seed_override = -1, runs_override = 0;
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  double grid_steps_tolerance = 2.0;

  CLI::App* solve = app.add_subcommand("solve", "solve a value table");
  solve->add_option("--config", config_path)->required();
  solve->add_option("--out", out_path)->required();
  solve->add_option("--seed", seed_override);

  CLI::App* simulate = app.add_subcommand("simulate", "run an experiment sweep");
  simulate->add_option("--config", config_path)->required();
  simulate->add_option("--out", out_path)->required();
  simulate->add_option("--seed", seed_override);
  simulate->add_option("--runs", runs_override, "override sim.runs");
  simulate->add_option("--threads", threads);
  simulate->add_option("--episodes", episodes_path, "per-episode CSV path");

  CLI::App* genlog = app.add_subcommand("genlog", "write a synthetic bid log");
  genlog->add_option("--config", config_path)->required();
  genlog->add_option("--out", out_path)->required();
  genlog->add_option("--seed", seed_override);

  CLI::App* validate =
      app.add_subcommand("validate", "grid-search check of a solved table");
  validate->add_option("--table", table_path)->required();
  validate->add_option("--config", config_path)->required();
  validate->add_option("--out", out_path);
  validate->add_option("--grid-steps", grid_steps_tolerance,
                       "allowed argmax gap in grid steps");

  CLI::App* stationarity =
      app.add_subcommand("stationarity", "two-sample KS distance between periods");
  stationarity->add_option("--log", log_path)->required();
  stationarity->add_option("--keyword", keyword)->required();
  stationarity->add_option("--range-a", range_a)->required();
  stationarity->add_option("--range-b", range_b)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(config_path, out_path, seed_override);
    if (simulate->parsed())
      return cmd_simulate(config_path, out_path, seed_override, runs_override,
                          threads, episodes_path);
    if (genlog->parsed()) return cmd_genlog(config_path, out_path, seed_override);
    if (validate->parsed())
      return cmd_validate(table_path, config_path, out_path, grid_steps_tolerance);
    if (stationarity->parsed())
      return cmd_stationarity(log_path, keyword, range_a, range_b);
  } catch (const fairbid::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const fairbid::NonConvergenceError& e) {
    std::cerr << "solver did not converge: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
