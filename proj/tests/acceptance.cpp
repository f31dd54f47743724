// Acceptance suite: one test case per release criterion, each printing a
// single PASS/FAIL line. Run via ctest or directly as fairbid_acceptance.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "fairbid/datalog.hpp"
#include "fairbid/experiments.hpp"
#include "fairbid/oracle.hpp"
#include "fairbid/simulator.hpp"

using namespace fairbid;

namespace {

int g_threads = 2;

struct Criterion {
  int id;
  const char* title;
  bool ok = true;

  Criterion(int id_, const char* title_) : id(id_), title(title_) {}
  void expect(bool cond) {
    ok = ok && cond;
    CHECK(cond);
  }
  ~Criterion() {
    std::printf("[criterion %02d] %s - %s\n", id, ok ? "PASS" : "FAIL", title);
    std::fflush(stdout);
  }
};

const std::vector<double>& p_grid() {
  static std::vector<double> g{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  return g;
}

// shared symmetric empirical sample set (one synthetic bid stream, both genders)
MarketModel symmetric_market(double p, double delta) {
  return symmetric_empirical_model(p, delta, 10, 20000, 7);
}

double combined_se(double a, double b) { return std::sqrt(a * a + b * b); }

}  // namespace

TEST_CASE("criterion 1: parity optimal bids match the grid-search argmax") {
  Criterion c(1, "parity Phi = grid-search argmax within 2 steps of b_max/2000");
  const double deltas[] = {0.9, 0.99, 0.999};
  const int Ks[] = {1, 3, 10};
  Rng rng(2024);
  std::vector<double> gaps(20), steps(20);
  parallel_for(20, g_threads, [&](std::size_t i) {
    Rng local(derive_stream(9001, i, 0));
    double mu_m = -3.6 + local.uniform01() * 1.3;
    double mu_w = -3.6 + local.uniform01() * 1.3;
    double p = 0.1 + local.uniform01() * 0.8;
    MarketModel m(BidDistribution::log_normal(mu_m, 0.7),
                  BidDistribution::log_normal(mu_w, 0.7), 10, p,
                  lognormal_mean(-3.5 + local.uniform01() * 1.1, 0.7),
                  lognormal_mean(-3.5 + local.uniform01() * 1.1, 0.7),
                  deltas[i % 3]);
    ParityValueTable t = solve_parity(m, Ks[i % 3], SolverConfig{});
    double b_max = std::max(resolve_b_max(0.0, m.g_m), resolve_b_max(0.0, m.g_w));
    double step = b_max / 2000.0;
    GridSearchReport rep = validate_parity_table(t, m, step);
    gaps[i] = rep.max_gap();
    steps[i] = step;
  });
  for (int i = 0; i < 20; ++i) c.expect(gaps[i] <= 2.0 * steps[i]);
}

TEST_CASE("criterion 2: ratio optimal bids match the grid-search argmax") {
  Criterion c(2, "ratio Phi = grid-search argmax (mu <= 4, r in {0.8,1}, K in {1,5})");
  const double rs[] = {0.8, 1.0};
  const double Ks[] = {1.0, 5.0};
  const double deltas[] = {0.9, 0.99, 0.999};
  const double ps[] = {0.3, 0.5, 0.7};
  std::vector<double> gaps(8), steps(8);
  parallel_for(8, g_threads, [&](std::size_t i) {
    Rng local(derive_stream(9002, i, 0));
    MarketModel m(BidDistribution::log_normal(-3.6 + local.uniform01() * 1.3, 0.7),
                  BidDistribution::log_normal(-3.6 + local.uniform01() * 1.3, 0.7),
                  10, ps[i % 3],
                  lognormal_mean(-3.5 + local.uniform01() * 1.1, 0.7),
                  lognormal_mean(-3.5 + local.uniform01() * 1.1, 0.7),
                  deltas[i % 3]);
    int mu = 2 + static_cast<int>(i % 3);
    RatioValueTable t =
        solve_ratio(m, rs[i % 2], Ks[(i / 2) % 2], mu, SolverConfig{});
    double b_max = std::max(resolve_b_max(0.0, m.g_m), resolve_b_max(0.0, m.g_w));
    double step = b_max / 2000.0;
    GridSearchReport rep = validate_ratio_table(t, m, step);
    gaps[i] = rep.max_gap();
    steps[i] = step;
  });
  for (int i = 0; i < 8; ++i) c.expect(gaps[i] <= 2.0 * steps[i]);
}

TEST_CASE("criterion 3: solver values sit within the contraction bound of the expectimax") {
  Criterion c(3, "|V_solver - V_expectimax(8)| <= delta^8*v_max/(1-delta) + slack");
  MarketModel m = expensive_female_equal_value(0.6, 0.9);
  const int K = 2, T = 8;
  ParityValueTable t = solve_parity(m, K, SolverConfig{});
  ConstraintStateSpace space = ConstraintStateSpace::parity(K);
  std::vector<double> v8 = finite_horizon_expectimax(m, space, T, 401);
  double bound = std::pow(m.delta, T) * m.v_max() / (1.0 - m.delta);
  double slack = 0.02 * m.v_max();
  for (int k = -K; k <= K; ++k) {
    for (Group g : {Group::male, Group::female}) {
      double vs = t.value(k, g);
      double ve = v8[2 * (k + K) + static_cast<int>(g)];
      c.expect(std::abs(vs - ve) <= bound + slack);
      c.expect(ve <= vs + 10.0 * t.epsilon + slack);  // truncation from below
    }
  }
}

TEST_CASE("criterion 4: delta = 0 collapses Phi to v exactly") {
  Criterion c(4, "delta=0: |Phi - v| <= 1e-9 at all non-edge states, both solvers");
  MarketModel mp = equal_price_female_valuable(0.4, 0.0);
  ParityValueTable tp = solve_parity(mp, 3, SolverConfig{});
  for (int k = -3; k <= 3; ++k)
    for (Group g : {Group::male, Group::female})
      if (!tp.is_edge(k, g))
        c.expect(std::abs(tp.phi(k, g) - mp.value(g)) <= 1e-9);

  MarketModel mr = expensive_female_equal_value(0.45, 0.0);
  RatioValueTable tr = solve_ratio(mr, 0.8, 5, 6, SolverConfig{});
  for (long nm = 0; nm <= tr.mu; ++nm)
    for (long nw = 0; nw <= tr.n_w_max; ++nw)
      for (Group g : {Group::male, Group::female})
        if (!tr.blocked(nm, nw, g))
          c.expect(std::abs(tr.phi(nm, nw, g) - mr.value(g)) <= 1e-9);
}

TEST_CASE("criterion 5: one million audited auctions per constraint kind") {
  Criterion c(5, "10^6 simulated auctions per constraint kind, zero violations");
  MarketModel m = expensive_female_equal_value(0.5, 0.9);
  const long T = 10000;

  auto run_block = [&](ConstraintSpec spec, const BiddingPolicy& policy,
                       long episodes, uint64_t seed) {
    Scenario s(m, spec, Horizon::fixed(T), episodes, seed);
    std::vector<Variant> v{{policy, 1}};
    CoupledSeries series = run_coupled_series(s, v, episodes, seed, g_threads);
    c.expect(series.totals[0].violations == 0);
    c.expect(series.totals[0].rounds == episodes * T);
    return series.totals[0];
  };

  // unconstrained
  run_block(ConstraintSpec::none(), BiddingPolicy::truthful(m.v_m, m.v_w), 100, 51);

  // parity: screened and optimal halves
  auto pt = std::make_shared<ParityValueTable>(solve_parity(m, 2, SolverConfig{}));
  run_block(ConstraintSpec::parity(2), BiddingPolicy::naive(m.v_m, m.v_w), 50, 52);
  run_block(ConstraintSpec::parity(2), BiddingPolicy::optimal(pt, m.v_m, m.v_w), 50,
            53);

  // ratio: screened and optimal halves
  auto rt =
      std::make_shared<RatioValueTable>(solve_ratio(m, 0.8, 5, 30, SolverConfig{}));
  run_block(ConstraintSpec::ratio(0.8, 5), BiddingPolicy::naive(m.v_m, m.v_w), 50,
            54);
  run_block(ConstraintSpec::ratio(0.8, 5),
            BiddingPolicy::optimal(rt, m.v_m, m.v_w), 50, 55);
}

TEST_CASE("criterion 6: r=1, p=1/2 ratio constraint is 2K-parity") {
  Criterion c(6, "blocked sets equal 2K-parity exactly; shared values within 10*eps");
  const int K = 1;
  const double eps = 1e-4;
  for (long nm = 0; nm <= 60; ++nm)
    for (long nw = 0; nw <= 60; ++nw) {
      c.expect(male_win_blocked(1.0, K, 0.5, nm, nw) == (nm + 1 - nw > 2 * K));
      c.expect(female_win_blocked(1.0, K, 0.5, nm, nw) == (nw + 1 - nm > 2 * K));
    }

  SolverConfig cfg;
  cfg.epsilon = eps;
  MarketModel m = expensive_female_equal_value(0.5, 0.9);
  RatioValueTable ratio = solve_ratio(m, 1.0, K, 60, cfg);
  ParityValueTable parity = solve_parity(m, 2 * K, cfg);
  long compared = 0;
  for (long nm = 0; nm <= 20; ++nm)
    for (long nw = 0; nw <= 20; ++nw) {
      long k = nm - nw;
      if (std::labs(k) > 2 * K) continue;
      for (Group g : {Group::male, Group::female}) {
        c.expect(std::abs(ratio.value(nm, nw, g) -
                          parity.value(static_cast<int>(k), g)) <= 10.0 * eps);
        ++compared;
      }
    }
  c.expect(compared > 100);
}

TEST_CASE("criterion 7: cost of K-parity rises with K and vanishes for K=20 at p=1/2") {
  Criterion c(7, "utility_ratio non-decreasing in K per p; K=20 ratio > 0.98 at p=0.5");
  auto t_start = std::chrono::steady_clock::now();
  const std::vector<int> Ks{1, 5, 10, 20};
  const long runs = 100;
  const double delta = 0.999;

  struct Cell {
    std::vector<double> ratios;                // per K
    std::vector<std::vector<double>> series;   // utilities per K
    std::vector<double> truth;
    double mean_truth = 0.0;
  };
  std::vector<Cell> cells(p_grid().size());

  parallel_for(p_grid().size(), g_threads, [&](std::size_t pi) {
    double p = p_grid()[pi];
    MarketModel m = symmetric_market(p, delta);

    // the symmetric-market per-round rewards sit near the default epsilon, so
    // these solves need a tighter tolerance to move off the truthful start
    SolverConfig cfg;
    cfg.epsilon = 1e-5;

    // one scenario per K so each ledger matches its table's bound; the shared
    // seed keeps the gender and competitor draws identical across all of them
    Cell& cell = cells[pi];
    cell.series.resize(Ks.size());
    for (std::size_t ki = 0; ki < Ks.size(); ++ki) {
      auto table =
          std::make_shared<ParityValueTable>(solve_parity(m, Ks[ki], cfg));
      Scenario sk(m, ConstraintSpec::parity(Ks[ki]),
                  Horizon::fixed_auto(delta, m.v_max()), runs, 42, "kparity_cost");
      std::vector<Variant> pair{{BiddingPolicy::optimal(table, m.v_m, m.v_w), 1},
                                {BiddingPolicy::truthful(m.v_m, m.v_w), 1}};
      CoupledSeries cs = run_coupled_series(sk, pair, runs, 42, 1);
      cell.series[ki] = cs.utilities[0];
      cell.truth = cs.utilities[1];
    }
    cell.mean_truth = mean(cell.truth);
    for (std::size_t ki = 0; ki < Ks.size(); ++ki)
      cell.ratios.push_back(mean(cell.series[ki]) / cell.mean_truth);
  });

  for (std::size_t pi = 0; pi < p_grid().size(); ++pi) {
    const Cell& cell = cells[pi];
    for (std::size_t ki = 0; ki + 1 < cell.ratios.size(); ++ki) {
      double se = paired_se(cell.series[ki + 1], cell.series[ki], cell.mean_truth);
      c.expect(cell.ratios[ki + 1] >= cell.ratios[ki] - 2.0 * se);
    }
  }
  const Cell& mid = cells[4];  // p = 0.5
  double se20 = paired_se(mid.series[3], mid.truth, mid.mean_truth);
  c.expect(mid.ratios[3] > 0.98 - 2.0 * se20);
  std::printf("    ratios at p=0.5 for K=1/5/10/20: %.4f %.4f %.4f %.4f\n",
              mid.ratios[0], mid.ratios[1], mid.ratios[2], mid.ratios[3]);

  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  std::printf("    full p x K sweep, 100 coupled runs each: %.1f s\n", elapsed);
  c.expect(elapsed < 300.0);
}

TEST_CASE("criterion 8: the optimal strategy dominates naive screening") {
  Criterion c(8, "optimal utility_ratio >= naive - 2 paired se, 10-parity and (0.8,5)-ratio");
  const long runs = 100;
  const double delta = 0.999;
  struct Row {
    double opt_par, naive_par, opt_rat, naive_rat;
    double se_par, se_rat;
  };
  std::vector<Row> rows(p_grid().size());

  // the assumed male-win cap must clear the states the episode actually
  // visits, or the grid-boundary approximation leaks optimistic values into
  // the female bids; the reachable male count grows with p
  auto ratio_mu = [](double p) { return p <= 0.3 ? 30 : p <= 0.7 ? 120 : 150; };

  parallel_for(p_grid().size(), g_threads, [&](std::size_t pi) {
    double p = p_grid()[pi];
    MarketModel m = expensive_female_equal_value(p, delta);
    auto pt = std::make_shared<ParityValueTable>(solve_parity(m, 10, SolverConfig{}));
    auto rt = std::make_shared<RatioValueTable>(
        solve_ratio(m, 0.8, 5, ratio_mu(p), SolverConfig{}));
    Horizon h = Horizon::fixed_auto(delta, m.v_max());

    Scenario sp(m, ConstraintSpec::parity(10), h, runs, 77, "kcompare");
    std::vector<Variant> vp{{BiddingPolicy::optimal(pt, m.v_m, m.v_w), 1},
                            {BiddingPolicy::naive(m.v_m, m.v_w), 1},
                            {BiddingPolicy::truthful(m.v_m, m.v_w), 1}};
    CoupledSeries cp = run_coupled_series(sp, vp, runs, 77, 1);
    double mt = mean(cp.utilities[2]);
    rows[pi].opt_par = mean(cp.utilities[0]) / mt;
    rows[pi].naive_par = mean(cp.utilities[1]) / mt;
    rows[pi].se_par = paired_se(cp.utilities[0], cp.utilities[1], mt);

    Scenario sr(m, ConstraintSpec::ratio(0.8, 5), h, runs, 77, "rcompare");
    std::vector<Variant> vr{{BiddingPolicy::optimal(rt, m.v_m, m.v_w), 1},
                            {BiddingPolicy::naive(m.v_m, m.v_w), 1},
                            {BiddingPolicy::truthful(m.v_m, m.v_w), 1}};
    CoupledSeries cr = run_coupled_series(sr, vr, runs, 77, 1);
    double mtr = mean(cr.utilities[2]);
    rows[pi].opt_rat = mean(cr.utilities[0]) / mtr;
    rows[pi].naive_rat = mean(cr.utilities[1]) / mtr;
    rows[pi].se_rat = paired_se(cr.utilities[0], cr.utilities[1], mtr);
  });

  for (const Row& r : rows) {
    c.expect(r.opt_par >= r.naive_par - 2.0 * r.se_par);
    c.expect(r.opt_rat >= r.naive_rat - 2.0 * r.se_rat);
  }
}

TEST_CASE("criterion 9: female overbidding grows with p and with the male value ratio") {
  Criterion c(9, "overbid Spearman > 0.9 vs p (value ratios > 1) and vs value ratio at p=0.5");
  const long runs = 30;
  const double delta = 0.999;
  const std::vector<double> value_mus{-3.2, -2.8, -2.4};  // ratios 1.35, 2.01, 3.00

  std::vector<std::vector<double>> overbids(value_mus.size(),
                                            std::vector<double>(p_grid().size()));
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t vi = 0; vi < value_mus.size(); ++vi)
    for (std::size_t pi = 0; pi < p_grid().size(); ++pi) jobs.push_back({vi, pi});

  parallel_for(jobs.size(), g_threads, [&](std::size_t j) {
    auto [vi, pi] = jobs[j];
    MarketModel m =
        expensive_female_equal_value(p_grid()[pi], delta, 10, value_mus[vi]);
    auto table =
        std::make_shared<ParityValueTable>(solve_parity(m, 10, SolverConfig{}));
    Scenario s(m, ConstraintSpec::parity(10), Horizon::fixed_auto(delta, m.v_max()),
               runs, 99, "overbids");
    std::vector<Variant> v{{BiddingPolicy::optimal(table, m.v_m, m.v_w), 1}};
    CoupledSeries cs = run_coupled_series(s, v, runs, 99, 1);
    overbids[vi][pi] = average_overbid({&cs.totals[0], 1});
  });

  for (std::size_t vi = 0; vi < value_mus.size(); ++vi)
    c.expect(spearman(p_grid(), overbids[vi]) > 0.9);

  // value-ratio sweep at p = 0.5, adding a fourth, higher male valuation
  std::vector<double> mus{-3.2, -2.8, -2.4, -2.0};
  std::vector<double> by_ratio(mus.size());
  parallel_for(mus.size(), g_threads, [&](std::size_t vi) {
    MarketModel m = expensive_female_equal_value(0.5, delta, 10, mus[vi]);
    auto table =
        std::make_shared<ParityValueTable>(solve_parity(m, 10, SolverConfig{}));
    Scenario s(m, ConstraintSpec::parity(10), Horizon::fixed_auto(delta, m.v_max()),
               runs, 99, "overbids_ratio");
    std::vector<Variant> v{{BiddingPolicy::optimal(table, m.v_m, m.v_w), 1}};
    CoupledSeries cs = run_coupled_series(s, v, runs, 99, 1);
    by_ratio[vi] = average_overbid({&cs.totals[0], 1});
  });
  c.expect(spearman(mus, by_ratio) > 0.9);
}

TEST_CASE("criterion 10: the exchange keeps its revenue") {
  Criterion c(10, "revenue_ratio >= 0.99 - 2se with one (0.8,5) advertiser; non-decreasing in count");
  const long runs = 300;
  const double delta = 0.999;
  // scarce men make the ratio constraint bite, so the restricted advertisers
  // genuinely deviate (skips early, growing overbids as more join)
  MarketModel m = symmetric_market(0.1, delta);
  SolverConfig cfg;
  cfg.epsilon = 1e-5;
  auto table = std::make_shared<RatioValueTable>(solve_ratio(m, 0.8, 5, 60, cfg));
  BiddingPolicy optimal = BiddingPolicy::optimal(table, m.v_m, m.v_w);
  BiddingPolicy truthful = BiddingPolicy::truthful(m.v_m, m.v_w);

  Scenario s(m, ConstraintSpec::ratio(0.8, 5), Horizon::fixed_auto(delta, m.v_max()),
             runs, 1234, "revenue");
  std::vector<Variant> variants;
  for (int rc = 1; rc <= 5; ++rc) {
    variants.push_back({optimal, rc});
    variants.push_back({truthful, rc});
  }
  CoupledSeries cs = run_coupled_series(s, variants, runs, 1234, g_threads);

  std::vector<double> ratios(5), ses(5);
  for (int rc = 1; rc <= 5; ++rc) {
    const auto& numer = cs.revenues[2 * (rc - 1)];
    const auto& denom = cs.revenues[2 * (rc - 1) + 1];
    double md = mean(denom);
    ratios[rc - 1] = mean(numer) / md;
    ses[rc - 1] = paired_se(numer, denom, md);
  }
  c.expect(ratios[0] >= 0.99 - 2.0 * ses[0]);
  std::vector<double> counts{1, 2, 3, 4, 5};
  c.expect(spearman(counts, ratios) > 0.9);
  std::printf("    revenue ratios by restricted count:");
  for (int rc = 0; rc < 5; ++rc) std::printf(" %.5f", ratios[rc]);
  std::printf("\n");
}

TEST_CASE("criterion 11: short-lived advertisers pay nothing for parity") {
  Criterion c(11, "10-parity ratio >= 0.995 at lifespan 5; strictly lower at 1000");
  const long runs = 100;
  auto measure = [&](double delta) {
    MarketModel m = expensive_female_equal_value(0.5, delta);
    auto table =
        std::make_shared<ParityValueTable>(solve_parity(m, 10, SolverConfig{}));
    Scenario s(m, ConstraintSpec::parity(10), Horizon::fixed_auto(delta, m.v_max()),
               runs, 555, "lifespan");
    return utility_ratio(s, BiddingPolicy::optimal(table, m.v_m, m.v_w), 555);
  };
  RatioEstimate short_lived = measure(0.8);    // expected lifespan 5
  RatioEstimate long_lived = measure(0.999);   // expected lifespan 1000
  c.expect(short_lived.ratio >= 0.995);
  c.expect(long_lived.ratio <
           short_lived.ratio -
               2.0 * combined_se(short_lived.paired_se, long_lived.paired_se));
  std::printf("    lifespan 5 ratio %.5f, lifespan 1000 ratio %.5f\n",
              short_lived.ratio, long_lived.ratio);
}

TEST_CASE("criterion 12: steady-state participation of the screening chain") {
  Criterion c(12, "closed form = 2/3 at (1/2,1); chain agreement 1e-9; simulation within 1%");
  c.expect(steady_state_participation(0.5, 1) == 2.0 / 3.0);
  for (int K = 1; K <= 5; ++K)
    for (int pi = 1; pi <= 9; ++pi) {
      double p = pi / 10.0;
      c.expect(std::abs(steady_state_participation(p, K) -
                        parity_chain_participation(p, K)) <= 1e-9);
    }

  // near-certain-win regime: value far above any competing bid
  const double p = 0.3;
  const int K = 2;
  BidDistribution comp = BidDistribution::log_normal(-2.8, 0.7);
  MarketModel m(comp, comp, 10, p, 50.0, 50.0, 0.9);
  Scenario s(m, ConstraintSpec::parity(K), Horizon::fixed(100000), 1, 31337,
             "steady_state");
  SimulationResult r =
      run_episode(s, BiddingPolicy::naive(50.0, 50.0), episode_seed(31337, 0));
  double simulated =
      static_cast<double>(r.participations) / static_cast<double>(r.rounds);
  double analytic = steady_state_participation(p, K);
  c.expect(std::abs(simulated - analytic) <= 0.01 * analytic);
  c.expect(r.violations == 0);
}

TEST_CASE("criterion 13: solver and look-up performance envelope") {
  Criterion c(13, "parity K=20 < 120 s; ratio mu=100 < 600 s; bid look-up < 1 us");
  using clock = std::chrono::steady_clock;

  MarketModel m = equal_price_female_valuable(0.5, 0.999);
  auto t0 = clock::now();
  ParityValueTable parity = solve_parity(m, 20, SolverConfig{});
  double parity_s = std::chrono::duration<double>(clock::now() - t0).count();
  c.expect(parity_s < 120.0);
  c.expect(parity.converged_delta < 1e-3);

  auto t1 = clock::now();
  RatioValueTable ratio = solve_ratio(m, 0.8, 5, 100, SolverConfig{});
  double ratio_s = std::chrono::duration<double>(clock::now() - t1).count();
  c.expect(ratio_s < 600.0);
  c.expect(ratio.converged_delta < 1e-3);

  // median per-call cost of the table look-up, batched to beat timer noise
  ParityValueTable lookup = solve_parity(m, 10, SolverConfig{});
  std::vector<double> batch_ns;
  double sink = 0.0;
  for (int b = 0; b < 1000; ++b) {
    auto s = clock::now();
    for (int i = 0; i < 1000; ++i) {
      int k = (b + i) % 21 - 10;
      Group g = (i & 1) ? Group::female : Group::male;
      sink += optimal_parity_bid(lookup, k, g);
    }
    batch_ns.push_back(
        std::chrono::duration<double, std::nano>(clock::now() - s).count() /
        1000.0);
  }
  std::nth_element(batch_ns.begin(), batch_ns.begin() + 500, batch_ns.end());
  double median_ns = batch_ns[500];
  c.expect(median_ns < 1000.0);
  c.expect(sink >= 0.0);
  std::printf("    solve timings: parity K=20 %.2fs, ratio mu=100 %.2fs, "
              "lookup %.0f ns\n",
              parity_s, ratio_s, median_ns);
}

TEST_CASE("criterion 14: stationarity statistic separates stationary from shifted logs") {
  Criterion c(14, "KS(halves) < 0.05; KS(mu shifted by 0.5) > 0.1");
  std::ostringstream log_a, log_b;
  write_synthetic_log(log_a, "kw", -2.8, 0.7, 100, 100, 21);   // 10^4 records
  write_synthetic_log(log_b, "kw", -3.3, 0.7, 100, 100, 22);   // mu shifted 0.5
  std::istringstream in_a(log_a.str()), in_b(log_b.str());
  BidLog a = BidLog::parse(in_a);
  BidLog b = BidLog::parse(in_b);

  BidDistribution first = a.empirical_cdf_for("kw", 0, 49);
  BidDistribution second = a.empirical_cdf_for("kw", 50, 99);
  double within = stationarity_distance(first, second);
  c.expect(within < 0.05);

  BidDistribution whole_a = a.empirical_cdf_for("kw", 0, 99);
  BidDistribution whole_b = b.empirical_cdf_for("kw", 0, 99);
  double across = stationarity_distance(whole_a, whole_b);
  c.expect(across > 0.1);
}
