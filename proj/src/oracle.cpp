#include "fairbid/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace fairbid {

double grid_search_best_bid(const BidDistribution& dist, int alpha, double phi,
                            double b_max, double grid_step) {
  if (grid_step <= 0.0)
    throw std::invalid_argument("grid_search_best_bid: grid_step must be > 0");
  double best_bid = 0.0;
  double best_obj = -std::numeric_limits<double>::infinity();
  double integral = 0.0;
  double q_prev = win_probability(dist, alpha, 0.0);
  double x_prev = 0.0;
  for (long i = 0;; ++i) {
    double b = static_cast<double>(i) * grid_step;
    if (b > b_max + grid_step / 2.0) break;
    double qb = win_probability(dist, alpha, b);
    if (i > 0) {
      integral += (b - x_prev) * (q_prev + qb) / 2.0;
      x_prev = b;
      q_prev = qb;
    }
    double obj = qb * (phi - b) + integral;  // q*phi - c with c = q*b - integral
    if (obj > best_obj) {
      best_obj = obj;
      best_bid = b;
    }
  }
  return best_bid;
}

double GridSearchReport::max_gap() const {
  double g = 0.0;
  for (const Row& r : rows) g = std::max(g, r.gap);
  return g;
}

void GridSearchReport::write_csv(std::ostream& out) const {
  out << "state,best_bid,phi_bid,gap\n";
  for (const Row& r : rows) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g\n", r.state.c_str(),
                  r.best_bid, r.phi_bid, r.gap);
    out << buf;
  }
}

namespace {

// shared scan across table states; the grid and its q/integral accumulation
// are computed once per gender
struct GenderGrid {
  std::vector<double> q, integral, bids;
};

GenderGrid build_grid(const BidDistribution& dist, int alpha, double b_max,
                      double step) {
  GenderGrid g;
  long n = static_cast<long>(std::floor(b_max / step)) + 1;
  g.q.resize(n);
  g.integral.resize(n);
  g.bids.resize(n);
  for (long i = 0; i < n; ++i) {
    g.bids[i] = static_cast<double>(i) * step;
    g.q[i] = win_probability(dist, alpha, g.bids[i]);
    g.integral[i] =
        i == 0 ? 0.0
               : g.integral[i - 1] + step * (g.q[i - 1] + g.q[i]) / 2.0;
  }
  return g;
}

double best_bid_on_grid(const GenderGrid& g, double phi) {
  double best_obj = -std::numeric_limits<double>::infinity();
  double best = 0.0;
  for (std::size_t i = 0; i < g.bids.size(); ++i) {
    double obj = g.q[i] * (phi - g.bids[i]) + g.integral[i];
    if (obj > best_obj) {
      best_obj = obj;
      best = g.bids[i];
    }
  }
  return best;
}

}  // namespace

GridSearchReport validate_parity_table(const ParityValueTable& table,
                                       const MarketModel& model,
                                       double grid_step) {
  GridSearchReport report;
  report.grid_step = grid_step;
  GenderGrid grids[2] = {
      build_grid(model.g_m, model.alpha, resolve_b_max(0.0, model.g_m), grid_step),
      build_grid(model.g_w, model.alpha, resolve_b_max(0.0, model.g_w), grid_step)};
  for (int k = -table.K; k <= table.K; ++k) {
    for (Group g : {Group::male, Group::female}) {
      if (table.is_edge(k, g)) continue;
      double phi = std::max(0.0, table.phi(k, g));
      double best = best_bid_on_grid(grids[static_cast<int>(g)], phi);
      report.rows.push_back({"k=" + std::to_string(k) + ",theta=" + group_name(g),
                             best, phi, std::abs(best - phi)});
    }
  }
  return report;
}

GridSearchReport validate_ratio_table(const RatioValueTable& table,
                                      const MarketModel& model, double grid_step) {
  GridSearchReport report;
  report.grid_step = grid_step;
  GenderGrid grids[2] = {
      build_grid(model.g_m, model.alpha, resolve_b_max(0.0, model.g_m), grid_step),
      build_grid(model.g_w, model.alpha, resolve_b_max(0.0, model.g_w), grid_step)};
  for (long n_m = 0; n_m <= table.mu; ++n_m) {
    for (long n_w = 0; n_w <= table.n_w_max; ++n_w) {
      for (Group g : {Group::male, Group::female}) {
        if (table.blocked(n_m, n_w, g)) continue;
        double phi = std::max(0.0, table.phi(n_m, n_w, g));
        double best = best_bid_on_grid(grids[static_cast<int>(g)], phi);
        report.rows.push_back({"n_m=" + std::to_string(n_m) +
                                   ",n_w=" + std::to_string(n_w) +
                                   ",theta=" + group_name(g),
                               best, phi, std::abs(best - phi)});
      }
    }
  }
  return report;
}

ConstraintStateSpace ConstraintStateSpace::parity(int K) {
  if (K < 1) throw std::invalid_argument("ConstraintStateSpace::parity: K >= 1");
  ConstraintStateSpace s;
  s.n_states = 2 * K + 1;
  s.blocked_m.resize(s.n_states);
  s.blocked_w.resize(s.n_states);
  s.succ_m.resize(s.n_states);
  s.succ_w.resize(s.n_states);
  for (int k = -K; k <= K; ++k) {
    int i = k + K;
    s.blocked_m[i] = k == K;
    s.blocked_w[i] = k == -K;
    s.succ_m[i] = k == K ? i : i + 1;
    s.succ_w[i] = k == -K ? i : i - 1;
    s.labels.push_back("k=" + std::to_string(k));
  }
  return s;
}

ConstraintStateSpace ConstraintStateSpace::ratio(double r, double K, double p,
                                                 int mu) {
  if (mu < 1) throw std::invalid_argument("ConstraintStateSpace::ratio: mu >= 1");
  int n_w_max = ratio_female_grid_max(r, K, p, mu);
  ConstraintStateSpace s;
  int stride = n_w_max + 1;
  s.n_states = (mu + 1) * stride;
  s.blocked_m.resize(s.n_states);
  s.blocked_w.resize(s.n_states);
  s.succ_m.resize(s.n_states);
  s.succ_w.resize(s.n_states);
  for (int n_m = 0; n_m <= mu; ++n_m) {
    for (int n_w = 0; n_w <= n_w_max; ++n_w) {
      int i = n_m * stride + n_w;
      bool bm = male_win_blocked(r, K, p, n_m, n_w) || n_m == mu;
      bool bw = female_win_blocked(r, K, p, n_m, n_w) || n_w == n_w_max;
      s.blocked_m[i] = bm;
      s.blocked_w[i] = bw;
      s.succ_m[i] = bm ? i : i + stride;
      s.succ_w[i] = bw ? i : i + 1;
      s.labels.push_back("n_m=" + std::to_string(n_m) +
                         ",n_w=" + std::to_string(n_w));
    }
  }
  return s;
}

std::vector<double> finite_horizon_expectimax(const MarketModel& model,
                                              const ConstraintStateSpace& space,
                                              int T, int bid_grid_points,
                                              double b_max) {
  if (T < 1 || T > 8)
    throw std::invalid_argument("finite_horizon_expectimax: T must be in [1,8]");
  if (bid_grid_points < 2 || bid_grid_points > 401)
    throw std::invalid_argument("finite_horizon_expectimax: bid grid cap is 401");
  if (space.n_states < 1 || 2 * space.n_states > 400)
    throw std::invalid_argument("finite_horizon_expectimax: state cap is 200");

  GenderGrid grids[2];
  for (Group g : {Group::male, Group::female}) {
    const BidDistribution& dist = model.dist(g);
    double bm = resolve_b_max(b_max, dist);
    grids[static_cast<int>(g)] =
        build_grid(dist, model.alpha, bm, bm / (bid_grid_points - 1));
  }

  const int n = space.n_states;
  std::vector<double> V(2 * n, 0.0), V_next(2 * n);
  auto mixed = [&](const std::vector<double>& v, int s) {
    return model.p * v[2 * s] + (1.0 - model.p) * v[2 * s + 1];
  };

  for (int step = 0; step < T; ++step) {
    for (int s = 0; s < n; ++s) {
      for (Group g : {Group::male, Group::female}) {
        double stay = mixed(V, s);
        double out;
        if (space.blocked(s, g)) {
          out = model.delta * stay;
        } else {
          double win = mixed(V, space.successor(s, g));
          const GenderGrid& grid = grids[static_cast<int>(g)];
          double best = -std::numeric_limits<double>::infinity();
          for (std::size_t i = 0; i < grid.bids.size(); ++i) {
            double q = grid.q[i];
            double cost = q * grid.bids[i] - grid.integral[i];
            double obj = q * model.value(g) - cost +
                         model.delta * (q * win + (1.0 - q) * stay);
            if (obj > best) best = obj;
          }
          out = best;
        }
        V_next[2 * s + static_cast<int>(g)] = out;
      }
    }
    V.swap(V_next);
  }
  return V;
}

SequencePlan plan_deterministic_sequence(std::span<const DeterministicRound> rounds,
                                         double v_m, double v_w, int parity_K,
                                         double delta) {
  const int T = static_cast<int>(rounds.size());
  const int n = 2 * parity_K + 1;
  // value-to-go by (round, k); undiscounted within the round, weighted later
  std::vector<std::vector<double>> value(T + 1, std::vector<double>(n, 0.0));
  for (int t = T - 1; t >= 0; --t) {
    Group g = rounds[t].gender;
    for (int k = -parity_K; k <= parity_K; ++k) {
      int i = k + parity_K;
      bool edge = (g == Group::male && k == parity_K) ||
                  (g == Group::female && k == -parity_K);
      double skip = delta * value[t + 1][i];
      if (edge) {
        value[t][i] = skip;
        continue;
      }
      int succ = g == Group::male ? i + 1 : i - 1;
      double v = g == Group::male ? v_m : v_w;
      double win = v - rounds[t].competitor_max + delta * value[t + 1][succ];
      value[t][i] = std::max(skip, win);
    }
  }

  SequencePlan plan;
  int k = 0;
  double weight = 1.0;
  for (int t = 0; t < T; ++t) {
    Group g = rounds[t].gender;
    int i = k + parity_K;
    bool edge = (g == Group::male && k == parity_K) ||
                (g == Group::female && k == -parity_K);
    double bid = 0.0;
    bool win = false;
    if (!edge) {
      int succ = g == Group::male ? i + 1 : i - 1;
      double v = g == Group::male ? v_m : v_w;
      // willingness to pay: slot value plus the future value unlocked by winning
      bid = std::max(0.0, v + delta * (value[t + 1][succ] - value[t + 1][i]));
      win = bid > rounds[t].competitor_max;
      if (win) {
        plan.total_utility += weight * (v - rounds[t].competitor_max);
        k += g == Group::male ? 1 : -1;
      }
    }
    plan.bids.push_back(bid);
    plan.wins.push_back(win);
    weight *= delta;
  }
  return plan;
}

SequencePlan play_sequence_truthful(std::span<const DeterministicRound> rounds,
                                    double v_m, double v_w, int parity_K,
                                    double delta) {
  SequencePlan plan;
  int k = 0;
  double weight = 1.0;
  for (const DeterministicRound& r : rounds) {
    bool edge = (r.gender == Group::male && k == parity_K) ||
                (r.gender == Group::female && k == -parity_K);
    double v = r.gender == Group::male ? v_m : v_w;
    double bid = edge ? 0.0 : v;
    bool win = !edge && bid > r.competitor_max;
    if (win) {
      plan.total_utility += weight * (v - r.competitor_max);
      k += r.gender == Group::male ? 1 : -1;
    }
    plan.bids.push_back(bid);
    plan.wins.push_back(win);
    weight *= delta;
  }
  return plan;
}

double steady_state_participation(double p, int K) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("steady_state_participation: p must be in (0,1)");
  if (K < 1) throw std::domain_error("steady_state_participation: K must be >= 1");
  if (std::abs(p - 0.5) < 1e-12)
    return 2.0 * K / (2.0 * K + 1.0);
  double lam = p / (1.0 - p);
  double lam2k = std::pow(lam, 2.0 * K);
  return 2.0 * p * (1.0 - p) * (1.0 - lam2k) / (1.0 - p * (1.0 + lam2k));
}

std::vector<double> parity_chain_stationary(double p, int K) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("parity_chain_stationary: p must be in (0,1)");
  const int n = 2 * K + 1;
  std::vector<double> pi(n, 1.0 / n), next(n);
  for (long iter = 0; iter < 2000000; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      int up = i < n - 1 ? i + 1 : i;    // male viewer moves +1 unless at K
      int down = i > 0 ? i - 1 : i;      // female viewer moves -1 unless at -K
      next[up] += pi[i] * p;
      next[down] += pi[i] * (1.0 - p);
    }
    double diff = 0.0;
    for (int i = 0; i < n; ++i) diff += std::abs(next[i] - pi[i]);
    pi.swap(next);
    if (diff < 1e-15) break;
  }
  return pi;
}

double parity_chain_participation(double p, int K) {
  std::vector<double> pi = parity_chain_stationary(p, K);
  return 1.0 - pi.back() * p - pi.front() * (1.0 - p);
}

}  // namespace fairbid
