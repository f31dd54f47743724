#include "fairbid/parity_solver.hpp"

#include <algorithm>
#include <cmath>

namespace fairbid {

namespace {

inline int idx(int K, int k, Group g) { return (k + K) * 2 + static_cast<int>(g); }

inline double mix(const std::vector<double>& V, int K, double p, int k) {
  return p * V[idx(K, k, Group::male)] + (1.0 - p) * V[idx(K, k, Group::female)];
}

inline int win_successor(int k, Group g) {
  return g == Group::male ? k + 1 : k - 1;
}

inline double phi_from(const std::vector<double>& V, const MarketModel& m, int K,
                       Group g, int k) {
  return m.value(g) +
         m.delta * (mix(V, K, m.p, win_successor(k, g)) - mix(V, K, m.p, k));
}

}  // namespace

double parity_sweep(const MarketModel& model, int K, const CostCurve& curve_m,
                    const CostCurve& curve_w, const std::vector<double>& V_in,
                    std::vector<double>& V_out) {
  double delta_max = 0.0;
  for (int k = -K; k <= K; ++k) {
    for (Group g : {Group::male, Group::female}) {
      const int i = idx(K, k, g);
      double nv;
      if ((k == K && g == Group::male) || (k == -K && g == Group::female)) {
        // forced zero bid: value comes entirely from the successor mixture
        nv = model.delta * mix(V_in, K, model.p, k);
      } else {
        const CostCurve& curve = g == Group::male ? curve_m : curve_w;
        double phi = phi_from(V_in, model, K, g, k);
        double b = std::max(0.0, phi);
        double qb = curve.q(b);
        double reward = qb * model.value(g) - curve.cost_given(b, qb);
        double n_win = mix(V_in, K, model.p, win_successor(k, g));
        double n_lose = mix(V_in, K, model.p, k);
        nv = reward + model.delta * (qb * n_win + (1.0 - qb) * n_lose);
      }
      delta_max = std::max(delta_max, std::abs(nv - V_in[i]));
      V_out[i] = nv;
    }
  }
  return delta_max;
}

ParityValueTable solve_parity(const MarketModel& model, int K,
                              const SolverConfig& cfg) {
  if (K < 1) throw std::invalid_argument("solve_parity: K must be >= 1");
  cfg.validate();

  const double bmax_m = resolve_b_max(cfg.b_max, model.g_m);
  const double bmax_w = resolve_b_max(cfg.b_max, model.g_w);
  CostCurve curve_m(model.g_m, model.alpha, bmax_m,
                    resolve_quad_step(cfg.quad_step, bmax_m));
  CostCurve curve_w(model.g_w, model.alpha, bmax_w,
                    resolve_quad_step(cfg.quad_step, bmax_w));

  const int n_states = 2 * (2 * K + 1);
  std::vector<double> V(n_states, (model.v_m + model.v_w) / 2.0);
  std::vector<double> V_next(n_states);

  ParityValueTable table;
  table.K = K;
  table.epsilon = cfg.epsilon;
  table.model_fingerprint = model.fingerprint();

  double d = 0.0;
  long it = 0;
  bool converged = false;
  while (it < cfg.max_iterations) {
    ++it;
    d = parity_sweep(model, K, curve_m, curve_w, V, V_next);
    V.swap(V_next);
    if (cfg.record_trace) table.delta_trace.push_back(d);
    if (d < cfg.epsilon) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NonConvergenceError("solve_parity: no convergence after " +
                                  std::to_string(it) + " sweeps (delta " +
                                  std::to_string(d) + ")",
                              d, it);

  table.V = std::move(V);
  table.converged_delta = d;
  table.iterations = it;
  table.Phi.assign(n_states, 0.0);
  for (int k = -K; k <= K; ++k)
    for (Group g : {Group::male, Group::female})
      if (!table.is_edge(k, g))
        table.Phi[idx(K, k, g)] = phi_from(table.V, model, K, g, k);
  return table;
}

double optimal_parity_bid(const ParityValueTable& table, int k, Group theta) {
  if (!table.contains(k))
    throw std::out_of_range("optimal_parity_bid: |k| > K");
  if (table.is_edge(k, theta)) return 0.0;
  return std::max(0.0, table.phi(k, theta));
}

double immediate_reward(const MarketModel& model, Group theta, double b,
                        double quad_step) {
  const BidDistribution& dist = model.dist(theta);
  double step = resolve_quad_step(quad_step, resolve_b_max(0.0, dist));
  double qb = win_probability(dist, model.alpha, b);
  return qb * model.value(theta) - expected_cost(dist, model.alpha, b, step);
}

double future_value(const ParityValueTable& table, const MarketModel& model,
                    Group theta, int k, double b) {
  if (!table.contains(k)) throw std::out_of_range("future_value: |k| > K");
  double qb = win_probability(model.dist(theta), model.alpha, b);
  double n_lose = mix(table.V, table.K, model.p, k);
  if (qb == 0.0) return n_lose;
  if (table.is_edge(k, theta))
    throw std::domain_error("future_value: positive win probability at an edge state");
  double n_win = mix(table.V, table.K, model.p, win_successor(k, theta));
  return qb * n_win + (1.0 - qb) * n_lose;
}

double conjoint_valuation(const ParityValueTable& table, const MarketModel& model,
                          Group theta, int k) {
  if (!table.contains(k)) throw std::out_of_range("conjoint_valuation: |k| > K");
  if (table.is_edge(k, theta))
    throw std::domain_error("conjoint_valuation: undefined at edge states");
  return phi_from(table.V, model, table.K, theta, k);
}

}  // namespace fairbid
