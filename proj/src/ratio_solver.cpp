#include "fairbid/ratio_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fairbid {

bool male_win_blocked(double r, double K, double p, long n_m, long n_w) {
  if (n_m < 0 || n_w < 0)
    throw std::invalid_argument("male_win_blocked: counts must be >= 0");
  return r * (1.0 - p) * static_cast<double>(n_m + 1) >
         p * static_cast<double>(n_w) + K;
}

bool female_win_blocked(double r, double K, double p, long n_m, long n_w) {
  if (n_m < 0 || n_w < 0)
    throw std::invalid_argument("female_win_blocked: counts must be >= 0");
  return r * p * static_cast<double>(n_w + 1) >
         (1.0 - p) * static_cast<double>(n_m) + K;
}

bool ratio_state_feasible(double r, double K, double p, long n_m, long n_w) {
  const double tol = 1e-12;
  return r * p * static_cast<double>(n_w) <=
             (1.0 - p) * static_cast<double>(n_m) + K + tol &&
         r * (1.0 - p) * static_cast<double>(n_m) <=
             p * static_cast<double>(n_w) + K + tol;
}

int ratio_female_grid_max(double r, double K, double p, int mu) {
  // nudge below the exact value so 0.8*100+5 ceils to 85, not 86
  double bound = r * (1.0 - p) / p * static_cast<double>(mu) + K;
  return static_cast<int>(std::ceil(bound - 1e-9));
}

namespace {

inline double mix(const std::vector<double>& V, const RatioValueTable& t, double p,
                  long n_m, long n_w) {
  int base = t.index(n_m, n_w, Group::male);
  return p * V[base] + (1.0 - p) * V[base + 1];
}

// successor mixture after winning a theta slot; wins that would leave the
// grid fall back to the current cell's value
inline double mix_win(const std::vector<double>& V, const RatioValueTable& t,
                      double p, long n_m, long n_w, Group g) {
  long sm = n_m + (g == Group::male ? 1 : 0);
  long sw = n_w + (g == Group::female ? 1 : 0);
  if (!t.in_grid(sm, sw)) return mix(V, t, p, n_m, n_w);
  return mix(V, t, p, sm, sw);
}

inline double phi_from(const std::vector<double>& V, const RatioValueTable& t,
                       const MarketModel& m, Group g, long n_m, long n_w) {
  return m.value(g) + m.delta * (mix_win(V, t, m.p, n_m, n_w, g) -
                                 mix(V, t, m.p, n_m, n_w));
}

}  // namespace

double ratio_sweep(const MarketModel& model, const RatioValueTable& shape,
                   const CostCurve& curve_m, const CostCurve& curve_w,
                   const std::vector<double>& V_in, std::vector<double>& V_out) {
  double delta_max = 0.0;
  for (long n_m = 0; n_m <= shape.mu; ++n_m) {
    for (long n_w = 0; n_w <= shape.n_w_max; ++n_w) {
      for (Group g : {Group::male, Group::female}) {
        const int i = shape.index(n_m, n_w, g);
        double nv;
        if (shape.blocked(n_m, n_w, g)) {
          nv = model.delta * mix(V_in, shape, model.p, n_m, n_w);
        } else {
          const CostCurve& curve = g == Group::male ? curve_m : curve_w;
          double phi = phi_from(V_in, shape, model, g, n_m, n_w);
          double b = std::max(0.0, phi);
          double qb = curve.q(b);
          double reward = qb * model.value(g) - curve.cost_given(b, qb);
          double n_win = mix_win(V_in, shape, model.p, n_m, n_w, g);
          double n_lose = mix(V_in, shape, model.p, n_m, n_w);
          nv = reward + model.delta * (qb * n_win + (1.0 - qb) * n_lose);
        }
        delta_max = std::max(delta_max, std::abs(nv - V_in[i]));
        V_out[i] = nv;
      }
    }
  }
  return delta_max;
}

RatioValueTable solve_ratio(const MarketModel& model, double r, double K, int mu,
                            const SolverConfig& cfg) {
  if (mu < 1) throw std::invalid_argument("solve_ratio: mu must be >= 1");
  if (!(r > 0.0 && r <= 1.0))
    throw std::invalid_argument("solve_ratio: r must be in (0,1]");
  if (K < 0.0) throw std::invalid_argument("solve_ratio: K must be >= 0");
  if (!(model.p > 0.0 && model.p < 1.0))
    throw std::invalid_argument("solve_ratio: p must be strictly inside (0,1)");
  cfg.validate();

  RatioValueTable table;
  table.r = r;
  table.K = K;
  table.p = model.p;
  table.mu = mu;
  table.n_w_max = ratio_female_grid_max(r, K, model.p, mu);
  table.epsilon = cfg.epsilon;
  table.model_fingerprint = model.fingerprint();

  const double bmax_m = resolve_b_max(cfg.b_max, model.g_m);
  const double bmax_w = resolve_b_max(cfg.b_max, model.g_w);
  CostCurve curve_m(model.g_m, model.alpha, bmax_m,
                    resolve_quad_step(cfg.quad_step, bmax_m));
  CostCurve curve_w(model.g_w, model.alpha, bmax_w,
                    resolve_quad_step(cfg.quad_step, bmax_w));

  const std::size_t n_states =
      static_cast<std::size_t>((mu + 1) * (table.n_w_max + 1) * 2);
  std::vector<double> V(n_states, (model.v_m + model.v_w) / 2.0);
  std::vector<double> V_next(n_states);

  double d = 0.0;
  long it = 0;
  bool converged = false;
  while (it < cfg.max_iterations) {
    ++it;
    d = ratio_sweep(model, table, curve_m, curve_w, V, V_next);
    V.swap(V_next);
    if (cfg.record_trace) table.delta_trace.push_back(d);
    if (d < cfg.epsilon) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NonConvergenceError("solve_ratio: no convergence after " +
                                  std::to_string(it) + " sweeps (delta " +
                                  std::to_string(d) + ")",
                              d, it);

  table.V = std::move(V);
  table.converged_delta = d;
  table.iterations = it;
  table.Phi.assign(n_states, 0.0);
  for (long n_m = 0; n_m <= mu; ++n_m)
    for (long n_w = 0; n_w <= table.n_w_max; ++n_w)
      for (Group g : {Group::male, Group::female})
        if (!table.blocked(n_m, n_w, g))
          table.Phi[table.index(n_m, n_w, g)] =
              phi_from(table.V, table, model, g, n_m, n_w);
  return table;
}

double optimal_ratio_bid(const RatioValueTable& table, long n_m, long n_w,
                         Group theta) {
  if (!ratio_state_feasible(table.r, table.K, table.p, n_m, n_w))
    throw std::out_of_range("optimal_ratio_bid: infeasible state");
  if (table.blocked(n_m, n_w, theta)) return 0.0;
  if (n_m < table.mu && n_w <= table.n_w_max)
    return std::max(0.0, table.phi(n_m, n_w, theta));
  return extrapolated_bid(table, n_m, n_w, theta);
}

double extrapolated_bid(const RatioValueTable& table, long n_m, long n_w,
                        Group theta) {
  if (n_m < 1)
    throw std::out_of_range("extrapolated_bid: requires n_m >= 1");
  const long row = table.mu - 1;
  double rho = static_cast<double>(n_w) / static_cast<double>(n_m) *
               static_cast<double>(table.mu - 1);
  double lo_f = std::floor(rho);
  long lo = std::clamp(static_cast<long>(lo_f), 0l,
                       static_cast<long>(table.n_w_max));
  long hi = std::clamp(static_cast<long>(std::ceil(rho)), 0l,
                       static_cast<long>(table.n_w_max));
  double phi_lo = table.phi(row, lo, theta);
  double phi_hi = table.phi(row, hi, theta);
  double frac = rho - lo_f;
  return std::max(0.0, phi_lo + frac * (phi_hi - phi_lo));
}

}  // namespace fairbid
