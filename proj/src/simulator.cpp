#include "fairbid/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fairbid {

namespace {
// stream ids for (seed, round, stream) derivation
constexpr uint64_t kStreamGender = 0;
constexpr uint64_t kStreamCompetitors = 1;
constexpr uint64_t kStreamHorizon = 2;
}  // namespace

Horizon Horizon::fixed(long T) {
  if (T < 1) throw std::invalid_argument("Horizon::fixed: T must be >= 1");
  Horizon h;
  h.mode = Mode::fixed_discounted;
  h.fixed_rounds = T;
  return h;
}

Horizon Horizon::fixed_auto(double delta, double v_max, double tail) {
  if (!(delta >= 0.0 && delta < 1.0))
    throw std::invalid_argument("Horizon::fixed_auto: delta must be in [0,1)");
  if (delta == 0.0 || v_max <= 0.0) return fixed(1);
  double t = std::log(tail / v_max) / std::log(delta);
  long T = t <= 1.0 ? 1 : static_cast<long>(std::ceil(t));
  return fixed(T);
}

Horizon Horizon::geometric() {
  Horizon h;
  h.mode = Mode::geometric;
  return h;
}

ConstraintSpec ConstraintSpec::none() { return ConstraintSpec{}; }

ConstraintSpec ConstraintSpec::parity(int K) {
  ConstraintSpec c;
  c.kind = ConstraintLedger::Kind::parity;
  c.parity_K = K;
  return c;
}

ConstraintSpec ConstraintSpec::ratio(double r, double K) {
  ConstraintSpec c;
  c.kind = ConstraintLedger::Kind::ratio;
  c.ratio_r = r;
  c.ratio_K = K;
  return c;
}

ConstraintLedger ConstraintSpec::make_ledger(double p) const {
  switch (kind) {
    case ConstraintLedger::Kind::none: return ConstraintLedger::none();
    case ConstraintLedger::Kind::parity: return ConstraintLedger::parity(parity_K);
    case ConstraintLedger::Kind::ratio: return ConstraintLedger::ratio(ratio_r, ratio_K, p);
  }
  return ConstraintLedger::none();
}

Scenario::Scenario(MarketModel m, ConstraintSpec c, Horizon h, long runs_,
                   uint64_t seed_, std::string name_)
    : model(std::move(m)),
      competitor_g_m(model.g_m),
      competitor_g_w(model.g_w),
      constraint(c),
      horizon(h),
      runs(runs_),
      seed(seed_),
      name(std::move(name_)) {
  if (runs < 1) throw std::invalid_argument("Scenario: runs must be >= 1");
}

std::pair<int, double> run_auction(std::span<const double> bids) {
  if (bids.size() < 2)
    throw std::invalid_argument("run_auction: need at least 2 bids");
  int winner = 0;
  double best = bids[0];
  for (std::size_t i = 1; i < bids.size(); ++i) {
    if (bids[i] > best) {
      best = bids[i];
      winner = static_cast<int>(i);
    }
    if (bids[i] < 0.0 || !std::isfinite(bids[i]))
      throw std::invalid_argument("run_auction: bids must be finite and >= 0");
  }
  if (bids[0] < 0.0 || !std::isfinite(bids[0]))
    throw std::invalid_argument("run_auction: bids must be finite and >= 0");
  double second = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < bids.size(); ++i) {
    if (static_cast<int>(i) == winner) continue;
    if (!any || bids[i] > second) second = bids[i];
    any = true;
  }
  return {winner, second};
}

namespace {

struct VariantState {
  const BiddingPolicy* policy;
  int restricted_count;
  ConstraintLedger focal_ledger;
  std::vector<ConstraintLedger> competitor_ledgers;
  SimulationResult result;
  bool alive = true;
  std::vector<double> bids;  // scratch, size alpha
};

}  // namespace

std::vector<SimulationResult> run_coupled_episode(const Scenario& scenario,
                                                  std::span<const Variant> variants,
                                                  uint64_t seed) {
  const MarketModel& m = scenario.model;
  const int alpha = m.alpha;

  std::vector<VariantState> states;
  states.reserve(variants.size());
  for (const Variant& v : variants) {
    if (v.restricted_count < 0 || v.restricted_count > alpha)
      throw std::invalid_argument("run_coupled_episode: restricted_count out of range");
    if (v.policy.variant == BiddingPolicy::Variant::optimal_parity &&
        v.policy.parity_table->model_fingerprint != m.fingerprint())
      throw PolicyError("run_coupled_episode: parity table solved for another model");
    if (v.policy.variant == BiddingPolicy::Variant::optimal_ratio &&
        v.policy.ratio_table->model_fingerprint != m.fingerprint())
      throw PolicyError("run_coupled_episode: ratio table solved for another model");
    VariantState st;
    st.policy = &v.policy;
    st.restricted_count = std::max(1, v.restricted_count);
    ConstraintLedger ledger = v.policy.is_constrained()
                                  ? scenario.constraint.make_ledger(m.p)
                                  : ConstraintLedger::none();
    st.focal_ledger = ledger;
    st.competitor_ledgers.assign(st.restricted_count - 1, ledger);
    st.bids.resize(alpha);
    states.push_back(std::move(st));
  }

  long T;
  if (scenario.horizon.mode == Horizon::Mode::fixed_discounted) {
    T = scenario.horizon.fixed_rounds;
  } else {
    Rng horizon_rng(derive_stream(seed, 0, kStreamHorizon));
    T = horizon_rng.geometric_lifespan(m.delta);
  }

  std::vector<double> competitor_values(alpha - 1);
  double weight = 1.0;

  for (long t = 0; t < T; ++t) {
    Rng gender_rng(derive_stream(seed, static_cast<uint64_t>(t), kStreamGender));
    Group theta = gender_rng.bernoulli(m.p) ? Group::male : Group::female;

    Rng comp_rng(derive_stream(seed, static_cast<uint64_t>(t), kStreamCompetitors));
    const BidDistribution& comp_dist = scenario.competitor_dist(theta);
    for (int j = 0; j < alpha - 1; ++j)
      competitor_values[j] = comp_dist.sample(comp_rng);

    for (VariantState& st : states) {
      if (!st.alive) continue;
      st.result.rounds = t + 1;
      const BiddingPolicy& policy = *st.policy;

      st.bids[0] = policy.bid(st.focal_ledger, theta);
      for (int j = 0; j < alpha - 1; ++j) st.bids[j + 1] = competitor_values[j];
      // constrained competitors override their drawn value with the policy bid
      for (std::size_t j = 0; j < st.competitor_ledgers.size(); ++j)
        st.bids[j + 1] = policy.bid(st.competitor_ledgers[j], theta);

      if (st.bids[0] > 0.0) {
        ++st.result.participations;
        if (theta == Group::female) {
          ++st.result.participations_w;
          st.result.sum_overbid_w += std::max(0.0, st.bids[0] - policy.v_w);
        }
      }

      auto [winner, price] = run_auction(st.bids);
      if (st.bids[winner] <= 0.0) continue;  // nobody bid: slot unsold

      st.result.exchange_revenue += price;
      try {
        if (winner == 0) {
          st.focal_ledger.record_outcome(theta, true);
          st.result.total_utility += weight * (m.value(theta) - price);
          st.result.discounted_payments += weight * price;
          st.result.discounted_won_value += weight * m.value(theta);
          if (theta == Group::male)
            ++st.result.wins_m;
          else
            ++st.result.wins_w;
        } else if (static_cast<std::size_t>(winner - 1) <
                   st.competitor_ledgers.size()) {
          st.competitor_ledgers[winner - 1].record_outcome(theta, true);
        }
      } catch (const ConstraintViolationError&) {
        ++st.result.violations;
        st.alive = false;  // abort this variant, keep the partial result
      }
    }

    if (scenario.horizon.mode == Horizon::Mode::fixed_discounted)
      weight *= m.delta;
    bool any_alive = false;
    for (const VariantState& st : states) any_alive |= st.alive;
    if (!any_alive) break;
  }

  std::vector<SimulationResult> out;
  out.reserve(states.size());
  for (VariantState& st : states) out.push_back(st.result);
  return out;
}

SimulationResult run_episode(const Scenario& scenario, const BiddingPolicy& policy,
                             uint64_t seed) {
  Variant v{policy, scenario.restricted_count};
  return run_coupled_episode(scenario, std::span<const Variant>(&v, 1), seed)[0];
}

uint64_t episode_seed(uint64_t base_seed, long episode) {
  return derive_stream(base_seed, 0x45504953ull, static_cast<uint64_t>(episode));
}

double paired_se(std::span<const double> a, std::span<const double> b,
                 double scale) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("paired_se: mismatched series");
  const std::size_t n = a.size();
  if (n == 1) return 0.0;
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = a[i] - b[i] - mean;
    ss += d * d;
  }
  double sd = std::sqrt(ss / static_cast<double>(n - 1));
  return sd / std::sqrt(static_cast<double>(n)) / scale;
}

namespace {

RatioEstimate coupled_ratio(const Scenario& scenario, const Variant& numer,
                            const Variant& denom, uint64_t seed, bool revenue) {
  RatioEstimate est;
  est.numer.reserve(scenario.runs);
  est.denom.reserve(scenario.runs);
  std::vector<Variant> variants{numer, denom};
  for (long e = 0; e < scenario.runs; ++e) {
    auto results = run_coupled_episode(scenario, variants, episode_seed(seed, e));
    est.numer.push_back(revenue ? results[0].exchange_revenue
                                : results[0].total_utility);
    est.denom.push_back(revenue ? results[1].exchange_revenue
                                : results[1].total_utility);
  }
  double sn = 0.0, sd = 0.0;
  for (long e = 0; e < scenario.runs; ++e) {
    sn += est.numer[e];
    sd += est.denom[e];
  }
  est.mean_numer = sn / static_cast<double>(scenario.runs);
  est.mean_denom = sd / static_cast<double>(scenario.runs);
  if (est.mean_denom <= 0.0)
    throw std::domain_error("ratio undefined: baseline mean is not positive");
  est.ratio = est.mean_numer / est.mean_denom;
  est.paired_se = paired_se(est.numer, est.denom, est.mean_denom);
  return est;
}

}  // namespace

RatioEstimate utility_ratio(const Scenario& scenario,
                            const BiddingPolicy& constrained, uint64_t seed) {
  Variant numer{constrained, scenario.restricted_count};
  Variant denom{BiddingPolicy::truthful(constrained.v_m, constrained.v_w),
                scenario.restricted_count};
  return coupled_ratio(scenario, numer, denom, seed, /*revenue=*/false);
}

RatioEstimate revenue_ratio(const Scenario& scenario,
                            const BiddingPolicy& restricted_policy,
                            uint64_t seed) {
  if (scenario.restricted_count < 1)
    throw std::invalid_argument("revenue_ratio: restricted_count must be >= 1");
  Variant numer{restricted_policy, scenario.restricted_count};
  Variant denom{BiddingPolicy::truthful(restricted_policy.v_m, restricted_policy.v_w),
                scenario.restricted_count};
  return coupled_ratio(scenario, numer, denom, seed, /*revenue=*/true);
}

double average_overbid(std::span<const SimulationResult> results) {
  double sum = 0.0;
  long n = 0;
  for (const SimulationResult& r : results) {
    sum += r.sum_overbid_w;
    n += r.participations_w;
  }
  if (n == 0) throw std::domain_error("average_overbid: no female participations");
  return sum / static_cast<double>(n);
}

}  // namespace fairbid
