#include "fairbid/strategies.hpp"

#include <cmath>
#include <cstdlib>

namespace fairbid {

ConstraintLedger ConstraintLedger::none() { return ConstraintLedger{}; }

ConstraintLedger ConstraintLedger::parity(int K) {
  if (K < 1) throw std::invalid_argument("ConstraintLedger::parity: K must be >= 1");
  ConstraintLedger l;
  l.kind = Kind::parity;
  l.parity_K = K;
  return l;
}

ConstraintLedger ConstraintLedger::ratio(double r, double K, double p) {
  if (!(r > 0.0 && r <= 1.0))
    throw std::invalid_argument("ConstraintLedger::ratio: r must be in (0,1]");
  if (K < 0.0) throw std::invalid_argument("ConstraintLedger::ratio: K must be >= 0");
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("ConstraintLedger::ratio: p must be in (0,1)");
  ConstraintLedger l;
  l.kind = Kind::ratio;
  l.ratio_r = r;
  l.ratio_K = K;
  l.p = p;
  return l;
}

bool ConstraintLedger::allowed_to_win(Group theta) const {
  switch (kind) {
    case Kind::none:
      return true;
    case Kind::parity: {
      long nm = n_m + (theta == Group::male ? 1 : 0);
      long nw = n_w + (theta == Group::female ? 1 : 0);
      return std::labs(nm - nw) <= parity_K;
    }
    case Kind::ratio:
      return theta == Group::male
                 ? !male_win_blocked(ratio_r, ratio_K, p, n_m, n_w)
                 : !female_win_blocked(ratio_r, ratio_K, p, n_m, n_w);
  }
  return true;
}

bool ConstraintLedger::satisfied() const {
  switch (kind) {
    case Kind::none:
      return true;
    case Kind::parity:
      return std::labs(n_m - n_w) <= parity_K;
    case Kind::ratio:
      return ratio_state_feasible(ratio_r, ratio_K, p, n_m, n_w);
  }
  return true;
}

void ConstraintLedger::record_outcome(Group theta, bool won) {
  if (!won) return;
  if (!allowed_to_win(theta))
    throw ConstraintViolationError("record_outcome: win at a blocked state");
  if (theta == Group::male)
    ++n_m;
  else
    ++n_w;
  if (!satisfied())
    throw ConstraintViolationError("record_outcome: ledger invariant broken");
}

BiddingPolicy BiddingPolicy::truthful(double v_m, double v_w) {
  BiddingPolicy p;
  p.variant = Variant::truthful;
  p.v_m = v_m;
  p.v_w = v_w;
  return p;
}

BiddingPolicy BiddingPolicy::naive(double v_m, double v_w) {
  BiddingPolicy p;
  p.variant = Variant::naive_constrained;
  p.v_m = v_m;
  p.v_w = v_w;
  return p;
}

BiddingPolicy BiddingPolicy::optimal(std::shared_ptr<const ParityValueTable> table,
                                     double v_m, double v_w) {
  if (!table) throw PolicyError("optimal parity policy: null table");
  BiddingPolicy p;
  p.variant = Variant::optimal_parity;
  p.v_m = v_m;
  p.v_w = v_w;
  p.parity_table = std::move(table);
  return p;
}

BiddingPolicy BiddingPolicy::optimal(std::shared_ptr<const RatioValueTable> table,
                                     double v_m, double v_w) {
  if (!table) throw PolicyError("optimal ratio policy: null table");
  BiddingPolicy p;
  p.variant = Variant::optimal_ratio;
  p.v_m = v_m;
  p.v_w = v_w;
  p.ratio_table = std::move(table);
  return p;
}

const char* BiddingPolicy::name() const {
  switch (variant) {
    case Variant::truthful: return "truthful";
    case Variant::naive_constrained: return "naive";
    case Variant::optimal_parity: return "optimal_parity";
    case Variant::optimal_ratio: return "optimal_ratio";
  }
  return "?";
}

double BiddingPolicy::bid(const ConstraintLedger& ledger, Group theta) const {
  switch (variant) {
    case Variant::truthful:
      return value(theta);
    case Variant::naive_constrained:
      return ledger.allowed_to_win(theta) ? value(theta) : 0.0;
    case Variant::optimal_parity: {
      if (ledger.kind != ConstraintLedger::Kind::parity ||
          ledger.parity_K != parity_table->K)
        throw PolicyError("optimal_parity bid: ledger does not match the table");
      return optimal_parity_bid(*parity_table, ledger.difference(), theta);
    }
    case Variant::optimal_ratio: {
      if (ledger.kind != ConstraintLedger::Kind::ratio ||
          ledger.ratio_r != ratio_table->r || ledger.ratio_K != ratio_table->K ||
          ledger.p != ratio_table->p)
        throw PolicyError("optimal_ratio bid: ledger does not match the table");
      return optimal_ratio_bid(*ratio_table, ledger.n_m, ledger.n_w, theta);
    }
  }
  return 0.0;
}

}  // namespace fairbid
