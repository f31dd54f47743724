#pragma once

#include <memory>
#include <stdexcept>

#include "fairbid/parity_solver.hpp"
#include "fairbid/ratio_solver.hpp"

namespace fairbid {

class ConstraintViolationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class PolicyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Running win counts plus constraint parameters; the authority on whether
/// the advertiser may win the offered slot. The constraint is audited after
/// every recorded win, not just at campaign end.
struct ConstraintLedger {
  enum class Kind { none, parity, ratio };

  Kind kind = Kind::none;
  int parity_K = 0;
  double ratio_r = 0.0;
  double ratio_K = 0.0;
  double p = 0.0;  // ratio kind only
  long n_m = 0;
  long n_w = 0;

  static ConstraintLedger none();
  static ConstraintLedger parity(int K);
  static ConstraintLedger ratio(double r, double K, double p);

  long count(Group g) const { return g == Group::male ? n_m : n_w; }
  int difference() const { return static_cast<int>(n_m - n_w); }

  bool allowed_to_win(Group theta) const;
  bool satisfied() const;

  /// Increments the winner's count iff won; re-checks the invariant and
  /// throws ConstraintViolationError on violation.
  void record_outcome(Group theta, bool won);
};

/// Immutable bidding behavior: truthful, screen-then-truthful, or the
/// solved-table optimal variants.
struct BiddingPolicy {
  enum class Variant { truthful, naive_constrained, optimal_parity, optimal_ratio };

  Variant variant = Variant::truthful;
  double v_m = 0.0;
  double v_w = 0.0;
  std::shared_ptr<const ParityValueTable> parity_table;
  std::shared_ptr<const RatioValueTable> ratio_table;

  static BiddingPolicy truthful(double v_m, double v_w);
  static BiddingPolicy naive(double v_m, double v_w);
  static BiddingPolicy optimal(std::shared_ptr<const ParityValueTable> table,
                               double v_m, double v_w);
  static BiddingPolicy optimal(std::shared_ptr<const RatioValueTable> table,
                               double v_m, double v_w);

  double value(Group g) const { return g == Group::male ? v_m : v_w; }
  bool is_constrained() const { return variant != Variant::truthful; }
  const char* name() const;

  /// The bid for the offered slot given the current ledger. A zero bid is
  /// the "skip" action.
  double bid(const ConstraintLedger& ledger, Group theta) const;
};

}  // namespace fairbid
