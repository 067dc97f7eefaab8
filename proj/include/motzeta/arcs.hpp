#ifndef MOTZETA_ARCS_HPP
#define MOTZETA_ARCS_HPP

#include <optional>
#include <utility>
#include <vector>

#include "motzeta/jet_kernel.hpp"
#include "motzeta/laurent.hpp"
#include "motzeta/polynomial.hpp"

namespace motzeta {

/** Per-variable valuation constraint on the arc's coefficients. */
struct VarConstraint {
  enum class Kind {
    Free,   // val >= 0
    MinVal, // val >= min_val
    Zero,   // variable identically zero
    Point,  // val >= 0 with phi(0) = point
  };
  Kind kind = Kind::Free;
  long min_val = 0; // MinVal only
  long point = 0;   // Point only, taken mod qf

  static VarConstraint free_var() { return {}; }
  static VarConstraint positive() { return {Kind::MinVal, 1, 0}; }
  static VarConstraint min_val_at_least(long k) { return {Kind::MinVal, k, 0}; }
  static VarConstraint zero() { return {Kind::Zero, 0, 0}; }
  static VarConstraint at_point(long c) { return {Kind::Point, 0, c}; }
};

/** One truncated-arc counting problem over F_qf. */
struct ArcTask {
  enum class Target {
    ExactTm, // f(phi) == t^level mod t^(level+1)
    RvT,     // same congruence in the rescaled variable (caller sets trunc = 2*level)
    None,    // no condition on f: counts the base-constraint set only
  };

  IntPolynomial f;
  long level = 1; // m
  long trunc = 2; // number of t-coefficients kept per variable
  int qf = 3;
  std::vector<VarConstraint> base; // one entry per variable
  Target target = Target::ExactTm;
};

/** Runtime enumeration budget: counts candidate evaluations. */
class Budget {
public:
  static constexpr long kDefaultCap = 1000000000; // 10^9
  explicit Budget(Int cap = Int(kDefaultCap)) : cap_(std::move(cap)) {}
  void charge(long n) {
    used_ += n;
    if (used_ > cap_) raise_exceeded();
  }
  const Int& used() const { return used_; }
  const Int& cap() const { return cap_; }

private:
  [[noreturn]] void raise_exceeded() const;
  Int used_{0};
  Int cap_;
};

/** Exact count of arcs satisfying the task. */
Int count_arcs(const ArcTask& task, Budget& budget);

/** Same, with an explicit jet-kernel variant (for equivalence testing). */
Int count_arcs_with_kernel(const ArcTask& task, Budget& budget, const JetKernel& kernel);

/** Variable blocks (x, y, z) of sizes (d1, d2, d3), in variable order. */
struct BlockSpec {
  int d1 = 0, d2 = 0, d3 = 0;
  int total() const { return d1 + d2 + d3; }
};

/** Predicate over block vanishing, evaluated on (x-block == 0, y-block == 0). */
struct BlockPredicate {
  enum class Kind { True, XZero, YZero, XNonzero, YNonzero, And, Or };
  Kind kind = Kind::True;
  std::vector<BlockPredicate> args; // And/Or children

  static BlockPredicate of(Kind k) { return {k, {}}; }
  static BlockPredicate all_of(std::vector<BlockPredicate> a) {
    return {Kind::And, std::move(a)};
  }
  static BlockPredicate any_of(std::vector<BlockPredicate> a) {
    return {Kind::Or, std::move(a)};
  }
  bool eval(bool xzero, bool yzero) const;
};

/** An arc-counting problem restricted by a block predicate. */
struct SetSpec {
  ArcTask task;
  BlockSpec blocks;
  BlockPredicate pred;
};

/** Exact count of the predicate-restricted set (inclusion-exclusion over
 *  forced-zero block patterns). */
Int count_set(const SetSpec& spec, Budget& budget);

/**
 * Normalized class: count * qf^(-trunc*n + n) with n the number of active
 * (not identically zero) variables; invariant under enlarging trunc.
 */
Rat xtilde(const SetSpec& spec, Budget& budget);

/** True iff every monomial balances x-degree against y-degree and f(0) = 0. */
bool weight_check(const IntPolynomial& f, const BlockSpec& blocks);

/**
 * One-variable annulus val(x) = p/qden at level m*qden, truncation 2*m*qden:
 * returns the exact count and its normalized value. The realized condition
 * at this truncation is ord(x) < m*r with r = min(p, 2*qden).
 */
std::pair<Int, Rat> annulus_count(long p, long qden, long m, int qf, Budget& budget);

} // namespace motzeta

#endif
