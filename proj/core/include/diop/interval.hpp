#pragma once

#include <functional>
#include <span>

#include "diop/types.hpp"

namespace diop {

/// Compact real interval [lo, hi] with finite endpoints and lo <= hi.
///
/// Construction with lo > hi throws; endpoints are never swapped silently.
/// Degenerate intervals (lo == hi) are valid and make every ordering below
/// collapse to the usual order on the reals.
class Interval {
 public:
  Interval(double lo, double hi);

  static Interval point(double v) { return {v, v}; }

  [[nodiscard]] double lo() const noexcept { return lo_; }
  [[nodiscard]] double hi() const noexcept { return hi_; }
  [[nodiscard]] double width() const noexcept { return hi_ - lo_; }
  [[nodiscard]] bool degenerate() const noexcept { return lo_ == hi_; }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_;
  double hi_;
};

/// Weight lambda in [0, 1] used to scalarize an interval.
class ScalarizationWeight {
 public:
  explicit ScalarizationWeight(double lambda);

  [[nodiscard]] double value() const noexcept { return lambda_; }
  /// True for lambda in the open interval (0, 1).
  [[nodiscard]] bool interior() const noexcept { return lambda_ > 0.0 && lambda_ < 1.0; }

 private:
  double lambda_;
};

/// Interval-valued map x -> [L(x), R(x)] on R^dim.
struct IntervalFn {
  int dim = 1;
  std::function<Interval(const Point&)> eval;

  Interval operator()(const Point& x) const { return eval(x); }
};

// Orderings compare endpoints exactly; any tolerance belongs to the caller.

/// a.lo <= b.lo
[[nodiscard]] bool leq_lower(const Interval& a, const Interval& b) noexcept;
/// a.hi <= b.hi
[[nodiscard]] bool leq_upper(const Interval& a, const Interval& b) noexcept;
/// Both endpoint orders hold.
[[nodiscard]] bool leq(const Interval& a, const Interval& b) noexcept;
/// leq(a, b) with at least one endpoint strictly smaller.
[[nodiscard]] bool strictly_dominates(const Interval& a, const Interval& b) noexcept;

/// lambda * g.lo + (1 - lambda) * g.hi, always inside [g.lo, g.hi].
[[nodiscard]] double scalarize(const Interval& g, ScalarizationWeight w) noexcept;

/// True iff no pool member v has leq(v, candidate) without leq(candidate, v).
/// Throws InvalidArgument for an empty pool.
[[nodiscard]] bool is_pareto_optimal_in(const Interval& candidate, std::span<const Interval> pool);

}  // namespace diop
