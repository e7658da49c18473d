#include "diop/interval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace diop {

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw InvalidArgument("interval endpoints must be finite");
  }
  if (lo > hi) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "interval requires lo <= hi, got [" << lo << ", " << hi << "]";
    throw InvalidArgument(msg.str());
  }
}

ScalarizationWeight::ScalarizationWeight(double lambda) : lambda_(lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw InvalidArgument("scalarization weight must lie in [0, 1]");
  }
}

bool leq_lower(const Interval& a, const Interval& b) noexcept { return a.lo() <= b.lo(); }

bool leq_upper(const Interval& a, const Interval& b) noexcept { return a.hi() <= b.hi(); }

bool leq(const Interval& a, const Interval& b) noexcept {
  return leq_lower(a, b) && leq_upper(a, b);
}

bool strictly_dominates(const Interval& a, const Interval& b) noexcept {
  return (a.lo() < b.lo() && a.hi() <= b.hi()) || (a.lo() <= b.lo() && a.hi() < b.hi());
}

double scalarize(const Interval& g, ScalarizationWeight w) noexcept {
  const double lambda = w.value();
  // Rounding of the convex combination may step one ulp outside the interval.
  return std::clamp(lambda * g.lo() + (1.0 - lambda) * g.hi(), g.lo(), g.hi());
}

bool is_pareto_optimal_in(const Interval& candidate, std::span<const Interval> pool) {
  if (pool.empty()) {
    throw InvalidArgument("Pareto check needs a non-empty pool");
  }
  return std::none_of(pool.begin(), pool.end(), [&](const Interval& v) {
    return leq(v, candidate) && !leq(candidate, v);
  });
}

}  // namespace diop
