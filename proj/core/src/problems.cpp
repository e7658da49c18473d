#include "diop/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

namespace diop {
namespace {

bool all_finite(const Point& x) { return x.allFinite(); }

void require_dim(const ConstraintSet& set, const Point& x) {
  if (x.size() != set.dim()) {
    throw InvalidArgument("point of dimension " + std::to_string(x.size()) +
                          " does not match constraint dimension " + std::to_string(set.dim()));
  }
}

}  // namespace

ConstraintSet ConstraintSet::ball(Point center, double radius) {
  if (center.size() < 1) throw InvalidArgument("ball center must have dimension >= 1");
  if (!all_finite(center)) throw InvalidArgument("ball center must be finite");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("ball radius must be > 0");
  const auto dim = static_cast<int>(center.size());
  return ConstraintSet(Ball{std::move(center), radius}, dim);
}

ConstraintSet ConstraintSet::box(Point lower, Point upper) {
  if (lower.size() < 1 || lower.size() != upper.size()) {
    throw InvalidArgument("box bounds must have equal, positive dimension");
  }
  if (!all_finite(lower) || !all_finite(upper)) throw InvalidArgument("box bounds must be finite");
  if ((lower.array() > upper.array()).any()) throw InvalidArgument("box requires lower <= upper componentwise");
  const auto dim = static_cast<int>(lower.size());
  return ConstraintSet(Box{std::move(lower), std::move(upper)}, dim);
}

Point ConstraintSet::project(const Point& x) const {
  require_dim(*this, x);
  if (const auto* b = std::get_if<Ball>(&shape_)) {
    Point offset = x - b->center;
    const double norm = offset.norm();
    if (norm <= b->radius) return x;
    double scale = b->radius / norm;
    Point y = b->center + scale * offset;
    // Shrink until the result passes the same membership test used above;
    // this keeps projection idempotent in floating point.
    while ((y - b->center).norm() > b->radius) {
      scale *= 1.0 - std::numeric_limits<double>::epsilon();
      y = b->center + scale * offset;
    }
    return y;
  }
  const auto& box = std::get<Box>(shape_);
  return x.cwiseMax(box.lower).cwiseMin(box.upper);
}

double ConstraintSet::distance(const Point& x) const { return (x - project(x)).norm(); }

bool ConstraintSet::contains(const Point& x, double tol) const { return distance(x) <= tol; }

double ConstraintSet::max_norm() const {
  if (const auto* b = std::get_if<Ball>(&shape_)) return b->center.norm() + b->radius;
  const auto& box = std::get<Box>(shape_);
  return box.lower.cwiseAbs().cwiseMax(box.upper.cwiseAbs()).norm();
}

Point ConstraintSet::anchor() const {
  if (const auto* b = std::get_if<Ball>(&shape_)) return b->center;
  const auto& box = std::get<Box>(shape_);
  return project(0.5 * (box.lower + box.upper));
}

Point project(const ConstraintSet& set, const Point& x) { return set.project(x); }

IntervalProblem::IntervalProblem(std::vector<IntervalFn> agents, ConstraintSet constraint,
                                 std::optional<double> lipschitz_hint)
    : agents_(std::move(agents)), constraint_(std::move(constraint)), lipschitz_hint_(lipschitz_hint) {
  if (agents_.empty()) throw InvalidArgument("problem needs at least one agent");
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    if (!agents_[i].eval) throw InvalidArgument("agent " + std::to_string(i) + " has no evaluator");
    if (agents_[i].dim != constraint_.dim()) {
      throw InvalidArgument("agent " + std::to_string(i) + " dimension does not match the constraint set");
    }
  }
  if (lipschitz_hint_ && !(*lipschitz_hint_ > 0.0)) throw InvalidArgument("lipschitz hint must be > 0");
}

Interval IntervalProblem::evaluate(std::size_t agent, const Point& x) const {
  if (agent >= agents_.size()) {
    throw InvalidArgument("agent index " + std::to_string(agent) + " out of range (n=" +
                          std::to_string(agents_.size()) + ")");
  }
  return agents_[agent](x);
}

Interval IntervalProblem::aggregate(const Point& x) const {
  double lo = 0.0;
  double hi = 0.0;
  for (const auto& g : agents_) {
    const Interval v = g(x);
    lo += v.lo();
    hi += v.hi();
  }
  return {lo, hi};
}

double IntervalProblem::scalarized_local(std::size_t agent, const Point& x, double lambda) const {
  const ScalarizationWeight w(lambda);
  if (!x.allFinite()) throw InvalidArgument("scalarized_local needs a finite point");
  return scalarize(evaluate(agent, x), w);
}

double IntervalProblem::scalarized_total(const Point& x, double lambda) const {
  double total = 0.0;
  for (std::size_t i = 0; i < agents_.size(); ++i) total += scalarized_local(i, x, lambda);
  return total;
}

IntervalProblem quadratic_interval_problem(const Interval& coeff, std::span<const Point> centers,
                                           const ConstraintSet& constraint) {
  if (!(coeff.lo() > 0.0)) throw InvalidArgument("quadratic coefficient interval needs coeff.lo > 0");
  if (centers.empty()) throw InvalidArgument("quadratic problem needs at least one center");
  std::vector<IntervalFn> agents;
  agents.reserve(centers.size());
  double max_center = 0.0;
  for (const Point& c : centers) {
    if (c.size() != constraint.dim()) throw InvalidArgument("center dimension does not match the constraint set");
    if (!c.allFinite()) throw InvalidArgument("centers must be finite");
    max_center = std::max(max_center, c.norm());
    agents.push_back(IntervalFn{constraint.dim(), [coeff, c](const Point& x) {
                                  const double sq = (x - c).squaredNorm();
                                  return Interval(coeff.lo() * sq, coeff.hi() * sq);
                                }});
  }
  const double lipschitz = 2.0 * coeff.hi() * (constraint.max_norm() + max_center);
  return IntervalProblem(std::move(agents), constraint, lipschitz);
}

IntervalProblem five_agent_problem() {
  std::vector<Point> centers;
  for (double rho : {3.0, 2.0, 1.0, 0.0, -1.0}) centers.push_back(Point::Constant(1, rho));
  return quadratic_interval_problem(Interval(0.5, 2.0), centers, ConstraintSet::ball(Point::Zero(1), 100.0));
}

IntervalProblem designed_pareto_problem() {
  IntervalFn g{1, [](const Point& x) {
                 const double lower = (x[0] - 1.0) * (x[0] - 1.0);
                 // The max only bites past x = 3.25, outside the box, where
                 // perturbed evaluations may still land.
                 const double upper = std::max((x[0] - 3.0) * (x[0] - 3.0) + 5.0, lower);
                 return Interval(lower, upper);
               }};
  // |d/dx f| <= 2 * 3 on [0, 3] for every lambda.
  return IntervalProblem({std::move(g)}, ConstraintSet::box(Point::Zero(1), Point::Constant(1, 3.0)), 6.0);
}

IntervalFn parametric_interval_problem(ParametricIntervalSpec spec) {
  if (spec.grid_points_per_coeff < 2) throw InvalidArgument("grid_points_per_coeff must be >= 2");
  if (spec.coefficient_boxes.empty()) throw InvalidArgument("parametric family needs coefficient boxes");
  if (!spec.family_eval) throw InvalidArgument("parametric family needs an evaluator");
  if (spec.dim < 1) throw InvalidArgument("parametric family dimension must be >= 1");

  const std::size_t m = spec.coefficient_boxes.size();
  const auto g = static_cast<std::size_t>(spec.grid_points_per_coeff);
  // Precompute per-axis grid values; t = j / (g - 1) with exact endpoints.
  std::vector<std::vector<double>> axes(m);
  for (std::size_t a = 0; a < m; ++a) {
    const Interval& box = spec.coefficient_boxes[a];
    axes[a].resize(g);
    for (std::size_t j = 0; j < g; ++j) {
      const double t = static_cast<double>(j) / static_cast<double>(g - 1);
      axes[a][j] = j == 0 ? box.lo() : j + 1 == g ? box.hi() : (1.0 - t) * box.lo() + t * box.hi();
    }
  }

  const int dim = spec.dim;
  return IntervalFn{dim, [axes = std::move(axes), eval = std::move(spec.family_eval), m, g](const Point& x) {
                      std::vector<std::size_t> idx(m, 0);
                      std::vector<double> coeffs(m);
                      double lo = std::numeric_limits<double>::infinity();
                      double hi = -std::numeric_limits<double>::infinity();
                      while (true) {
                        for (std::size_t a = 0; a < m; ++a) coeffs[a] = axes[a][idx[a]];
                        const double v = eval(coeffs, x);
                        if (!std::isfinite(v)) throw EvaluationError("parametric family returned a non-finite value");
                        lo = std::min(lo, v);
                        hi = std::max(hi, v);
                        std::size_t a = 0;
                        while (a < m && ++idx[a] == g) idx[a++] = 0;
                        if (a == m) break;
                      }
                      return Interval(lo, hi);
                    }};
}

ParametricIntervalSpec two_variable_exponential_family(const Interval& c1, const Interval& c2, const Interval& c3,
                                                       int grid_points_per_coeff) {
  ParametricIntervalSpec spec;
  spec.coefficient_boxes = {c1, c2, c3};
  spec.family_eval = [](std::span<const double> c, const Point& x) {
    return c[0] * x[0] * x[0] + c[1] * x[0] * std::exp(c[2] * x[1]);
  };
  spec.dim = 2;
  spec.grid_points_per_coeff = grid_points_per_coeff;
  return spec;
}

}  // namespace diop
