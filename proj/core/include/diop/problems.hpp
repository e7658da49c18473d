#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "diop/interval.hpp"
#include "diop/types.hpp"

namespace diop {

struct Ball {
  Point center;
  double radius = 1.0;
};

struct Box {
  Point lower;
  Point upper;
};

/// Non-empty compact convex set with a closed-form Euclidean projection.
class ConstraintSet {
 public:
  /// Throws InvalidArgument unless radius > 0 and the center is finite.
  static ConstraintSet ball(Point center, double radius);
  /// Throws InvalidArgument unless lower <= upper componentwise.
  static ConstraintSet box(Point lower, Point upper);

  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] bool is_ball() const noexcept { return std::holds_alternative<Ball>(shape_); }
  [[nodiscard]] const Ball& as_ball() const { return std::get<Ball>(shape_); }
  [[nodiscard]] const Box& as_box() const { return std::get<Box>(shape_); }

  /// Nearest point of the set. Points already inside are returned unchanged,
  /// so project(project(x)) == project(x) bit for bit.
  [[nodiscard]] Point project(const Point& x) const;
  [[nodiscard]] double distance(const Point& x) const;
  [[nodiscard]] bool contains(const Point& x, double tol = 0.0) const;
  /// sup of ||y|| over the set.
  [[nodiscard]] double max_norm() const;
  /// Ball center or box midpoint; always feasible.
  [[nodiscard]] Point anchor() const;

 private:
  explicit ConstraintSet(std::variant<Ball, Box> shape, int dim) : shape_(std::move(shape)), dim_(dim) {}

  std::variant<Ball, Box> shape_;
  int dim_;
};

/// Free-function form of ConstraintSet::project with a dimension check.
[[nodiscard]] Point project(const ConstraintSet& set, const Point& x);

/// Per-agent interval objectives G_i sharing one constraint set.
class IntervalProblem {
 public:
  IntervalProblem(std::vector<IntervalFn> agents, ConstraintSet constraint,
                  std::optional<double> lipschitz_hint = std::nullopt);

  [[nodiscard]] std::size_t agents() const noexcept { return agents_.size(); }
  [[nodiscard]] int dim() const noexcept { return constraint_.dim(); }
  [[nodiscard]] const ConstraintSet& constraint() const noexcept { return constraint_; }
  [[nodiscard]] const std::optional<double>& lipschitz_hint() const noexcept { return lipschitz_hint_; }

  /// G_i(x); throws InvalidArgument for an out-of-range agent.
  [[nodiscard]] Interval evaluate(std::size_t agent, const Point& x) const;
  /// Sum over agents of G_i(x), endpoint by endpoint.
  [[nodiscard]] Interval aggregate(const Point& x) const;

  /// f_i(x, lambda) = lambda * L_i(x) + (1 - lambda) * R_i(x).
  [[nodiscard]] double scalarized_local(std::size_t agent, const Point& x, double lambda) const;
  /// Sum over agents of f_i(x, lambda) at a common point.
  [[nodiscard]] double scalarized_total(const Point& x, double lambda) const;

 private:
  std::vector<IntervalFn> agents_;
  ConstraintSet constraint_;
  std::optional<double> lipschitz_hint_;
};

/// Agent i gets [coeff.lo * ||x - c_i||^2, coeff.hi * ||x - c_i||^2].
/// Requires coeff.lo > 0 and at least one center of the constraint's dimension.
[[nodiscard]] IntervalProblem quadratic_interval_problem(const Interval& coeff, std::span<const Point> centers,
                                                         const ConstraintSet& constraint);

/// Five scalar agents, coeff [0.5, 2], centers (3, 2, 1, 0, -1), X = {|x| <= 100}.
[[nodiscard]] IntervalProblem five_agent_problem();

/// Single agent on [0, 3] with L = (x - 1)^2 and R = (x - 3)^2 + 5.
/// The scalarized minimizer is 3 - 2 lambda and the Pareto set is [1, 3].
[[nodiscard]] IntervalProblem designed_pareto_problem();

/// Family of real functions indexed by a coefficient vector drawn from a box.
struct ParametricIntervalSpec {
  std::vector<Interval> coefficient_boxes;
  std::function<double(std::span<const double> coeffs, const Point& x)> family_eval;
  int dim = 1;
  int grid_points_per_coeff = 11;
};

/// L(x) and R(x) as the min and max of the family over a uniform grid on the
/// coefficient boxes (box endpoints always included).
[[nodiscard]] IntervalFn parametric_interval_problem(ParametricIntervalSpec spec);

/// c1 x1^2 + c2 x1 exp(c3 x2) with c_i ranging over the given boxes.
[[nodiscard]] ParametricIntervalSpec two_variable_exponential_family(const Interval& c1, const Interval& c2,
                                                                     const Interval& c3,
                                                                     int grid_points_per_coeff = 11);

}  // namespace diop
