#pragma once

#include <cstddef>
#include <functional>

#include "diop/rng.hpp"
#include "diop/types.hpp"

namespace diop {

/// Bounded symmetric perturbation law with E[1/Delta] = 0.
///
/// Only two-point laws {-a, +a} are offered; Rademacher is a = 1. Laws with
/// mass near zero (Gaussian, uniform) have unbounded 1/Delta and are not
/// representable.
class PerturbationDist {
 public:
  enum class Kind { kRademacher, kSymmetricTwoPoint };

  static PerturbationDist rademacher() { return PerturbationDist(Kind::kRademacher, 1.0); }
  /// Throws InvalidArgument unless a > 0 and finite.
  static PerturbationDist symmetric_two_point(double a);

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] double magnitude() const noexcept { return magnitude_; }
  /// Bound on |Delta|.
  [[nodiscard]] double bound_m1() const noexcept { return magnitude_; }
  /// Bound on |1 / Delta|.
  [[nodiscard]] double inv_bound_m2() const noexcept { return 1.0 / magnitude_; }

 private:
  PerturbationDist(Kind kind, double magnitude) : kind_(kind), magnitude_(magnitude) {}

  Kind kind_;
  double magnitude_;
};

/// `dim` independent draws, one stream value per coordinate.
[[nodiscard]] Point draw_perturbation(const PerturbationDist& dist, int dim, CounterRng& rng);

/// iota(k) = 1 / (k+1)^(1-epsilon) and c(k) = 1 / (k+1)^delta for k >= 0.
///
/// Requires 0 <= epsilon < 1/4 and epsilon < delta < 1/2 - epsilon; the
/// constructor names the first violated inequality.
class StepSchedule {
 public:
  StepSchedule(double epsilon, double delta);

  [[nodiscard]] double epsilon() const noexcept { return epsilon_; }
  [[nodiscard]] double delta() const noexcept { return delta_; }
  [[nodiscard]] double iota(std::size_t k) const noexcept;
  [[nodiscard]] double c(std::size_t k) const noexcept;

 private:
  double epsilon_;
  double delta_;
};

/// Free-function spelling of the StepSchedule constructor.
[[nodiscard]] StepSchedule step_schedule(double epsilon, double delta);

/// f(x, lambda) evaluated by the estimator.
using ScalarOracle = std::function<double(const Point&, double)>;

struct GradientEstimate {
  Point d;
  double y_plus = 0.0;
  double y_minus = 0.0;
  Point delta_vec;
};

/// Two-point randomized difference at x:
///   d_q = (f(x + c Delta, lambda) - f(x - c Delta, lambda)) / (2 c Delta_q).
/// Throws InvalidArgument for c_k <= 0 and EvaluationError when the oracle
/// returns a non-finite value.
[[nodiscard]] GradientEstimate randomized_difference(const ScalarOracle& f, const Point& x, double lambda,
                                                     double c_k, const PerturbationDist& dist, CounterRng& rng);

/// Same as above with a caller-supplied perturbation vector.
[[nodiscard]] GradientEstimate randomized_difference(const ScalarOracle& f, const Point& x, double lambda,
                                                     double c_k, const Point& delta_vec);

/// dim * M1 * M2 * L: bound on ||d|| for an L-Lipschitz oracle.
[[nodiscard]] double estimate_norm_bound(const PerturbationDist& dist, int dim, double lipschitz);

/// Partial sums of one step-size series up to the horizon.
struct SeriesDiagnostic {
  double partial_sum = 0.0;
  double tail_term = 0.0;      ///< last summand
  double decay_exponent = 0.0; ///< a in term ~ k^-a, from the last decade
  bool converges = false;      ///< decay_exponent > 1 (with 1e-9 slack)
};

struct ScheduleReport {
  std::size_t horizon = 0;
  SeriesDiagnostic iota;          ///< sum iota(k): must diverge
  SeriesDiagnostic iota_sq;       ///< sum iota(k)^2: must converge
  SeriesDiagnostic iota_c;        ///< sum iota(k) c(k): must converge
  SeriesDiagnostic iota_over_c_sq;///< sum (iota(k)/c(k))^2: must converge

  /// The summability pattern a stochastic-approximation step needs.
  [[nodiscard]] bool pattern_holds() const noexcept {
    return !iota.converges && iota_sq.converges && iota_c.converges && iota_over_c_sq.converges;
  }
};

/// Sums over k = 0..horizon. Throws InvalidArgument for horizon < 1.
[[nodiscard]] ScheduleReport schedule_diagnostics(const StepSchedule& s, std::size_t horizon);

}  // namespace diop
