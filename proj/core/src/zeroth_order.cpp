#include "diop/zeroth_order.hpp"

#include <cmath>
#include <string>

namespace diop {

PerturbationDist PerturbationDist::symmetric_two_point(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("two-point perturbation magnitude must be > 0");
  return PerturbationDist(Kind::kSymmetricTwoPoint, a);
}

Point draw_perturbation(const PerturbationDist& dist, int dim, CounterRng& rng) {
  if (dim < 1) throw InvalidArgument("perturbation dimension must be >= 1");
  Point delta(dim);
  for (int q = 0; q < dim; ++q) {
    delta[q] = (rng() >> 63) != 0 ? dist.magnitude() : -dist.magnitude();
  }
  return delta;
}

StepSchedule::StepSchedule(double epsilon, double delta) : epsilon_(epsilon), delta_(delta) {
  if (!std::isfinite(epsilon) || !std::isfinite(delta)) throw InvalidArgument("epsilon and delta must be finite");
  if (!(epsilon >= 0.0)) throw InvalidArgument("step schedule violates epsilon >= 0");
  if (!(epsilon < 0.25)) throw InvalidArgument("step schedule violates epsilon < 1/4");
  if (!(epsilon < delta)) throw InvalidArgument("step schedule violates epsilon < delta");
  if (!(delta < 0.5 - epsilon)) throw InvalidArgument("step schedule violates delta < 1/2 - epsilon");
}

double StepSchedule::iota(std::size_t k) const noexcept {
  return std::pow(static_cast<double>(k) + 1.0, -(1.0 - epsilon_));
}

double StepSchedule::c(std::size_t k) const noexcept { return std::pow(static_cast<double>(k) + 1.0, -delta_); }

StepSchedule step_schedule(double epsilon, double delta) { return {epsilon, delta}; }

GradientEstimate randomized_difference(const ScalarOracle& f, const Point& x, double lambda, double c_k,
                                       const Point& delta_vec) {
  if (!(c_k > 0.0)) throw InvalidArgument("randomized difference needs c_k > 0");
  if (delta_vec.size() != x.size()) throw InvalidArgument("perturbation dimension does not match the point");
  GradientEstimate est;
  est.delta_vec = delta_vec;
  est.y_plus = f(x + c_k * delta_vec, lambda);
  est.y_minus = f(x - c_k * delta_vec, lambda);
  if (!std::isfinite(est.y_plus) || !std::isfinite(est.y_minus)) {
    throw EvaluationError("objective oracle returned a non-finite value");
  }
  const double scale = (est.y_plus - est.y_minus) / (2.0 * c_k);
  est.d = scale * delta_vec.cwiseInverse();
  return est;
}

GradientEstimate randomized_difference(const ScalarOracle& f, const Point& x, double lambda, double c_k,
                                       const PerturbationDist& dist, CounterRng& rng) {
  if (!(c_k > 0.0)) throw InvalidArgument("randomized difference needs c_k > 0");
  return randomized_difference(f, x, lambda, c_k, draw_perturbation(dist, static_cast<int>(x.size()), rng));
}

double estimate_norm_bound(const PerturbationDist& dist, int dim, double lipschitz) {
  return static_cast<double>(dim) * dist.bound_m1() * dist.inv_bound_m2() * lipschitz;
}

namespace {

template <typename Term>
SeriesDiagnostic summarize(Term term, std::size_t horizon) {
  SeriesDiagnostic out;
  for (std::size_t k = 0; k <= horizon; ++k) out.partial_sum += term(k);
  out.tail_term = term(horizon);
  const std::size_t early = horizon / 10;
  const double span = std::log((static_cast<double>(horizon) + 1.0) / (static_cast<double>(early) + 1.0));
  out.decay_exponent = -std::log(out.tail_term / term(early)) / span;
  // Harmonic-rate series sit at exponent 1 up to rounding; treat them as divergent.
  out.converges = out.decay_exponent > 1.0 + 1e-9;
  return out;
}

}  // namespace

ScheduleReport schedule_diagnostics(const StepSchedule& s, std::size_t horizon) {
  if (horizon < 1) throw InvalidArgument("schedule diagnostics need a horizon >= 1");
  ScheduleReport report;
  report.horizon = horizon;
  report.iota = summarize([&](std::size_t k) { return s.iota(k); }, horizon);
  report.iota_sq = summarize([&](std::size_t k) { return s.iota(k) * s.iota(k); }, horizon);
  report.iota_c = summarize([&](std::size_t k) { return s.iota(k) * s.c(k); }, horizon);
  report.iota_over_c_sq = summarize(
      [&](std::size_t k) {
        const double r = s.iota(k) / s.c(k);
        return r * r;
      },
      horizon);
  return report;
}

}  // namespace diop
