#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "diop/types.hpp"

namespace diop {

/// Directed link: agent `to` receives the state of agent `from`.
struct Edge {
  int from = 0;
  int to = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Communication graph with a doubly stochastic weight matrix.
///
/// Row i of the weight matrix holds the weights agent i applies to incoming
/// states. Construction checks that rows and columns sum to one within 1e-12,
/// entries lie in [0, 1], the diagonal and every edge weight are >= eta, and
/// all other entries are exactly zero.
class WeightedDigraph {
 public:
  WeightedDigraph(Matrix weights, std::vector<Edge> edges, double eta);

  /// Builds the edge set from the non-zero off-diagonal entries and takes eta
  /// as the smallest positive entry.
  static WeightedDigraph from_weights(Matrix weights);

  [[nodiscard]] int agents() const noexcept { return static_cast<int>(weights_.rows()); }
  [[nodiscard]] const Matrix& weights() const noexcept { return weights_; }
  [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
  [[nodiscard]] double eta() const noexcept { return eta_; }
  /// Connectivity of the graph read as undirected.
  [[nodiscard]] bool connected() const;

 private:
  Matrix weights_;
  std::vector<Edge> edges_;
  double eta_;
};

/// Adds the reverse of every edge; drops self-loops and duplicates.
[[nodiscard]] std::vector<Edge> undirected(std::span<const Edge> edges);

/// Metropolis weights 1 / (1 + max(deg i, deg j)) on a symmetric edge set,
/// with the diagonal absorbing the remainder. Throws InvalidArgument when the
/// edge set is not symmetric or references an agent outside [0, n).
[[nodiscard]] WeightedDigraph metropolis_weights(int n, std::span<const Edge> edges);

/// Periodic sequence of graphs: W(k) = pattern[k mod period].
class GraphSchedule {
 public:
  /// Throws InvalidArgument unless all graphs share n and `kappa` passes the
  /// default joint-connectivity check.
  GraphSchedule(std::vector<WeightedDigraph> pattern, int kappa);

  /// Same as the checked constructor but skips the connectivity check; used
  /// for diagnostics on schedules that do not mix.
  static GraphSchedule unchecked(std::vector<WeightedDigraph> pattern, int kappa);

  /// Smallest window length for which the pattern is jointly connected, or 0
  /// when no window length up to the period works.
  static int min_kappa(std::span<const WeightedDigraph> pattern);

  [[nodiscard]] int agents() const noexcept { return pattern_.front().agents(); }
  [[nodiscard]] std::size_t period() const noexcept { return pattern_.size(); }
  [[nodiscard]] int kappa() const noexcept { return kappa_; }
  [[nodiscard]] double eta() const noexcept { return eta_; }
  [[nodiscard]] const std::vector<WeightedDigraph>& pattern() const noexcept { return pattern_; }
  [[nodiscard]] const WeightedDigraph& at(std::size_t k) const { return pattern_[k % pattern_.size()]; }

 private:
  GraphSchedule(std::vector<WeightedDigraph> pattern, int kappa, bool check);

  std::vector<WeightedDigraph> pattern_;
  int kappa_;
  double eta_;
};

/// True when the union of every `kappa` consecutive graphs (cyclically) is
/// connected; with `strict` every ordered pair of distinct agents must appear
/// as an edge in every window instead.
[[nodiscard]] bool joint_connectivity_check(const GraphSchedule& schedule, int kappa, bool strict = false);

/// Four-graph cycle on five agents: (a) ring 1-2-3-4-5-1 plus chords 1-3 and
/// 2-4, (b) triangle 1-2-3, (c) triangle 2-3-4, (d) edges 4-5 and 5-1.
/// Metropolis weights, kappa = 4. Agents are 0-based in code.
[[nodiscard]] GraphSchedule fig2_schedule();
/// Static complete graph with uniform weights 1/n.
[[nodiscard]] GraphSchedule complete_schedule(int n);
/// Static undirected ring with Metropolis weights (n >= 1).
[[nodiscard]] GraphSchedule ring_schedule(int n);

/// Psi(k, s) = W(k) W(k-1) ... W(s).
struct TransitionProduct {
  Matrix psi;
  std::size_t k = 0;
  std::size_t s = 0;
};

/// Throws InvalidArgument when k < s.
[[nodiscard]] TransitionProduct transition_product(const GraphSchedule& schedule, std::size_t k, std::size_t s);

/// max_ij |Psi_ij - 1/n|
[[nodiscard]] double mixing_error(const Matrix& psi);

/// Geometric fit e_k ~ mu * beta^k of e_k = mixing_error(Psi(k, 0)).
struct MixingEstimate {
  double mu_hat = 0.0;  ///< smallest mu with e_k <= mu * beta_hat^k on the fitted range
  double mu_fit = 0.0;  ///< least-squares intercept exp(a)
  double beta_hat = 1.0;
  bool exact_mixing = false;  ///< every e_k below 1e-14
  std::size_t fitted_points = 0;
  std::vector<double> errors;  ///< e_0 .. e_horizon

  /// beta_hat < 1, or mixing is exact.
  [[nodiscard]] bool mixes() const noexcept { return exact_mixing || beta_hat < 1.0; }
};

/// Errors below this are roundoff and are left out of the fit.
inline constexpr double kMixingFloor = 1e-13;

/// Least-squares fit of log e_k against k over k in [0, horizon] with
/// e_k >= kMixingFloor. Throws InvalidArgument when horizon < 10.
[[nodiscard]] MixingEstimate mixing_rate_estimate(const GraphSchedule& schedule, std::size_t horizon);

/// One synchronous averaging round: out_i = sum_j W_ij v_j.
[[nodiscard]] Eigen::VectorXd average(const WeightedDigraph& graph, const Eigen::VectorXd& values);

}  // namespace diop
