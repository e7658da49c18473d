#include "diop/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <utility>

namespace diop {
namespace {

constexpr double kStochasticTol = 1e-12;

struct DisjointSets {
  explicit DisjointSets(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      v = parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
    }
    return v;
  }
  void join(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }

  std::vector<int> parent;
};

bool window_connected(std::span<const WeightedDigraph> pattern, std::size_t start, int kappa) {
  const int n = pattern.front().agents();
  DisjointSets sets(n);
  int components = n;
  for (int t = 0; t < kappa; ++t) {
    for (const Edge& e : pattern[(start + static_cast<std::size_t>(t)) % pattern.size()].edges()) {
      if (sets.find(e.from) != sets.find(e.to)) {
        sets.join(e.from, e.to);
        --components;
      }
    }
  }
  return components == 1;
}

bool window_complete(std::span<const WeightedDigraph> pattern, std::size_t start, int kappa) {
  const int n = pattern.front().agents();
  std::set<Edge> seen;
  for (int t = 0; t < kappa; ++t) {
    const auto& edges = pattern[(start + static_cast<std::size_t>(t)) % pattern.size()].edges();
    seen.insert(edges.begin(), edges.end());
  }
  return seen.size() == static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1);
}

bool jointly_connected(std::span<const WeightedDigraph> pattern, int kappa, bool strict) {
  if (kappa < 1) throw InvalidArgument("kappa must be >= 1");
  for (std::size_t start = 0; start < pattern.size(); ++start) {
    const bool ok = strict ? window_complete(pattern, start, kappa) : window_connected(pattern, start, kappa);
    if (!ok) return false;
  }
  return true;
}

}  // namespace

WeightedDigraph::WeightedDigraph(Matrix weights, std::vector<Edge> edges, double eta)
    : weights_(std::move(weights)), edges_(std::move(edges)), eta_(eta) {
  const auto n = weights_.rows();
  if (n < 1 || weights_.cols() != n) throw InvalidArgument("weight matrix must be square and non-empty");
  if (!(eta > 0.0 && eta < 1.0 + kStochasticTol)) throw InvalidArgument("eta must lie in (0, 1]");
  if (!weights_.allFinite() || (weights_.array() < 0.0).any() || (weights_.array() > 1.0).any()) {
    throw InvalidArgument("weights must lie in [0, 1]");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(weights_.row(i).sum() - 1.0) > kStochasticTol) {
      throw InvalidArgument("row " + std::to_string(i) + " does not sum to 1");
    }
    if (std::abs(weights_.col(i).sum() - 1.0) > kStochasticTol) {
      throw InvalidArgument("column " + std::to_string(i) + " does not sum to 1");
    }
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> linked =
      Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, n, false);
  for (const Edge& e : edges_) {
    if (e.from < 0 || e.to < 0 || e.from >= n || e.to >= n || e.from == e.to) {
      throw InvalidArgument("edge (" + std::to_string(e.from) + "," + std::to_string(e.to) + ") is invalid");
    }
    linked(e.to, e.from) = true;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = weights_(i, j);
      if (i == j || linked(i, j)) {
        if (w < eta_) {
          throw InvalidArgument("weight (" + std::to_string(i) + "," + std::to_string(j) + ") is below eta");
        }
      } else if (w != 0.0) {
        throw InvalidArgument("weight (" + std::to_string(i) + "," + std::to_string(j) + ") is set without an edge");
      }
    }
  }
}

WeightedDigraph WeightedDigraph::from_weights(Matrix weights) {
  std::vector<Edge> edges;
  double eta = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < weights.rows(); ++i) {
    for (Eigen::Index j = 0; j < weights.cols(); ++j) {
      const double w = weights(i, j);
      if (w > 0.0) eta = std::min(eta, w);
      if (i != j && w != 0.0) edges.push_back({static_cast<int>(j), static_cast<int>(i)});
    }
  }
  if (!std::isfinite(eta)) throw InvalidArgument("weight matrix has no positive entry");
  return WeightedDigraph(std::move(weights), std::move(edges), eta);
}

bool WeightedDigraph::connected() const {
  const std::vector<WeightedDigraph> single{*this};
  return window_connected(single, 0, 1);
}

std::vector<Edge> undirected(std::span<const Edge> edges) {
  std::vector<Edge> out;
  out.reserve(2 * edges.size());
  for (const Edge& e : edges) {
    if (e.from == e.to) continue;
    out.push_back(e);
    out.push_back({e.to, e.from});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

WeightedDigraph metropolis_weights(int n, std::span<const Edge> edges) {
  if (n < 1) throw InvalidArgument("metropolis_weights needs n >= 1");
  std::set<Edge> unique_edges;
  for (const Edge& e : edges) {
    if (e.from < 0 || e.to < 0 || e.from >= n || e.to >= n) {
      throw InvalidArgument("edge (" + std::to_string(e.from) + "," + std::to_string(e.to) + ") out of range");
    }
    if (e.from != e.to) unique_edges.insert(e);
  }
  for (const Edge& e : unique_edges) {
    if (!unique_edges.contains({e.to, e.from})) {
      throw InvalidArgument("edge set is not symmetric: missing (" + std::to_string(e.to) + "," +
                            std::to_string(e.from) + ")");
    }
  }
  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  for (const Edge& e : unique_edges) ++degree[static_cast<std::size_t>(e.from)];

  Matrix w = Matrix::Zero(n, n);
  for (const Edge& e : unique_edges) {
    const int d = std::max(degree[static_cast<std::size_t>(e.from)], degree[static_cast<std::size_t>(e.to)]);
    w(e.to, e.from) = 1.0 / (1.0 + d);
  }
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) off += w(i, j);
    }
    w(i, i) = 1.0 - off;
  }
  double eta = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w.data()[i] > 0.0) eta = std::min(eta, w.data()[i]);
  }
  return WeightedDigraph(std::move(w), {unique_edges.begin(), unique_edges.end()}, eta);
}

GraphSchedule::GraphSchedule(std::vector<WeightedDigraph> pattern, int kappa)
    : GraphSchedule(std::move(pattern), kappa, true) {}

GraphSchedule GraphSchedule::unchecked(std::vector<WeightedDigraph> pattern, int kappa) {
  return GraphSchedule(std::move(pattern), kappa, false);
}

GraphSchedule::GraphSchedule(std::vector<WeightedDigraph> pattern, int kappa, bool check)
    : pattern_(std::move(pattern)), kappa_(kappa), eta_(1.0) {
  if (pattern_.empty()) throw InvalidArgument("schedule needs at least one graph");
  if (kappa_ < 1) throw InvalidArgument("kappa must be >= 1");
  for (const auto& g : pattern_) {
    if (g.agents() != pattern_.front().agents()) throw InvalidArgument("all graphs in a schedule must share n");
    eta_ = std::min(eta_, g.eta());
  }
  if (check && !jointly_connected(pattern_, kappa_, false)) {
    throw InvalidArgument("schedule is not jointly connected over windows of kappa=" + std::to_string(kappa_));
  }
}

int GraphSchedule::min_kappa(std::span<const WeightedDigraph> pattern) {
  if (pattern.empty()) return 0;
  for (int kappa = 1; kappa <= static_cast<int>(pattern.size()); ++kappa) {
    if (jointly_connected(pattern, kappa, false)) return kappa;
  }
  return 0;
}

bool joint_connectivity_check(const GraphSchedule& schedule, int kappa, bool strict) {
  return jointly_connected(schedule.pattern(), kappa, strict);
}

GraphSchedule fig2_schedule() {
  // 1-based agent labels as drawn.
  const std::vector<std::vector<std::pair<int, int>>> drawn = {
      {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 1}, {1, 3}, {2, 4}},
      {{1, 2}, {2, 3}, {1, 3}},
      {{2, 3}, {3, 4}, {2, 4}},
      {{4, 5}, {5, 1}},
  };
  std::vector<WeightedDigraph> pattern;
  for (const auto& graph : drawn) {
    std::vector<Edge> edges;
    for (auto [a, b] : graph) edges.push_back({a - 1, b - 1});
    pattern.push_back(metropolis_weights(5, undirected(edges)));
  }
  return GraphSchedule(std::move(pattern), 4);
}

GraphSchedule complete_schedule(int n) {
  if (n < 1) throw InvalidArgument("complete schedule needs n >= 1");
  return GraphSchedule({WeightedDigraph::from_weights(Matrix::Constant(n, n, 1.0 / n))}, 1);
}

GraphSchedule ring_schedule(int n) {
  if (n < 1) throw InvalidArgument("ring schedule needs n >= 1");
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  return GraphSchedule({metropolis_weights(n, undirected(edges))}, 1);
}

TransitionProduct transition_product(const GraphSchedule& schedule, std::size_t k, std::size_t s) {
  if (k < s) throw InvalidArgument("transition_product needs k >= s");
  Matrix psi = schedule.at(s).weights();
  for (std::size_t t = s + 1; t <= k; ++t) psi = schedule.at(t).weights() * psi;
  return {std::move(psi), k, s};
}

double mixing_error(const Matrix& psi) {
  return (psi.array() - 1.0 / static_cast<double>(psi.rows())).abs().maxCoeff();
}

MixingEstimate mixing_rate_estimate(const GraphSchedule& schedule, std::size_t horizon) {
  if (horizon < 10) throw InvalidArgument("mixing_rate_estimate needs horizon >= 10");
  MixingEstimate est;
  est.errors.reserve(horizon + 1);
  Matrix psi = schedule.at(0).weights();
  est.errors.push_back(mixing_error(psi));
  for (std::size_t k = 1; k <= horizon; ++k) {
    psi = schedule.at(k).weights() * psi;
    est.errors.push_back(mixing_error(psi));
  }

  if (std::all_of(est.errors.begin(), est.errors.end(), [](double e) { return e < 1e-14; })) {
    est.exact_mixing = true;
    est.beta_hat = 0.0;
    return est;
  }

  double sk = 0.0, sy = 0.0, skk = 0.0, sky = 0.0;
  std::size_t m = 0;
  for (std::size_t k = 0; k <= horizon; ++k) {
    if (est.errors[k] < kMixingFloor) continue;
    const auto kd = static_cast<double>(k);
    const double y = std::log(est.errors[k]);
    sk += kd;
    sy += y;
    skk += kd * kd;
    sky += kd * y;
    ++m;
  }
  est.fitted_points = m;
  const auto md = static_cast<double>(m);
  const double denom = md * skk - sk * sk;
  // A single fitted point (or none) carries no slope information.
  const double slope = (m >= 2 && denom > 0.0) ? (md * sky - sk * sy) / denom : 0.0;
  const double intercept = m > 0 ? (sy - slope * sk) / md : 0.0;
  est.beta_hat = std::exp(slope);
  est.mu_fit = std::exp(intercept);

  double log_mu = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k <= horizon; ++k) {
    if (est.errors[k] < kMixingFloor) continue;
    log_mu = std::max(log_mu, std::log(est.errors[k]) - slope * static_cast<double>(k));
  }
  est.mu_hat = m > 0 ? std::exp(log_mu) : 0.0;
  return est;
}

Eigen::VectorXd average(const WeightedDigraph& graph, const Eigen::VectorXd& values) {
  return graph.weights() * values;
}

}  // namespace diop
