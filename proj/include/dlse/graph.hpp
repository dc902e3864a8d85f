#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <vector>

#include "dlse/errors.hpp"

namespace dlse {

inline constexpr double kStochasticTol = 1e-12;

/// Validated sensor-network topology: symmetric doubly stochastic weight
/// matrix, graph diameter, and the minimum entry of weights^diameter.
struct NetworkTopology {
  int n = 0;
  Eigen::MatrixXd weights;
  int diameter = 1;
  double a_min = 0.0;
};

namespace detail {

// All-pairs BFS distances over the off-diagonal support graph.
inline std::vector<std::vector<int>> support_distances(
    const Eigen::MatrixXd& w) {
  const int n = static_cast<int>(w.rows());
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
  for (int s = 0; s < n; ++s) {
    dist[s][s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v = 0; v < n; ++v) {
        if (v != u && w(u, v) > 0.0 && dist[s][v] < 0) {
          dist[s][v] = dist[s][u] + 1;
          q.push(v);
        }
      }
    }
  }
  return dist;
}

}  // namespace detail

/// Validates raw_weights and computes diameter and a_min.
inline NetworkTopology build_topology(const Eigen::MatrixXd& raw_weights) {
  const int n = static_cast<int>(raw_weights.rows());
  if (n < 1 || raw_weights.cols() != n) {
    throw DimensionMismatch("adjacency matrix must be square with n >= 1");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!(raw_weights(i, j) >= 0.0)) throw NegativeEntry(i, j);
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(raw_weights(i, j) - raw_weights(j, i)) > kStochasticTol) {
        throw NotSymmetric(i, j);
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    const double s = raw_weights.row(i).sum();
    if (std::abs(s - 1.0) > kStochasticTol) throw NotStochastic(i, s);
  }

  NetworkTopology topo;
  topo.n = n;
  topo.weights = raw_weights;

  if (n == 1) {
    topo.diameter = 1;
    topo.a_min = raw_weights(0, 0);
    return topo;
  }

  const auto dist = detail::support_distances(raw_weights);
  int diameter = 1;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (dist[i][j] < 0) throw Disconnected(j);
      diameter = std::max(diameter, dist[i][j]);
    }
  }
  topo.diameter = diameter;

  Eigen::MatrixXd power = raw_weights;
  for (int k = 1; k < diameter; ++k) power = power * raw_weights;
  double a_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (power(i, j) <= 0.0) throw PeriodicSupport(i, j);
      a_min = std::min(a_min, power(i, j));
    }
  }
  topo.a_min = a_min;
  return topo;
}

/// Neighbor set of node i, including i itself when a_ii > 0.
inline std::set<int> neighbors(const NetworkTopology& topo, int i) {
  if (i < 0 || i >= topo.n) throw IndexOutOfRange(i);
  std::set<int> result;
  for (int j = 0; j < topo.n; ++j) {
    if (topo.weights(j, i) > 0.0) result.insert(j);
  }
  return result;
}

}  // namespace dlse
