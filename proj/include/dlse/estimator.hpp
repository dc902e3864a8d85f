#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "dlse/errors.hpp"
#include "dlse/graph.hpp"
#include "dlse/matrix_toolkit.hpp"
#include "dlse/model.hpp"

namespace dlse {

inline void symmetrize(Eigen::MatrixXd& x) {
  x = ((x + x.transpose()) / 2.0).eval();
}

/// Per-node estimate and covariance. Both P and its inverse are maintained:
/// the adapt step updates P by a rank-one downdate and P_inv by a rank-one
/// add; the combine step sums information matrices and inverts once.
struct NodeState {
  Eigen::VectorXd theta;
  Eigen::MatrixXd P;
  Eigen::MatrixXd P_inv;

  static NodeState initial(int m, double alpha0 = 1.0) {
    NodeState s;
    s.theta = Eigen::VectorXd::Zero(m);
    s.P = alpha0 * Eigen::MatrixXd::Identity(m, m);
    s.P_inv = (1.0 / alpha0) * Eigen::MatrixXd::Identity(m, m);
    return s;
  }
};

struct AdaptOutput {
  Eigen::VectorXd theta_bar;
  Eigen::MatrixXd Pbar;
  Eigen::MatrixXd Pbar_inv;
  double b = 1.0;  // gain, in (0, 1]
};

/// Adapt step: local recursive LS update from (phi, y).
///   b    = 1 / (1 + phi' P phi)
///   thbar = theta + b P phi (y - phi' theta)
///   Pbar  = P - b P phi phi' P
///   Pbar^{-1} = P^{-1} + phi phi'   (rank-one information add)
inline AdaptOutput adapt(const NodeState& state, const Eigen::VectorXd& phi,
                         double y) {
  if (!phi.allFinite() || !std::isfinite(y)) {
    throw NonFiniteInput("adapt: phi or y contains NaN/Inf");
  }
  if (phi.size() != state.theta.size()) {
    throw DimensionMismatch("adapt: phi dimension mismatch");
  }
  AdaptOutput out;
  const Eigen::VectorXd p_phi = state.P * phi;
  const double quad = phi.dot(p_phi);
  out.b = 1.0 / (1.0 + std::max(quad, 0.0));
  out.theta_bar = state.theta + out.b * p_phi * (y - phi.dot(state.theta));
  out.Pbar = state.P - out.b * p_phi * p_phi.transpose();
  symmetrize(out.Pbar);
  out.Pbar_inv = state.P_inv + phi * phi.transpose();
  symmetrize(out.Pbar_inv);
  return out;
}

/// Combine step: covariance-intersection fusion over the neighborhood.
///   P^{-1} = sum_j a_ji Pbar_j^{-1}
///   theta  = P sum_j a_ji Pbar_j^{-1} thbar_j
inline NodeState combine(const std::vector<AdaptOutput>& adapt_outputs,
                         const std::vector<double>& weights) {
  if (adapt_outputs.empty() || adapt_outputs.size() != weights.size()) {
    throw DimensionMismatch("combine: need one weight per neighbor");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw WeightSumInvalid(w);
    sum += w;
  }
  if (std::abs(sum - 1.0) > kStochasticTol) throw WeightSumInvalid(sum);

  const int m = static_cast<int>(adapt_outputs[0].theta_bar.size());
  Eigen::MatrixXd p_inv = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd weighted = Eigen::VectorXd::Zero(m);
  for (std::size_t j = 0; j < adapt_outputs.size(); ++j) {
    p_inv += weights[j] * adapt_outputs[j].Pbar_inv;
    weighted += weights[j] * (adapt_outputs[j].Pbar_inv *
                              adapt_outputs[j].theta_bar);
  }
  symmetrize(p_inv);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p_inv);
  const double lo = es.eigenvalues()(0);
  const double hi = es.eigenvalues()(m - 1);
  if (!(lo > 0.0) || lo / hi < 1e-14) {
    throw SingularCombinedInformation(
        "combined information matrix is numerically singular");
  }
  NodeState out;
  out.P_inv = p_inv;
  out.P = es.eigenvectors() *
          es.eigenvalues().cwiseInverse().asDiagonal() *
          es.eigenvectors().transpose();
  symmetrize(out.P);
  out.theta = out.P * weighted;
  return out;
}

struct NetworkStepDiagnostics {
  std::vector<AdaptOutput> adapt_outputs;  // per node, pre-combine
};

/// One network iteration: adapt at every node on its own data, then combine
/// over each neighborhood using the pre-combine outputs only. The two-phase
/// structure makes the result independent of node evaluation order.
inline std::vector<NodeState> step_network(
    const std::vector<NodeState>& states, const Observation& obs,
    const NetworkTopology& topology, int combine_rounds = 1,
    NetworkStepDiagnostics* diag = nullptr) {
  const int n = topology.n;
  if (static_cast<int>(states.size()) != n ||
      static_cast<int>(obs.phi.size()) != n) {
    throw DimensionMismatch("step_network: node count mismatch");
  }
  std::vector<AdaptOutput> bars(n);
  for (int i = 0; i < n; ++i) bars[i] = adapt(states[i], obs.phi[i], obs.y(i));
  if (diag) diag->adapt_outputs = bars;

  std::vector<NodeState> out(n);
  for (int round = 0; round < combine_rounds; ++round) {
    for (int i = 0; i < n; ++i) {
      std::vector<AdaptOutput> inputs;
      std::vector<double> weights;
      for (int j : neighbors(topology, i)) {
        inputs.push_back(bars[j]);
        weights.push_back(topology.weights(j, i));
      }
      out[i] = combine(inputs, weights);
    }
    if (round + 1 < combine_rounds) {
      // Re-exchange the combined pairs with the same weights.
      for (int i = 0; i < n; ++i) {
        bars[i].theta_bar = out[i].theta;
        bars[i].Pbar_inv = out[i].P_inv;
        bars[i].Pbar = out[i].P;
      }
    }
  }
  return out;
}

struct Sample {
  Eigen::VectorXd phi;
  double y = 0.0;
};

/// Regularized batch normal equations:
/// minimizes sum (y - phi' theta)^2 + (theta - theta0)' P0^{-1} (theta - theta0),
/// which matches the recursive LS started from (theta0, P0) exactly.
inline Eigen::VectorXd batch_ls(const std::vector<Sample>& samples,
                                const Eigen::VectorXd& theta0,
                                const Eigen::MatrixXd& p0_inv) {
  const int m = static_cast<int>(theta0.size());
  Eigen::MatrixXd gram = p0_inv;
  Eigen::VectorXd rhs = p0_inv * theta0;
  for (const auto& s : samples) {
    if (s.phi.size() != m) throw DimensionMismatch("batch_ls: phi size");
    gram += s.phi * s.phi.transpose();
    rhs += s.phi * s.y;
  }
  symmetrize(gram);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw SingularNormalEquations("normal equations not positive definite");
  }
  return ldlt.solve(rhs);
}

/// Fusion-center LS state (all raw data pooled each step).
struct CentralizedState {
  Eigen::VectorXd theta;
  Eigen::MatrixXd P;

  static CentralizedState initial(int m, double alpha0 = 1.0) {
    CentralizedState s;
    s.theta = Eigen::VectorXd::Zero(m);
    s.P = alpha0 * Eigen::MatrixXd::Identity(m, m);
    return s;
  }
};

/// Centralized recursion:
///   B = [I_n + Phi' P Phi]^{-1}
///   theta <- theta + P Phi B (Y - Phi' theta)
///   P     <- P - P Phi B Phi' P
/// where Phi stacks all nodes' regressors as columns.
inline CentralizedState centralized_step(const CentralizedState& state,
                                         const Observation& obs) {
  const int n = static_cast<int>(obs.phi.size());
  const int m = static_cast<int>(state.theta.size());
  Eigen::MatrixXd phi_c(m, n);
  for (int i = 0; i < n; ++i) {
    if (!obs.phi[i].allFinite()) throw NonFiniteInput("centralized_step: phi");
    phi_c.col(i) = obs.phi[i];
  }
  if (!obs.y.allFinite()) throw NonFiniteInput("centralized_step: y");

  Eigen::MatrixXd inner =
      Eigen::MatrixXd::Identity(n, n) + phi_c.transpose() * state.P * phi_c;
  symmetrize(inner);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(inner);
  const Eigen::MatrixXd p_phi = state.P * phi_c;  // m x n

  CentralizedState out;
  out.theta = state.theta +
              p_phi * ldlt.solve(obs.y - phi_c.transpose() * state.theta);
  out.P = state.P - p_phi * ldlt.solve(p_phi.transpose());
  symmetrize(out.P);
  return out;
}

}  // namespace dlse
