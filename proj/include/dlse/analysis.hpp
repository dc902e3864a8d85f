#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <deque>
#include <vector>

#include "dlse/errors.hpp"
#include "dlse/estimator.hpp"
#include "dlse/graph.hpp"

namespace dlse {

/// Per-step diagnostics for one network algorithm.
struct StepRecord {
  long k = 0;
  std::vector<double> regret;        // per node, (phi'(theta - theta_est))^2
  std::vector<double> sq_error;      // per node, ||theta - theta_est||^2
  double r_t = 0.0;
  double lambda_min_coop = 0.0;
  double lyapunov = 0.0;             // sum_i thtilde' P^{-1} thtilde
  double logdet_pinv_total = 0.0;
  double phi_p_phi_max = 0.0;
};

/// Squared gap between the conditional-mean predictor and the adaptive one.
inline double regret(const Eigen::VectorXd& phi,
                     const Eigen::VectorXd& theta_true,
                     const Eigen::VectorXd& theta_est) {
  if (phi.size() != theta_true.size() || phi.size() != theta_est.size()) {
    throw DimensionMismatch("regret: dimension mismatch");
  }
  const double gap = phi.dot(theta_true - theta_est);
  return gap * gap;
}

/// (1/(n t)) sum_i sum_{k=0..t} R_{k,i}, with t the last recorded index.
inline double averaged_regret(const std::vector<StepRecord>& records) {
  if (records.empty()) throw EmptyRecords("no step records");
  const long t = records.back().k;
  if (t < 1) throw EmptyRecords("averaged regret needs t >= 1");
  double total = 0.0;
  std::size_t n = records.front().regret.size();
  for (const auto& rec : records) {
    for (double r : rec.regret) total += r;
  }
  return total / (static_cast<double>(n) * static_cast<double>(t));
}

/// Incrementally tracks the excitation statistics:
///   r_t            = lambda_max{P_0^{-1}} + sum_i sum_{k=0..t} ||phi_{k,i}||^2
///   lambda_min^{n,t} = lambda_min{ sum_j P_{0,j}^{-1}
///                                  + sum_j sum_{k=0..t-D+1} phi phi' }
/// The truncated sum is maintained with a delay queue of the last D-1 per-step
/// pooled outer products, so memory stays O(D m^2).
class ExcitationTracker {
 public:
  ExcitationTracker(const std::vector<Eigen::MatrixXd>& p0_inv, int diameter)
      : diameter_(diameter) {
    const int m = static_cast<int>(p0_inv[0].rows());
    pooled_ = Eigen::MatrixXd::Zero(m, m);
    double lam_max = 0.0;
    for (const auto& p : p0_inv) {
      pooled_ += p;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p);
      lam_max = std::max(lam_max, es.eigenvalues().maxCoeff());
    }
    r_ = lam_max;
  }

  void observe(const std::vector<Eigen::VectorXd>& phis) {
    const int m = static_cast<int>(pooled_.rows());
    Eigen::MatrixXd step = Eigen::MatrixXd::Zero(m, m);
    for (const auto& phi : phis) {
      r_ += phi.squaredNorm();
      step += phi * phi.transpose();
    }
    recent_.push_back(step);
    // keep the last D-1 steps out of the truncated sum
    while (static_cast<int>(recent_.size()) > diameter_ - 1) {
      pooled_ += recent_.front();
      recent_.pop_front();
    }
    ++t_;
  }

  double r_t() const { return r_; }

  double lambda_min_coop() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pooled_);
    return es.eigenvalues()(0);
  }

  /// log(r_t) / lambda_min^{n,t}, the cooperative excitation ratio.
  double excitation_ratio() const {
    return std::log(r_) / lambda_min_coop();
  }

  long steps_observed() const { return t_; }

 private:
  int diameter_;
  long t_ = 0;
  double r_ = 0.0;
  Eigen::MatrixXd pooled_;               // truncated sum, initial + k <= t-D+1
  std::deque<Eigen::MatrixXd> recent_;   // last D-1 per-step contributions
};

/// One-shot version over a complete history of regressors up to time t.
inline std::pair<double, double> excitation_stats(
    const std::vector<std::vector<Eigen::VectorXd>>& phi_history,
    const std::vector<Eigen::MatrixXd>& p0_inv,
    const NetworkTopology& topology, long t) {
  if (static_cast<long>(phi_history.size()) <= t) {
    throw IncompleteHistory("phi history shorter than t+1 steps");
  }
  if (t < topology.diameter - 1) {
    throw IncompleteHistory("need t >= D_G - 1");
  }
  ExcitationTracker tracker(p0_inv, topology.diameter);
  for (long k = 0; k <= t; ++k) tracker.observe(phi_history[k]);
  return {tracker.r_t(), tracker.lambda_min_coop()};
}

/// sum_i (theta - theta_i)' P_i^{-1} (theta - theta_i).
inline double lyapunov_value(const std::vector<NodeState>& states,
                             const Eigen::VectorXd& theta_true) {
  double v = 0.0;
  for (const auto& s : states) {
    if (s.theta.size() != theta_true.size()) {
      throw DimensionMismatch("lyapunov_value: dimension mismatch");
    }
    const Eigen::VectorXd err = theta_true - s.theta;
    v += err.dot(s.P_inv * err);
  }
  return v;
}

/// Constants of the expected-regret bound:
///   a = (1+c) m n sigma_bar
///   b = (1+c) { E[V_0] - sigma_bar E[logdet P_0^{-1}] }
/// with sigma_w = sum_i sigma_i^2 and sigma_bar >= sigma_w.
struct BoundConstants {
  double sigma_w = 0.0;
  double c = 0.0;
  double a = 0.0;
  double b = 0.0;
};

inline BoundConstants bound_constants(int m, int n, double sigma_w,
                                      double sigma_bar, double c,
                                      double expected_v0,
                                      double expected_logdet_p0_inv) {
  if (!(sigma_bar >= sigma_w)) {
    throw MissingVarianceBound("sigma_bar must dominate sigma_w");
  }
  if (!(c >= 0.0)) {
    throw MissingVarianceBound("c must be a nonnegative bound");
  }
  BoundConstants out;
  out.sigma_w = sigma_w;
  out.c = c;
  out.a = (1.0 + c) * m * n * sigma_bar;
  out.b = (1.0 + c) * (expected_v0 - sigma_bar * expected_logdet_p0_inv);
  return out;
}

}  // namespace dlse
