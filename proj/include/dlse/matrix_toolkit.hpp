#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "dlse/errors.hpp"
#include "dlse/rng.hpp"

namespace dlse {

inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kPsdTol = 1e-9;

struct OrderCheckReport {
  bool holds = false;
  double worst_eig = 0.0;       // lambda_min of B - A
  Eigen::VectorXd witness;      // eigenvector achieving worst_eig
};

struct MarginReport {
  bool holds = false;
  double margin = 0.0;
};

inline void require_symmetric(const Eigen::MatrixXd& a) {
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * (1.0 + a.cwiseAbs().maxCoeff())) {
    throw NotSymmetricMatrix("matrix is not symmetric");
  }
}

/// Checks A <= B in the semidefinite order, i.e. B - A >= -tol * I.
inline OrderCheckReport psd_order(const Eigen::MatrixXd& a,
                                  const Eigen::MatrixXd& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("psd_order: dimension mismatch");
  }
  require_symmetric(a);
  require_symmetric(b);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b - a);
  OrderCheckReport r;
  r.worst_eig = es.eigenvalues()(0);
  r.witness = es.eigenvectors().col(0);
  r.holds = r.worst_eig >= -tol;
  return r;
}

/// Log-determinant of an SPD matrix via Cholesky.
inline double logdet_spd(const Eigen::MatrixXd& a) {
  require_symmetric(a);
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("logdet_spd: matrix not positive definite");
  }
  const Eigen::MatrixXd L = llt.matrixL();
  return 2.0 * L.diagonal().array().log().sum();
}

namespace detail {

inline Eigen::MatrixXd kron_with_identity(const Eigen::MatrixXd& a, int m) {
  const int n = static_cast<int>(a.rows());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n * m, n * m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.block(i * m, j * m, m, m) =
          a(i, j) * Eigen::MatrixXd::Identity(m, m);
  return out;
}

inline Eigen::MatrixXd block_diag(const std::vector<Eigen::MatrixXd>& blocks) {
  const int n = static_cast<int>(blocks.size());
  const int m = static_cast<int>(blocks[0].rows());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n * m, n * m);
  for (int i = 0; i < n; ++i) out.block(i * m, i * m, m, m) = blocks[i];
  return out;
}

// Relative tolerance: scale by the magnitude of the matrices involved.
inline double scaled_tol(const Eigen::MatrixXd& a) {
  return kPsdTol * (1.0 + a.cwiseAbs().maxCoeff());
}

}  // namespace detail

/// Convex-combination inequality for block matrices: with Q' formed by the
/// column-weighted sums Q'_i = sum_j a_ji Q_j, the ordering
/// (A (x) I) diag(Q) (A (x) I) <= diag(Q') holds for any symmetric doubly
/// stochastic A and PSD blocks Q_j.
inline OrderCheckReport check_lemma_4_1(const Eigen::MatrixXd& weights,
                                        const std::vector<Eigen::MatrixXd>& qs) {
  const int n = static_cast<int>(weights.rows());
  if (static_cast<int>(qs.size()) != n) {
    throw DimensionMismatch("need one Q block per node");
  }
  const int m = static_cast<int>(qs[0].rows());
  std::vector<Eigen::MatrixXd> qprime(n);
  for (int i = 0; i < n; ++i) {
    qprime[i] = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < n; ++j) qprime[i] += weights(j, i) * qs[j];
  }
  const Eigen::MatrixXd big_a = detail::kron_with_identity(weights, m);
  const Eigen::MatrixXd lhs = big_a * detail::block_diag(qs) * big_a;
  const Eigen::MatrixXd rhs = detail::block_diag(qprime);
  return psd_order((lhs + lhs.transpose()) / 2.0, rhs, detail::scaled_tol(rhs));
}

/// The two diffusion orderings: A Pbar^{-1} A <= P^{-1} and A P A <= Pbar,
/// where P_i^{-1} = sum_j a_ji Pbar_j^{-1}.
inline std::pair<OrderCheckReport, OrderCheckReport> check_lemma_4_2(
    const Eigen::MatrixXd& weights,
    const std::vector<Eigen::MatrixXd>& pbar_inv) {
  const int n = static_cast<int>(weights.rows());
  const int m = static_cast<int>(pbar_inv[0].rows());
  std::vector<Eigen::MatrixXd> p_inv(n), p(n), pbar(n);
  for (int i = 0; i < n; ++i) {
    p_inv[i] = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < n; ++j) p_inv[i] += weights(j, i) * pbar_inv[j];
    p[i] = p_inv[i].inverse();
    p[i] = ((p[i] + p[i].transpose()) / 2.0).eval();
    pbar[i] = pbar_inv[i].inverse();
    pbar[i] = ((pbar[i] + pbar[i].transpose()) / 2.0).eval();
  }
  const Eigen::MatrixXd big_a = detail::kron_with_identity(weights, m);

  Eigen::MatrixXd lhs1 = big_a * detail::block_diag(pbar_inv) * big_a;
  lhs1 = ((lhs1 + lhs1.transpose()) / 2.0).eval();
  const Eigen::MatrixXd rhs1 = detail::block_diag(p_inv);

  Eigen::MatrixXd lhs2 = big_a * detail::block_diag(p) * big_a;
  lhs2 = ((lhs2 + lhs2.transpose()) / 2.0).eval();
  const Eigen::MatrixXd rhs2 = detail::block_diag(pbar);

  return {psd_order(lhs1, rhs1, detail::scaled_tol(rhs1)),
          psd_order(lhs2, rhs2, detail::scaled_tol(rhs2))};
}

/// Determinant monotonicity of the combine step:
/// sum_i logdet Pbar_i^{-1} <= sum_i logdet P_i^{-1}.
inline MarginReport check_lemma_4_3(const Eigen::MatrixXd& weights,
                                    const std::vector<Eigen::MatrixXd>& pbar_inv) {
  const int n = static_cast<int>(weights.rows());
  const int m = static_cast<int>(pbar_inv[0].rows());
  double lhs = 0.0, rhs = 0.0;
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd p_inv = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < n; ++j) p_inv += weights(j, i) * pbar_inv[j];
    lhs += logdet_spd(pbar_inv[i]);
    rhs += logdet_spd(p_inv);
  }
  MarginReport r;
  r.margin = rhs - lhs;
  r.holds = r.margin >= -1e-8;
  return r;
}

/// Ky Fan: logdet(sum lambda_i A_i) >= sum lambda_i logdet A_i.
/// Singular A_i give logdet -inf and the inequality holds trivially.
inline MarginReport check_ky_fan(const std::vector<double>& lambdas,
                                 const std::vector<Eigen::MatrixXd>& as) {
  if (lambdas.size() != as.size()) {
    throw DimensionMismatch("one weight per matrix required");
  }
  double sum = 0.0;
  for (double l : lambdas) {
    if (l < 0.0 || l > 1.0) throw WeightSumInvalid(l);
    sum += l;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw WeightSumInvalid(sum);

  const int m = static_cast<int>(as[0].rows());
  Eigen::MatrixXd mix = Eigen::MatrixXd::Zero(m, m);
  double rhs = 0.0;
  bool rhs_ninf = false;
  for (std::size_t i = 0; i < as.size(); ++i) {
    mix += lambdas[i] * as[i];
    Eigen::LLT<Eigen::MatrixXd> llt(as[i]);
    if (llt.info() != Eigen::Success) {
      rhs_ninf = true;  // PSD but singular
    } else if (lambdas[i] > 0.0) {
      rhs += lambdas[i] * logdet_spd(as[i]);
    }
  }
  MarginReport r;
  if (rhs_ninf) {
    r.margin = std::numeric_limits<double>::infinity();
    r.holds = true;
    return r;
  }
  r.margin = logdet_spd(mix) - rhs;
  r.holds = r.margin >= -1e-8;
  return r;
}

struct ResidualReport {
  bool holds = false;
  double residual = 0.0;
};

/// Verifies (A + BDC)^{-1} = A^{-1} - A^{-1} B (D^{-1} + C A^{-1} B)^{-1} C A^{-1}.
inline ResidualReport woodbury_check(const Eigen::MatrixXd& a,
                                     const Eigen::MatrixXd& b,
                                     const Eigen::MatrixXd& c,
                                     const Eigen::MatrixXd& d) {
  auto guarded_inverse = [](const Eigen::MatrixXd& x) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(x);
    if (!lu.isInvertible()) throw SingularInput("woodbury_check: singular matrix");
    return lu.inverse().eval();
  };
  const Eigen::MatrixXd a_inv = guarded_inverse(a);
  const Eigen::MatrixXd d_inv = guarded_inverse(d);
  const Eigen::MatrixXd inner = guarded_inverse(d_inv + c * a_inv * b);
  const Eigen::MatrixXd rhs = a_inv - a_inv * b * inner * c * a_inv;
  const Eigen::MatrixXd lhs = guarded_inverse(a + b * d * c);
  ResidualReport r;
  r.residual = (lhs - rhs).cwiseAbs().maxCoeff() /
               (1.0 + lhs.cwiseAbs().maxCoeff());
  r.holds = r.residual <= 1e-9;
  return r;
}

/// Cr-inequality on nonnegative scalars:
/// (sum a)^r <= m^{r-1} sum a^r for r >= 1, and <= sum a^r for 0 <= r <= 1.
inline MarginReport check_cr_inequality(const std::vector<double>& values,
                                        double r) {
  double s = 0.0, sr = 0.0;
  for (double v : values) {
    s += v;
    sr += std::pow(v, r);
  }
  const double lhs = std::pow(s, r);
  const double bound = (r >= 1.0)
      ? std::pow(static_cast<double>(values.size()), r - 1.0) * sr
      : sr;
  MarginReport rep;
  rep.margin = bound - lhs;
  rep.holds = rep.margin >= -1e-12 * (1.0 + bound);
  return rep;
}

// -- randomized draw helpers (test infrastructure) ---------------------------

/// Random symmetric doubly stochastic matrix via symmetric Sinkhorn-style
/// normalization of a positive symmetric matrix.
inline Eigen::MatrixXd random_doubly_stochastic(int n, SubstreamRng& rng) {
  Eigen::MatrixXd x(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) x(i, j) = x(j, i) = 0.1 + rng.uniform01();
  for (int iter = 0; iter < 400; ++iter) {
    Eigen::VectorXd r = x.rowwise().sum();
    Eigen::VectorXd d = r.array().sqrt().inverse();
    x = (d.asDiagonal() * x * d.asDiagonal()).eval();
    x = ((x + x.transpose()) / 2.0).eval();
    if ((x.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-14) break;
  }
  // Fix residual round-off so validation at 1e-12 passes.
  for (int i = 0; i < n; ++i) x(i, i) += 1.0 - x.row(i).sum();
  return x;
}

inline Eigen::MatrixXd random_psd(int m, SubstreamRng& rng, int rank = -1) {
  if (rank < 0) rank = m;
  Eigen::MatrixXd x(rank, m);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < m; ++j) x(i, j) = rng.normal();
  Eigen::MatrixXd out = x.transpose() * x;
  return ((out + out.transpose()) / 2.0).eval();
}

inline Eigen::MatrixXd random_spd(int m, SubstreamRng& rng) {
  Eigen::MatrixXd out = random_psd(m, rng) +
                        0.1 * Eigen::MatrixXd::Identity(m, m);
  return out;
}

}  // namespace dlse
