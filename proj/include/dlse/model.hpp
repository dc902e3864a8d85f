#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "dlse/errors.hpp"
#include "dlse/graph.hpp"
#include "dlse/rng.hpp"

namespace dlse {

/// Noise laws all satisfy the martingale-difference moment requirement
/// (for student-t this needs dof > 2).
struct NoiseSpec {
  enum class Kind { gaussian, uniform, scaled_student_t };

  Kind kind = Kind::gaussian;
  double variance_param = 1.0;   // gaussian
  double half_width = 1.0;       // uniform
  double dof = 3.0;              // scaled_student_t
  double scale = 1.0;            // scaled_student_t

  static NoiseSpec gaussian(double variance) {
    if (!(variance > 0.0)) throw ConfigInvalid("noise variance must be > 0");
    NoiseSpec s;
    s.kind = Kind::gaussian;
    s.variance_param = variance;
    return s;
  }
  static NoiseSpec uniform(double half_width) {
    if (!(half_width > 0.0)) throw ConfigInvalid("half_width must be > 0");
    NoiseSpec s;
    s.kind = Kind::uniform;
    s.half_width = half_width;
    return s;
  }
  static NoiseSpec scaled_student_t(double dof, double scale) {
    if (!(dof > 2.0)) throw ConfigInvalid("student-t dof must be > 2");
    if (!(scale > 0.0)) throw ConfigInvalid("student-t scale must be > 0");
    NoiseSpec s;
    s.kind = Kind::scaled_student_t;
    s.dof = dof;
    s.scale = scale;
    return s;
  }

  double variance() const {
    switch (kind) {
      case Kind::gaussian:
        return variance_param;
      case Kind::uniform:
        return half_width * half_width / 3.0;
      case Kind::scaled_student_t:
        return scale * scale * dof / (dof - 2.0);
    }
    return 0.0;
  }

  double sample(SubstreamRng& rng) const {
    switch (kind) {
      case Kind::gaussian:
        return std::sqrt(variance_param) * rng.normal();
      case Kind::uniform:
        return half_width * (2.0 * rng.uniform01() - 1.0);
      case Kind::scaled_student_t:
        return scale * rng.student_t(dof);
    }
    return 0.0;
  }
};

/// ARX cooperative model y_{k+1,i} = a*y_{k,i} + sum_j b_ji * u_{k,j} + w.
/// mask(j,i) marks which input gains b_ji exist. Parameter layout:
/// theta = [a, then for each node i (ascending) the b_ji with j ascending].
/// Regressor of node i: coord 0 holds y_{k,i}; the b_ji coords hold u_{k,j};
/// all other coords are structurally zero.
struct ArxParams {
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask;
  double input_variance = 1.0;
};

struct IidGaussianParams {
  Eigen::MatrixXd covariance;  // m x m, shared across nodes
};

struct ReplayedParams {
  std::string file;  // CSV: k,i,phi_0..phi_{m-1},y
};

using RegressorKind = std::variant<IidGaussianParams, ArxParams, ReplayedParams>;

struct Scenario {
  Eigen::VectorXd theta;
  RegressorKind regressor;
  NoiseSpec noise;
  int n = 1;
  int m = 1;
};

struct Observation {
  std::vector<Eigen::VectorXd> phi;  // per node
  Eigen::VectorXd y;                 // per node
  Eigen::VectorXd w;                 // per node, retained for diagnostics
};

namespace detail {

constexpr std::uint64_t kStreamRegressor = 1;
constexpr std::uint64_t kStreamNoise = 2;
constexpr std::uint64_t kStreamInput = 3;

struct ReplayData {
  std::vector<Observation> steps;
};

inline std::shared_ptr<ReplayData> load_replay(const std::string& path, int n,
                                               int m) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open replay file: " + path);
  auto data = std::make_shared<ReplayData>();
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    if (static_cast<int>(vals.size()) != m + 3) {
      throw ParseError("replay row has " + std::to_string(vals.size()) +
                       " fields, expected " + std::to_string(m + 3));
    }
    const auto k = static_cast<std::size_t>(vals[0]);
    const int i = static_cast<int>(vals[1]);
    if (i < 0 || i >= n) throw IndexOutOfRange(i);
    while (data->steps.size() <= k) {
      Observation obs;
      obs.phi.assign(n, Eigen::VectorXd::Zero(m));
      obs.y = Eigen::VectorXd::Zero(n);
      obs.w = Eigen::VectorXd::Zero(n);
      data->steps.push_back(obs);
    }
    for (int c = 0; c < m; ++c) data->steps[k].phi[i](c) = vals[2 + c];
    data->steps[k].y(i) = vals[2 + m];
  }
  return data;
}

// Column offsets of the b_ji coordinates in theta / phi for the ARX layout.
inline std::vector<std::vector<int>> arx_coords(const ArxParams& p) {
  const int n = static_cast<int>(p.mask.cols());
  std::vector<std::vector<int>> coords(n);
  int next = 1;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (p.mask(j, i)) coords[i].push_back(next++);
    }
  }
  return coords;
}

inline int arx_param_count(const ArxParams& p) {
  int c = 1;
  for (int i = 0; i < p.mask.rows(); ++i)
    for (int j = 0; j < p.mask.cols(); ++j)
      if (p.mask(i, j)) ++c;
  return c;
}

}  // namespace detail

struct GeneratorState {
  std::uint64_t seed = 0;
  long k = 0;
  Eigen::VectorXd y_prev;  // ARX outputs y_{k,i}, initialized to 0
  std::shared_ptr<detail::ReplayData> replay;
};

inline GeneratorState make_generator_state(const Scenario& scenario,
                                           std::uint64_t seed) {
  GeneratorState st;
  st.seed = seed;
  st.y_prev = Eigen::VectorXd::Zero(scenario.n);
  if (const auto* rp = std::get_if<ReplayedParams>(&scenario.regressor)) {
    st.replay = detail::load_replay(rp->file, scenario.n, scenario.m);
  }
  return st;
}

/// Generates (phi_{k,i}, y_{k+1,i}, w_{k+1,i}) for all nodes and advances the
/// generator state. Deterministic given (scenario, seed, k).
inline Observation generate_step(const Scenario& scenario, GeneratorState& st,
                                 long k) {
  const int n = scenario.n;
  const int m = scenario.m;
  if (scenario.theta.size() != m) {
    throw DimensionMismatch("theta length does not match m");
  }

  Observation obs;
  obs.phi.assign(n, Eigen::VectorXd::Zero(m));
  obs.y = Eigen::VectorXd::Zero(n);
  obs.w = Eigen::VectorXd::Zero(n);

  if (const auto* rp = std::get_if<ReplayedParams>(&scenario.regressor)) {
    (void)rp;
    if (static_cast<std::size_t>(k) >= st.replay->steps.size()) {
      throw IncompleteHistory("replay file ends before step " +
                              std::to_string(k));
    }
    obs = st.replay->steps[static_cast<std::size_t>(k)];
    for (int i = 0; i < n; ++i) {
      obs.w(i) = obs.y(i) - obs.phi[i].dot(scenario.theta);
    }
    st.k = k + 1;
    return obs;
  }

  if (const auto* ig = std::get_if<IidGaussianParams>(&scenario.regressor)) {
    if (ig->covariance.rows() != m || ig->covariance.cols() != m) {
      throw DimensionMismatch("iid covariance must be m x m");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(ig->covariance);
    if (llt.info() != Eigen::Success) {
      throw NotPositiveDefinite("iid covariance is not SPD");
    }
    const Eigen::MatrixXd L = llt.matrixL();
    for (int i = 0; i < n; ++i) {
      SubstreamRng rng(st.seed, {detail::kStreamRegressor,
                                 static_cast<std::uint64_t>(k),
                                 static_cast<std::uint64_t>(i)});
      Eigen::VectorXd z(m);
      for (int c = 0; c < m; ++c) z(c) = rng.normal();
      obs.phi[i] = L * z;
    }
  } else {
    const auto& ax = std::get<ArxParams>(scenario.regressor);
    if (detail::arx_param_count(ax) != m) {
      throw DimensionMismatch("ARX mask inconsistent with m");
    }
    Eigen::VectorXd u(n);
    for (int j = 0; j < n; ++j) {
      SubstreamRng rng(st.seed, {detail::kStreamInput,
                                 static_cast<std::uint64_t>(k),
                                 static_cast<std::uint64_t>(j)});
      u(j) = std::sqrt(ax.input_variance) * rng.normal();
    }
    const auto coords = detail::arx_coords(ax);
    for (int i = 0; i < n; ++i) {
      obs.phi[i](0) = st.y_prev(i);
      int c = 0;
      for (int j = 0; j < n; ++j) {
        if (ax.mask(j, i)) obs.phi[i](coords[i][c++]) = u(j);
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    SubstreamRng rng(st.seed, {detail::kStreamNoise,
                               static_cast<std::uint64_t>(k),
                               static_cast<std::uint64_t>(i)});
    obs.w(i) = scenario.noise.sample(rng);
    obs.y(i) = obs.phi[i].dot(scenario.theta) + obs.w(i);
  }

  if (std::holds_alternative<ArxParams>(scenario.regressor)) {
    st.y_prev = obs.y;
  }
  st.k = k + 1;
  return obs;
}

/// The 3-node cooperative ARX scenario: 8 parameters, structural zeros such
/// that no single node excites every coordinate.
inline Scenario arx_cooperative_scenario() {
  Scenario s;
  s.n = 3;
  s.m = 8;
  s.theta.resize(8);
  s.theta << 0.2, 0.5, 0.3, 0.2, 0.1, 1.2, 0.6, 1.5;
  ArxParams ax;
  ax.mask.resize(3, 3);
  // b_ji present: node 1 sees u1,u2; node 2 sees u1,u2,u3; node 3 sees u2,u3.
  ax.mask << true, true, false,
             true, true, true,
             false, true, true;
  ax.input_variance = 1.0;
  s.regressor = ax;
  s.noise = NoiseSpec::gaussian(0.1);
  return s;
}

/// Weight matrix that pairs with arx_cooperative_scenario().
inline Eigen::MatrixXd arx_cooperative_weights() {
  Eigen::MatrixXd w(3, 3);
  w << 2.0 / 3.0, 1.0 / 3.0, 0.0,
       1.0 / 3.0, 1.0 / 2.0, 1.0 / 6.0,
       0.0, 1.0 / 6.0, 5.0 / 6.0;
  return w;
}

}  // namespace dlse
