#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "dlse/analysis.hpp"
#include "dlse/errors.hpp"
#include "dlse/estimator.hpp"
#include "dlse/graph.hpp"
#include "dlse/model.hpp"
#include "dlse/svg_plot.hpp"

namespace dlse {

enum class Algorithm { distributed, classical_per_node, centralized };

inline std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::distributed: return "distributed";
    case Algorithm::classical_per_node: return "classical_per_node";
    case Algorithm::centralized: return "centralized";
  }
  return "?";
}

inline Algorithm algorithm_from_name(const std::string& s) {
  if (s == "distributed") return Algorithm::distributed;
  if (s == "classical_per_node") return Algorithm::classical_per_node;
  if (s == "centralized") return Algorithm::centralized;
  throw ConfigInvalid("unknown algorithm: " + s);
}

struct ExperimentConfig {
  NetworkTopology topology;
  Scenario scenario;
  long horizon = 1;
  int runs = 1;
  std::uint64_t base_seed = 0;
  std::vector<Algorithm> algorithms = {Algorithm::distributed};
  int combine_rounds = 1;
  long record_cadence = 0;  // 0 = auto: 1 for T <= 1000, else 10
  std::string output_dir = "out";
  double alpha0 = 1.0;
  std::vector<double> alpha0_per_node;  // optional override
  Eigen::VectorXd theta0;               // defaults to zero

  long effective_cadence() const {
    if (record_cadence > 0) return record_cadence;
    return horizon <= 1000 ? 1 : 10;
  }
};

struct AlgoRunResult {
  std::vector<double> final_sq_error;  // per node (centralized: one entry)
  double accumulated_regret = 0.0;
};

struct RunSummary {
  // mean over runs of per-node squared error, by algorithm and recorded k
  std::map<Algorithm, std::map<long, std::vector<double>>> mean_sq_error;
  std::map<Algorithm, double> mean_accumulated_regret;
  std::vector<std::pair<long, double>> excitation_ratio_samples;  // run 0
  double mean_r_final = 0.0;
  double wall_seconds = 0.0;
};

namespace detail {

struct MetricRow {
  long k;
  int i;
  Algorithm alg;
  int run;
  double sq_error;
  double regret;
};

struct NetworkRow {
  long k;
  Algorithm alg;
  int run;
  double r_t;
  double lambda_min_coop;
  double lyapunov;
  double logdet;
  double phi_p_phi_max;
};

struct RunOutput {
  std::vector<MetricRow> metrics;
  std::vector<NetworkRow> network;
  std::map<Algorithm, AlgoRunResult> results;
  std::vector<std::pair<long, double>> excitation_samples;
  double r_final = 0.0;
};

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline double logdet_total(const std::vector<NodeState>& states) {
  double s = 0.0;
  for (const auto& st : states) s += logdet_spd(st.P_inv);
  return s;
}

inline RunOutput simulate_run(const ExperimentConfig& cfg, int run) {
  const int n = cfg.scenario.n;
  const int m = cfg.scenario.m;
  const long T = cfg.horizon;
  const long cadence = cfg.effective_cadence();
  const auto& theta = cfg.scenario.theta;

  auto alpha_for = [&](int i) {
    return cfg.alpha0_per_node.empty() ? cfg.alpha0 : cfg.alpha0_per_node[i];
  };

  std::vector<NodeState> dist_states, cls_states;
  for (int i = 0; i < n; ++i) {
    NodeState s = NodeState::initial(m, alpha_for(i));
    if (cfg.theta0.size() == m) s.theta = cfg.theta0;
    dist_states.push_back(s);
    cls_states.push_back(s);
  }
  CentralizedState cen = CentralizedState::initial(m, cfg.alpha0);
  if (cfg.theta0.size() == m) cen.theta = cfg.theta0;

  auto has = [&](Algorithm a) {
    for (Algorithm x : cfg.algorithms) if (x == a) return true;
    return false;
  };

  std::vector<Eigen::MatrixXd> p0_inv;
  for (int i = 0; i < n; ++i)
    p0_inv.push_back((1.0 / alpha_for(i)) * Eigen::MatrixXd::Identity(m, m));
  ExcitationTracker tracker(p0_inv, cfg.topology.diameter);

  GeneratorState gen = make_generator_state(cfg.scenario,
                                            cfg.base_seed + run);
  RunOutput out;
  std::map<Algorithm, double> acc_regret;
  for (Algorithm a : cfg.algorithms) acc_regret[a] = 0.0;

  auto node_errors = [&](Algorithm a) {
    std::vector<double> errs;
    if (a == Algorithm::centralized) {
      errs.push_back((theta - cen.theta).squaredNorm());
    } else {
      const auto& states = a == Algorithm::distributed ? dist_states
                                                       : cls_states;
      for (const auto& s : states) errs.push_back((theta - s.theta).squaredNorm());
    }
    return errs;
  };

  auto emit_metric_rows = [&](long k, const Observation* obs) {
    for (Algorithm a : cfg.algorithms) {
      const auto errs = node_errors(a);
      for (std::size_t i = 0; i < errs.size(); ++i) {
        double reg = 0.0;
        if (obs) {
          const Eigen::VectorXd& est =
              a == Algorithm::centralized ? cen.theta
              : a == Algorithm::distributed ? dist_states[i].theta
                                            : cls_states[i].theta;
          if (a == Algorithm::centralized) {
            // fusion-center predictor: sum the per-node regrets
            for (int j = 0; j < n; ++j) reg += regret(obs->phi[j], theta, est);
          } else {
            reg = regret(obs->phi[i], theta, est);
          }
        }
        out.metrics.push_back({k, static_cast<int>(i), a, run, errs[i], reg});
      }
    }
  };

  auto emit_network_rows = [&](long k, const Observation& obs) {
    const double r = tracker.r_t();
    const double lam = tracker.lambda_min_coop();
    for (Algorithm a : cfg.algorithms) {
      double v = 0.0, logdet = 0.0, quad = 0.0;
      if (a == Algorithm::centralized) {
        Eigen::LLT<Eigen::MatrixXd> llt(cen.P);
        const Eigen::VectorXd err = theta - cen.theta;
        v = err.dot(llt.solve(err));
        logdet = -logdet_spd(cen.P);
        Eigen::MatrixXd phi_c(m, n);
        for (int i = 0; i < n; ++i) phi_c.col(i) = obs.phi[i];
        Eigen::MatrixXd q = phi_c.transpose() * cen.P * phi_c;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
            ((q + q.transpose()) / 2.0).eval());
        quad = es.eigenvalues().maxCoeff();
      } else {
        const auto& states = a == Algorithm::distributed ? dist_states
                                                         : cls_states;
        v = lyapunov_value(states, theta);
        logdet = logdet_total(states);
        for (int i = 0; i < n; ++i) {
          quad = std::max(quad, obs.phi[i].dot(states[i].P * obs.phi[i]));
        }
      }
      out.network.push_back({k, a, run, r, lam, v, logdet, quad});
    }
  };

  for (long k = 0; k < T; ++k) {
    Observation obs = generate_step(cfg.scenario, gen, k);
    tracker.observe(obs.phi);

    for (Algorithm a : cfg.algorithms) {
      double step_regret = 0.0;
      if (a == Algorithm::centralized) {
        for (int j = 0; j < n; ++j)
          step_regret += regret(obs.phi[j], theta, cen.theta);
      } else {
        const auto& states = a == Algorithm::distributed ? dist_states
                                                         : cls_states;
        for (int i = 0; i < n; ++i)
          step_regret += regret(obs.phi[i], theta, states[i].theta);
      }
      acc_regret[a] += step_regret;
    }

    if (k % cadence == 0) {
      emit_metric_rows(k, &obs);
      emit_network_rows(k, obs);
      if (run == 0 && k >= cfg.topology.diameter - 1) {
        out.excitation_samples.push_back({k, tracker.excitation_ratio()});
      }
    }

    if (has(Algorithm::distributed)) {
      dist_states = step_network(dist_states, obs, cfg.topology,
                                 cfg.combine_rounds);
    }
    if (has(Algorithm::classical_per_node)) {
      for (int i = 0; i < n; ++i) {
        AdaptOutput bar = adapt(cls_states[i], obs.phi[i], obs.y(i));
        cls_states[i].theta = bar.theta_bar;
        cls_states[i].P = bar.Pbar;
        cls_states[i].P_inv = bar.Pbar_inv;
      }
    }
    if (has(Algorithm::centralized)) cen = centralized_step(cen, obs);
  }

  emit_metric_rows(T, nullptr);  // final estimates, no prediction at T
  out.r_final = tracker.steps_observed() > 0 ? tracker.r_t() : 0.0;
  for (Algorithm a : cfg.algorithms) {
    AlgoRunResult res;
    res.final_sq_error = node_errors(a);
    res.accumulated_regret = acc_regret[a];
    out.results[a] = res;
  }
  return out;
}

}  // namespace detail

/// Parses and cross-validates a JSON experiment config.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;

  // topology
  if (!j.contains("topology")) throw ConfigInvalid("missing 'topology'");
  const auto& jt = j.at("topology");
  Eigen::MatrixXd weights;
  if (jt.contains("weights")) {
    const auto rows = jt.at("weights");
    const int n = static_cast<int>(rows.size());
    weights.resize(n, n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows[i].size()) != n) {
        throw ConfigInvalid("topology.weights must be square");
      }
      for (int c = 0; c < n; ++c) weights(i, c) = rows[i][c].get<double>();
    }
  } else if (jt.contains("csv")) {
    std::ifstream in(jt.at("csv").get<std::string>());
    if (!in) throw IoFailure("cannot open topology csv");
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::stringstream ss(line);
      std::string cell;
      std::vector<double> row;
      while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
      rows.push_back(row);
    }
    const int n = static_cast<int>(rows.size());
    weights.resize(n, n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows[i].size()) != n) {
        throw ConfigInvalid("topology csv must be square");
      }
      for (int c = 0; c < n; ++c) weights(i, c) = rows[i][c];
    }
  } else {
    throw ConfigInvalid("topology needs 'weights' or 'csv'");
  }
  cfg.topology = build_topology(weights);

  // scenario
  if (!j.contains("scenario")) throw ConfigInvalid("missing 'scenario'");
  const auto& js = j.at("scenario");
  const std::string kind = js.at("kind").get<std::string>();
  if (kind == "arx_cooperative") {
    cfg.scenario = arx_cooperative_scenario();
    if (js.contains("mask")) {
      ArxParams ax;
      const auto& jm = js.at("mask");
      const int n = static_cast<int>(jm.size());
      ax.mask.resize(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) ax.mask(r, c) = jm[r][c].get<int>() != 0;
      if (js.contains("input_variance")) {
        ax.input_variance = js.at("input_variance").get<double>();
      }
      cfg.scenario.n = n;
      cfg.scenario.m = detail::arx_param_count(ax);
      cfg.scenario.regressor = ax;
    }
  } else if (kind == "iid_gaussian") {
    IidGaussianParams ig;
    const auto theta = js.at("theta");
    const int m = static_cast<int>(theta.size());
    if (js.contains("covariance")) {
      const auto& jc = js.at("covariance");
      ig.covariance.resize(m, m);
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) ig.covariance(r, c) = jc[r][c].get<double>();
    } else {
      ig.covariance = Eigen::MatrixXd::Identity(m, m);
    }
    cfg.scenario.regressor = ig;
    cfg.scenario.m = m;
    cfg.scenario.n = cfg.topology.n;
  } else if (kind == "replayed") {
    ReplayedParams rp;
    rp.file = js.at("file").get<std::string>();
    cfg.scenario.regressor = rp;
    cfg.scenario.m = js.at("m").get<int>();
    cfg.scenario.n = cfg.topology.n;
  } else {
    throw ConfigInvalid("unknown scenario kind: " + kind);
  }
  if (js.contains("theta")) {
    const auto theta = js.at("theta");
    cfg.scenario.theta.resize(static_cast<int>(theta.size()));
    for (std::size_t c = 0; c < theta.size(); ++c) {
      cfg.scenario.theta(static_cast<int>(c)) = theta[c].get<double>();
    }
  }
  if (js.contains("noise")) {
    const auto& jn = js.at("noise");
    const std::string nk = jn.at("kind").get<std::string>();
    if (nk == "gaussian") {
      cfg.scenario.noise = NoiseSpec::gaussian(jn.at("variance").get<double>());
    } else if (nk == "uniform") {
      cfg.scenario.noise = NoiseSpec::uniform(jn.at("half_width").get<double>());
    } else if (nk == "scaled_student_t") {
      cfg.scenario.noise = NoiseSpec::scaled_student_t(
          jn.at("dof").get<double>(), jn.at("scale").get<double>());
    } else {
      throw ConfigInvalid("unknown noise kind: " + nk);
    }
  }

  // cross-field checks
  if (cfg.scenario.n != cfg.topology.n) {
    throw CrossFieldMismatch("topology has n=" + std::to_string(cfg.topology.n) +
                             " but scenario has n=" +
                             std::to_string(cfg.scenario.n));
  }
  if (cfg.scenario.theta.size() != cfg.scenario.m) {
    throw CrossFieldMismatch(
        "scenario.theta length " + std::to_string(cfg.scenario.theta.size()) +
        " does not match regressor layout m=" + std::to_string(cfg.scenario.m));
  }

  cfg.horizon = j.value("horizon", 1L);
  cfg.runs = j.value("runs", 1);
  cfg.base_seed = j.value("base_seed", std::uint64_t{0});
  cfg.combine_rounds = j.value("combine_rounds", 1);
  cfg.record_cadence = j.value("record_cadence", 0L);
  cfg.output_dir = j.value("output_dir", std::string("out"));
  if (j.contains("algorithms")) {
    cfg.algorithms.clear();
    for (const auto& a : j.at("algorithms")) {
      cfg.algorithms.push_back(algorithm_from_name(a.get<std::string>()));
    }
  }
  if (j.contains("init")) {
    const auto& ji = j.at("init");
    cfg.alpha0 = ji.value("alpha0", 1.0);
    if (ji.contains("alpha0_per_node")) {
      for (const auto& a : ji.at("alpha0_per_node")) {
        cfg.alpha0_per_node.push_back(a.get<double>());
      }
      if (static_cast<int>(cfg.alpha0_per_node.size()) != cfg.scenario.n) {
        throw CrossFieldMismatch("alpha0_per_node length != n");
      }
    }
    if (ji.contains("theta0")) {
      const auto t0 = ji.at("theta0");
      if (static_cast<int>(t0.size()) != cfg.scenario.m) {
        throw CrossFieldMismatch("init.theta0 length != m");
      }
      cfg.theta0.resize(cfg.scenario.m);
      for (int c = 0; c < cfg.scenario.m; ++c) cfg.theta0(c) = t0[c].get<double>();
    }
  }
  if (cfg.horizon < 0 || cfg.runs < 1 || cfg.combine_rounds < 1 ||
      cfg.record_cadence < 0 || cfg.algorithms.empty()) {
    throw ConfigInvalid("horizon/runs/combine_rounds/cadence out of range");
  }
  return cfg;
}

inline ExperimentConfig validate_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open config: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("config parse error: ") + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigInvalid(std::string("config error: ") + e.what());
  }
}

/// Executes all Monte-Carlo runs and writes metrics.csv, network.csv,
/// summary.jsonl and meta.json under config.output_dir.
inline RunSummary run_experiment(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  const auto start = std::chrono::steady_clock::now();
  fs::create_directories(cfg.output_dir);

  std::vector<detail::RunOutput> outputs(cfg.runs);
  const unsigned workers = std::max(1u, std::min<unsigned>(
      std::thread::hardware_concurrency(), static_cast<unsigned>(cfg.runs)));
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mutex;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int run = next.fetch_add(1);
        if (run >= cfg.runs) return;
        try {
          outputs[run] = detail::simulate_run(cfg, run);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  // metrics.csv
  {
    std::ofstream out(fs::path(cfg.output_dir) / "metrics.csv");
    if (!out) throw IoFailure("cannot write metrics.csv");
    out << "k,i,algorithm,run,sq_error,regret\n";
    for (const auto& ro : outputs) {
      for (const auto& r : ro.metrics) {
        out << r.k << ',' << r.i << ',' << algorithm_name(r.alg) << ','
            << r.run << ',' << detail::fmt_double(r.sq_error) << ','
            << detail::fmt_double(r.regret) << '\n';
      }
    }
  }
  // network.csv
  {
    std::ofstream out(fs::path(cfg.output_dir) / "network.csv");
    if (!out) throw IoFailure("cannot write network.csv");
    out << "k,algorithm,run,r_t,lambda_min_coop,V,logdet,phiPphi_max\n";
    for (const auto& ro : outputs) {
      for (const auto& r : ro.network) {
        out << r.k << ',' << algorithm_name(r.alg) << ',' << r.run << ','
            << detail::fmt_double(r.r_t) << ','
            << detail::fmt_double(r.lambda_min_coop) << ','
            << detail::fmt_double(r.lyapunov) << ','
            << detail::fmt_double(r.logdet) << ','
            << detail::fmt_double(r.phi_p_phi_max) << '\n';
      }
    }
  }

  RunSummary summary;
  for (Algorithm a : cfg.algorithms) {
    std::map<long, std::vector<double>> mean_err;
    double mean_reg = 0.0;
    for (const auto& ro : outputs) {
      for (const auto& r : ro.metrics) {
        if (r.alg != a) continue;
        auto& v = mean_err[r.k];
        if (static_cast<int>(v.size()) <= r.i) v.resize(r.i + 1, 0.0);
        v[r.i] += r.sq_error / cfg.runs;
      }
      mean_reg += ro.results.at(a).accumulated_regret / cfg.runs;
    }
    summary.mean_sq_error[a] = std::move(mean_err);
    summary.mean_accumulated_regret[a] = mean_reg;
  }
  summary.excitation_ratio_samples = outputs[0].excitation_samples;
  for (const auto& ro : outputs) summary.mean_r_final += ro.r_final / cfg.runs;

  // summary.jsonl: one line per run plus an aggregate line
  {
    std::ofstream out(fs::path(cfg.output_dir) / "summary.jsonl");
    if (!out) throw IoFailure("cannot write summary.jsonl");
    for (int run = 0; run < cfg.runs; ++run) {
      nlohmann::json line;
      line["run"] = run;
      line["r_final"] = outputs[run].r_final;
      for (const auto& [a, res] : outputs[run].results) {
        line["final_sq_error"][algorithm_name(a)] = res.final_sq_error;
        line["accumulated_regret"][algorithm_name(a)] = res.accumulated_regret;
      }
      out << line.dump() << '\n';
    }
    nlohmann::json agg;
    agg["aggregate"] = true;
    agg["runs"] = cfg.runs;
    agg["mean_r_final"] = summary.mean_r_final;
    for (const auto& [a, reg] : summary.mean_accumulated_regret) {
      agg["mean_accumulated_regret"][algorithm_name(a)] = reg;
    }
    out << agg.dump() << '\n';
  }

  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  // timestamps live only in the sidecar so the metric files stay reproducible
  {
    std::ofstream out(fs::path(cfg.output_dir) / "meta.json");
    nlohmann::json meta;
    meta["wall_seconds"] = summary.wall_seconds;
    meta["finished_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::system_clock::now().time_since_epoch()).count();
    out << meta.dump(2) << '\n';
  }
  return summary;
}

/// Renders mean-error, excitation-ratio and regret charts from the CSV files
/// in summary_dir into summary_dir/figures/.
inline void emit_plots(const std::string& summary_dir) {
  namespace fs = std::filesystem;
  const fs::path metrics_path = fs::path(summary_dir) / "metrics.csv";
  const fs::path network_path = fs::path(summary_dir) / "network.csv";
  if (!fs::exists(metrics_path)) {
    throw MissingMetrics("metrics.csv not found in " + summary_dir);
  }

  struct Key {
    long k;
    int i;
    std::string alg;
    bool operator<(const Key& o) const {
      return std::tie(alg, i, k) < std::tie(o.alg, o.i, o.k);
    }
  };
  std::map<Key, std::pair<double, long>> err_acc;  // sum, count
  {
    std::ifstream in(metrics_path);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      std::stringstream ss(line);
      std::string k, i, alg, run, err, reg;
      std::getline(ss, k, ',');
      std::getline(ss, i, ',');
      std::getline(ss, alg, ',');
      std::getline(ss, run, ',');
      std::getline(ss, err, ',');
      std::getline(ss, reg, ',');
      Key key{std::stol(k), std::stoi(i), alg};
      auto& acc = err_acc[key];
      acc.first += std::stod(err);
      acc.second += 1;
    }
  }
  if (err_acc.empty()) throw MissingMetrics("metrics.csv has no rows");

  std::map<std::string, std::map<int, LineSeries>> by_alg;
  for (const auto& [key, acc] : err_acc) {
    auto& s = by_alg[key.alg][key.i];
    s.label = "node " + std::to_string(key.i + 1);
    s.points.push_back({static_cast<double>(key.k), acc.first / acc.second});
  }

  const fs::path fig_dir = fs::path(summary_dir) / "figures";
  fs::create_directories(fig_dir);

  {
    std::vector<LinePanel> panels;
    // classical on top, distributed below, mirroring the usual comparison
    const std::vector<std::string> order = {"classical_per_node", "distributed",
                                            "centralized"};
    for (const auto& alg : order) {
      auto it = by_alg.find(alg);
      if (it == by_alg.end()) continue;
      LinePanel panel;
      panel.title = "mean squared estimation error, " + alg;
      for (auto& [i, s] : it->second) panel.series.push_back(s);
      panels.push_back(std::move(panel));
    }
    if (panels.empty()) throw MissingMetrics("no algorithm data in metrics.csv");
    write_svg_chart((fig_dir / "errors.svg").string(), panels, "k");
  }

  if (fs::exists(network_path)) {
    std::ifstream in(network_path);
    std::string line;
    std::getline(in, line);
    LineSeries ratio, regret_ratio;
    ratio.label = "log(r_t) / lambda_min";
    regret_ratio.label = "V_t / log(r_t)";
    while (std::getline(in, line)) {
      std::stringstream ss(line);
      std::string k, alg, run, r, lam, v, ld, q;
      std::getline(ss, k, ',');
      std::getline(ss, alg, ',');
      std::getline(ss, run, ',');
      std::getline(ss, r, ',');
      std::getline(ss, lam, ',');
      std::getline(ss, v, ',');
      std::getline(ss, ld, ',');
      std::getline(ss, q, ',');
      if (run != "0" || alg != algorithm_name(Algorithm::distributed)) continue;
      const double rv = std::stod(r), lamv = std::stod(lam), vv = std::stod(v);
      if (lamv > 0.0 && rv > 1.0) {
        ratio.points.push_back({std::stod(k), std::log(rv) / lamv});
      }
      if (rv > 1.0) {
        regret_ratio.points.push_back({std::stod(k), vv / std::log(rv)});
      }
    }
    if (!ratio.points.empty()) {
      LinePanel panel;
      panel.title = "cooperative excitation ratio";
      panel.series.push_back(ratio);
      write_svg_chart((fig_dir / "excitation.svg").string(), {panel}, "t");
    }
    if (!regret_ratio.points.empty()) {
      LinePanel panel;
      panel.title = "Lyapunov value / log(r_t)";
      panel.series.push_back(regret_ratio);
      write_svg_chart((fig_dir / "regret.svg").string(), {panel}, "t");
    }
  }
}

}  // namespace dlse
