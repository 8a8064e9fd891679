// Copyright (c) the infodesign contributors.
// SPDX-License-Identifier: Apache-2.0

#include "infodesign/experiment.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace infodesign {

using nlohmann::json;

namespace {

const char* const kKnownFields[] = {
    "n",          "h_diag",     "h_offdiag",  "H",         "sigma_diag",
    "sigma_offdiag", "Sigma",   "mu",         "objective", "custom_f",
    "custom_eta", "eps_diag",   "eps_offdiag", "eps",      "rho_grid",
    "eps_grid",   "eps_axis",   "feas_tol",   "rel_gap",   "max_iter",
    "seed",       "mc_count",
};

std::vector<double> as_vector(const json& j, const std::string& field) {
  if (!j.is_array())
    raise(Errc::ConfigError, "field '" + field + "' must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number())
      raise(Errc::ConfigError, "field '" + field + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Matrix matrix_from(const std::vector<double>& values, int rows, int cols,
                   const std::string& field) {
  if (static_cast<int>(values.size()) != rows * cols)
    raise(Errc::ConfigError,
          "field '" + field + "' must have " + std::to_string(rows * cols) +
              " entries");
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = values[i * cols + j];
  return m;
}

Matrix pattern_matrix(int n, double diag, double offdiag) {
  Matrix m = Matrix::Constant(n, n, offdiag);
  m.diagonal().setConstant(diag);
  return m;
}

void validate_grid(const std::vector<double>& grid, const std::string& name) {
  if (grid.empty())
    raise(Errc::ConfigError, "grid '" + name + "' must be nonempty");
  for (size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] < grid[i - 1])
      raise(Errc::ConfigError, "grid '" + name + "' must be sorted ascending");
  }
}

std::string fmt17(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    raise(Errc::ConfigError, std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) raise(Errc::ConfigError, "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* f : kKnownFields) {
      if (key == f) {
        known = true;
        break;
      }
    }
    if (!known) raise(Errc::ConfigError, "unknown config field '" + key + "'");
  }

  ExperimentConfig c;
  if (j.contains("n")) c.n = j["n"].get<int>();
  if (c.n < 1) raise(Errc::ConfigError, "n must be positive");
  if (j.contains("h_diag")) c.h_diag = j["h_diag"].get<double>();
  if (j.contains("h_offdiag")) c.h_offdiag = j["h_offdiag"].get<double>();
  if (j.contains("H")) c.H = as_vector(j["H"], "H");
  if (j.contains("sigma_diag")) c.sigma_diag = j["sigma_diag"].get<double>();
  if (j.contains("sigma_offdiag"))
    c.sigma_offdiag = j["sigma_offdiag"].get<double>();
  if (j.contains("Sigma")) c.Sigma = as_vector(j["Sigma"], "Sigma");
  if (j.contains("mu")) c.mu = as_vector(j["mu"], "mu");
  if (j.contains("objective")) {
    c.objective = j["objective"].get<std::string>();
    if (c.objective != "agreement" && c.objective != "welfare" &&
        c.objective != "custom")
      raise(Errc::ConfigError,
            "objective must be agreement, welfare or custom");
  }
  if (j.contains("custom_f")) c.custom_f = as_vector(j["custom_f"], "custom_f");
  if (j.contains("custom_eta"))
    c.custom_eta = as_vector(j["custom_eta"], "custom_eta");
  if (j.contains("eps_diag")) c.eps_diag = j["eps_diag"].get<double>();
  if (j.contains("eps_offdiag"))
    c.eps_offdiag = j["eps_offdiag"].get<double>();
  if (j.contains("eps")) c.eps = as_vector(j["eps"], "eps");
  if (j.contains("rho_grid")) c.rho_grid = as_vector(j["rho_grid"], "rho_grid");
  if (j.contains("eps_grid")) c.eps_grid = as_vector(j["eps_grid"], "eps_grid");
  if (j.contains("eps_axis")) {
    const std::string axis = j["eps_axis"].get<std::string>();
    if (axis == "diag") c.eps_axis = EpsAxis::Diag;
    else if (axis == "offdiag") c.eps_axis = EpsAxis::OffDiag;
    else raise(Errc::ConfigError, "eps_axis must be diag or offdiag");
  }
  if (j.contains("feas_tol")) c.feas_tol = j["feas_tol"].get<double>();
  if (j.contains("rel_gap")) c.rel_gap = j["rel_gap"].get<double>();
  if (j.contains("max_iter")) c.max_iter = j["max_iter"].get<int>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("mc_count")) c.mc_count = j["mc_count"].get<int>();

  validate_grid(c.rho_grid, "rho_grid");
  if (c.rho_grid.front() < 0.0)
    raise(Errc::ConfigError, "rho_grid values must be nonnegative");
  if (!c.eps_grid.empty()) {
    validate_grid(c.eps_grid, "eps_grid");
    if (c.eps_grid.front() < 0.0)
      raise(Errc::ConfigError, "eps_grid values must be nonnegative");
  }
  if (c.feas_tol <= 0.0 || c.rel_gap <= 0.0)
    raise(Errc::ConfigError, "solver tolerances must be positive");
  if (c.max_iter < 1) raise(Errc::ConfigError, "max_iter must be >= 1");
  if (c.mc_count < 1) raise(Errc::ConfigError, "mc_count must be >= 1");
  if (c.mu.empty()) c.mu.assign(c.n, 0.0);
  if (static_cast<int>(c.mu.size()) != c.n)
    raise(Errc::ConfigError, "mu must have n entries");
  // Instantiate once so malformed matrices fail at parse time with the field
  // diagnostics the CLI reports.
  game_at(c, c.eps_axis == EpsAxis::Diag ? c.eps_diag : c.eps_offdiag);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::IoError, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  json j;
  j["n"] = c.n;
  j["h_diag"] = c.h_diag;
  j["h_offdiag"] = c.h_offdiag;
  if (c.H) j["H"] = *c.H;
  j["sigma_diag"] = c.sigma_diag;
  j["sigma_offdiag"] = c.sigma_offdiag;
  if (c.Sigma) j["Sigma"] = *c.Sigma;
  // Canonical form: mu always explicit, eps_grid always the effective grid.
  j["mu"] = c.mu.empty() ? std::vector<double>(c.n, 0.0) : c.mu;
  j["objective"] = c.objective;
  if (c.custom_f) j["custom_f"] = *c.custom_f;
  if (c.custom_eta) j["custom_eta"] = *c.custom_eta;
  j["eps_diag"] = c.eps_diag;
  j["eps_offdiag"] = c.eps_offdiag;
  if (c.eps) j["eps"] = *c.eps;
  j["rho_grid"] = c.rho_grid;
  j["eps_grid"] = effective_eps_grid(c);
  j["eps_axis"] = c.eps_axis == EpsAxis::Diag ? "diag" : "offdiag";
  j["feas_tol"] = c.feas_tol;
  j["rel_gap"] = c.rel_gap;
  j["max_iter"] = c.max_iter;
  j["seed"] = c.seed;
  j["mc_count"] = c.mc_count;
  return j.dump(2) + "\n";
}

std::vector<double> effective_eps_grid(const ExperimentConfig& config) {
  if (!config.eps_grid.empty()) return config.eps_grid;
  std::vector<double> grid;
  if (config.eps_axis == EpsAxis::Diag) {
    for (int i = 0; i < 10; ++i) grid.push_back(0.03 + 0.01 * i);
  } else {
    for (int i = 0; i < 10; ++i) grid.push_back(0.005 + 0.005 * i);
  }
  return grid;
}

GameSpec game_at(const ExperimentConfig& config, double eps_value) {
  const int n = config.n;
  Matrix H = config.H ? matrix_from(*config.H, n, n, "H")
                      : pattern_matrix(n, config.h_diag, config.h_offdiag);
  Matrix Sigma =
      config.Sigma ? matrix_from(*config.Sigma, n, n, "Sigma")
                   : pattern_matrix(n, config.sigma_diag, config.sigma_offdiag);
  double eps_diag = config.eps_diag;
  double eps_offdiag = config.eps_offdiag;
  if (config.eps_axis == EpsAxis::Diag) eps_diag = eps_value;
  else eps_offdiag = eps_value;
  Matrix eps = config.eps ? matrix_from(*config.eps, n, n, "eps")
                          : pattern_matrix(n, eps_diag, eps_offdiag);
  Vector mu = Vector::Zero(n);
  if (!config.mu.empty()) {
    if (static_cast<int>(config.mu.size()) != n)
      raise(Errc::ConfigError, "mu must have n entries");
    for (int i = 0; i < n; ++i) mu[i] = config.mu[i];
  }
  try {
    return make_game(n, H, eps, mu, Sigma);
  } catch (const Error& e) {
    if (e.code() == Errc::SigmaNotPsd)
      raise(Errc::ConfigError, "Sigma not PSD");
    if (e.code() == Errc::NonSymmetric)
      raise(Errc::ConfigError, std::string("config: ") + e.what());
    if (e.code() == Errc::EpsNegative)
      raise(Errc::ConfigError, "eps must be entrywise nonnegative");
    throw;
  }
}

ObjectiveSpec objective_of(const ExperimentConfig& config,
                           const GameSpec& game) {
  if (config.objective == "agreement") return agreement_objective(config.n);
  if (config.objective == "welfare") return welfare_objective(game);
  if (!config.custom_f)
    raise(Errc::ConfigError, "custom objective requires custom_f");
  const int d = 2 * config.n;
  std::optional<Matrix> eta;
  if (config.custom_eta)
    eta = matrix_from(*config.custom_eta, config.n, config.n, "custom_eta");
  return make_custom_objective(matrix_from(*config.custom_f, d, d, "custom_f"),
                               eta);
}

SolveOptions solve_options_of(const ExperimentConfig& config) {
  SolveOptions opts;
  opts.feas_tol = config.feas_tol;
  opts.rel_gap = config.rel_gap;
  opts.max_iter = config.max_iter;
  return opts;
}

PointResult run_point(const ExperimentConfig& config, double rho,
                      double eps_value, std::uint64_t point_seed,
                      bool measure_time) {
  PointResult pr;
  pr.rho = rho;
  pr.eps_value = eps_value;
  pr.seed = point_seed;
  // Point-level failures (singular H in the distance normalizer, degenerate
  // data) are recorded on the row; they never abort a sweep.
  try {
    const GameSpec game = game_at(config, eps_value);
    const ObjectiveSpec objective = objective_of(config, game);
    const RobustSdpModel model =
        assemble_robust(game, objective, PerturbationSet{rho, game.n});
    const auto t0 = std::chrono::steady_clock::now();
    pr.solution = solve_robust(model, solve_options_of(config));
    if (measure_time) {
      const auto t1 = std::chrono::steady_clock::now();
      pr.solve_ms =
          std::chrono::duration<double, std::milli>(t1 - t0).count();
    }
    pr.status = pr.solution.status;
    if (pr.status == SolveStatus::Optimal) {
      pr.dist = distances(pr.solution.info(), game);
      pr.bce_residual_max = pr.solution.residuals.bce.cwiseAbs().maxCoeff();
    }
  } catch (const Error&) {
    pr.status = SolveStatus::NumericalFailure;
  }
  return pr;
}

SweepResult run_sweep(const ExperimentConfig& config, int jobs,
                      bool measure_time) {
  const std::vector<double> eps_grid = effective_eps_grid(config);
  const int rows = static_cast<int>(config.rho_grid.size());
  const int cols = static_cast<int>(eps_grid.size());
  const int total = rows * cols;
  SweepResult sweep;
  sweep.points.resize(total);

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= total) return;
      const int r = idx / cols;
      const int c = idx % cols;
      const std::uint64_t point_seed = split_seed(config.seed, idx);
      sweep.points[idx] = run_point(config, config.rho_grid[r], eps_grid[c],
                                    point_seed, measure_time);
    }
  };
  const int nthreads = std::max(1, std::min(jobs, total));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return sweep;
}

const char* const kSweepCsvHeader =
    "rho,eps_value,eps_axis,status,objective_t,frob_objective,dist_no,"
    "dist_no_normalized,dist_full,lambda,bce_residual_max,solve_ms,seed";

std::string sweep_to_csv(const SweepResult& sweep,
                         const ExperimentConfig& config) {
  std::ostringstream os;
  os << kSweepCsvHeader << "\n";
  const char* axis = config.eps_axis == EpsAxis::Diag ? "diag" : "offdiag";
  for (const PointResult& p : sweep.points) {
    os << fmt17(p.rho) << ',' << fmt17(p.eps_value) << ',' << axis << ','
       << to_string(p.status) << ',';
    if (p.status == SolveStatus::Optimal) {
      os << fmt17(p.solution.t) << ','
         << fmt17(p.solution.residuals.objective_recomputed) << ','
         << fmt17(p.dist.d_no) << ',' << fmt17(p.dist.d_no_normalized) << ','
         << fmt17(p.dist.d_full) << ',' << fmt17(p.solution.lambda) << ','
         << fmt17(p.bce_residual_max) << ',';
    } else {
      os << ",,,,,,,";
    }
    os << fmt17(p.solve_ms) << ',' << p.seed << "\n";
  }
  return os.str();
}

}  // namespace infodesign
