// Copyright (c) the infodesign contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef INFODESIGN_EXPERIMENT_HPP_
#define INFODESIGN_EXPERIMENT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "infodesign/verification.hpp"

namespace infodesign {

enum class EpsAxis { Diag, OffDiag };

/// Sweep/solve configuration. Matrix fields default to the reference n = 4
/// instance (H: 1 on the diagonal and 0.25 off it; Sigma: 4 and 1), with the
/// pattern parameters overridable per entry through explicit matrices.
struct ExperimentConfig {
  int n = 4;
  double h_diag = 1.0;
  double h_offdiag = 0.25;
  std::optional<std::vector<double>> H;  // row-major n*n override
  double sigma_diag = 4.0;
  double sigma_offdiag = 1.0;
  std::optional<std::vector<double>> Sigma;  // row-major override
  std::vector<double> mu;                    // empty = zeros
  std::string objective = "agreement";       // agreement | welfare | custom
  std::optional<std::vector<double>> custom_f;    // row-major 2n*2n
  std::optional<std::vector<double>> custom_eta;  // row-major n*n
  double eps_diag = 0.03;
  double eps_offdiag = 0.001;
  std::optional<std::vector<double>> eps;  // row-major override
  std::vector<double> rho_grid = {0.0, 0.25, 0.5, 0.75, 1.0, 1.25,
                                  1.5, 1.75, 2.0, 2.25, 2.5};
  std::vector<double> eps_grid;  // defaults depend on eps_axis
  EpsAxis eps_axis = EpsAxis::Diag;
  double feas_tol = 1e-7;
  double rel_gap = 1e-7;
  int max_iter = 500;
  std::uint64_t seed = 12345;
  int mc_count = 200000;
};

/// Parses the JSON config text; unknown fields are errors naming the field.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);

/// Effective eps grid (explicit grid or the axis-dependent default).
std::vector<double> effective_eps_grid(const ExperimentConfig& config);

/// Game at a given point of the (rho, eps) grid; eps_value replaces the
/// diagonal or off-diagonal shift per eps_axis.
GameSpec game_at(const ExperimentConfig& config, double eps_value);
ObjectiveSpec objective_of(const ExperimentConfig& config,
                           const GameSpec& game);
SolveOptions solve_options_of(const ExperimentConfig& config);

struct PointResult {
  double rho = 0.0;
  double eps_value = 0.0;
  SolveStatus status = SolveStatus::NumericalFailure;
  Solution solution;           // valid when status == Optimal
  Distances dist;              // valid when status == Optimal
  double bce_residual_max = 0.0;
  double solve_ms = 0.0;
  std::uint64_t seed = 0;
};

/// Solves one grid point (robust model at the given rho and eps override).
PointResult run_point(const ExperimentConfig& config, double rho,
                      double eps_value, std::uint64_t point_seed,
                      bool measure_time = false);

struct SweepResult {
  std::vector<PointResult> points;  // row-major over (rho, eps)
};

/// Runs the full grid; points are independent and executed on up to `jobs`
/// threads, emitted in deterministic row-major order regardless of
/// completion order.
SweepResult run_sweep(const ExperimentConfig& config, int jobs = 1,
                      bool measure_time = false);

extern const char* const kSweepCsvHeader;
std::string sweep_to_csv(const SweepResult& sweep, const ExperimentConfig& config);

}  // namespace infodesign

#endif  // INFODESIGN_EXPERIMENT_HPP_
