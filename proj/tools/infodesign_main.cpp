// Copyright (c) the infodesign contributors.
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "infodesign/certificates.hpp"
#include "infodesign/experiment.hpp"

namespace {

using namespace infodesign;

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::IoError, "cannot open output file '" + path + "'");
  out << text;
}

/// Single-point semantics: rho from the first grid entry; eps from the first
/// eps_grid entry when a grid was given explicitly, otherwise the scalar
/// shift of the configured axis.
std::pair<double, double> single_point(const ExperimentConfig& config) {
  const double rho = config.rho_grid.front();
  double eps_value;
  if (!config.eps_grid.empty()) {
    eps_value = config.eps_grid.front();
  } else {
    eps_value = config.eps_axis == EpsAxis::Diag ? config.eps_diag
                                                 : config.eps_offdiag;
  }
  return {rho, eps_value};
}

int cmd_solve(const ExperimentConfig& config, const std::string& out_path,
              const std::string& dump_path) {
  auto [rho, eps_value] = single_point(config);
  const PointResult pr =
      run_point(config, rho, eps_value, split_seed(config.seed, 0));
  std::ostringstream os;
  os << "status " << to_string(pr.status) << "\n";
  if (pr.status == SolveStatus::Optimal) {
    os << "t " << fmt(pr.solution.t) << "\n";
    os << "objective " << fmt(pr.solution.residuals.objective_recomputed)
       << "\n";
    os << "lambda " << fmt(pr.solution.lambda) << "\n";
    if (pr.solution.beta) os << "beta " << fmt(*pr.solution.beta) << "\n";
    os << "dist_no " << fmt(pr.dist.d_no) << "\n";
    os << "dist_no_normalized " << fmt(pr.dist.d_no_normalized) << "\n";
    os << "dist_full " << fmt(pr.dist.d_full) << "\n";
    os << "bce_residual_max " << fmt(pr.bce_residual_max) << "\n";
  }
  write_output(out_path, os.str());
  if (!dump_path.empty() && pr.status == SolveStatus::Optimal) {
    std::ofstream dump(dump_path, std::ios::binary);
    if (!dump) raise(Errc::IoError, "cannot open dump file '" + dump_path + "'");
    dump << solution_to_text(pr.solution);
  }
  switch (pr.status) {
    case SolveStatus::Optimal: return 0;
    case SolveStatus::Infeasible:
    case SolveStatus::Unbounded: return 2;
    case SolveStatus::NumericalFailure: return 3;
  }
  return 3;
}

void certificate_row(std::ostringstream& os, const Certificate& c) {
  os << to_string(c.theorem) << ' ' << (c.fired ? "fired" : "not-fired")
     << " margin " << fmt(c.margin) << " threshold " << fmt(c.threshold);
  if (c.nu) os << " nu " << fmt(*c.nu);
  if (!c.note.empty()) os << " note \"" << c.note << '"';
  os << "\n";
}

int cmd_certify(const ExperimentConfig& config, const std::string& out_path) {
  auto [rho, eps_value] = single_point(config);
  const GameSpec game = game_at(config, eps_value);
  const ObjectiveSpec objective = objective_of(config, game);
  std::ostringstream os;

  // eta: 0 for perturbation-independent objectives (F_eps = F), -1 pattern
  // for welfare, user-supplied for custom.
  std::optional<Matrix> eta;
  if (objective.kind == ObjectiveKind::Agreement) {
    eta = Matrix::Zero(game.n, game.n);
  } else if (objective.eta) {
    eta = *objective.eta;
  }
  if (eta) {
    certificate_row(
        os, certify_general_no_info(objective.F, *eta, game.eps, rho));
  } else {
    os << "GeneralNoInfo inapplicable note \"custom objective without eta\"\n";
  }
  if (eta) {
    try {
      auto [pub_no, pub_full] =
          certify_public(objective.F, game.H, *eta, game.eps, rho);
      certificate_row(os, pub_no);
      certificate_row(os, pub_full);
    } catch (const Error& e) {
      os << "PublicNoInfo inapplicable note \"" << e.what() << "\"\n";
      os << "PublicFullInfo inapplicable note \"" << e.what() << "\"\n";
    }
  } else {
    os << "PublicNoInfo inapplicable note \"custom objective without eta\"\n";
    os << "PublicFullInfo inapplicable note \"custom objective without eta\"\n";
  }
  try {
    auto [ui_no, ui_full] = certify_ui_public(objective, game.H, game.Sigma);
    certificate_row(os, ui_no);
    certificate_row(os, ui_full);
  } catch (const Error& e) {
    os << "UiPublicNoInfo inapplicable note \"" << e.what() << "\"\n";
    os << "UiPublicFullInfo inapplicable note \"" << e.what() << "\"\n";
  }
  write_output(out_path, os.str());
  return 0;
}

int cmd_verify(const ExperimentConfig& config, const std::string& out_path,
               const std::string& dump_path) {
  if (dump_path.empty())
    raise(Errc::IoError, "verify requires --dump with a solution file");
  std::ifstream in(dump_path, std::ios::binary);
  if (!in) raise(Errc::IoError, "cannot open dump file '" + dump_path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const Solution solution = solution_from_text(ss.str());
  if (solution.X.rows() != 2 * config.n)
    raise(Errc::IoError, "solution dump does not match config dimensions");

  auto [rho, eps_value] = single_point(config);
  const GameSpec game = game_at(config, eps_value);
  const ObjectiveSpec objective = objective_of(config, game);
  const RobustSdpModel model =
      assemble_robust(game, objective, PerturbationSet{rho, game.n});
  const VerificationReport report = verify_solution(
      solution, game, objective, model, config.mc_count, config.seed);
  write_output(out_path, report_to_text(report));
  return (report.mc_within_band && report.robust_band) ? 0 : 4;
}

int cmd_sweep(const ExperimentConfig& config, const std::string& out_path,
              int jobs, bool measured_timing) {
  const SweepResult sweep = run_sweep(config, jobs, measured_timing);
  write_output(out_path, sweep_to_csv(sweep, config));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust information design for LQG games"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string dump_path;
  std::optional<std::uint64_t> seed_override;
  int jobs = 1;
  std::string timing = "none";

  auto add_common = [&](CLI::App* cmd, bool needs_config = true) {
    cmd->add_option("--config", config_path, "configuration file (JSON)")
        ->required(needs_config);
    cmd->add_option("--out", out_path, "output path (default stdout)");
    cmd->add_option("--seed", seed_override, "seed override");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve one grid point");
  add_common(solve);
  solve->add_option("--dump", dump_path, "write the solution dump here");

  CLI::App* sweep = app.add_subcommand("sweep", "run the (rho, eps) grid");
  add_common(sweep);
  sweep->add_option("--jobs", jobs, "concurrent grid workers")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--timing", timing,
                    "solve_ms column: none (deterministic) or measured")
      ->check(CLI::IsMember({"none", "measured"}));

  CLI::App* certify = app.add_subcommand("certify", "print certificate table");
  add_common(certify);

  CLI::App* verify = app.add_subcommand("verify", "verify a solution dump");
  add_common(verify);
  verify->add_option("--dump", dump_path, "solution dump to verify")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    infodesign::ExperimentConfig config = infodesign::load_config(config_path);
    if (seed_override) config.seed = *seed_override;
    if (solve->parsed()) return cmd_solve(config, out_path, dump_path);
    if (sweep->parsed())
      return cmd_sweep(config, out_path, jobs, timing == "measured");
    if (certify->parsed()) return cmd_certify(config, out_path);
    if (verify->parsed()) return cmd_verify(config, out_path, dump_path);
  } catch (const infodesign::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
