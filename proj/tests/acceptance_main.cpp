// Copyright (c) the infodesign contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Desk scale: n <= 4, every solve well under a second.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "infodesign/certificates.hpp"
#include "infodesign/experiment.hpp"

using namespace infodesign;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what,
            const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL",
              criterion, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

GameSpec paper_game(double eps_diag, double eps_offdiag) {
  const int n = 4;
  Matrix h = Matrix::Constant(n, n, 0.25);
  h.diagonal().setConstant(1.0);
  Matrix sigma = Matrix::Constant(n, n, 1.0);
  sigma.diagonal().setConstant(4.0);
  Matrix eps = Matrix::Constant(n, n, eps_offdiag);
  eps.diagonal().setConstant(eps_diag);
  return make_game(n, h, eps, Vector::Zero(n), sigma);
}

Matrix random_matrix(std::mt19937_64& gen, int r, int c, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = u(gen);
  return m;
}

Matrix random_psd(std::mt19937_64& gen, int d, double scale = 1.0) {
  const Matrix g = random_matrix(gen, d, d, scale);
  return g * g.transpose();
}

Matrix random_invertible_h(std::mt19937_64& gen, int d) {
  Matrix h = random_matrix(gen, d, d, 0.4);
  std::uniform_real_distribution<double> u(1.0, 2.0);
  for (int i = 0; i < d; ++i) h(i, i) = u(gen) + 0.4 * d;
  return h;
}

struct RegressionEntry {
  std::string name;
  GameSpec game;
  ObjectiveSpec objective;
  double rho;
  RobustSdpModel model;
  Solution solution;
};

std::vector<RegressionEntry>& regression_suite() {
  static std::vector<RegressionEntry> suite = [] {
    std::vector<RegressionEntry> s;
    auto add = [&s](const std::string& name, const GameSpec& game,
                    const ObjectiveSpec& objective, double rho) {
      RegressionEntry e{name, game, objective, rho, {}, {}};
      e.model = assemble_robust(game, objective, PerturbationSet{rho, game.n});
      e.solution = solve_robust(e.model);
      s.push_back(std::move(e));
    };
    add("agreement rho=0.5 e1=0.03", paper_game(0.03, 0.001),
        agreement_objective(4), 0.5);
    add("agreement rho=1.0 e1=0.10", paper_game(0.1, 0.001),
        agreement_objective(4), 1.0);
    add("agreement rho=2.5 e1=0.12", paper_game(0.12, 0.001),
        agreement_objective(4), 2.5);
    {
      const GameSpec g = paper_game(0.03, 0.001);
      add("welfare rho=0.5 e1=0.03", g, welfare_objective(g), 0.5);
    }
    {
      const GameSpec g = paper_game(0.06, 0.002);
      add("welfare rho=1.0 e1=0.06", g, welfare_objective(g), 1.0);
    }
    {
      std::mt19937_64 gen(1001);
      const int n = 2;
      const Matrix h = random_invertible_h(gen, n);
      Matrix eps = random_matrix(gen, n, n, 0.02).cwiseAbs();
      const GameSpec g = make_game(n, h, eps, Vector::Zero(n),
                                   random_psd(gen, n) +
                                       0.5 * Matrix::Identity(n, n));
      add("random n=2 agreement rho=0.8", g, agreement_objective(n), 0.8);
      add("random n=2 welfare rho=0.8", g, welfare_objective(g), 0.8);
    }
    return s;
  }();
  return suite;
}

ExperimentConfig paper_config() {
  ExperimentConfig c;
  c.n = 4;
  c.seed = 20260801;
  return c;
}

void criterion_1() {
  const GameSpec game = paper_game(0.03, 0.001);
  const Solution sol = solve_robust(
      assemble_robust(game, agreement_objective(4), PerturbationSet{0.0, 4}));
  bool pass = sol.status == SolveStatus::Optimal;
  double dnorm = -1.0;
  if (pass) {
    dnorm = distances(sol.info(), game).d_no_normalized;
    pass = std::abs(sol.t) <= 1e-4 && dnorm <= 1e-3;
  }
  report(1, pass, "nominal agreement optimum is no information disclosure",
         "|t|=" + num(std::abs(sol.t)) + ", d_no_normalized=" + num(dnorm));
}

void criterion_2() {
  const GameSpec game = paper_game(0.1, 0.001);
  const Solution sol = solve_robust(
      assemble_robust(game, agreement_objective(4), PerturbationSet{1.0, 4}));
  bool pass = sol.status == SolveStatus::Optimal;
  double dnorm = -1.0;
  if (pass) {
    dnorm = distances(sol.info(), game).d_no_normalized;
    pass = dnorm >= 0.01;
  }
  report(2, pass, "perturbed agreement discloses partial information",
         "status=" + to_string(sol.status) +
             ", d_no_normalized=" + num(dnorm));
}

void criterion_3() {
  const int grid = 6;
  std::vector<double> rhos, eps1s;
  for (int i = 0; i < grid; ++i) {
    rhos.push_back(2.5 * i / (grid - 1));
    eps1s.push_back(0.03 + (0.12 - 0.03) * i / (grid - 1));
  }
  Matrix dist(grid, grid);
  bool all_optimal = true;
  for (int r = 0; r < grid; ++r) {
    for (int c = 0; c < grid; ++c) {
      const GameSpec game = paper_game(eps1s[c], 0.001);
      const Solution sol = solve_robust(assemble_robust(
          game, agreement_objective(4), PerturbationSet{rhos[r], 4}));
      if (sol.status != SolveStatus::Optimal) {
        all_optimal = false;
        dist(r, c) = -1.0;
        continue;
      }
      dist(r, c) = distances(sol.info(), game).d_no_normalized;
    }
  }
  bool pass = all_optimal;
  std::string detail;
  if (pass) {
    pass = dist(grid - 1, grid - 1) > dist(0, 0);
    const Vector row_avg = dist.rowwise().mean();
    const double band =
        0.1 * (row_avg.maxCoeff() - row_avg.minCoeff() + 1e-12);
    for (int r = 0; r + 1 < grid; ++r) {
      if (row_avg[r + 1] < row_avg[r] - band) pass = false;
    }
    detail = "corner " + num(dist(0, 0)) + " -> " +
             num(dist(grid - 1, grid - 1)) + ", row averages " +
             num(row_avg[0]) + ".." + num(row_avg[grid - 1]);
  } else {
    detail = "non-optimal grid point";
  }
  report(3, pass, "distance trend grows with rho and eps1", detail);
}

// Feasibility in lambda of [[lambda, rho l], [rho l, a - lambda]] >= 0,
// decided by the conic backend as: max s s.t. that matrix - s I is PSD.
bool lmi_feasible_via_solver(double a, double l, double rho,
                             const DenseInteriorPointBackend& backend) {
  ConicProblem p;
  p.block_dims = {2};
  p.num_free = 2;  // lambda, s
  p.free_names = {"lambda", "s"};
  const int nv = p.total_vars();
  p.objective = Vector::Zero(nv);
  p.objective[nv - 1] = 1.0;
  p.eq_lhs = Matrix::Zero(3, nv);
  p.eq_rhs = Vector::Zero(3);
  // svec(S) = (S00, sqrt2 S01, S11)
  p.eq_lhs(0, 0) = 1.0;   // S00
  p.eq_lhs(0, 3) = -1.0;  // = lambda - s
  p.eq_lhs(0, 4) = 1.0;
  p.eq_rhs[0] = 0.0;
  p.eq_lhs(1, 1) = 1.0;  // sqrt2 S01 = sqrt2 rho l
  p.eq_rhs[1] = std::sqrt(2.0) * rho * l;
  p.eq_lhs(2, 2) = 1.0;  // S11 = a - lambda - s
  p.eq_lhs(2, 3) = 1.0;
  p.eq_lhs(2, 4) = 1.0;
  p.eq_rhs[2] = a;
  SolveOptions opts;
  opts.min_disclosure_tiebreak = false;
  const ConicSolution sol = backend.solve(p, opts);
  return sol.status == SolveStatus::Optimal && sol.objective >= -1e-9;
}

void criterion_4() {
  std::mt19937_64 gen(404);
  std::uniform_real_distribution<double> ua(-1.0, 3.0);
  std::uniform_real_distribution<double> ul(-1.0, 1.0);
  std::uniform_real_distribution<double> ur(0.0, 2.0);
  const DenseInteriorPointBackend backend;
  int disagreements = 0, tested = 0;
  const auto start = std::chrono::steady_clock::now();
  for (int trial = 0; trial < 1000; ++trial) {
    const double a = ua(gen);
    const double l = ul(gen);
    const double rho = ur(gen);
    const double margin = a - 2.0 * rho * std::abs(l);
    if (std::abs(margin) <= 1e-9) continue;  // boundary band
    ++tested;
    if (lmi_feasible_via_solver(a, l, rho, backend) != (margin > 0.0))
      ++disagreements;
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  const bool pass = disagreements == 0 && secs < 5.0 && tested > 900;
  report(4, pass, "norm-bounded reformulation matches the scalar oracle",
         std::to_string(tested) + " triples, " +
             std::to_string(disagreements) + " disagreements, " + num(secs) +
             " s");
}

void criterion_5() {
  bool pass = true;
  std::string detail;
  double worst = 0.0;
  for (const RegressionEntry& e : regression_suite()) {
    if (e.solution.status != SolveStatus::Optimal) {
      pass = false;
      detail = e.name + " not optimal";
      break;
    }
    const double min_eig =
        check_robust_feasibility(e.solution, e.model, 500,
                                 split_seed(555, worst >= 0 ? 1 : 2));
    worst = std::min(worst, min_eig);
    if (min_eig < -1e-5) {
      pass = false;
      detail = e.name + " min eig " + num(min_eig);
      break;
    }
  }
  if (detail.empty()) detail = "worst sampled min eigenvalue " + num(worst);
  report(5, pass, "sampled robust feasibility of every regression solution",
         detail);
}

void criterion_6() {
  std::mt19937_64 gen(606);
  bool pass = true;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 1 + static_cast<int>(gen() % 8);
    const Matrix g = symmetrized(random_matrix(gen, d, d, 3.0));
    const Matrix gh = g + symmetrized(random_matrix(gen, d, d, 0.7));
    auto [gap, frob] = eigenvalue_gap_bound(g, gh);
    worst = std::max(worst, gap - frob);
    if (gap > frob + 1e-12) pass = false;
  }
  report(6, pass, "eigenvalue perturbation bound on 1000 random pairs",
         "worst gap-frob " + num(worst));
}

void criterion_7() {
  std::mt19937_64 gen(707);
  bool pass = true;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(gen() % 4);
    const GameSpec game = make_game(n, random_invertible_h(gen, n),
                                    Vector::Zero(n), random_psd(gen, n));
    ObjectiveSpec obj;
    switch (trial % 3) {
      case 0: obj = welfare_objective(game); break;
      case 1: obj = agreement_objective(n); break;
      default: {
        // Design-relevant objectives carry no state-state term; the identity
        // measures the designable part of the objective.
        Matrix f = symmetrized(random_matrix(gen, 2 * n, 2 * n, 1.0));
        f.bottomRightCorner(n, n).setZero();
        obj = make_custom_objective(f);
        break;
      }
    }
    const double lhs = objective_value(obj, full_info_structure(game));
    const double rhs = frob_dot(f_h_matrix(obj, game.H), game.Sigma);
    const double err = std::abs(lhs - rhs) / (1.0 + std::abs(rhs));
    worst = std::max(worst, err);
    if (err > 1e-8) pass = false;
  }
  report(7, pass, "full-information identity F.X_full = F_H.Sigma",
         "worst relative error " + num(worst));
}

void criterion_8() {
  std::mt19937_64 gen(808);
  std::uniform_real_distribution<double> urho(0.1, 2.0);
  bool pass = true;
  std::string detail;

  // Part a: 50 instances with a firing general no-info certificate.
  int built = 0;
  double worst_t = 0.0, worst_x = 0.0;
  while (built < 50 && pass) {
    const int n = 1 + static_cast<int>(gen() % 4);
    const Matrix h = symmetrized(random_invertible_h(gen, n));
    Matrix eta = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) eta(i, i) = -1.0;
    Matrix eps = random_matrix(gen, n, n, 1e-7).cwiseAbs();
    const double rho = urho(gen);
    const double delta = 1e-6;
    Matrix f = Matrix::Zero(2 * n, 2 * n);
    f.topLeftCorner(n, n) = eta.cwiseProduct(h);
    f.bottomRightCorner(n, n) = -delta * Matrix::Identity(n, n);
    const Certificate cert = certify_general_no_info(f, eta, eps, rho);
    if (!cert.fired) continue;  // construction missed; should be rare
    ++built;
    const GameSpec game =
        make_game(n, h, eps, Vector::Zero(n),
                  random_psd(gen, n) + 0.3 * Matrix::Identity(n, n));
    const Solution sol = solve_robust(assemble_robust(
        game, make_custom_objective(f, eta), PerturbationSet{rho, n}));
    if (sol.status != SolveStatus::Optimal) {
      pass = false;
      detail = "certified instance not optimal";
      break;
    }
    const double x11 = sol.X.topLeftCorner(n, n).norm();
    worst_t = std::max(worst_t, std::abs(sol.t));
    worst_x = std::max(worst_x, x11);
    if (std::abs(sol.t) > 1e-4 || x11 > 1e-3) {
      pass = false;
      detail = "certified optimum not no-info: |t|=" + num(std::abs(sol.t)) +
               " x11=" + num(x11);
      break;
    }
  }

  // Part b: 20 instances where the public full-info certificate fires at
  // rho = 0; nominal public objective equals the closed form.
  double worst_id = 0.0;
  for (int trial = 0; trial < 20 && pass; ++trial) {
    const int n = 1 + static_cast<int>(gen() % 3);
    const Matrix h = symmetrized(random_invertible_h(gen, n));
    const double nu = 0.5 + 0.5 * (trial % 2);
    const Matrix k = random_psd(gen, n) + 0.2 * Matrix::Identity(n, n);
    Matrix f = Matrix::Zero(2 * n, 2 * n);
    f.topLeftCorner(n, n) = symmetrized(k - 2.0 * nu * h);
    f.topRightCorner(n, n) = nu * Matrix::Identity(n, n);
    f.bottomLeftCorner(n, n) = nu * Matrix::Identity(n, n);
    auto [no_info, full_info] =
        certify_public(f, h, Matrix::Ones(n, n), Matrix::Ones(n, n), 0.0);
    if (!full_info.fired) {
      pass = false;
      detail = "public full-info certificate did not fire at rho 0";
      break;
    }
    const GameSpec game = make_game(n, h, Vector::Zero(n), random_psd(gen, n));
    const ObjectiveSpec obj = make_custom_objective(f);
    const double lhs = objective_value(obj, full_info_structure(game));
    const double rhs = frob_dot(f_h_matrix(obj, game.H), game.Sigma);
    const double err = std::abs(lhs - rhs) / (1.0 + std::abs(rhs));
    worst_id = std::max(worst_id, err);
    if (err > 1e-5) {
      pass = false;
      detail = "closed-form mismatch " + num(err);
      break;
    }
  }
  if (detail.empty())
    detail = "worst |t| " + num(worst_t) + ", worst x11 " + num(worst_x) +
             ", worst identity error " + num(worst_id);
  report(8, pass, "certificate soundness against the solver", detail);
}

void criterion_9() {
  std::mt19937_64 gen(909);
  bool pass = true;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(gen() % 3);
    const Matrix h = random_invertible_h(gen, n);
    Matrix eps = random_matrix(gen, n, n, 0.05).cwiseAbs();
    const GameSpec game =
        make_game(n, h, eps, Vector::Zero(n),
                  random_psd(gen, n) + 0.5 * Matrix::Identity(n, n));
    const ObjectiveSpec obj =
        trial % 2 == 0 ? agreement_objective(n) : welfare_objective(game);
    const Solution nominal = solve_nominal(assemble_nominal(game, obj));
    const Solution robust =
        solve_robust(assemble_robust(game, obj, PerturbationSet{0.0, n}));
    if (nominal.status != SolveStatus::Optimal ||
        robust.status != SolveStatus::Optimal) {
      pass = false;
      break;
    }
    const double rel =
        std::abs(nominal.t - robust.t) / (1.0 + std::abs(nominal.t));
    worst = std::max(worst, rel);
    if (rel > 1e-5) pass = false;
  }
  report(9, pass, "rho -> 0 robust/nominal consistency",
         "worst relative difference " + num(worst));
}

void criterion_10() {
  bool pass = true;
  std::string detail;
  double worst_sigmas = 0.0;
  for (const RegressionEntry& e : regression_suite()) {
    if (e.solution.status != SolveStatus::Optimal) continue;
    const std::uint64_t seed = split_seed(1010, 7);
    const VerificationReport a = verify_solution(
        e.solution, e.game, e.objective, e.model, 200000, seed);
    const VerificationReport b = verify_solution(
        e.solution, e.game, e.objective, e.model, 200000, seed);
    if (report_to_text(a) != report_to_text(b)) {
      pass = false;
      detail = e.name + ": reports not byte-identical";
      break;
    }
    const double sigmas =
        std::abs(a.mc.estimate - a.analytic_objective) /
        std::max(a.mc.stderr_, 1e-300);
    worst_sigmas = std::max(worst_sigmas, sigmas);
    if (!a.mc_within_band) {
      pass = false;
      detail = e.name + ": " + num(sigmas) + " sigma deviation";
      break;
    }
  }
  if (detail.empty()) detail = "worst deviation " + num(worst_sigmas) + " sigma";
  report(10, pass, "Monte-Carlo estimates agree within 4 sigma", detail);
}

void criterion_11() {
  ExperimentConfig config = paper_config();
  config.rho_grid = {0.0, 1.0, 2.0};
  config.eps_grid = {0.03, 0.08, 0.12};
  const std::string csv_a = sweep_to_csv(run_sweep(config, 2), config);
  const std::string csv_b = sweep_to_csv(run_sweep(config, 1), config);
  bool pass = csv_a == csv_b;
  std::string detail = pass ? "3x3 sweep byte-stable" : "sweep bytes differ";
  const std::string header = csv_a.substr(0, csv_a.find('\n'));
  if (header != kSweepCsvHeader) {
    pass = false;
    detail = "header drifted";
  }
  const std::string serialized = serialize_config(config);
  const ExperimentConfig reparsed = parse_config(serialized);
  if (serialize_config(reparsed) != serialized) {
    pass = false;
    detail = "config round trip not stable";
  }
  report(11, pass, "sweep determinism and config round trip", detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  if (g_failures == 0) {
    std::printf("acceptance: all 11 criteria passed\n");
  } else {
    std::printf("acceptance: %d criteria FAILED\n", g_failures);
  }
  return g_failures;
}
