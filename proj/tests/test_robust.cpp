// Copyright (c) the infodesign contributors.
// SPDX-License-Identifier: Apache-2.0

#include "infodesign/robust.hpp"

#include <doctest.h>

#include "infodesign/lqg_core.hpp"
#include "infodesign/solver.hpp"
#include "infodesign/verification.hpp"
#include "test_support.hpp"

using namespace infodesign;
using test::random_invertible_h;
using test::random_psd;

TEST_CASE("epsilon_star aggregation") {
  SUBCASE("n=2 all ones") {
    const Vector star = epsilon_star(Matrix::Ones(2, 2));
    CHECK(star[0] == doctest::Approx(3.0));
    CHECK(star[1] == doctest::Approx(3.0));
  }
  SUBCASE("homogeneous n=4 instance: eps1 + (2n-2) eps2") {
    Matrix eps = Matrix::Constant(4, 4, 0.001);
    eps.diagonal().setConstant(0.03);
    const Vector star = epsilon_star(eps);
    for (int k = 0; k < 4; ++k)
      CHECK(star[k] == doctest::Approx(0.036).epsilon(1e-14));
  }
  SUBCASE("zero shifts") {
    CHECK(epsilon_star(Matrix::Zero(3, 3)).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("build_l signed diagonal") {
  SUBCASE("n=1") {
    const Matrix l = build_l(Matrix::Constant(1, 1, 2.0));
    CHECK(l(0, 0) == 2.0);
    CHECK(l(1, 1) == -2.0);
    CHECK(l.cwiseAbs().sum() == 4.0);
  }
  SUBCASE("n=2 all ones") {
    const Matrix l = build_l(Matrix::Ones(2, 2));
    Vector expected(4);
    expected << 3, 3, -3, -3;
    CHECK((l.diagonal() - expected).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("zero shifts give the zero matrix") {
    CHECK(build_l(Matrix::Zero(2, 2)).cwiseAbs().maxCoeff() == 0.0);
  }
}

namespace {

/// Scalar-instance feasibility of the reformulated LMI, decided by evaluating
/// the 2x2 block at the analytically optimal multipliers.
bool lmi_feasible_scalar(double a, double l, double rho) {
  AffineLmi base;
  base.dim = 1;
  base.constant = Matrix::Constant(1, 1, a);
  const AffineLmi out = reformulate_norm_bounded(
      base, Matrix::Constant(1, 1, l), Matrix::Identity(1, 1), rho, 0);
  for (double lambda : {0.5 * a, rho * std::abs(l)}) {
    const Matrix m = out.evaluate(Vector::Constant(1, lambda));
    if (min_eigenvalue(m) >= -1e-12 * std::max(1.0, std::abs(a))) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("scalar reformulation matches the closed form a >= 2 rho |l|") {
  std::mt19937_64 gen(43);
  std::uniform_real_distribution<double> ua(-1.0, 3.0);
  std::uniform_real_distribution<double> ul(-1.0, 1.0);
  std::uniform_real_distribution<double> ur(0.0, 2.0);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double a = ua(gen);
    const double l = ul(gen);
    const double rho = ur(gen);
    const double margin = a - 2.0 * rho * std::abs(l);
    if (std::abs(margin) <= 1e-9) continue;  // boundary band
    CHECK(lmi_feasible_scalar(a, l, rho) == (margin > 0.0));
    ++checked;
  }
  CHECK(checked > 900);
}

TEST_CASE("reformulation at rho == 0 reduces to the base LMI") {
  AffineLmi base;
  base.dim = 2;
  base.constant = (Matrix(2, 2) << 1.0, 0.2, 0.2, 0.5).finished();
  base.coeffs.emplace_back(0, Matrix::Identity(2, 2));
  const AffineLmi out = reformulate_norm_bounded(
      base, Matrix::Identity(2, 2), Matrix::Identity(2, 2), 0.0, 1);
  Vector vars(2);
  vars << 0.3, 0.0;  // lambda = 0
  const Matrix m = out.evaluate(vars);
  CHECK(m.topRightCorner(2, 2).cwiseAbs().maxCoeff() == 0.0);
  CHECK((m.bottomRightCorner(2, 2) - base.evaluate(vars.head(2).eval()))
            .cwiseAbs()
            .maxCoeff() < 1e-15);
  CHECK(min_eigenvalue(m) >= 0.0);
}

TEST_CASE("zero D is rejected") {
  AffineLmi base;
  base.dim = 1;
  base.constant = Matrix::Constant(1, 1, 1.0);
  CHECK_THROWS_AS(reformulate_norm_bounded(base, Matrix::Constant(1, 1, 1.0),
                                           Matrix::Zero(1, 1), 1.0, 0),
                  Error);
}

TEST_CASE("sampled soundness of the norm-bounded reformulation") {
  // Instances constructed so that lambda is feasible by a Schur argument:
  // A = lambda I + rho^2/lambda L^T L + margin I.
  std::mt19937_64 gen(47);
  std::uniform_real_distribution<double> u(0.2, 1.5);
  for (int instance = 0; instance < 10; ++instance) {
    const int p = 4;
    const Matrix l_mat = test::random_matrix(gen, p, p, 1.0);
    const double rho = u(gen);
    const double lambda = u(gen);
    const Matrix a = lambda * Matrix::Identity(p, p) +
                     (rho * rho / lambda) * l_mat.transpose() * l_mat +
                     0.01 * Matrix::Identity(p, p);
    // Verify the constructed pair satisfies the output LMI.
    AffineLmi base;
    base.dim = p;
    base.constant = a;
    const AffineLmi out = reformulate_norm_bounded(
        base, l_mat, Matrix::Identity(p, p), rho, 0);
    CHECK(min_eigenvalue(out.evaluate(Vector::Constant(1, lambda))) >= -1e-9);
    // Lemma soundness: every theta in the ball keeps the matrix PSD.
    const auto thetas =
        sample_spectral_ball(p, rho, 500, 1000 + instance);
    for (const Matrix& theta : thetas) {
      const Matrix perturbed =
          a + l_mat.transpose() * theta + theta.transpose() * l_mat;
      CHECK(min_eigenvalue(perturbed) >= -1e-7 * p);
    }
  }
}

TEST_CASE("assemble_robust structure") {
  const GameSpec game = test::reference_game();
  SUBCASE("degenerate at rho = 0") {
    const RobustSdpModel model = assemble_robust(
        game, agreement_objective(4), PerturbationSet{0.0, 4});
    CHECK(model.degenerate);
    CHECK(model.lmi_blocks.size() == 1);  // objective block only
    CHECK(model.lmi_blocks[0].dim == 1);
  }
  SUBCASE("equilibrium block present at rho > 0") {
    const RobustSdpModel model = assemble_robust(
        game, agreement_objective(4), PerturbationSet{1.0, 4});
    CHECK(!model.degenerate);
    REQUIRE(model.lmi_blocks.size() == 2);
    CHECK(model.lmi_blocks[0].dim == 1);
    CHECK(model.lmi_blocks[1].dim == 8);
    CHECK(model.epsilon_star[0] == doctest::Approx(0.036));
    CHECK(model.L(0, 0) == doctest::Approx(0.036));
    CHECK(model.L(4, 4) == doctest::Approx(-0.036));
  }
  SUBCASE("welfare carries beta and L_w") {
    Matrix eps = Matrix::Ones(2, 2);
    const GameSpec g2 = make_game(2, Matrix::Identity(2, 2), eps,
                                  Vector::Zero(2), Matrix::Identity(2, 2));
    const RobustSdpModel model = assemble_robust(
        g2, welfare_objective(g2), PerturbationSet{0.5, 2});
    CHECK(model.has_beta);
    CHECK(model.L_w == doctest::Approx(4.0));
    REQUIRE(model.lmi_blocks.size() == 2);
    CHECK(model.lmi_blocks[0].dim == 2);  // robustified objective block
  }
}

TEST_CASE("rho -> 0 equivalence of robust and nominal optima") {
  std::mt19937_64 gen(53);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(gen() % 3);
    const Matrix h = random_invertible_h(gen, n);
    const Matrix sigma =
        random_psd(gen, n) + 0.5 * Matrix::Identity(n, n);
    Matrix eps = test::random_matrix(gen, n, n, 0.05).cwiseAbs();
    const GameSpec game = make_game(n, h, eps, Vector::Zero(n), sigma);
    const ObjectiveSpec objective =
        trial % 2 == 0 ? agreement_objective(n) : welfare_objective(game);

    const Solution nominal = solve_nominal(assemble_nominal(game, objective));
    const Solution robust = solve_robust(
        assemble_robust(game, objective, PerturbationSet{0.0, n}));
    REQUIRE(nominal.status == SolveStatus::Optimal);
    REQUIRE(robust.status == SolveStatus::Optimal);
    CHECK(std::abs(nominal.t - robust.t) <=
          1e-5 * (1.0 + std::abs(nominal.t)));
    CHECK((nominal.X - robust.X).norm() <= 1e-5 * (1.0 + nominal.X.norm()));
  }
}

TEST_CASE("robust optimum is non-increasing in rho") {
  const GameSpec game = test::reference_game(0.05, 0.002);
  const ObjectiveSpec objective = welfare_objective(game);
  double previous = std::numeric_limits<double>::infinity();
  for (double rho : {0.0, 0.25, 0.5, 1.0, 2.0}) {
    const Solution sol = solve_robust(
        assemble_robust(game, objective, PerturbationSet{rho, 4}));
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.t <= previous + 1e-6 * (1.0 + std::abs(previous)));
    previous = sol.t;
  }
}

TEST_CASE("sampled robust feasibility of solved models") {
  const GameSpec game = test::reference_game(0.1, 0.001);
  const RobustSdpModel model = assemble_robust(
      game, agreement_objective(4), PerturbationSet{1.0, 4});
  const Solution sol = solve_robust(model);
  REQUIRE(sol.status == SolveStatus::Optimal);
  const double min_eig = check_robust_feasibility(sol, model, 500, 777);
  CHECK(min_eig >= -1e-6 * (2 * game.n));
}
