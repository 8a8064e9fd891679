// Copyright (c) the infodesign contributors.
// SPDX-License-Identifier: Apache-2.0

#include "infodesign/lqg_core.hpp"

#include <cmath>

namespace infodesign {

namespace {

void check_square(const Matrix& m, int n, const char* name) {
  if (m.rows() != n || m.cols() != n)
    raise(Errc::DimensionMismatch, std::string(name) + " must be n x n");
}

}  // namespace

GameSpec make_game(int n, const Matrix& H, const Matrix& eps, const Vector& mu,
                   const Matrix& Sigma) {
  if (n < 1) raise(Errc::DimensionMismatch, "player count must be positive");
  check_square(H, n, "H");
  check_square(eps, n, "eps");
  check_square(Sigma, n, "Sigma");
  if (mu.size() != n) raise(Errc::DimensionMismatch, "mu must have length n");

  const double sigma_scale = std::max(1.0, Sigma.cwiseAbs().maxCoeff());
  if (asymmetry(Sigma) > 1e-12 * sigma_scale)
    raise(Errc::NonSymmetric, "Sigma not symmetric");
  GameSpec game;
  game.n = n;
  game.H = H;
  game.eps = eps;
  game.mu = mu;
  game.Sigma = symmetrized(Sigma);

  const double norm = std::max(1.0, game.Sigma.operatorNorm());
  if (min_eigenvalue(game.Sigma) < -1e-10 * norm)
    raise(Errc::SigmaNotPsd, "Sigma not PSD");
  if ((eps.array() < 0.0).any())
    raise(Errc::EpsNegative, "eps must be entrywise nonnegative");
  return game;
}

GameSpec make_game(int n, const Matrix& H, const Vector& mu,
                   const Matrix& Sigma) {
  return make_game(n, H, Matrix::Zero(n, n), mu, Sigma);
}

ObjectiveSpec make_custom_objective(const Matrix& F, std::optional<Matrix> eta) {
  if (F.rows() != F.cols() || F.rows() % 2 != 0)
    raise(Errc::DimensionMismatch, "F must be 2n x 2n");
  if (asymmetry(F) > 1e-12 * std::max(1.0, F.cwiseAbs().maxCoeff()))
    raise(Errc::NonSymmetric, "F not symmetric");
  const int n = static_cast<int>(F.rows()) / 2;
  if (eta && (eta->rows() != n || eta->cols() != n))
    raise(Errc::DimensionMismatch, "eta must be n x n");
  ObjectiveSpec obj;
  obj.kind = ObjectiveKind::Custom;
  obj.F = symmetrized(F);
  obj.eta = std::move(eta);
  return obj;
}

ObjectiveSpec agreement_objective(int n) {
  if (n < 1) raise(Errc::DimensionMismatch, "player count must be positive");
  ObjectiveSpec obj;
  obj.kind = ObjectiveKind::Agreement;
  obj.F = Matrix::Zero(2 * n, 2 * n);
  // -(I - J/n): row sums are zero, so a constant action profile has zero
  // deviation. For n = 1 this is identically zero.
  obj.F.topLeftCorner(n, n) =
      -(Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / n));
  return obj;
}

ObjectiveSpec welfare_objective(const GameSpec& game) {
  const int n = game.n;
  ObjectiveSpec obj;
  obj.kind = ObjectiveKind::Welfare;
  obj.F = Matrix::Zero(2 * n, 2 * n);
  obj.F.topLeftCorner(n, n) = -symmetrized(game.H);
  obj.F.topRightCorner(n, n) = Matrix::Identity(n, n);
  obj.F.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
  obj.symmetrized_h = asymmetry(game.H) > 0.0;
  obj.eta = Matrix::Constant(n, n, -1.0);
  return obj;
}

InfoStructure no_info_structure(const GameSpec& game) {
  const int n = game.n;
  InfoStructure x;
  x.X = Matrix::Zero(2 * n, 2 * n);
  x.X.bottomRightCorner(n, n) = game.Sigma;
  return x;
}

InfoStructure full_info_structure(const GameSpec& game) {
  const int n = game.n;
  const Matrix Hinv = inverse_checked(game.H);
  const Matrix cross = Hinv * game.Sigma;  // H^{-1} Sigma
  InfoStructure x;
  x.X = Matrix(2 * n, 2 * n);
  x.X.topLeftCorner(n, n) = symmetrized(cross * Hinv.transpose());
  x.X.topRightCorner(n, n) = cross;
  x.X.bottomLeftCorner(n, n) = cross.transpose();
  x.X.bottomRightCorner(n, n) = game.Sigma;
  return x;
}

Matrix f_h_matrix(const ObjectiveSpec& objective, const Matrix& H) {
  const int n = static_cast<int>(H.rows());
  if (objective.players() != n)
    raise(Errc::DimensionMismatch, "objective/H player counts differ");
  const Matrix Hinv = inverse_checked(H);
  const Matrix inner = objective.block11() + objective.block12() * H +
                       H.transpose() * objective.block21();
  return Hinv.transpose() * inner * Hinv;
}

Vector mean_actions(const GameSpec& game) {
  return solve_checked(game.H, game.mu);
}

double objective_value(const ObjectiveSpec& objective, const InfoStructure& x) {
  if (objective.F.rows() != x.X.rows())
    raise(Errc::DimensionMismatch, "objective/structure dimensions differ");
  return frob_dot(objective.F, x.X);
}

}  // namespace infodesign
