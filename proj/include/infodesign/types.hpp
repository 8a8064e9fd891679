// Copyright (c) the infodesign contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef INFODESIGN_TYPES_HPP_
#define INFODESIGN_TYPES_HPP_

#include <optional>

#include "infodesign/linalg.hpp"

namespace infodesign {

/// An n-player linear-quadratic-Gaussian game from the designer's viewpoint:
/// the known payoff coupling matrix H (the perturbed data), entrywise shift
/// magnitudes eps, and the Gaussian payoff-state prior (mu, Sigma). All fields
/// are immutable after construction via make_game.
///
/// The players' payoffs also contain an arbitrary term d_i(a_{-i}, gamma)
/// that never enters the covariance-level design problem; it is not
/// represented as data.
struct GameSpec {
  int n = 0;
  Matrix H;      // n x n payoff coupling coefficients
  Matrix eps;    // n x n entrywise shift magnitudes, >= 0
  Vector mu;     // n prior mean of the payoff state
  Matrix Sigma;  // n x n prior covariance var(gamma), symmetric PSD
};

/// Validates invariants (Sigma symmetric PSD, eps >= 0, dimensions) and
/// returns the assembled spec. Sigma is symmetrized to remove roundoff skew.
GameSpec make_game(int n, const Matrix& H, const Matrix& eps, const Vector& mu,
                   const Matrix& Sigma);

/// Convenience for games without uncertainty data.
GameSpec make_game(int n, const Matrix& H, const Vector& mu,
                   const Matrix& Sigma);

enum class ObjectiveKind { Agreement, Welfare, Custom };

/// Quadratic design objective E[f(a, gamma)] = F • cov(a, gamma), with the
/// 2n x 2n symmetric coefficient matrix F in the block order (actions,
/// states). eta is the coupling matrix of the [F]_11 = eta ⊙ H structure
/// used by the analytical certificates; it is required only for Custom
/// objectives fed into them.
struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::Custom;
  Matrix F;  // 2n x 2n symmetric
  std::optional<Matrix> eta;
  /// Set when an asymmetric H was symmetrized to build [F]_11.
  bool symmetrized_h = false;

  int players() const { return static_cast<int>(F.rows()) / 2; }
  Matrix block11() const { int n = players(); return F.topLeftCorner(n, n); }
  Matrix block12() const { int n = players(); return F.topRightCorner(n, n); }
  Matrix block21() const { int n = players(); return F.bottomLeftCorner(n, n); }
  Matrix block22() const { int n = players(); return F.bottomRightCorner(n, n); }
};

ObjectiveSpec make_custom_objective(const Matrix& F,
                                    std::optional<Matrix> eta = std::nullopt);

/// Joint covariance X = cov(a, gamma) in block form
/// [var(a), cov(a,gamma); cov(gamma,a), var(gamma)].
struct InfoStructure {
  Matrix X;  // 2n x 2n symmetric PSD

  int players() const { return static_cast<int>(X.rows()) / 2; }
  Matrix action_block() const { int n = players(); return X.topLeftCorner(n, n); }
  Matrix cross_block() const { int n = players(); return X.topRightCorner(n, n); }
  Matrix state_block() const { int n = players(); return X.bottomRightCorner(n, n); }
};

}  // namespace infodesign

#endif  // INFODESIGN_TYPES_HPP_
