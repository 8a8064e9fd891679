// Copyright (c) the infodesign contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef INFODESIGN_LQG_CORE_HPP_
#define INFODESIGN_LQG_CORE_HPP_

#include "infodesign/types.hpp"

namespace infodesign {

/// Agreement objective: maximize -sum_i (a_i - abar)^2, i.e.
/// [F]_11 = -(I - (1/n) J), all other blocks zero. Constant terms from
/// nonzero action means are handled by callers; F acts on covariances.
ObjectiveSpec agreement_objective(int n);

/// Social welfare objective: F = [[-H, I], [I, 0]]. An asymmetric H is
/// symmetrized to (H + H^T)/2 in [F]_11 (trace identity F•X unchanged for
/// symmetric X); the result records the symmetrization.
ObjectiveSpec welfare_objective(const GameSpec& game);

/// No information disclosure: X = [[0, 0], [0, Sigma]].
InfoStructure no_info_structure(const GameSpec& game);

/// Full information disclosure: actions a = H^{-1} gamma, so
/// X = [[H^{-1} Sigma H^{-T}, H^{-1} Sigma], [Sigma H^{-T}, Sigma]].
/// Raises SingularH when rcond(H) < 1e-12.
InfoStructure full_info_structure(const GameSpec& game);

/// F_H = (H^{-1})^T (F_11 + F_12 H + H^T F_21) H^{-1}; satisfies
/// F • X_full = F_H • Sigma.
Matrix f_h_matrix(const ObjectiveSpec& objective, const Matrix& H);

/// Mean equilibrium actions under no information disclosure, H^{-1} mu.
Vector mean_actions(const GameSpec& game);

/// Objective value F • X.
double objective_value(const ObjectiveSpec& objective, const InfoStructure& x);

}  // namespace infodesign

#endif  // INFODESIGN_LQG_CORE_HPP_
