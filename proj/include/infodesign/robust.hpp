// Copyright (c) the infodesign contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef INFODESIGN_ROBUST_HPP_
#define INFODESIGN_ROBUST_HPP_

#include <utility>
#include <vector>

#include "infodesign/sdp_builder.hpp"

namespace infodesign {

/// Spectral-norm ball of perturbation matrices theta, ||theta||_{2,2} <= rho.
/// dim is the perturbation matrix dimension (n for the equilibrium LMI; see
/// the note on assemble_robust below).
struct PerturbationSet {
  double rho = 0.0;
  int dim = 0;
};

/// A symmetric-matrix-valued affine function of the model's scalar decision
/// variables: value(v) = constant + sum_i v[coeffs[i].first] * coeffs[i].second.
/// The variable vector layout is defined by RobustSdpModel (svec(X) entries
/// first, then t, lambda, beta).
struct AffineLmi {
  int dim = 0;
  Matrix constant;
  std::vector<std::pair<int, Matrix>> coeffs;

  Matrix evaluate(const Vector& vars) const;
};

/// Per-player aggregation of entrywise shifts on H:
/// eps*_k = eps_kk + sum_{j != k} eps_kj + sum_{i != k} eps_ik.
Vector epsilon_star(const Matrix& eps);

/// L = diag(eps*_1, ..., eps*_n, -eps*_1, ..., -eps*_n), 2n x 2n.
Matrix build_l(const Matrix& eps);

/// Exact robust counterpart of the uncertain LMI
///   A(y) + L^T theta D + D^T theta^T L >= 0   for all ||theta||_{2,2} <= rho
/// with constant L (p x p') and D (q x p'), D != 0: the enlarged LMI
///   [[lambda I_p, rho L], [rho L^T, A(y) - lambda D^T D]] >= 0
/// in (y, lambda). lambda_index names the auxiliary variable in the shared
/// variable vector.
AffineLmi reformulate_norm_bounded(const AffineLmi& a, const Matrix& L,
                                   const Matrix& D, double rho,
                                   int lambda_index);

/// Tractable robust information-design SDP.
///
/// Variables: svec(X) (isometric vectorization of the 2n x 2n structure),
/// then t, lambda and, on the welfare path, beta.
///
/// For perturbation-independent objectives (Agreement, Custom) the objective
/// enters as the 1x1 block [F•X - t]; for Welfare it is robustified into the
/// 2x2 block [[beta, rho L_w], [rho L_w, F•X - t - beta]] with
/// L_w = sum_ij eps_ij.
///
/// The equilibrium constraint is robustified through the positive-half form
///   [[lambda I_n, rho diag(eps*)], [rho diag(eps*), diag(R_k • X) - lambda I_n]]
/// (the +/- paired diagonal admits no feasible point for rho eps* > 0; the
/// paired L of build_l is kept in the model for reference). When
/// rho * max(eps*) == 0 the model degenerates to the exact nominal equalities
/// R_k • X = 0 with lambda = 0.
struct RobustSdpModel {
  NominalSdpModel base;
  double rho = 0.0;
  Vector epsilon_star;       // n
  Matrix L;                  // 2n x 2n signed diagonal, as in the source model
  double L_w = 0.0;          // welfare only
  bool has_beta = false;
  bool degenerate = false;   // rho * max(eps*) == 0: equality BCE, lambda = 0

  std::vector<AffineLmi> lmi_blocks;  // [objective block, equilibrium block?]

  int svec_dim = 0;   // svec_size(2n)
  int var_count = 0;  // svec_dim + scalars
  int idx_t = -1;
  int idx_lambda = -1;
  int idx_beta = -1;
};

RobustSdpModel assemble_robust(const GameSpec& game,
                               const ObjectiveSpec& objective,
                               const PerturbationSet& pert);

/// diag(R_1 • X, ..., R_n • X): the nominal value of the uncertain
/// equilibrium matrix, used by the sampled robustness checks.
Matrix equilibrium_matrix(const RobustSdpModel& model, const Matrix& X);

}  // namespace infodesign

#endif  // INFODESIGN_ROBUST_HPP_
