// Copyright (c) the infodesign contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef INFODESIGN_SDP_BUILDER_HPP_
#define INFODESIGN_SDP_BUILDER_HPP_

#include <vector>

#include "infodesign/types.hpp"

namespace infodesign {

/// The nominal (unperturbed) information-design SDP:
///   max F • X
///   s.t. R_k • X = 0                    for k = 0..n-1   (BCE equalities)
///        M_{k,l} • X = Sigma_{k,l}      for 0 <= k <= l < n
///        X PSD.
///
/// BCE conditions are stored as equalities, not as the diag-form A >= 0 with
/// +/- pairs; the one-sided pairing is reconstructed inside the robust
/// reformulation where the LMI needs it.
struct NominalSdpModel {
  int n = 0;
  Matrix F;                    // 2n x 2n
  std::vector<Matrix> R;       // n matrices, 2n x 2n symmetric
  std::vector<Matrix> M;       // n(n+1)/2 matrices, 2n x 2n symmetric
  std::vector<double> M_rhs;   // cov(gamma_k, gamma_l) per M entry
  Matrix Sigma;                // n x n
  ObjectiveKind objective_kind = ObjectiveKind::Custom;

  int equality_count() const { return n + static_cast<int>(M.size()); }
};

/// Constraint matrix R_k (k is 0-based). Nonzeros are confined to row/column
/// k plus the pair (k, n+k), so that for symmetric X
///   R_k • X = sum_j H_{k,j} X_{k,j} - X_{k,n+k}.
Matrix build_r(const Matrix& H, int k);

/// Covariance-assignment matrix M_{k,l} (0-based, k <= l):
/// M_{k,l} • X = X_{n+k,n+l} for symmetric X.
Matrix build_m(int k, int l, int n);

NominalSdpModel assemble_nominal(const GameSpec& game,
                                 const ObjectiveSpec& objective);

/// Residuals R_k • X of a candidate structure (the BCE/obedience slack).
Vector bce_residuals(const NominalSdpModel& model, const Matrix& X);

}  // namespace infodesign

#endif  // INFODESIGN_SDP_BUILDER_HPP_
