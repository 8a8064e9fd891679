// Copyright (c) the infodesign contributors.
// SPDX-License-Identifier: Apache-2.0

#include "infodesign/sdp_builder.hpp"

namespace infodesign {

Matrix build_r(const Matrix& H, int k) {
  const int n = static_cast<int>(H.rows());
  if (H.cols() != n) raise(Errc::DimensionMismatch, "H must be square");
  if (k < 0 || k >= n) raise(Errc::IndexOutOfRange, "build_r: k out of range");
  Matrix r = Matrix::Zero(2 * n, 2 * n);
  r(k, k) = H(k, k);
  for (int j = 0; j < n; ++j) {
    if (j == k) continue;
    r(k, j) = H(k, j) / 2.0;
    r(j, k) = H(k, j) / 2.0;
  }
  r(k, n + k) = -0.5;
  r(n + k, k) = -0.5;
  return r;
}

Matrix build_m(int k, int l, int n) {
  if (k < 0 || k >= n || l < 0 || l >= n)
    raise(Errc::IndexOutOfRange, "build_m: index out of range");
  if (k > l) raise(Errc::KGreaterThanL, "build_m: requires k <= l");
  Matrix m = Matrix::Zero(2 * n, 2 * n);
  if (k == l) {
    m(n + k, n + k) = 1.0;
  } else {
    m(n + k, n + l) = 0.5;
    m(n + l, n + k) = 0.5;
  }
  return m;
}

NominalSdpModel assemble_nominal(const GameSpec& game,
                                 const ObjectiveSpec& objective) {
  const int n = game.n;
  if (objective.players() != n)
    raise(Errc::DimensionMismatch, "objective does not match player count");
  NominalSdpModel model;
  model.n = n;
  model.F = objective.F;
  model.Sigma = game.Sigma;
  model.objective_kind = objective.kind;
  model.R.reserve(n);
  for (int k = 0; k < n; ++k) model.R.push_back(build_r(game.H, k));
  model.M.reserve(n * (n + 1) / 2);
  for (int k = 0; k < n; ++k) {
    for (int l = k; l < n; ++l) {
      model.M.push_back(build_m(k, l, n));
      model.M_rhs.push_back(game.Sigma(k, l));
    }
  }
  return model;
}

Vector bce_residuals(const NominalSdpModel& model, const Matrix& X) {
  if (X.rows() != 2 * model.n || X.cols() != 2 * model.n)
    raise(Errc::DimensionMismatch, "bce_residuals: X must be 2n x 2n");
  Vector r(model.n);
  for (int k = 0; k < model.n; ++k) r[k] = frob_dot(model.R[k], X);
  return r;
}

}  // namespace infodesign
