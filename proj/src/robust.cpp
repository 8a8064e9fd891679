// Copyright (c) the infodesign contributors.
// SPDX-License-Identifier: Apache-2.0

#include "infodesign/robust.hpp"

namespace infodesign {

Matrix AffineLmi::evaluate(const Vector& vars) const {
  Matrix value = constant;
  for (const auto& [index, coeff] : coeffs) {
    if (index < 0 || index >= vars.size())
      raise(Errc::IndexOutOfRange, "AffineLmi: variable index out of range");
    value += vars[index] * coeff;
  }
  return value;
}

Vector epsilon_star(const Matrix& eps) {
  const int n = static_cast<int>(eps.rows());
  if (eps.cols() != n) raise(Errc::DimensionMismatch, "eps must be square");
  if ((eps.array() < 0.0).any())
    raise(Errc::EpsNegative, "eps must be entrywise nonnegative");
  Vector star(n);
  for (int k = 0; k < n; ++k) {
    double s = eps(k, k);
    for (int j = 0; j < n; ++j) {
      if (j == k) continue;
      s += eps(k, j) + eps(j, k);
    }
    star[k] = s;
  }
  return star;
}

Matrix build_l(const Matrix& eps) {
  const Vector star = epsilon_star(eps);
  const int n = static_cast<int>(star.size());
  Matrix l = Matrix::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    l(k, k) = star[k];
    l(n + k, n + k) = -star[k];
  }
  return l;
}

AffineLmi reformulate_norm_bounded(const AffineLmi& a, const Matrix& L,
                                   const Matrix& D, double rho,
                                   int lambda_index) {
  if (rho < 0.0) raise(Errc::MalformedModel, "rho must be nonnegative");
  if (D.cwiseAbs().maxCoeff() == 0.0)
    raise(Errc::ZeroD, "reformulate_norm_bounded: D must be nonzero");
  if (L.cols() != a.dim || D.cols() != a.dim)
    raise(Errc::DimensionMismatch,
          "reformulate_norm_bounded: L, D must have a.dim columns");
  const int p = static_cast<int>(L.rows());
  const int d = a.dim;
  AffineLmi out;
  out.dim = p + d;
  out.constant = Matrix::Zero(p + d, p + d);
  out.constant.topRightCorner(p, d) = rho * L;
  out.constant.bottomLeftCorner(d, p) = rho * L.transpose();
  out.constant.bottomRightCorner(d, d) = a.constant;
  out.coeffs.reserve(a.coeffs.size() + 1);
  for (const auto& [index, coeff] : a.coeffs) {
    Matrix c = Matrix::Zero(p + d, p + d);
    c.bottomRightCorner(d, d) = coeff;
    out.coeffs.emplace_back(index, std::move(c));
  }
  Matrix lam = Matrix::Zero(p + d, p + d);
  lam.topLeftCorner(p, p) = Matrix::Identity(p, p);
  lam.bottomRightCorner(d, d) = -(D.transpose() * D);
  out.coeffs.emplace_back(lambda_index, std::move(lam));
  return out;
}

namespace {

/// 1x1 block [F • X - t] over the shared variable vector.
AffineLmi objective_floor_affine(const Matrix& F, int idx_t) {
  AffineLmi a;
  a.dim = 1;
  a.constant = Matrix::Zero(1, 1);
  const Vector f = svec(F);
  for (int i = 0; i < f.size(); ++i) {
    if (f[i] == 0.0) continue;
    a.coeffs.emplace_back(i, Matrix::Constant(1, 1, f[i]));
  }
  a.coeffs.emplace_back(idx_t, Matrix::Constant(1, 1, -1.0));
  return a;
}

/// n x n affine diag(R_1 • X, ..., R_n • X).
AffineLmi equilibrium_diag_affine(const NominalSdpModel& base) {
  const int n = base.n;
  AffineLmi a;
  a.dim = n;
  a.constant = Matrix::Zero(n, n);
  const int sx = svec_size(2 * n);
  std::vector<Vector> r_vec;
  r_vec.reserve(n);
  for (const Matrix& r : base.R) r_vec.push_back(svec(r));
  for (int i = 0; i < sx; ++i) {
    Matrix c = Matrix::Zero(n, n);
    bool nonzero = false;
    for (int k = 0; k < n; ++k) {
      if (r_vec[k][i] != 0.0) {
        c(k, k) = r_vec[k][i];
        nonzero = true;
      }
    }
    if (nonzero) a.coeffs.emplace_back(i, std::move(c));
  }
  return a;
}

}  // namespace

RobustSdpModel assemble_robust(const GameSpec& game,
                               const ObjectiveSpec& objective,
                               const PerturbationSet& pert) {
  if (pert.rho < 0.0) raise(Errc::MalformedModel, "rho must be nonnegative");
  RobustSdpModel model;
  model.base = assemble_nominal(game, objective);
  model.rho = pert.rho;
  model.epsilon_star = epsilon_star(game.eps);
  model.L = build_l(game.eps);
  model.has_beta = objective.kind == ObjectiveKind::Welfare;
  const int n = game.n;
  model.svec_dim = svec_size(2 * n);
  model.idx_t = model.svec_dim;
  model.idx_lambda = model.svec_dim + 1;
  model.idx_beta = model.has_beta ? model.svec_dim + 2 : -1;
  model.var_count = model.svec_dim + (model.has_beta ? 3 : 2);
  model.degenerate = pert.rho * model.epsilon_star.maxCoeff() == 0.0;

  if (model.has_beta) {
    model.L_w = game.eps.sum();
    // Model form for welfare: F_w = -X_11 • H + [F]_12 • X_12 + [F]_21 • X_21
    // equals F • X since [F]_22 = 0.
    AffineLmi fw = objective_floor_affine(objective.F, model.idx_t);
    if (!model.degenerate && model.L_w > 0.0) {
      model.lmi_blocks.push_back(reformulate_norm_bounded(
          fw, Matrix::Constant(1, 1, model.L_w), Matrix::Identity(1, 1),
          pert.rho, model.idx_beta));
    } else {
      model.lmi_blocks.push_back(std::move(fw));
    }
  } else {
    model.lmi_blocks.push_back(
        objective_floor_affine(objective.F, model.idx_t));
  }

  if (!model.degenerate) {
    Matrix l_plus = model.epsilon_star.asDiagonal();
    model.lmi_blocks.push_back(
        reformulate_norm_bounded(equilibrium_diag_affine(model.base), l_plus,
                                 Matrix::Identity(n, n), pert.rho,
                                 model.idx_lambda));
  }
  return model;
}

Matrix equilibrium_matrix(const RobustSdpModel& model, const Matrix& X) {
  const Vector r = bce_residuals(model.base, X);
  return Matrix(r.asDiagonal());
}

}  // namespace infodesign
