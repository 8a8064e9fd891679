// Copyright (c) the infodesign contributors.
// SPDX-License-Identifier: Apache-2.0

#include "infodesign/certificates.hpp"

#include <algorithm>
#include <cmath>

#include "infodesign/lqg_core.hpp"

namespace infodesign {

std::string to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::GeneralNoInfo: return "GeneralNoInfo";
    case CertificateKind::PublicNoInfo: return "PublicNoInfo";
    case CertificateKind::PublicFullInfo: return "PublicFullInfo";
    case CertificateKind::UiPublicNoInfo: return "UiPublicNoInfo";
    case CertificateKind::UiPublicFullInfo: return "UiPublicFullInfo";
  }
  return "Unknown";
}

std::pair<double, double> eigenvalue_gap_bound(const Matrix& G,
                                               const Matrix& G_hat) {
  if (G.rows() != G_hat.rows() || G.cols() != G_hat.cols())
    raise(Errc::DimensionMismatch, "eigenvalue_gap_bound: dimensions differ");
  const double scale =
      std::max({1.0, G.cwiseAbs().maxCoeff(), G_hat.cwiseAbs().maxCoeff()});
  if (asymmetry(G) > 1e-10 * scale || asymmetry(G_hat) > 1e-10 * scale)
    raise(Errc::NonSymmetric, "eigenvalue_gap_bound: inputs must be symmetric");
  const Vector b = sym_eigenvalues(G);
  const Vector bh = sym_eigenvalues(G_hat);
  const double max_gap = (b - bh).cwiseAbs().maxCoeff();
  const double frob = (G - G_hat).norm();
  return {max_gap, frob};
}

namespace {

/// (max |diag|, max |off-diagonal|), second value 0 for 1 x 1 matrices.
std::pair<double, double> diag_offdiag_max_abs(const Matrix& m) {
  double d = 0.0, o = 0.0;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      const double v = std::abs(m(i, j));
      if (i == j) d = std::max(d, v);
      else o = std::max(o, v);
    }
  }
  return {d, o};
}

Certificate unfired(CertificateKind kind, double threshold,
                    const Vector& eigs, std::string note) {
  Certificate c;
  c.theorem = kind;
  c.fired = false;
  c.threshold = threshold;
  c.eigenvalues = eigs;
  c.margin = 0.0;
  c.note = std::move(note);
  return c;
}

}  // namespace

double thresholds(const Matrix& eta, const Matrix& eps, double rho,
                  std::optional<double> nu) {
  if (eta.rows() != eps.rows() || eta.cols() != eps.cols())
    raise(Errc::DimensionMismatch, "thresholds: eta/eps dimensions differ");
  if (rho < 0.0) raise(Errc::MalformedModel, "thresholds: rho must be >= 0");
  if (nu && (*nu < 0.0 || *nu > 1.0))
    raise(Errc::NuOutOfRange, "thresholds: nu must lie in [0, 1]");
  auto [eta1, eta2] = diag_offdiag_max_abs(eta);
  auto [eps1, eps2] = diag_offdiag_max_abs(eps);
  if (nu) {
    eta1 += 2.0 * *nu;
    eta2 += 2.0 * *nu;
  }
  return std::max(eta1 * eps1, eta2 * eps2) * rho;
}

Certificate certify_general_no_info(const Matrix& F_eps, const Matrix& eta,
                                    const Matrix& eps, double rho) {
  const double scale = std::max(1.0, F_eps.cwiseAbs().maxCoeff());
  if (asymmetry(F_eps) > 1e-10 * scale)
    raise(Errc::NonSymmetric, "certify_general_no_info: F_eps not symmetric");
  const double threshold = thresholds(eta, eps, rho);
  const Vector eigs = sym_eigenvalues(F_eps);
  Certificate c;
  c.theorem = CertificateKind::GeneralNoInfo;
  c.threshold = threshold;
  c.eigenvalues = eigs;
  if (eigs.maxCoeff() >= 0.0) {
    c.fired = false;
    c.margin = 0.0;
    c.note = "F_eps not negative definite";
    return c;
  }
  // All eigenvalues negative: the eigenvalue magnitude floor is |max eig|.
  const double floor = -eigs.maxCoeff();
  c.margin = floor - threshold;
  c.fired = c.margin >= 0.0;
  return c;
}

std::pair<Certificate, Certificate> certify_public(const Matrix& F_eps,
                                                   const Matrix& H_eps,
                                                   const Matrix& eta,
                                                   const Matrix& eps,
                                                   double rho) {
  const int dim = static_cast<int>(F_eps.rows());
  if (dim % 2 != 0 || F_eps.cols() != dim)
    raise(Errc::DimensionMismatch, "certify_public: F_eps must be 2n x 2n");
  const int n = dim / 2;
  if (H_eps.rows() != n || H_eps.cols() != n)
    raise(Errc::DimensionMismatch, "certify_public: H_eps must be n x n");
  const double scale = std::max(1.0, F_eps.cwiseAbs().maxCoeff());
  if (asymmetry(F_eps) > 1e-10 * scale)
    raise(Errc::NonSymmetric, "certify_public: F_eps not symmetric");

  const Matrix f12 = F_eps.topRightCorner(n, n);
  const Matrix f21 = F_eps.bottomLeftCorner(n, n);
  const double nu = f12(0, 0);
  const Matrix nu_eye = nu * Matrix::Identity(n, n);
  const double tol = 1e-9 * scale;
  if ((f12 - nu_eye).cwiseAbs().maxCoeff() > tol ||
      (f21 - nu_eye).cwiseAbs().maxCoeff() > tol)
    raise(Errc::OffDiagonalNotScalarIdentity,
          "certify_public: [F_eps]_12, [F_eps]_21 must equal nu I");
  if (nu < -tol || nu > 1.0 + tol)
    raise(Errc::NuOutOfRange, "certify_public: nu must lie in [0, 1]");
  const double nu_clamped = std::clamp(nu, 0.0, 1.0);

  const Matrix K =
      symmetrized(F_eps.topLeftCorner(n, n) + 2.0 * nu_clamped * H_eps);
  const double threshold = thresholds(eta, eps, rho, nu_clamped);
  const Vector eigs = sym_eigenvalues(K);

  Certificate no_info =
      unfired(CertificateKind::PublicNoInfo, threshold, eigs, "");
  Certificate full_info =
      unfired(CertificateKind::PublicFullInfo, threshold, eigs, "");
  no_info.nu = nu_clamped;
  full_info.nu = nu_clamped;

  if (eigs.maxCoeff() < 0.0) {
    no_info.margin = -eigs.maxCoeff() - threshold;
    no_info.fired = no_info.margin >= 0.0;
    full_info.note = "K negative definite";
  } else if (eigs.minCoeff() > 0.0) {
    full_info.margin = eigs.minCoeff() - threshold;
    full_info.fired = full_info.margin >= 0.0;
    no_info.note = "K positive definite";
  } else {
    no_info.note = "K indefinite or singular";
    full_info.note = "K indefinite or singular";
  }
  return {no_info, full_info};
}

std::pair<Certificate, Certificate> certify_ui_public(
    const ObjectiveSpec& objective, const Matrix& H, const Matrix& Sigma) {
  const int n = static_cast<int>(H.rows());
  if (Sigma.rows() != n || Sigma.cols() != n || objective.players() != n)
    raise(Errc::DimensionMismatch, "certify_ui_public: dimensions differ");
  const Matrix fh = f_h_matrix(objective, H);

  // Rank-revealing symmetric factorization Sigma = D D^T; eigendecomposition
  // rather than Cholesky so rank-deficient priors are handled.
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(Sigma));
  const Vector evals = es.eigenvalues();
  const double emax = std::max(0.0, evals.maxCoeff());
  const double cut = 1e-10 * std::max(1.0, emax);
  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (evals[i] > cut) keep.push_back(i);
  const int rank = static_cast<int>(keep.size());

  Matrix D(n, rank);
  for (int c = 0; c < rank; ++c)
    D.col(c) = es.eigenvectors().col(keep[c]) * std::sqrt(evals[keep[c]]);
  const Matrix S = rank > 0 ? symmetrized(D.transpose() * fh * D)
                            : Matrix::Zero(0, 0);

  Certificate no_info;
  no_info.theorem = CertificateKind::UiPublicNoInfo;
  Certificate full_info;
  full_info.theorem = CertificateKind::UiPublicFullInfo;

  const double s_norm = rank > 0 ? S.norm() : 0.0;
  if (rank == 0 || s_norm <= 1e-12 * std::max(1.0, fh.norm())) {
    no_info.note = "S = 0";
    full_info.note = "S = 0";
    return {no_info, full_info};
  }
  const Vector eigs = sym_eigenvalues(S);
  no_info.eigenvalues = eigs;
  full_info.eigenvalues = eigs;
  const double tol = 1e-9 * s_norm;
  if (eigs.maxCoeff() <= tol) {
    no_info.fired = true;
    no_info.margin = -eigs.maxCoeff();
    full_info.note = "S negative semidefinite";
  } else if (eigs.minCoeff() >= -tol) {
    full_info.fired = true;
    full_info.margin = eigs.minCoeff();
    no_info.note = "S positive semidefinite";
  } else {
    no_info.note = "S indefinite";
    full_info.note = "S indefinite";
  }
  return {no_info, full_info};
}

}  // namespace infodesign
