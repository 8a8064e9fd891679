// Copyright (c) the infodesign contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef INFODESIGN_CERTIFICATES_HPP_
#define INFODESIGN_CERTIFICATES_HPP_

#include <optional>
#include <string>

#include "infodesign/types.hpp"

namespace infodesign {

enum class CertificateKind {
  GeneralNoInfo,
  PublicNoInfo,
  PublicFullInfo,
  UiPublicNoInfo,
  UiPublicFullInfo,
};

std::string to_string(CertificateKind kind);

/// Result of a sufficient-condition optimality check. fired means the side
/// conditions hold and margin >= 0, where margin = eigenvalue floor minus
/// the rho-scaled threshold. The eigenvalue list that entered the condition
/// and the extracted nu (public structure checks) are kept for reporting.
struct Certificate {
  CertificateKind theorem;
  bool fired = false;
  double margin = 0.0;
  double threshold = 0.0;
  Vector eigenvalues;  // eigenvalues of the tested matrix, ascending
  std::optional<double> nu;
  std::string note;  // side-condition failures, for the certificate table
};

/// max_j |beta_j - beta_hat_j| over ascending eigenvalues, together with
/// ||G - G_hat||_F. The gap never exceeds the Frobenius distance.
std::pair<double, double> eigenvalue_gap_bound(const Matrix& G,
                                               const Matrix& G_hat);

/// rho-scaled eigenvalue threshold: max(eta1 eps1, eta2 eps2) * rho, where
/// eta1/eps1 range over diagonal and eta2/eps2 over off-diagonal entries.
/// With nu supplied (public structures) the eta terms become (eta + 2 nu).
double thresholds(const Matrix& eta, const Matrix& eps, double rho,
                  std::optional<double> nu = std::nullopt);

/// General structures: fired iff F_eps is symmetric negative definite and
/// min_j |eig_j(F_eps)| >= thresholds(eta, eps, rho); then no information
/// disclosure is optimal and the robust optimum is 0 at X = no-info.
Certificate certify_general_no_info(const Matrix& F_eps, const Matrix& eta,
                                    const Matrix& eps, double rho);

/// Public structures: extracts nu from [F_eps]_12 = [F_eps]_21 = nu I
/// (nu in [0,1]), forms K = [F_eps]_11 + 2 nu H_eps, and tests K against the
/// nu-augmented threshold: negative definite K fires PublicNoInfo, positive
/// definite K fires PublicFullInfo. Returns the inconclusive certificate
/// (both unfired) otherwise.
std::pair<Certificate, Certificate> certify_public(const Matrix& F_eps,
                                                   const Matrix& H_eps,
                                                   const Matrix& eta,
                                                   const Matrix& eps,
                                                   double rho);

/// Ui-style check on S = D^T F_H D with Sigma = D D^T (rank-revealing
/// symmetric factorization): S nonzero negative semidefinite fires
/// UiPublicNoInfo, S nonzero positive semidefinite fires UiPublicFullInfo.
std::pair<Certificate, Certificate> certify_ui_public(
    const ObjectiveSpec& objective, const Matrix& H, const Matrix& Sigma);

}  // namespace infodesign

#endif  // INFODESIGN_CERTIFICATES_HPP_
