// Copyright (c) the infodesign contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef INFODESIGN_LINALG_HPP_
#define INFODESIGN_LINALG_HPP_

#include <Eigen/Dense>

#include "infodesign/errors.hpp"

namespace infodesign {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Frobenius inner product A•X = sum_ij A_ij X_ij.
inline double frob_dot(const Matrix& a, const Matrix& b) {
  return a.cwiseProduct(b).sum();
}

/// Max-abs asymmetry |A - A^T|_max.
inline double asymmetry(const Matrix& a) {
  return (a - a.transpose()).cwiseAbs().maxCoeff();
}

inline bool is_symmetric(const Matrix& a, double tol) {
  return a.rows() == a.cols() && asymmetry(a) <= tol;
}

inline Matrix symmetrized(const Matrix& a) {
  return 0.5 * (a + a.transpose());
}

/// Eigenvalues of a symmetric matrix, ascending.
inline Vector sym_eigenvalues(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(a),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline double min_eigenvalue(const Matrix& a) {
  return sym_eigenvalues(a).minCoeff();
}

inline double max_eigenvalue(const Matrix& a) {
  return sym_eigenvalues(a).maxCoeff();
}

/// Reciprocal condition number sigma_min / sigma_max (0 for a zero matrix).
inline double rcond(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const double smax = svd.singularValues().maxCoeff();
  if (smax <= 0.0) return 0.0;
  return svd.singularValues().minCoeff() / smax;
}

/// Length of the scaled upper-triangular vectorization of a d x d symmetric
/// matrix.
inline int svec_size(int d) { return d * (d + 1) / 2; }

/// Isometric vectorization: diagonal entries as-is, off-diagonal entries
/// scaled by sqrt(2), so that svec(A).dot(svec(B)) == A•B for symmetric A, B.
/// Order: (0,0), (0,1), (1,1), (0,2), (1,2), (2,2), ... (column-major upper
/// triangle).
Vector svec(const Matrix& a);

/// Inverse of svec. Off-diagonal entries are divided by sqrt(2); the result
/// matches the original to within one ulp per entry (exact on the diagonal).
Matrix smat(const Vector& v, int d);

/// Index of entry (i, j), i <= j, within the svec ordering.
inline int svec_index(int i, int j) { return j * (j + 1) / 2 + i; }

/// Solve H x = y, raising SingularH when rcond(H) < threshold.
Vector solve_checked(const Matrix& h, const Vector& y,
                     double rcond_threshold = 1e-12);

/// H^{-1}, raising SingularH when rcond(H) < threshold.
Matrix inverse_checked(const Matrix& h, double rcond_threshold = 1e-12);

}  // namespace infodesign

#endif  // INFODESIGN_LINALG_HPP_
