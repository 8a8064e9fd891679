// Copyright (c) the infodesign contributors.
// SPDX-License-Identifier: Apache-2.0

#include "infodesign/linalg.hpp"

#include <cmath>

namespace infodesign {

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

Vector svec(const Matrix& a) {
  const int d = static_cast<int>(a.rows());
  if (a.cols() != d) raise(Errc::DimensionMismatch, "svec: matrix not square");
  Vector v(svec_size(d));
  int idx = 0;
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i <= j; ++i) {
      v[idx++] = (i == j) ? a(i, j) : kSqrt2 * a(i, j);
    }
  }
  return v;
}

Matrix smat(const Vector& v, int d) {
  if (v.size() != svec_size(d))
    raise(Errc::DimensionMismatch, "smat: vector length does not match dim");
  Matrix a(d, d);
  int idx = 0;
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i <= j; ++i) {
      const double x = (i == j) ? v[idx] : v[idx] / kSqrt2;
      a(i, j) = x;
      a(j, i) = x;
      ++idx;
    }
  }
  return a;
}

Vector solve_checked(const Matrix& h, const Vector& y,
                     double rcond_threshold) {
  if (h.rows() != h.cols() || h.rows() != y.size())
    raise(Errc::DimensionMismatch, "solve_checked: inconsistent dimensions");
  if (rcond(h) < rcond_threshold)
    raise(Errc::SingularH, "H is numerically singular");
  return h.partialPivLu().solve(y);
}

Matrix inverse_checked(const Matrix& h, double rcond_threshold) {
  if (h.rows() != h.cols())
    raise(Errc::DimensionMismatch, "inverse_checked: matrix not square");
  if (rcond(h) < rcond_threshold)
    raise(Errc::SingularH, "H is numerically singular");
  return h.partialPivLu().inverse();
}

}  // namespace infodesign
