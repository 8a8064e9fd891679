// Copyright (c) the infodesign contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef INFODESIGN_CONIC_HPP_
#define INFODESIGN_CONIC_HPP_

#include <string>
#include <vector>

#include "infodesign/robust.hpp"

namespace infodesign {

/// Standard-form conic problem:
///
///   maximize   objective . v
///   subject to eq_lhs v = eq_rhs
///              v in S+^{d_1} x ... x S+^{d_B} x R^{num_free}
///
/// where each PSD block occupies svec_size(d_b) consecutive entries of v in
/// the isometric vectorization and the free scalars follow the blocks.
struct ConicProblem {
  std::vector<int> block_dims;
  int num_free = 0;
  Vector objective;
  Matrix eq_lhs;
  Vector eq_rhs;
  std::vector<std::string> free_names;

  int cone_vars() const {
    int s = 0;
    for (int d : block_dims) s += svec_size(d);
    return s;
  }
  int total_vars() const { return cone_vars() + num_free; }
  int equality_count() const { return static_cast<int>(eq_rhs.size()); }
  int block_offset(int b) const {
    int s = 0;
    for (int i = 0; i < b; ++i) s += svec_size(block_dims[i]);
    return s;
  }
};

/// Where model quantities live inside the conic variable vector.
struct ConicMapping {
  int n = 0;
  int x_block = 0;
  int t_free = -1;       // free-variable ordinals, -1 when absent
  int lambda_free = -1;
  int beta_free = -1;
  bool degenerate_robust = false;
};

struct ConicForm {
  ConicProblem problem;
  ConicMapping map;
};

ConicForm to_conic(const NominalSdpModel& model);
ConicForm to_conic(const RobustSdpModel& model);

/// Appends the constraint (original objective) >= floor as a 1x1 slack block
/// and replaces the objective with: minimize trace of the action block of X
/// (i.e. maximize its negation). Used for the minimum-disclosure tie-break.
ConicForm with_min_disclosure_objective(const ConicForm& form, double floor);

/// Sparse text serialization of a conic problem (one line per nonzero;
/// header with dimensions). Round-trips to full double precision.
std::string problem_to_text(const ConicProblem& problem);
ConicProblem problem_from_text(const std::string& text);

}  // namespace infodesign

#endif  // INFODESIGN_CONIC_HPP_
