// Copyright (c) the infodesign contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef INFODESIGN_SOLVER_HPP_
#define INFODESIGN_SOLVER_HPP_

#include <memory>
#include <optional>
#include <string>

#include "infodesign/conic.hpp"

namespace infodesign {

enum class SolveStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

std::string to_string(SolveStatus status);

struct SolveOptions {
  double feas_tol = 1e-7;
  double rel_gap = 1e-7;
  int max_iter = 500;
  /// After an Optimal solve, re-solve for the least-disclosing optimal
  /// structure: minimize tr(var(a)) subject to objective >= optimum - slack.
  /// Resolves degenerate optimal faces deterministically.
  bool min_disclosure_tiebreak = true;
};

/// Raw backend output over the conic variable vector.
struct ConicSolution {
  SolveStatus status = SolveStatus::NumericalFailure;
  Vector v;             // primal point (svec blocks, then free scalars)
  Vector y;             // equality multipliers
  double objective = 0.0;  // maximize-sense objective value
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double relative_gap = 0.0;
};

class ConicBackend {
 public:
  virtual ~ConicBackend() = default;
  virtual ConicSolution solve(const ConicProblem& problem,
                              const SolveOptions& options) const = 0;
  virtual std::string name() const = 0;
};

/// Dense Nesterov-Todd scaled predictor-corrector interior-point method for
/// small problems (block dimensions <= a few dozen). Handles free variables
/// directly in the reduced KKT system and reports infeasibility or
/// unboundedness through ray certificates.
class DenseInteriorPointBackend : public ConicBackend {
 public:
  ConicSolution solve(const ConicProblem& problem,
                      const SolveOptions& options) const override;
  std::string name() const override { return "dense-nt-ipm"; }
};

/// Residuals recomputed from first principles after extraction; backend
/// reports are never trusted by tests.
struct ResidualReport {
  double max_equality_violation = 0.0;
  double min_block_eigenvalue = 0.0;  // over X and every LMI slack value
  double objective_recomputed = 0.0;  // F • X
  Vector bce;                         // R_k • X
};

struct Solution {
  SolveStatus status = SolveStatus::NumericalFailure;
  Matrix X;
  double t = 0.0;
  double lambda = 0.0;
  std::optional<double> beta;
  ResidualReport residuals;
  int iterations = 0;

  InfoStructure info() const { return InfoStructure{X}; }
};

Solution solve_nominal(const NominalSdpModel& model,
                       const SolveOptions& options = {},
                       const ConicBackend* backend = nullptr);

Solution solve_robust(const RobustSdpModel& model,
                      const SolveOptions& options = {},
                      const ConicBackend* backend = nullptr);

/// Solution dump in the sparse text format (one line per nonzero; header with
/// dimensions). Round-trips to full double precision.
std::string solution_to_text(const Solution& solution);
Solution solution_from_text(const std::string& text);

}  // namespace infodesign

#endif  // INFODESIGN_SOLVER_HPP_
