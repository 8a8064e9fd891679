// Copyright (c) the infodesign contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef INFODESIGN_VERIFICATION_HPP_
#define INFODESIGN_VERIFICATION_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "infodesign/lqg_core.hpp"
#include "infodesign/robust.hpp"
#include "infodesign/solver.hpp"

namespace infodesign {

/// Seeded deterministic generator: std::mt19937_64 (bit-reproducible by the
/// standard) with a Box-Muller normal transform implemented here, since the
/// standard library's distributions are not bit-specified. Stream splitting
/// for sweep grid points derives per-point seeds with split_seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();                 // [0, 1)
  double normal();                  // standard normal
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Deterministic per-stream seed derivation (splitmix64 mix of seed and
/// stream index).
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

/// i.i.d. draws from the Gaussian with mean (H^{-1} mu, mu) and covariance X
/// (eigen-clipped PSD), one sample per row.
Matrix sample_recommendations(const InfoStructure& x, const GameSpec& game,
                              int count, std::uint64_t seed);

struct McEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  int samples = 0;
};

/// Monte-Carlo estimate of E[f(a, gamma)] on mean-centered samples; matches
/// the covariance-level objective F • X.
McEstimate mc_objective(const InfoStructure& x, const GameSpec& game,
                        const ObjectiveSpec& objective, int count,
                        std::uint64_t seed);

/// Samples from the spectral-norm ball ||theta||_{2,2} <= rho;
/// boundary_fraction of them normalized onto the sphere.
std::vector<Matrix> sample_spectral_ball(int dim, double rho, int count,
                                         std::uint64_t seed,
                                         double boundary_fraction = 0.5);

/// min over sampled theta of lambda_min(A(X*) + L^T theta + theta^T L) with
/// A = diag(R_k • X*) and L = diag(eps*) from the model.
double check_robust_feasibility(const Solution& solution,
                                const RobustSdpModel& model, int count,
                                std::uint64_t seed);

struct Distances {
  double d_no = 0.0;
  double d_full = 0.0;
  double d_no_normalized = 0.0;
};

/// Frobenius distances to the closed-form structures; the normalized value
/// is d_no / ||X_full - X_no||_F.
Distances distances(const InfoStructure& x, const GameSpec& game);

struct VerificationReport {
  McEstimate mc;
  double analytic_objective = 0.0;
  Vector bce_residuals;
  std::optional<double> robust_min_eig;
  int samples_used = 0;
  std::uint64_t seed = 0;
  bool mc_within_band = false;       // |mc - analytic| <= 4 stderr
  bool robust_band = true;           // robust_min_eig >= -1e-5 when present
};

VerificationReport verify_solution(const Solution& solution,
                                   const GameSpec& game,
                                   const ObjectiveSpec& objective,
                                   const RobustSdpModel& model, int mc_count,
                                   std::uint64_t seed);

/// Deterministic text rendering (byte-identical for identical inputs).
std::string report_to_text(const VerificationReport& report);

}  // namespace infodesign

#endif  // INFODESIGN_VERIFICATION_HPP_
