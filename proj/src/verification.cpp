// Copyright (c) the infodesign contributors.
// SPDX-License-Identifier: Apache-2.0

#include "infodesign/verification.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace infodesign {

double Rng::uniform() {
  // 53-bit mantissa draw in [0, 1).
  return (engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined word.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

/// Square root factor of a PSD matrix with eigenvalue clipping; raises NotPsd
/// when an eigenvalue is below the clipping tolerance.
Matrix psd_sqrt_clipped(const Matrix& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(x));
  const Vector evals = es.eigenvalues();
  const double scale = std::max(1.0, evals.cwiseAbs().maxCoeff());
  const double tol = 1e-10 * scale;
  Vector clipped = evals;
  for (int i = 0; i < clipped.size(); ++i) {
    if (clipped[i] < -tol) raise(Errc::NotPsd, "covariance is not PSD");
    clipped[i] = std::max(0.0, clipped[i]);
  }
  return es.eigenvectors() * clipped.cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace

Matrix sample_recommendations(const InfoStructure& x, const GameSpec& game,
                              int count, std::uint64_t seed) {
  if (count < 1) raise(Errc::MalformedModel, "sample count must be >= 1");
  const int n = game.n;
  if (x.X.rows() != 2 * n)
    raise(Errc::DimensionMismatch, "structure does not match game");
  Vector mean(2 * n);
  mean.head(n) = mean_actions(game);
  mean.tail(n) = game.mu;
  const Matrix root = psd_sqrt_clipped(x.X);
  Rng rng(seed);
  Matrix samples(count, 2 * n);
  Vector g(2 * n);
  for (int s = 0; s < count; ++s) {
    for (int i = 0; i < 2 * n; ++i) g[i] = rng.normal();
    samples.row(s) = (mean + root * g).transpose();
  }
  return samples;
}

McEstimate mc_objective(const InfoStructure& x, const GameSpec& game,
                        const ObjectiveSpec& objective, int count,
                        std::uint64_t seed) {
  if (count < 2)
    raise(Errc::MalformedModel, "mc_objective needs at least two samples");
  const Matrix samples = sample_recommendations(x, game, count, seed);
  const Eigen::RowVectorXd mean = samples.colwise().mean();
  McEstimate out;
  out.samples = count;
  // q_s = (s - sbar)^T F (s - sbar); sum(q)/(count-1) equals F • Cov_hat.
  double sum = 0.0, sumsq = 0.0;
  for (int s = 0; s < count; ++s) {
    const Vector d = (samples.row(s) - mean).transpose();
    const double q = d.dot(objective.F * d);
    sum += q;
    sumsq += q * q;
  }
  const double n = static_cast<double>(count);
  out.estimate = sum / (n - 1.0);
  const double mean_q = sum / n;
  const double var_q = std::max(0.0, sumsq / n - mean_q * mean_q);
  out.stderr_ = std::sqrt(var_q / n);
  return out;
}

std::vector<Matrix> sample_spectral_ball(int dim, double rho, int count,
                                         std::uint64_t seed,
                                         double boundary_fraction) {
  if (rho < 0.0) raise(Errc::MalformedModel, "rho must be nonnegative");
  Rng rng(seed);
  std::vector<Matrix> out;
  out.reserve(count);
  const int boundary = static_cast<int>(std::lround(boundary_fraction * count));
  for (int s = 0; s < count; ++s) {
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) g(i, j) = rng.normal();
    const double smax = g.jacobiSvd().singularValues().maxCoeff();
    Matrix theta;
    if (smax <= 0.0) {
      theta = Matrix::Zero(dim, dim);
    } else if (s < boundary) {
      theta = (rho / smax) * g;
    } else {
      theta = (rng.uniform() * rho / smax) * g;
    }
    out.push_back(std::move(theta));
  }
  return out;
}

double check_robust_feasibility(const Solution& solution,
                                const RobustSdpModel& model, int count,
                                std::uint64_t seed) {
  const Matrix A = equilibrium_matrix(model, solution.X);
  const int n = model.base.n;
  const Matrix L = model.epsilon_star.asDiagonal();
  double min_eig = std::numeric_limits<double>::infinity();
  for (const Matrix& theta :
       sample_spectral_ball(n, model.rho, count, seed)) {
    const Matrix perturbed =
        A + L.transpose() * theta + theta.transpose() * L;
    min_eig = std::min(min_eig, min_eigenvalue(perturbed));
  }
  return min_eig;
}

Distances distances(const InfoStructure& x, const GameSpec& game) {
  const InfoStructure x_no = no_info_structure(game);
  const InfoStructure x_full = full_info_structure(game);
  Distances d;
  d.d_no = (x.X - x_no.X).norm();
  d.d_full = (x.X - x_full.X).norm();
  const double normalizer = (x_full.X - x_no.X).norm();
  if (normalizer < 1e-12)
    raise(Errc::DegenerateNormalizer,
          "no-info and full-info structures coincide");
  d.d_no_normalized = d.d_no / normalizer;
  return d;
}

VerificationReport verify_solution(const Solution& solution,
                                   const GameSpec& game,
                                   const ObjectiveSpec& objective,
                                   const RobustSdpModel& model, int mc_count,
                                   std::uint64_t seed) {
  VerificationReport rep;
  rep.seed = seed;
  rep.samples_used = mc_count;
  rep.analytic_objective = frob_dot(objective.F, solution.X);
  rep.mc = mc_objective(solution.info(), game, objective, mc_count, seed);
  rep.bce_residuals = bce_residuals(model.base, solution.X);
  rep.mc_within_band =
      std::abs(rep.mc.estimate - rep.analytic_objective) <= 4.0 * rep.mc.stderr_;
  if (!model.degenerate) {
    rep.robust_min_eig = check_robust_feasibility(
        solution, model, 500, split_seed(seed, 0x7261790ULL));
    rep.robust_band = *rep.robust_min_eig >= -1e-5;
  }
  return rep;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string report_to_text(const VerificationReport& report) {
  std::ostringstream os;
  os << "verification report\n";
  os << "seed " << report.seed << "\n";
  os << "samples " << report.samples_used << "\n";
  os << "analytic_objective " << fmt(report.analytic_objective) << "\n";
  os << "mc_objective " << fmt(report.mc.estimate) << "\n";
  os << "mc_stderr " << fmt(report.mc.stderr_) << "\n";
  for (int k = 0; k < report.bce_residuals.size(); ++k)
    os << "bce_residual " << k << ' ' << fmt(report.bce_residuals[k]) << "\n";
  if (report.robust_min_eig)
    os << "robust_min_eig " << fmt(*report.robust_min_eig) << "\n";
  os << "band mc_within_4sigma " << (report.mc_within_band ? "PASS" : "FAIL")
     << "\n";
  if (report.robust_min_eig)
    os << "band robust_min_eig " << (report.robust_band ? "PASS" : "FAIL")
       << "\n";
  return os.str();
}

}  // namespace infodesign
