// Copyright (c) the infodesign contributors.
// SPDX-License-Identifier: Apache-2.0

#include "infodesign/solver.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <sstream>
#include <vector>

namespace infodesign {

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unbounded: return "Unbounded";
    case SolveStatus::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

namespace {

struct BlockLayout {
  std::vector<int> dims;
  std::vector<int> offsets;  // into the cone part of v
  int cone = 0;
  int free_count = 0;
  int total = 0;
  int barrier_degree = 0;
};

BlockLayout layout_of(const ConicProblem& p) {
  BlockLayout l;
  l.dims = p.block_dims;
  int off = 0;
  for (int d : l.dims) {
    l.offsets.push_back(off);
    off += svec_size(d);
    l.barrier_degree += d;
  }
  l.cone = off;
  l.free_count = p.num_free;
  l.total = off + p.num_free;
  return l;
}

void pack_blocks(const BlockLayout& l, const std::vector<Matrix>& blocks,
                 Vector& v) {
  for (size_t b = 0; b < l.dims.size(); ++b)
    v.segment(l.offsets[b], svec_size(l.dims[b])) = svec(blocks[b]);
}

/// Matrix power of a symmetric PD matrix with the eigenvalues floored away
/// from zero, so roundoff-negative values cannot poison the scaling.
Matrix sym_power_clamped(const Matrix& S, double exponent) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(S));
  const double top = std::max(es.eigenvalues().maxCoeff(), 0.0);
  const double floor = std::max(top, 1.0) * 1e-15;
  Vector d = es.eigenvalues();
  for (int i = 0; i < d.size(); ++i)
    d[i] = std::pow(std::max(d[i], floor), exponent);
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

/// Largest alpha in (0, 1] with S + alpha dS >= 0, damped by eta.
double max_step(const Matrix& S, const Matrix& dS, double eta) {
  const Matrix s_inv_half = sym_power_clamped(S, -0.5);
  const double lmin =
      min_eigenvalue(symmetrized(s_inv_half * dS * s_inv_half));
  if (lmin >= 0.0) return 1.0;
  return std::min(1.0, -eta / lmin);
}

struct Scaling {
  Matrix W, W_half, W_half_inv;
  Matrix lambda_q;   // eigenvectors of the scaled point Lambda
  Vector lambda_d;   // eigenvalues of Lambda
};

/// Nesterov-Todd scaling point: W Z W = X with W > 0, and the common scaled
/// point Lambda = W^{1/2} Z W^{1/2} = W^{-1/2} X W^{-1/2}.
Scaling nt_scaling(const Matrix& X, const Matrix& Z) {
  const Matrix x_half = sym_power_clamped(X, 0.5);
  const Matrix t = symmetrized(x_half * Z * x_half);
  const Matrix t_inv_half = sym_power_clamped(t, -0.5);
  Scaling s;
  s.W = symmetrized(x_half * t_inv_half * x_half);
  s.W_half = sym_power_clamped(s.W, 0.5);
  s.W_half_inv = sym_power_clamped(s.W, -0.5);
  Eigen::SelfAdjointEigenSolver<Matrix> el(
      symmetrized(s.W_half * Z * s.W_half));
  s.lambda_q = el.eigenvectors();
  Vector d = el.eigenvalues();
  const double floor = std::max(d.cwiseAbs().maxCoeff(), 1.0) * 1e-15;
  for (int i = 0; i < d.size(); ++i) d[i] = std::max(d[i], floor);
  s.lambda_d = d;
  return s;
}

/// Solve (Lambda U + U Lambda)/2 = M in Lambda's eigenbasis.
Matrix lyapunov_solve(const Scaling& s, const Matrix& M) {
  const Matrix mq = s.lambda_q.transpose() * M * s.lambda_q;
  Matrix u(mq.rows(), mq.cols());
  for (int i = 0; i < mq.rows(); ++i)
    for (int j = 0; j < mq.cols(); ++j)
      u(i, j) = 2.0 * mq(i, j) / (s.lambda_d[i] + s.lambda_d[j]);
  return s.lambda_q * u * s.lambda_q.transpose();
}

}  // namespace

ConicSolution DenseInteriorPointBackend::solve(
    const ConicProblem& problem, const SolveOptions& options) const {
  const BlockLayout lay = layout_of(problem);
  const int m = problem.equality_count();
  const int nb = static_cast<int>(lay.dims.size());
  const Matrix& A = problem.eq_lhs;
  const Vector& b = problem.eq_rhs;
  const Vector c = -problem.objective;  // internal sense: minimize c . v

  ConicSolution out;
  if (A.rows() != m || A.cols() != lay.total || c.size() != lay.total) {
    out.status = SolveStatus::NumericalFailure;
    return out;
  }

  const double b_scale = 1.0 + (m > 0 ? b.cwiseAbs().maxCoeff() : 0.0);
  const double c_scale = 1.0 + c.cwiseAbs().maxCoeff();

  std::vector<Matrix> X, Z;
  for (int d : lay.dims) {
    X.push_back(b_scale * Matrix::Identity(d, d));
    Z.push_back(c_scale * Matrix::Identity(d, d));
  }
  Vector xf = Vector::Zero(lay.free_count);
  Vector y = Vector::Zero(m);

  Vector v(lay.total), z(lay.total);
  const double v0_norm = std::sqrt(static_cast<double>(lay.total)) * b_scale;

  auto finish = [&](SolveStatus status) {
    out.status = status;
    out.v = v;
    out.y = y;
    out.objective = -c.dot(v);
    return out;
  };

  for (int iter = 0; iter <= options.max_iter; ++iter) {
    v.setZero();
    z.setZero();
    pack_blocks(lay, X, v);
    v.tail(lay.free_count) = xf;
    pack_blocks(lay, Z, z);

    const Vector rp = b - A * v;
    const Vector rd = c - A.transpose() * y - z;
    double gap_abs = 0.0;
    for (int bidx = 0; bidx < nb; ++bidx) gap_abs += frob_dot(X[bidx], Z[bidx]);
    const double mu = gap_abs / std::max(1, lay.barrier_degree);

    const double pobj = c.dot(v);
    const double dobj = b.dot(y);
    const double rel_p = rp.size() > 0 ? rp.cwiseAbs().maxCoeff() / b_scale : 0.0;
    const double rel_d = rd.cwiseAbs().maxCoeff() / c_scale;
    const double rel_gap =
        std::abs(pobj - dobj) / (1.0 + std::max(std::abs(pobj), std::abs(dobj)));

    out.iterations = iter;
    out.primal_residual = rel_p;
    out.dual_residual = rel_d;
    out.relative_gap = rel_gap;
    if (std::getenv("INFODESIGN_IPM_TRACE"))
      std::fprintf(stderr, "it=%3d mu=%9.2e rp=%9.2e rd=%9.2e gap=%9.2e pobj=%12.4e dobj=%12.4e |v|=%9.2e |y|=%9.2e\n",
                   iter, mu, rel_p, rel_d, rel_gap, pobj, dobj, v.norm(), y.norm());

    if (rel_p <= options.feas_tol && rel_d <= options.feas_tol &&
        rel_gap <= options.rel_gap) {
      return finish(SolveStatus::Optimal);
    }

    // Farkas-style ray certificates.
    if (iter >= 5 && m > 0) {
      const double y_norm = y.norm();
      if (y_norm > 1e-12) {
        const Vector yn = y / y_norm;
        const double byn = b.dot(yn);
        if (byn > 1e-9) {
          const Vector aty = A.transpose() * yn;
          double viol = lay.free_count > 0
                            ? aty.tail(lay.free_count).cwiseAbs().maxCoeff()
                            : 0.0;
          for (int bidx = 0; bidx < nb; ++bidx) {
            const Matrix s = smat(
                Vector(-aty.segment(lay.offsets[bidx],
                                    svec_size(lay.dims[bidx]))),
                lay.dims[bidx]);
            viol = std::max(viol, std::max(0.0, -min_eigenvalue(s)));
          }
          if (viol <= 1e-8 * byn) return finish(SolveStatus::Infeasible);
        }
      }
      const double v_norm = v.norm();
      if (v_norm > 1e4 * v0_norm) {
        const Vector vn = v / v_norm;
        const double av = (A * vn).cwiseAbs().maxCoeff();
        const double cv = c.dot(vn);
        if (av <= 1e-6 && cv < -1e-6) return finish(SolveStatus::Unbounded);
      }
    }
    if (iter == options.max_iter) break;
    if (!std::isfinite(mu) || !std::isfinite(rel_p) || !std::isfinite(rel_d))
      break;

    // NT scalings and the linear map P: u -> svec(W smat(u) W) per block.
    std::vector<Scaling> scal(nb);
    std::vector<Matrix> P(nb);
    for (int bidx = 0; bidx < nb; ++bidx) {
      scal[bidx] = nt_scaling(X[bidx], Z[bidx]);
      const int d = lay.dims[bidx];
      const int sd = svec_size(d);
      P[bidx] = Matrix(sd, sd);
      Vector e = Vector::Zero(sd);
      for (int col = 0; col < sd; ++col) {
        e[col] = 1.0;
        const Matrix basis = smat(e, d);
        P[bidx].col(col) =
            svec(symmetrized(scal[bidx].W * basis * scal[bidx].W));
        e[col] = 0.0;
      }
    }

    // Reduced KKT matrix, shared by predictor and corrector.
    const int kdim = m + lay.free_count;
    Matrix kkt = Matrix::Zero(kdim, kdim);
    {
      Matrix apat = Matrix::Zero(m, m);
      for (int bidx = 0; bidx < nb; ++bidx) {
        const auto ac = A.middleCols(lay.offsets[bidx],
                                     svec_size(lay.dims[bidx]));
        apat += ac * P[bidx] * ac.transpose();
      }
      kkt.topLeftCorner(m, m) = apat;
      if (lay.free_count > 0) {
        const auto af = A.rightCols(lay.free_count);
        kkt.topRightCorner(m, lay.free_count) = af;
        kkt.bottomLeftCorner(lay.free_count, m) = af.transpose();
      }
    }
    Eigen::FullPivLU<Matrix> kkt_lu(kkt);

    // One Newton solve for a given set of scaled-space targets G_b.
    auto newton = [&](const std::vector<Matrix>& G, Vector& dy, Vector& dxf,
                      std::vector<Matrix>& dX, std::vector<Matrix>& dZ) {
      Vector g_cone = Vector::Zero(lay.cone);
      for (int bidx = 0; bidx < nb; ++bidx) {
        g_cone.segment(lay.offsets[bidx], svec_size(lay.dims[bidx])) =
            svec(symmetrized(scal[bidx].W_half * G[bidx] *
                             scal[bidx].W_half));
      }
      Vector rhs = Vector::Zero(kdim);
      const Vector rd_cone = rd.head(lay.cone);
      Vector acg = Vector::Zero(m);
      Vector acprd = Vector::Zero(m);
      for (int bidx = 0; bidx < nb; ++bidx) {
        const auto ac = A.middleCols(lay.offsets[bidx],
                                     svec_size(lay.dims[bidx]));
        const auto seg_g = g_cone.segment(lay.offsets[bidx],
                                          svec_size(lay.dims[bidx]));
        const auto seg_rd = rd_cone.segment(lay.offsets[bidx],
                                            svec_size(lay.dims[bidx]));
        acg += ac * seg_g;
        acprd += ac * (P[bidx] * seg_rd);
      }
      rhs.head(m) = rp - acg + acprd;
      if (lay.free_count > 0) rhs.tail(lay.free_count) = rd.tail(lay.free_count);

      Vector sol = kkt_lu.solve(rhs);
      sol += kkt_lu.solve(rhs - kkt * sol);  // one refinement round
      if (!sol.allFinite()) sol.setZero();
      dy = sol.head(m);
      dxf = sol.tail(lay.free_count);

      const Vector aty_step = A.transpose() * dy;
      dX.resize(nb);
      dZ.resize(nb);
      for (int bidx = 0; bidx < nb; ++bidx) {
        const int off = lay.offsets[bidx];
        const int sd = svec_size(lay.dims[bidx]);
        const Vector dz_vec = rd_cone.segment(off, sd) - aty_step.segment(off, sd);
        dZ[bidx] = smat(dz_vec, lay.dims[bidx]);
        const Vector dx_vec =
            g_cone.segment(off, sd) - P[bidx] * dz_vec;
        dX[bidx] = smat(dx_vec, lay.dims[bidx]);
      }
    };

    // Predictor (affine scaling) direction: G_b = -Lambda_b.
    std::vector<Matrix> G(nb);
    for (int bidx = 0; bidx < nb; ++bidx) {
      G[bidx] = -(scal[bidx].lambda_q *
                  scal[bidx].lambda_d.asDiagonal() *
                  scal[bidx].lambda_q.transpose());
    }
    Vector dy_aff, dxf_aff;
    std::vector<Matrix> dX_aff, dZ_aff;
    newton(G, dy_aff, dxf_aff, dX_aff, dZ_aff);

    const double eta = 0.99;
    double ap = 1.0, ad = 1.0;
    for (int bidx = 0; bidx < nb; ++bidx) {
      ap = std::min(ap, max_step(X[bidx], dX_aff[bidx], eta));
      ad = std::min(ad, max_step(Z[bidx], dZ_aff[bidx], eta));
    }
    double gap_aff = 0.0;
    for (int bidx = 0; bidx < nb; ++bidx) {
      gap_aff += frob_dot(X[bidx] + ap * dX_aff[bidx],
                          Z[bidx] + ad * dZ_aff[bidx]);
    }
    const double mu_aff = gap_aff / std::max(1, lay.barrier_degree);
    double sigma = mu > 0.0 ? std::pow(std::max(0.0, mu_aff / mu), 3.0) : 0.0;
    sigma = std::min(1.0, std::max(sigma, 1e-10));

    // Corrector: G_b = L^{-1}(sigma mu I - Lambda^2 - E) with the Mehrotra
    // cross term E in the scaled space.
    for (int bidx = 0; bidx < nb; ++bidx) {
      const Matrix dxt = symmetrized(scal[bidx].W_half_inv * dX_aff[bidx] *
                                     scal[bidx].W_half_inv);
      const Matrix dzt = symmetrized(scal[bidx].W_half * dZ_aff[bidx] *
                                     scal[bidx].W_half);
      const Matrix E = 0.5 * (dxt * dzt + dzt * dxt);
      const Matrix lam2 = scal[bidx].lambda_q *
                          scal[bidx].lambda_d.cwiseAbs2().asDiagonal() *
                          scal[bidx].lambda_q.transpose();
      const Matrix target =
          sigma * mu * Matrix::Identity(lay.dims[bidx], lay.dims[bidx]) -
          lam2 - E;
      G[bidx] = lyapunov_solve(scal[bidx], target);
    }
    Vector dy, dxf_step;
    std::vector<Matrix> dX, dZ;
    newton(G, dy, dxf_step, dX, dZ);

    ap = 1.0;
    ad = 1.0;
    for (int bidx = 0; bidx < nb; ++bidx) {
      ap = std::min(ap, max_step(X[bidx], dX[bidx], eta));
      ad = std::min(ad, max_step(Z[bidx], dZ[bidx], eta));
    }
    if (!(std::isfinite(ap) && std::isfinite(ad)) || ap <= 1e-14 ||
        ad <= 1e-14)
      break;

    for (int bidx = 0; bidx < nb; ++bidx) {
      X[bidx] = symmetrized(X[bidx] + ap * dX[bidx]);
      Z[bidx] = symmetrized(Z[bidx] + ad * dZ[bidx]);
    }
    xf += ap * dxf_step;
    y += ad * dy;
  }
  return finish(SolveStatus::NumericalFailure);
}

namespace {

const DenseInteriorPointBackend kDefaultBackend;

struct TiebreakRung {
  double corridor;  // optimality slack granted to the phase-1 objective
  double rel_gap;   // gap tolerance of the selection solve
};

/// The tie-break solve only selects a point on the optimal face; thin
/// corridors give the sharpest selection but can stall on hard instances, so
/// the rungs widen until one converges.
constexpr TiebreakRung kTiebreakLadder[] = {
    {1e-6, 1e-6}, {1e-6, 1e-4}, {1e-5, 1e-4}, {1e-4, 1e-4}};

SolveOptions tiebreak_options(const SolveOptions& options, double rel_gap) {
  SolveOptions p2 = options;
  p2.rel_gap = std::max(options.rel_gap, rel_gap);
  p2.max_iter = std::min(options.max_iter, 150);
  return p2;
}

/// Evaluate every model relation at the extracted point.
ResidualReport recompute_residuals(const NominalSdpModel& base,
                                   const std::vector<AffineLmi>& lmis,
                                   bool equality_bce, const Matrix& X,
                                   const Vector& model_vars) {
  ResidualReport rep;
  rep.bce = bce_residuals(base, X);
  double eq_viol = 0.0;
  if (equality_bce) eq_viol = rep.bce.cwiseAbs().maxCoeff();
  for (size_t i = 0; i < base.M.size(); ++i) {
    eq_viol = std::max(eq_viol,
                       std::abs(frob_dot(base.M[i], X) - base.M_rhs[i]));
  }
  rep.max_equality_violation = eq_viol;
  double min_eig = min_eigenvalue(X);
  for (const AffineLmi& block : lmis)
    min_eig = std::min(min_eig, min_eigenvalue(block.evaluate(model_vars)));
  rep.min_block_eigenvalue = min_eig;
  rep.objective_recomputed = frob_dot(base.F, X);
  return rep;
}

}  // namespace

Solution solve_nominal(const NominalSdpModel& model,
                       const SolveOptions& options,
                       const ConicBackend* backend) {
  if (backend == nullptr) backend = &kDefaultBackend;
  const ConicForm form = to_conic(model);
  ConicSolution raw = backend->solve(form.problem, options);

  Solution sol;
  sol.status = raw.status;
  sol.iterations = raw.iterations;
  if (raw.status != SolveStatus::Optimal) return sol;

  if (options.min_disclosure_tiebreak) {
    for (const TiebreakRung& rung : kTiebreakLadder) {
      const double slack = rung.corridor * (1.0 + std::abs(raw.objective));
      const ConicForm phase2 =
          with_min_disclosure_objective(form, raw.objective - slack);
      const ConicSolution raw2 = backend->solve(
          phase2.problem, tiebreak_options(options, rung.rel_gap));
      if (raw2.status == SolveStatus::Optimal) {
        raw.v = raw2.v;
        break;
      }
    }
  }

  const int sx = svec_size(2 * model.n);
  sol.X = symmetrized(smat(Vector(raw.v.head(sx)), 2 * model.n));
  sol.lambda = 0.0;
  sol.residuals = recompute_residuals(model, {}, true, sol.X,
                                      Vector(raw.v.head(sx)));
  // t is the model's optimal value; X is the tie-broken point on (or within
  // the slack band of) the optimal face.
  sol.t = raw.objective;
  return sol;
}

Solution solve_robust(const RobustSdpModel& model, const SolveOptions& options,
                      const ConicBackend* backend) {
  if (backend == nullptr) backend = &kDefaultBackend;
  if (model.degenerate) {
    // rho * eps* == 0: the robust model is the nominal model with lambda = 0
    // (and beta = 0 on the welfare path); solve it as such.
    Solution sol = solve_nominal(model.base, options, backend);
    if (model.has_beta && sol.status == SolveStatus::Optimal) sol.beta = 0.0;
    return sol;
  }
  const ConicForm form = to_conic(model);
  ConicSolution raw = backend->solve(form.problem, options);

  Solution sol;
  sol.status = raw.status;
  sol.iterations = raw.iterations;
  if (raw.status != SolveStatus::Optimal) return sol;

  if (options.min_disclosure_tiebreak) {
    for (const TiebreakRung& rung : kTiebreakLadder) {
      const double slack = rung.corridor * (1.0 + std::abs(raw.objective));
      const ConicForm phase2 =
          with_min_disclosure_objective(form, raw.objective - slack);
      const ConicSolution raw2 = backend->solve(
          phase2.problem, tiebreak_options(options, rung.rel_gap));
      if (raw2.status == SolveStatus::Optimal) {
        // Phase 2 appends one cone variable; the frees moved one slot right.
        const int cone1 = form.problem.cone_vars();
        Vector remapped = raw.v;
        remapped.head(cone1) = raw2.v.head(cone1);
        remapped.tail(form.problem.num_free) =
            raw2.v.tail(form.problem.num_free);
        raw.v = remapped;
        break;
      }
    }
  }

  const int sx = model.svec_dim;
  const int cone = form.problem.cone_vars();
  sol.X = symmetrized(smat(Vector(raw.v.head(sx)), 2 * model.base.n));
  Vector model_vars = Vector::Zero(model.var_count);
  model_vars.head(sx) = raw.v.head(sx);
  model_vars[model.idx_t] = raw.v[cone + form.map.t_free];
  if (form.map.lambda_free >= 0)
    model_vars[model.idx_lambda] = raw.v[cone + form.map.lambda_free];
  if (form.map.beta_free >= 0)
    model_vars[model.idx_beta] = raw.v[cone + form.map.beta_free];

  sol.t = raw.objective;
  sol.lambda = model_vars[model.idx_lambda];
  if (model.has_beta)
    sol.beta = form.map.beta_free >= 0 ? model_vars[model.idx_beta] : 0.0;
  sol.residuals = recompute_residuals(model.base, model.lmi_blocks,
                                      model.degenerate, sol.X, model_vars);
  return sol;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_num(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{}) raise(Errc::IoError, "bad number '" + s + "'");
  return v;
}

}  // namespace

std::string solution_to_text(const Solution& solution) {
  std::ostringstream os;
  const int dim = static_cast<int>(solution.X.rows());
  os << "infodesign-solution 1\n";
  os << "status " << to_string(solution.status) << "\n";
  os << "dim " << dim << "\n";
  os << "t " << fmt(solution.t) << "\n";
  os << "lambda " << fmt(solution.lambda) << "\n";
  if (solution.beta) os << "beta " << fmt(*solution.beta) << "\n";
  // One line per nonzero of the upper triangle: block row col value.
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i <= j; ++i) {
      if (solution.X(i, j) != 0.0)
        os << "x 0 " << i << ' ' << j << ' ' << fmt(solution.X(i, j)) << "\n";
    }
  }
  os << "end\n";
  return os.str();
}

Solution solution_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  Solution sol;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "infodesign-solution") {
      header = true;
    } else if (tag == "status") {
      std::string s;
      ls >> s;
      if (s == "Optimal") sol.status = SolveStatus::Optimal;
      else if (s == "Infeasible") sol.status = SolveStatus::Infeasible;
      else if (s == "Unbounded") sol.status = SolveStatus::Unbounded;
      else sol.status = SolveStatus::NumericalFailure;
    } else if (tag == "dim") {
      int d = 0;
      ls >> d;
      sol.X = Matrix::Zero(d, d);
    } else if (tag == "t") {
      std::string vstr;
      ls >> vstr;
      sol.t = parse_num(vstr);
    } else if (tag == "lambda") {
      std::string vstr;
      ls >> vstr;
      sol.lambda = parse_num(vstr);
    } else if (tag == "beta") {
      std::string vstr;
      ls >> vstr;
      sol.beta = parse_num(vstr);
    } else if (tag == "x") {
      int blk, i, j;
      std::string vstr;
      ls >> blk >> i >> j >> vstr;
      const double val = parse_num(vstr);
      sol.X(i, j) = val;
      sol.X(j, i) = val;
    } else if (tag == "end") {
      break;
    } else {
      raise(Errc::IoError, "solution parse: unknown tag '" + tag + "'");
    }
  }
  if (!header) raise(Errc::IoError, "solution parse: missing header");
  return sol;
}

}  // namespace infodesign
