// Copyright (c) the infodesign contributors.
// SPDX-License-Identifier: Apache-2.0

#include "infodesign/conic.hpp"

#include <charconv>
#include <sstream>

namespace infodesign {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{})
    raise(Errc::IoError, "conic parse: bad number '" + s + "'");
  return v;
}

}  // namespace

ConicForm to_conic(const NominalSdpModel& model) {
  const int n = model.n;
  const int sx = svec_size(2 * n);
  ConicForm form;
  form.map.n = n;
  ConicProblem& p = form.problem;
  p.block_dims = {2 * n};
  p.num_free = 0;
  p.objective = svec(model.F);
  const int m = model.equality_count();
  p.eq_lhs = Matrix::Zero(m, sx);
  p.eq_rhs = Vector::Zero(m);
  int row = 0;
  for (const Matrix& r : model.R) {
    p.eq_lhs.row(row) = svec(r).transpose();
    p.eq_rhs[row] = 0.0;
    ++row;
  }
  for (size_t i = 0; i < model.M.size(); ++i) {
    p.eq_lhs.row(row) = svec(model.M[i]).transpose();
    p.eq_rhs[row] = model.M_rhs[i];
    ++row;
  }
  return form;
}

ConicForm to_conic(const RobustSdpModel& model) {
  const int n = model.base.n;
  const int sx = model.svec_dim;
  ConicForm form;
  form.map.n = n;
  form.map.degenerate_robust = model.degenerate;
  ConicProblem& p = form.problem;

  p.block_dims.push_back(2 * n);
  for (const AffineLmi& block : model.lmi_blocks)
    p.block_dims.push_back(block.dim);
  // Only variables referenced by some constraint may enter the problem; in
  // the degenerate (rho * eps* == 0) case lambda and beta are fixed to zero.
  const bool beta_used = model.has_beta && !model.degenerate;
  p.free_names = {"t"};
  form.map.t_free = 0;
  if (!model.degenerate) {
    p.free_names.push_back("lambda");
    form.map.lambda_free = 1;
  }
  if (beta_used) {
    p.free_names.push_back("beta");
    form.map.beta_free = 2;
  }
  p.num_free = static_cast<int>(p.free_names.size());

  const int nv = p.total_vars();
  const int cone = p.cone_vars();

  // Model variable index -> conic variable index. Model order is
  // [svec(X), t, lambda, beta]; slack blocks sit between X and the frees.
  auto conic_index = [&](int model_index) {
    if (model_index < sx) return model_index;
    return cone + (model_index - sx);
  };

  int m = static_cast<int>(model.base.M.size());
  if (model.degenerate) m += n;
  for (const AffineLmi& block : model.lmi_blocks) m += svec_size(block.dim);

  p.eq_lhs = Matrix::Zero(m, nv);
  p.eq_rhs = Vector::Zero(m);
  p.objective = Vector::Zero(nv);
  p.objective[conic_index(model.idx_t)] = 1.0;

  int row = 0;
  if (model.degenerate) {
    for (const Matrix& r : model.base.R) {
      p.eq_lhs.row(row).head(sx) = svec(r).transpose();
      ++row;
    }
  }
  for (size_t i = 0; i < model.base.M.size(); ++i) {
    p.eq_lhs.row(row).head(sx) = svec(model.base.M[i]).transpose();
    p.eq_rhs[row] = model.base.M_rhs[i];
    ++row;
  }
  // Slack coupling: svec(S_b) - sum_i v_i svec(C_i) = svec(C0), entrywise.
  int block_index = 1;
  for (const AffineLmi& block : model.lmi_blocks) {
    const int off = p.block_offset(block_index);
    const int sb = svec_size(block.dim);
    const Vector c0 = svec(block.constant);
    for (int a = 0; a < sb; ++a) {
      p.eq_lhs(row + a, off + a) = 1.0;
      p.eq_rhs[row + a] = c0[a];
    }
    for (const auto& [index, coeff] : block.coeffs) {
      const Vector cv = svec(coeff);
      const int col = conic_index(index);
      for (int a = 0; a < sb; ++a) {
        if (cv[a] != 0.0) p.eq_lhs(row + a, col) -= cv[a];
      }
    }
    row += sb;
    ++block_index;
  }
  return form;
}

ConicForm with_min_disclosure_objective(const ConicForm& form, double floor) {
  ConicForm out = form;
  ConicProblem& p = out.problem;
  const ConicProblem& src = form.problem;
  const int old_cone = src.cone_vars();
  const int old_total = src.total_vars();
  const int m = src.equality_count();

  p.block_dims.push_back(1);
  // Reindex: the new 1x1 slack sits after the existing cone blocks, before
  // the free variables.
  const int nv = old_total + 1;
  p.eq_lhs = Matrix::Zero(m + 1, nv);
  p.eq_rhs = Vector::Zero(m + 1);
  p.eq_lhs.block(0, 0, m, old_cone) = src.eq_lhs.leftCols(old_cone);
  p.eq_lhs.block(0, old_cone + 1, m, src.num_free) =
      src.eq_lhs.rightCols(src.num_free);
  p.eq_rhs.head(m) = src.eq_rhs;
  // objective_old . v - s = floor
  p.eq_lhs.row(m).head(old_cone) = src.objective.head(old_cone).transpose();
  p.eq_lhs.row(m).tail(src.num_free) =
      src.objective.tail(src.num_free).transpose();
  p.eq_lhs(m, old_cone) = -1.0;
  p.eq_rhs[m] = floor;

  // minimize tr(action block of X) = maximize -sum of its diagonal svec
  // entries.
  p.objective = Vector::Zero(nv);
  const int n = form.map.n;
  const int x_off = src.block_offset(form.map.x_block);
  for (int i = 0; i < n; ++i)
    p.objective[x_off + svec_index(i, i)] = -1.0;
  return out;
}

std::string problem_to_text(const ConicProblem& problem) {
  std::ostringstream os;
  os << "infodesign-conic 1\n";
  os << "kind problem\n";
  os << "nblocks " << problem.block_dims.size() << "\n";
  os << "blockdims";
  for (int d : problem.block_dims) os << ' ' << d;
  os << "\n";
  os << "nfree " << problem.num_free << "\n";
  os << "nrows " << problem.equality_count() << "\n";
  for (int i = 0; i < problem.objective.size(); ++i) {
    if (problem.objective[i] != 0.0)
      os << "obj " << i << ' ' << format_double(problem.objective[i]) << "\n";
  }
  for (int r = 0; r < problem.eq_lhs.rows(); ++r) {
    for (int col = 0; col < problem.eq_lhs.cols(); ++col) {
      if (problem.eq_lhs(r, col) != 0.0)
        os << "a " << r << ' ' << col << ' '
           << format_double(problem.eq_lhs(r, col)) << "\n";
    }
  }
  for (int r = 0; r < problem.eq_rhs.size(); ++r) {
    if (problem.eq_rhs[r] != 0.0)
      os << "rhs " << r << ' ' << format_double(problem.eq_rhs[r]) << "\n";
  }
  os << "end\n";
  return os.str();
}

ConicProblem problem_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  ConicProblem p;
  bool header_seen = false;
  int nblocks = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "infodesign-conic") {
      header_seen = true;
    } else if (tag == "kind") {
      std::string kind;
      ls >> kind;
      if (kind != "problem")
        raise(Errc::IoError, "conic parse: expected kind problem");
    } else if (tag == "nblocks") {
      ls >> nblocks;
    } else if (tag == "blockdims") {
      for (int i = 0; i < nblocks; ++i) {
        int d = 0;
        ls >> d;
        p.block_dims.push_back(d);
      }
    } else if (tag == "nfree") {
      ls >> p.num_free;
    } else if (tag == "nrows") {
      int m = 0;
      ls >> m;
      p.objective = Vector::Zero(p.total_vars());
      p.eq_lhs = Matrix::Zero(m, p.total_vars());
      p.eq_rhs = Vector::Zero(m);
    } else if (tag == "obj") {
      int i;
      std::string v;
      ls >> i >> v;
      p.objective[i] = parse_double(v);
    } else if (tag == "a") {
      int r, col;
      std::string v;
      ls >> r >> col >> v;
      p.eq_lhs(r, col) = parse_double(v);
    } else if (tag == "rhs") {
      int r;
      std::string v;
      ls >> r >> v;
      p.eq_rhs[r] = parse_double(v);
    } else if (tag == "end") {
      break;
    } else {
      raise(Errc::IoError, "conic parse: unknown tag '" + tag + "'");
    }
  }
  if (!header_seen) raise(Errc::IoError, "conic parse: missing header");
  return p;
}

}  // namespace infodesign
