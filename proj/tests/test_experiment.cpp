// Copyright (c) the infodesign contributors.
// SPDX-License-Identifier: Apache-2.0

#include "infodesign/experiment.hpp"

#include <doctest.h>

using namespace infodesign;

namespace {

const char* kSmallConfig = R"json({
  "n": 4,
  "objective": "agreement",
  "eps_diag": 0.03,
  "eps_offdiag": 0.001,
  "rho_grid": [0.0, 1.0],
  "eps_grid": [0.03, 0.1],
  "eps_axis": "diag",
  "seed": 424242
})json";

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("defaults fill in") {
    const ExperimentConfig c = parse_config("{}");
    CHECK(c.n == 4);
    CHECK(c.h_diag == 1.0);
    CHECK(c.sigma_diag == 4.0);
    CHECK(c.objective == "agreement");
    CHECK(c.rho_grid.size() == 11);
    CHECK(effective_eps_grid(c).size() == 10);
  }
  SUBCASE("unknown field is an error naming the field") {
    try {
      parse_config(R"({"epsdiag": 0.1})");
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::ConfigError);
      CHECK(std::string(e.what()).find("epsdiag") != std::string::npos);
    }
  }
  SUBCASE("non-PSD Sigma is diagnosed") {
    try {
      parse_config(R"({"n": 2, "Sigma": [1, 2, 2, 1]})");
      CHECK(false);
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("Sigma not PSD") != std::string::npos);
    }
  }
  SUBCASE("unsorted grid rejected") {
    CHECK_THROWS_AS(parse_config(R"({"rho_grid": [1.0, 0.5]})"), Error);
  }
  SUBCASE("malformed JSON rejected") {
    CHECK_THROWS_AS(parse_config("{"), Error);
  }
}

TEST_CASE("config round trip is semantically identical") {
  const ExperimentConfig a = parse_config(kSmallConfig);
  const ExperimentConfig b = parse_config(serialize_config(a));
  CHECK(a.n == b.n);
  CHECK(a.h_diag == b.h_diag);
  CHECK(a.h_offdiag == b.h_offdiag);
  CHECK(a.sigma_diag == b.sigma_diag);
  CHECK(a.sigma_offdiag == b.sigma_offdiag);
  CHECK(a.mu == b.mu);
  CHECK(a.objective == b.objective);
  CHECK(a.eps_diag == b.eps_diag);
  CHECK(a.eps_offdiag == b.eps_offdiag);
  CHECK(a.rho_grid == b.rho_grid);
  CHECK(effective_eps_grid(a) == effective_eps_grid(b));
  CHECK(a.eps_axis == b.eps_axis);
  CHECK(a.feas_tol == b.feas_tol);
  CHECK(a.rel_gap == b.rel_gap);
  CHECK(a.max_iter == b.max_iter);
  CHECK(a.seed == b.seed);
  CHECK(a.mc_count == b.mc_count);
  // And a second round trip is byte-identical.
  CHECK(serialize_config(a) == serialize_config(b));
}

TEST_CASE("csv header is frozen") {
  CHECK(std::string(kSweepCsvHeader) ==
        "rho,eps_value,eps_axis,status,objective_t,frob_objective,dist_no,"
        "dist_no_normalized,dist_full,lambda,bce_residual_max,solve_ms,seed");
}

TEST_CASE("sweep determinism and shape") {
  const ExperimentConfig config = parse_config(kSmallConfig);
  const SweepResult first = run_sweep(config, 1);
  const std::string csv_a = sweep_to_csv(first, config);
  const SweepResult second = run_sweep(config, 2);
  const std::string csv_b = sweep_to_csv(second, config);
  CHECK(csv_a == csv_b);  // identical bytes, independent of job count

  REQUIRE(first.points.size() == 4);
  // Row-major order over (rho, eps).
  CHECK(first.points[0].rho == 0.0);
  CHECK(first.points[0].eps_value == 0.03);
  CHECK(first.points[1].rho == 0.0);
  CHECK(first.points[1].eps_value == 0.1);
  CHECK(first.points[3].rho == 1.0);
  for (const PointResult& p : first.points)
    CHECK(p.status == SolveStatus::Optimal);
  // The heavily perturbed corner discloses more than the nominal corner.
  CHECK(first.points[3].dist.d_no_normalized >
        first.points[0].dist.d_no_normalized);
  // Deterministic timing mode reports zero milliseconds.
  CHECK(first.points[0].solve_ms == 0.0);
}

TEST_CASE("single point matches the sweep cell") {
  const ExperimentConfig config = parse_config(kSmallConfig);
  const PointResult cell =
      run_point(config, 1.0, 0.1, split_seed(config.seed, 3));
  const SweepResult sweep = run_sweep(config, 1);
  CHECK(cell.solution.t ==
        doctest::Approx(sweep.points[3].solution.t).epsilon(1e-12));
  CHECK(cell.dist.d_no_normalized ==
        doctest::Approx(sweep.points[3].dist.d_no_normalized).epsilon(1e-12));
}
