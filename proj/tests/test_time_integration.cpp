#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "crt/benchmarks.hpp"
#include "crt/time_integration.hpp"

using namespace crt;

namespace {

std::vector<double> random_values(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> u(n);
  for (double& v : u) v = unif(rng);
  return u;
}

}  // namespace

TEST_CASE("ssprk33 matches the dense Shu-Osher combination of Euler stages") {
  const TestCase tc = find_case("smooth-rotation");
  const TriMesh mesh = build_uniform_mesh(tc.bbox, 4);
  TransportProblem problem = to_problem(tc, mesh);
  SchemeConfig config;
  config.limiter = Limiter::Galerkin;
  StageOperator op(problem, config);
  const MassVector m = mass_vector(mesh);
  const SparseMatrix S = assemble_system(mesh, tc.field, nullptr, 0.0).S;

  const double dt = 0.5 * op.cfl_bound(0.0);
  const std::vector<double> u = random_values(mesh.num_edges(), 3);
  const std::vector<double> got = ssprk33_step(op, u, 0.0, dt);

  auto euler = [&](const std::vector<double>& v) {
    const std::vector<double> sv = S.multiply(v);
    std::vector<double> next(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      next[i] = v[i] - dt / m[i] * sv[i];
    return next;
  };
  const std::vector<double> y1 = euler(u);
  const std::vector<double> ey1 = euler(y1);
  std::vector<double> y2(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    y2[i] = 0.75 * u[i] + 0.25 * ey1[i];
  const std::vector<double> ey2 = euler(y2);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double expect = (u[i] + 2.0 * ey2[i]) / 3.0;
    CHECK(std::abs(got[i] - expect) <= 1e-14 * (1.0 + std::abs(expect)));
  }
}

TEST_CASE("zero velocity keeps the solution fixed with a known step count") {
  TestCase tc = find_case("swirling");
  tc.field = {[](const Vec2&, double) { return Vec2{0.0, 0.0}; },
              [](const Vec2&, double) { return 0.0; }, true, true, false};
  const TriMesh mesh = build_uniform_mesh(tc.bbox, 4);
  const TransportProblem problem = to_problem(tc, mesh);
  SchemeConfig config;
  config.limiter = Limiter::FctLocal;
  config.t_final = 1.0;
  config.dt_initial = 0.15;
  const RunResult res = run(problem, config);
  CHECK(res.step_count == 7);  // ceil(1.0 / 0.15)
  CHECK(res.t_end == 1.0);
  CHECK(res.rejected_stage_count == 0);
  const CRFunction u0 = cr_interpolate(tc.u0, mesh);
  // (u + 2u)/3 in the RK combination costs at most an ulp per step.
  for (int i = 0; i < mesh.num_edges(); ++i)
    CHECK(res.u.dof_values[i] ==
          doctest::Approx(u0.dof_values[i]).epsilon(1e-13));
}

TEST_CASE("an oversized initial step is rejected and reduced") {
  const TestCase tc = find_case("smooth-rotation");
  const TriMesh mesh = build_uniform_mesh(tc.bbox, 6);
  const TransportProblem problem = to_problem(tc, mesh);
  SchemeConfig config;
  config.limiter = Limiter::LowOrder;
  StageOperator probe(problem, config);
  const double bound = probe.cfl_bound(0.0);
  config.t_final = 2.0 * bound;  // keeps the clipped first step above the bound
  config.dt_initial = 10.0 * bound;
  const RunResult res = run(problem, config);
  CHECK(res.rejected_stage_count > 0);
  CHECK(res.t_end == config.t_final);
  for (double v : res.u.dof_values) CHECK(std::isfinite(v));
}

TEST_CASE("autonomous fields reuse the assembled operator bit-identically") {
  const TestCase tc = find_case("smooth-rotation");
  const TriMesh mesh = build_uniform_mesh(tc.bbox, 5);
  const TransportProblem problem = to_problem(tc, mesh);
  SchemeConfig config;
  config.limiter = Limiter::LowOrder;
  StageOperator op(problem, config);
  const double dt = 0.5 * op.cfl_bound(0.0);
  const std::vector<double> u = random_values(mesh.num_edges(), 17);
  const std::vector<double> a = op.apply(u, 0.0, dt);
  const std::vector<double> b = op.apply(u, 0.37, dt);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("run stops exactly at t_final and logs per-step history") {
  const TestCase tc = find_case("swirling");
  const TriMesh mesh = build_uniform_mesh(tc.bbox, 6);
  const TransportProblem problem = to_problem(tc, mesh);
  SchemeConfig config;
  config.limiter = Limiter::FctGlobal;
  config.t_final = 0.13;
  const RunResult res = run(problem, config);
  CHECK(res.t_end == 0.13);
  CHECK(res.step_count > 0);
  CHECK(static_cast<int>(res.mass_history.size()) == res.step_count);
  CHECK(static_cast<int>(res.min_history.size()) == res.step_count);
  CHECK(static_cast<int>(res.max_history.size()) == res.step_count);
  for (int s = 0; s < res.step_count; ++s)
    CHECK(res.min_history[s] <= res.max_history[s]);
}

TEST_CASE("a non-positive horizon is rejected") {
  const TestCase tc = find_case("swirling");
  const TriMesh mesh = build_uniform_mesh(tc.bbox, 3);
  const TransportProblem problem = to_problem(tc, mesh);
  SchemeConfig config;
  config.t_final = 0.0;
  CHECK_THROWS_AS(run(problem, config), std::invalid_argument);
}

TEST_CASE("global-bounds run respects the data range at every step") {
  const TestCase tc = find_case("solid-body");
  const TriMesh mesh = build_uniform_mesh(tc.bbox, 10);
  const TransportProblem problem = to_problem(tc, mesh);
  SchemeConfig config;
  config.limiter = Limiter::FctGlobal;
  config.t_final = 0.1;
  const RunResult res = run(problem, config);
  CHECK(dmp_audit(res, tc.data_min, tc.data_max) <= 1e-12);
}
