#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "crt/benchmarks.hpp"

using namespace crt;

namespace {

// Classical RK4 trace of dx/dt = beta(x, t) from t0 to t1.
Vec2 trace(const VelocityField& field, Vec2 x, double t0, double t1,
           int steps) {
  const double dt = (t1 - t0) / steps;
  for (int s = 0; s < steps; ++s) {
    const double t = t0 + s * dt;
    const Vec2 k1 = field.beta(x, t);
    const Vec2 k2 = field.beta(x + k1 * (0.5 * dt), t + 0.5 * dt);
    const Vec2 k3 = field.beta(x + k2 * (0.5 * dt), t + 0.5 * dt);
    const Vec2 k4 = field.beta(x + k3 * dt, t + dt);
    x = x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
  }
  return x;
}

Vec2 random_point(const BBox& box, std::mt19937& rng, double margin) {
  std::uniform_real_distribution<double> ux(box.xmin + margin,
                                            box.xmax - margin);
  std::uniform_real_distribution<double> uy(box.ymin + margin,
                                            box.ymax - margin);
  return Vec2{ux(rng), uy(rng)};
}

}  // namespace

TEST_CASE("closed-form solutions reduce to the initial data at t = 0") {
  std::mt19937 rng(4);
  for (const TestCase& tc : case_library()) {
    REQUIRE(tc.exact);
    for (int trial = 0; trial < 30; ++trial) {
      const Vec2 x = random_point(tc.bbox, rng, 0.0);
      CHECK(std::abs(tc.exact(x, 0.0) - tc.u0(x)) <= 1e-12);
    }
  }
}

TEST_CASE("closed forms are constant along traced characteristics") {
  std::mt19937 rng(8);
  for (const char* name : {"smooth-rotation", "inflow", "non-solenoidal"}) {
    const TestCase tc = find_case(name);
    for (int trial = 0; trial < 10; ++trial) {
      const Vec2 y0 = random_point(tc.bbox, rng, 0.35 * tc.bbox.width());
      const double T = 0.21;
      const Vec2 yT = trace(tc.field, y0, 0.0, T, 4000);
      CHECK(std::abs(tc.exact(yT, T) - tc.u0(y0)) <= 1e-6);
    }
  }
}

TEST_CASE("the swirling flow map returns to the identity at t = 1") {
  const TestCase tc = find_case("swirling");
  std::mt19937 rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec2 y0 = random_point(tc.bbox, rng, 0.1);
    const Vec2 y1 = trace(tc.field, y0, 0.0, 1.0, 8000);
    CHECK(std::hypot(y1.x - y0.x, y1.y - y0.y) <= 1e-5);
  }
}

TEST_CASE("stream functions generate the advertised velocities") {
  std::mt19937 rng(23);
  const double eps = 1e-6;
  for (const TestCase& tc : case_library()) {
    if (!tc.field.stream) continue;
    for (int trial = 0; trial < 20; ++trial) {
      const Vec2 x = random_point(tc.bbox, rng, 0.05);
      const double t = 0.3;
      const double dpsy = (tc.field.stream(Vec2{x.x, x.y + eps}, t) -
                           tc.field.stream(Vec2{x.x, x.y - eps}, t)) /
                          (2.0 * eps);
      const double dpsx = (tc.field.stream(Vec2{x.x + eps, x.y}, t) -
                           tc.field.stream(Vec2{x.x - eps, x.y}, t)) /
                          (2.0 * eps);
      const Vec2 b = tc.field.beta(x, t);
      CHECK(std::abs(dpsy - b.x) <= 1e-7);
      CHECK(std::abs(-dpsx - b.y) <= 1e-7);
    }
  }
}

TEST_CASE("case library flags match the declared scenarios") {
  CHECK(case_library().size() == 5);
  CHECK(find_case("swirling").field.time_dependent);
  CHECK(find_case("swirling").field.impermeable);
  CHECK(!find_case("swirling").has_inflow);
  CHECK(find_case("inflow").has_inflow);
  CHECK(find_case("non-solenoidal").has_inflow);
  CHECK(!find_case("non-solenoidal").field.divergence_free);
  CHECK(!find_case("non-solenoidal").field.stream);
  CHECK(find_case("smooth-rotation").field.divergence_free);
  CHECK_THROWS_AS(find_case("no-such-case"), std::invalid_argument);
}

TEST_CASE("rate extraction is exact for synthetic error sequences") {
  std::vector<ConvergenceRow> rows(3);
  rows[0].h = 0.4;
  rows[0].l2 = 0.4;
  rows[0].linf = 0.8;
  rows[1].h = 0.2;
  rows[1].l2 = 0.1;
  rows[1].linf = 0.4;
  rows[2].h = 0.1;
  rows[2].l2 = 0.025;
  rows[2].linf = 0.2;
  fill_rates(rows);
  CHECK(rows[0].rate == 0.0);
  CHECK(rows[1].rate == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(rows[2].rate == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(rows[1].linf_rate == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rows[2].linf_rate == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("dmp audit reports the worst excursion outside the range") {
  RunResult res;
  res.min_history = {0.1, -0.2, 0.0};
  res.max_history = {0.9, 1.3, 1.0};
  CHECK(dmp_audit(res, 0.0, 1.0) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(dmp_audit(res, -0.5, 1.5) == 0.0);
}

TEST_CASE("convergence studies refine and shrink the error") {
  TestCase tc = find_case("inflow");
  tc.t_final = 0.25;
  SchemeConfig config;
  config.limiter = Limiter::FctGlobal;
  const ConvergenceStudy study = convergence_study(tc, config, {4, 8}, 2);
  REQUIRE(study.cr.size() == 2);
  REQUIRE(study.reconstruction.size() == 2);
  CHECK(study.cr[0].h == doctest::Approx(0.25));
  CHECK(study.cr[1].h == doctest::Approx(0.125));
  CHECK(study.cr[0].l2 > study.cr[1].l2);
  CHECK(study.cr[1].rate > 0.0);
  CHECK(study.reconstruction[1].l2 < study.reconstruction[0].l2);
  CHECK_THROWS_AS(convergence_study(tc, config, {4}), std::invalid_argument);
}
