#pragma once

#include <cmath>
#include <future>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "crt/assembly.hpp"
#include "crt/half_mesh.hpp"
#include "crt/mesh.hpp"
#include "crt/reconstruction.hpp"
#include "crt/time_integration.hpp"

namespace crt {

struct TestCase {
  std::string name;
  BBox bbox;
  VelocityField field;
  ScalarField u0;
  SpaceTimeField u_in;    // null when has_inflow is false
  SpaceTimeField exact;   // null when no closed form is available
  double t_final = 1.0;
  std::optional<double> cfl_override;
  bool has_inflow = false;
  double data_min = 0.0;  // analytic range of u0 (and u_in)
  double data_max = 1.0;
};

inline TransportProblem to_problem(const TestCase& tc, const TriMesh& mesh) {
  TransportProblem p;
  p.mesh = &mesh;
  p.field = tc.field;
  p.u0 = tc.u0;
  p.u_in = tc.u_in;
  p.has_inflow = tc.has_inflow;
  p.data_min = tc.data_min;
  p.data_max = tc.data_max;
  return p;
}

namespace cases {

constexpr double kPi = 3.14159265358979323846;

inline TestCase smooth_rotation() {
  TestCase tc;
  tc.name = "smooth-rotation";
  tc.bbox = {-1.0, -1.0, 1.0, 1.0};
  tc.field = {[](const Vec2& x, double) {
                return Vec2{-2.0 * kPi * x.y, 2.0 * kPi * x.x};
              },
              [](const Vec2& x, double) {
                return -kPi * (x.x * x.x + x.y * x.y);
              },
              true, false, false};
  const auto u0 = [](const Vec2& x) {
    const double dx = x.x - 0.3;
    const double dy = x.y;
    const double r0 = 0.25;
    return 0.5 * (1.0 - std::tanh((dx * dx + dy * dy) / (r0 * r0) - 1.0));
  };
  tc.u0 = u0;
  tc.exact = [u0](const Vec2& x, double t) {
    const double c = std::cos(2.0 * kPi * t), s = std::sin(2.0 * kPi * t);
    return u0(Vec2{x.x * c + x.y * s, -x.x * s + x.y * c});
  };
  tc.t_final = 1.0;
  tc.data_min = 0.0;
  tc.data_max = 0.5 * (1.0 + std::tanh(1.0));
  return tc;
}

inline TestCase swirling() {
  TestCase tc;
  tc.name = "swirling";
  tc.bbox = {0.0, 0.0, 1.0, 1.0};
  tc.field = {[](const Vec2& x, double t) {
                const double sx = std::sin(kPi * x.x), cx = std::cos(kPi * x.x);
                const double sy = std::sin(kPi * x.y), cy = std::cos(kPi * x.y);
                const double ct = std::cos(kPi * t);
                return Vec2{-2.0 * sy * cy * sx * sx * ct,
                            2.0 * sx * cx * sy * sy * ct};
              },
              [](const Vec2& x, double t) {
                const double sx = std::sin(kPi * x.x);
                const double sy = std::sin(kPi * x.y);
                return -sx * sx * sy * sy * std::cos(kPi * t) / kPi;
              },
              true, true, true};
  const auto u0 = [](const Vec2& x) {
    return std::sin(2.0 * kPi * x.x) * std::sin(2.0 * kPi * x.y);
  };
  tc.u0 = u0;
  // The flow returns to the identity at every integer time; this closed
  // form is only valid there (it is used at t_final = 1).
  tc.exact = [u0](const Vec2& x, double) { return u0(x); };
  tc.t_final = 1.0;
  tc.data_min = -1.0;
  tc.data_max = 1.0;
  return tc;
}

inline TestCase inflow() {
  TestCase tc;
  tc.name = "inflow";
  tc.bbox = {0.0, 0.0, 1.0, 1.0};
  tc.field = {[](const Vec2&, double) { return Vec2{1.0, 1.0}; },
              [](const Vec2& x, double) { return x.y - x.x; }, true, false,
              false};
  tc.u0 = [](const Vec2& x) { return std::sin(kPi * (x.x + x.y)); };
  tc.exact = [](const Vec2& x, double t) {
    return std::sin(kPi * (x.x + x.y - 2.0 * t));
  };
  tc.u_in = tc.exact;
  tc.has_inflow = true;
  tc.t_final = 1.0;
  tc.data_min = -1.0;
  tc.data_max = 1.0;
  return tc;
}

inline TestCase solid_body() {
  TestCase tc;
  tc.name = "solid-body";
  tc.bbox = {-1.0, -1.0, 1.0, 1.0};
  tc.field = {[](const Vec2& x, double) {
                return Vec2{-2.0 * kPi * x.y, 2.0 * kPi * x.x};
              },
              [](const Vec2& x, double) {
                return -kPi * (x.x * x.x + x.y * x.y);
              },
              true, false, false};
  const auto u0 = [](const Vec2& x) {
    const double r0 = 0.3;
    const double rd = std::hypot(x.x, x.y - 0.5);
    if (rd <= r0 && (std::abs(x.x) >= 0.05 || x.y >= 0.7)) return 1.0;
    const double rc = std::hypot(x.x, x.y + 0.5);
    if (rc <= r0) return 1.0 - rc / r0;
    const double rh = std::hypot(x.x + 0.5, x.y);
    if (rh <= r0)
      return 0.25 * (1.0 + std::cos(kPi * std::min(rh / r0, 1.0)));
    return 0.0;
  };
  tc.u0 = u0;
  tc.exact = [u0](const Vec2& x, double t) {
    const double c = std::cos(2.0 * kPi * t), s = std::sin(2.0 * kPi * t);
    return u0(Vec2{x.x * c + x.y * s, -x.x * s + x.y * c});
  };
  tc.t_final = 1.0;
  tc.data_min = 0.0;
  tc.data_max = 1.0;
  return tc;
}

inline TestCase non_solenoidal() {
  TestCase tc;
  tc.name = "non-solenoidal";
  tc.bbox = {0.0, 0.0, 1.0, 1.0};
  const double sigma = -0.6, omega = 4.0, cx = 0.5, cy = 0.5;
  tc.field = {[=](const Vec2& x, double) {
                return Vec2{sigma * (x.x - cx) - omega * (x.y - cy),
                            omega * (x.x - cx) + sigma * (x.y - cy)};
              },
              nullptr, false, false, false};
  const auto u0 = [](const Vec2& x) {
    const double dx = x.x - 0.72, dy = x.y - 0.50;
    return std::exp(-120.0 * (dx * dx + dy * dy)) * std::cos(10.0 * kPi * x.x);
  };
  tc.u0 = u0;
  tc.exact = [=](const Vec2& x, double t) {
    const double e = std::exp(-sigma * t);
    const double c = std::cos(omega * t), s = std::sin(omega * t);
    const double x0 = cx + e * (c * (x.x - cx) + s * (x.y - cy));
    const double y0 = cy + e * (-s * (x.x - cx) + c * (x.y - cy));
    return u0(Vec2{x0, y0});
  };
  tc.u_in = tc.exact;
  tc.has_inflow = true;
  tc.t_final = 0.5;
  tc.cfl_override = 0.1;
  tc.data_min = -1.0;
  tc.data_max = 1.0;
  return tc;
}

}  // namespace cases

inline std::vector<TestCase> case_library() {
  return {cases::smooth_rotation(), cases::swirling(), cases::inflow(),
          cases::solid_body(), cases::non_solenoidal()};
}

inline TestCase find_case(const std::string& name) {
  for (TestCase& tc : case_library())
    if (tc.name == name) return tc;
  throw std::invalid_argument("unknown case: " + name);
}

struct ConvergenceRow {
  double h = 0.0;
  double l2 = 0.0;
  double rate = 0.0;       // log2(e_{2h} / e_h), defined from row 2 on
  double linf = 0.0;
  double linf_rate = 0.0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> cr;
  std::vector<ConvergenceRow> reconstruction;
};

inline void fill_rates(std::vector<ConvergenceRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    rows[i].rate = std::log2(rows[i - 1].l2 / rows[i].l2);
    if (rows[i].linf > 0.0)
      rows[i].linf_rate = std::log2(rows[i - 1].linf / rows[i].linf);
  }
}

// One run per mesh size; the reported h is the grid spacing of the
// uniform n x n mesh. Reconstruction boundary vertices take the exact
// solution at the final time.
inline ConvergenceStudy convergence_study(const TestCase& tc,
                                          SchemeConfig config,
                                          const std::vector<int>& sizes,
                                          int threads = 1) {
  if (sizes.size() < 2)
    throw std::invalid_argument("convergence_study: need at least 2 sizes");
  config.t_final = tc.t_final;
  if (tc.cfl_override) config.cfl_target = *tc.cfl_override;

  auto one_size = [&](int n) {
    const TriMesh mesh = build_uniform_mesh(tc.bbox, n);
    const TransportProblem problem = to_problem(tc, mesh);
    const RunResult res = run(problem, config);

    const ErrorReport cr_err = error_norms(res.u, tc.exact, tc.t_final);
    ConvergenceRow row;
    row.h = tc.bbox.width() / n;
    row.l2 = cr_err.l2;
    row.linf = cr_err.linf;

    const HalfMesh half = refine_half(mesh);
    const ScalarField bd = [&](const Vec2& x) {
      return tc.exact(x, tc.t_final);
    };
    const P1HalfMeshFunction rec =
        reconstruct(res.u, half, tc.exact ? &bd : nullptr);
    const ErrorReport rec_err = error_norms(rec, tc.exact, tc.t_final);
    ConvergenceRow rrow;
    rrow.h = row.h;
    rrow.l2 = rec_err.l2;
    rrow.linf = rec_err.linf;
    return std::pair<ConvergenceRow, ConvergenceRow>{row, rrow};
  };

  ConvergenceStudy study;
  study.cr.resize(sizes.size());
  study.reconstruction.resize(sizes.size());
  if (threads <= 1) {
    for (std::size_t i = 0; i < sizes.size(); ++i)
      std::tie(study.cr[i], study.reconstruction[i]) = one_size(sizes[i]);
  } else {
    for (std::size_t base = 0; base < sizes.size();
         base += static_cast<std::size_t>(threads)) {
      std::vector<std::future<std::pair<ConvergenceRow, ConvergenceRow>>> fut;
      const std::size_t end =
          std::min(sizes.size(), base + static_cast<std::size_t>(threads));
      for (std::size_t i = base; i < end; ++i)
        fut.push_back(std::async(std::launch::async, one_size, sizes[i]));
      for (std::size_t i = base; i < end; ++i)
        std::tie(study.cr[i], study.reconstruction[i]) = fut[i - base].get();
    }
  }
  fill_rates(study.cr);
  fill_rates(study.reconstruction);
  return study;
}

// Worst excursion of the per-step DOF extrema outside [lo, hi].
inline double dmp_audit(const RunResult& res, double lo, double hi) {
  double worst = 0.0;
  for (double v : res.min_history) worst = std::max(worst, lo - v);
  for (double v : res.max_history) worst = std::max(worst, v - hi);
  return worst;
}

}  // namespace crt
