#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "crt/assembly.hpp"
#include "crt/cr_space.hpp"
#include "crt/errors.hpp"
#include "crt/limiting.hpp"

namespace crt {

enum class ViscosityKind { Minimum, Bilinear };
enum class Limiter { Galerkin, LowOrder, Greedy, FctLocal, FctGlobal };

struct SchemeConfig {
  ViscosityKind viscosity_kind = ViscosityKind::Minimum;
  Limiter limiter = Limiter::FctGlobal;
  double cfl_target = 0.5;
  double reduction_factor = 0.5;
  double t_final = 1.0;
  std::optional<double> dt_initial;  // auto when unset
};

// A transport problem ready for time integration.
struct TransportProblem {
  const TriMesh* mesh = nullptr;
  VelocityField field;
  ScalarField u0;
  SpaceTimeField u_in;  // boundary data; consulted when has_inflow
  bool has_inflow = false;
  double data_min = 0.0;  // range of u0 (and u_in) for global bounds
  double data_max = 1.0;
};

struct RunResult {
  CRFunction u;
  int step_count = 0;
  int rejected_stage_count = 0;
  std::vector<double> mass_history;
  std::vector<double> min_history;
  std::vector<double> max_history;
  double t_end = 0.0;
};

// One forward Euler substage. Assembles (or reuses) the system at the
// stage time, builds the low-order viscosity, and applies the limiter.
// For autonomous velocity fields the operator and viscosity are
// assembled once and reused bit-identically across stages.
class StageOperator {
 public:
  StageOperator(const TransportProblem& problem, const SchemeConfig& config)
      : problem_(&problem),
        config_(&config),
        pattern_(SparsePattern::from_stencil(*problem.mesh)),
        mass_(mass_vector(*problem.mesh)) {}

  const MassVector& mass() const { return mass_; }

  // Largest admissible dt for the scheme at time t.
  double cfl_bound(double t) {
    const Snapshot& s = snapshot(t);
    if (config_->limiter == Limiter::Galerkin) {
      double dt = std::numeric_limits<double>::infinity();
      for (int i = 0; i < s.S.rows(); ++i) {
        const double sii = s.S(i, i);
        if (sii > 0.0) dt = std::min(dt, mass_[i] / sii);
      }
      return dt;
    }
    return cfl_max_dt(s.S, s.VL, mass_);
  }

  std::vector<double> apply(const std::vector<double>& u, double t,
                            double dt) {
    const Snapshot& s = snapshot(t);
    const int n = static_cast<int>(u.size());
    const bool inflow = problem_->has_inflow;

    switch (config_->limiter) {
      case Limiter::Galerkin: {
        if (dt > cfl_bound(t) * (1.0 + 1e-12))
          throw CflViolation("galerkin stage: dt exceeds the diagonal bound");
        std::vector<double> su = s.S.multiply(u);
        std::vector<double> next(n);
        std::vector<double> l;
        if (inflow) l = inflow_term(t).inflow_l(u);
        for (int i = 0; i < n; ++i)
          next[i] =
              u[i] + dt / mass_[i] * (-su[i] + (inflow ? l[i] : 0.0));
        return next;
      }
      case Limiter::LowOrder:
        return low_order_update(u, s.S, s.VL, mass_, dt);
      case Limiter::Greedy: {
        if (dt > cfl_max_dt(s.S, s.VL, mass_) * (1.0 + 1e-12))
          throw CflViolation("greedy stage: dt exceeds the CFL bound");
        const ThetaGamma tg = theta_gamma(u, s.S, s.VL, mass_, dt);
        const std::vector<double> psi = greedy_psi(tg);
        const ViscosityMatrix VH = scale_viscosity(psi, s.VL);
        const SparsePattern& p = s.S.pattern();
        std::vector<double> next(n);
        for (int i = 0; i < n; ++i) {
          double acc = 0.0;
          for (int k = p.row_begin(i); k < p.row_end(i); ++k) {
            const int j = p.col(k);
            if (j == i) continue;
            acc += (s.S.value(k) - VH.value(k)) * (u[j] - u[i]);
          }
          next[i] = u[i] - dt / mass_[i] * acc;
        }
        if (inflow) {
          // Boundary data enters through the residual l_hat, scaled so the
          // updated DOF stays within its previous-step stencil range widened
          // by the inflow data values on its faces.
          const InflowTerm& in = inflow_term(t);
          std::vector<double> lhat = in.inflow_l(u);
          for (int i = 0; i < n; ++i) {
            const double li = lhat[i] - u[i] * s.row_sums[i];
            if (li == 0.0) continue;
            double lo = u[i], hi = u[i];
            for (int j : problem_->mesh->support_neighbors(i)) {
              lo = std::min(lo, u[j]);
              hi = std::max(hi, u[j]);
            }
            if (in.data_min[i] <= in.data_max[i]) {
              lo = std::min(lo, in.data_min[i]);
              hi = std::max(hi, in.data_max[i]);
            }
            const double mdt = mass_[i] / dt;
            const double alpha = std::min(
                1.0, std::max({0.0, mdt * (hi - next[i]) / li,
                               mdt * (lo - next[i]) / li}));
            next[i] += dt / mass_[i] * alpha * li;
          }
        }
        return next;
      }
      case Limiter::FctLocal:
      case Limiter::FctGlobal: {
        std::vector<double> u_low = low_order_update(u, s.S, s.VL, mass_, dt);
        LimiterBounds bounds = compute_bounds(
            config_->limiter == Limiter::FctLocal ? BoundsMode::Local
                                                  : BoundsMode::Global,
            u_low, *problem_->mesh, problem_->data_min, problem_->data_max);
        if (!inflow)
          return fct_correct(u, u_low, s.VL, bounds, mass_, dt, nullptr);
        const InflowTerm& in = inflow_term(t);
        if (config_->limiter == Limiter::FctLocal) {
          // Local bounds must admit extrema entering through the inflow
          // boundary at the data values.
          for (int i = 0; i < n; ++i) {
            if (in.data_min[i] > in.data_max[i]) continue;
            bounds.u_min[i] = std::min(bounds.u_min[i], in.data_min[i]);
            bounds.u_max[i] = std::max(bounds.u_max[i], in.data_max[i]);
          }
        }
        // Boundary residual l_hat_i = l_i - U_i * (row sum of S); with it
        // the unlimited corrector reproduces the Galerkin stage exactly.
        std::vector<double> lhat = in.inflow_l(u);
        for (int i = 0; i < n; ++i) lhat[i] -= u[i] * s.row_sums[i];
        return fct_correct(u, u_low, s.VL, bounds, mass_, dt, &lhat);
      }
    }
    throw std::logic_error("unreachable limiter branch");
  }

 private:
  struct Snapshot {
    SparseMatrix S;
    ViscosityMatrix VL;
    std::vector<double> row_sums;
    double time = 0.0;
    bool valid = false;
  };

  const Snapshot& snapshot(double t) {
    if (snap_.valid && (!problem_->field.time_dependent || snap_.time == t))
      return snap_;
    snap_.S = assemble_A(*problem_->mesh, problem_->field, t, pattern_);
    const SparseMatrix B =
        assemble_B(*problem_->mesh, problem_->field, t, pattern_);
    for (int k = 0; k < pattern_->nnz(); ++k) snap_.S.value(k) -= B.value(k);
    snap_.VL = config_->viscosity_kind == ViscosityKind::Minimum
                   ? min_viscosity(snap_.S)
                   : bilinear_viscosity(snap_.S, *problem_->mesh);
    snap_.row_sums.resize(snap_.S.rows());
    for (int i = 0; i < snap_.S.rows(); ++i)
      snap_.row_sums[i] = snap_.S.row_sum(i);
    snap_.time = t;
    snap_.valid = true;
    return snap_;
  }

  // Inflow data may be time-dependent even for autonomous fields, so the
  // boundary term is reassembled at every stage time (boundary cost only).
  const InflowTerm& inflow_term(double t) {
    if (!inflow_ || inflow_time_ != t) {
      inflow_ = assemble_inflow(*problem_->mesh, problem_->field,
                                problem_->u_in, t, pattern_);
      inflow_time_ = t;
    }
    return *inflow_;
  }

  const TransportProblem* problem_;
  const SchemeConfig* config_;
  std::shared_ptr<const SparsePattern> pattern_;
  MassVector mass_;
  Snapshot snap_;
  std::optional<InflowTerm> inflow_;
  double inflow_time_ = std::numeric_limits<double>::quiet_NaN();
};

inline std::vector<double> euler_stage(const std::vector<double>& u, double t,
                                       double dt,
                                       const TransportProblem& problem,
                                       const SchemeConfig& config) {
  StageOperator op(problem, config);
  return op.apply(u, t, dt);
}

// Shu-Osher SSP-RK(3,3); each stage reassembles at its own time.
inline std::vector<double> ssprk33_step(StageOperator& op,
                                        const std::vector<double>& u, double t,
                                        double dt) {
  const std::vector<double> y1 = op.apply(u, t, dt);
  std::vector<double> y2 = op.apply(y1, t + dt, dt);
  for (std::size_t i = 0; i < u.size(); ++i)
    y2[i] = 0.75 * u[i] + 0.25 * y2[i];
  std::vector<double> y3 = op.apply(y2, t + 0.5 * dt, dt);
  for (std::size_t i = 0; i < u.size(); ++i)
    y3[i] = (u[i] + 2.0 * y3[i]) / 3.0;
  return y3;
}

inline std::vector<double> ssprk33_step(const std::vector<double>& u, double t,
                                        double dt,
                                        const TransportProblem& problem,
                                        const SchemeConfig& config) {
  StageOperator op(problem, config);
  return ssprk33_step(op, u, t, dt);
}

// Advance to t_final with automatic step control: a CFL violation in any
// stage discards the step, halves dt (factor c), and restarts.
inline RunResult run(const TransportProblem& problem,
                     const SchemeConfig& config) {
  if (!(config.t_final > 0.0))
    throw std::invalid_argument("run: t_final must be positive");
  StageOperator op(problem, config);
  const MassVector& m = op.mass();

  RunResult res;
  res.u = cr_interpolate(problem.u0, *problem.mesh);
  std::vector<double>& u = res.u.dof_values;

  double t = 0.0;
  while (t < config.t_final) {
    double dt = config.dt_initial ? *config.dt_initial
                                  : config.cfl_target * op.cfl_bound(t);
    if (!std::isfinite(dt) || dt <= 0.0) dt = config.t_final - t;
    // Clip slightly early so roundoff cannot leave an untreatable sliver.
    const bool clipped = dt >= (config.t_final - t) * (1.0 - 1e-10);
    if (clipped) dt = config.t_final - t;

    for (;;) {
      if (dt < 1e-14 * config.t_final)
        throw StepUnderflow("run: time step underflow at t = " +
                            std::to_string(t));
      try {
        u = ssprk33_step(op, u, t, dt);
        break;
      } catch (const CflViolation&) {
        ++res.rejected_stage_count;
        dt *= config.reduction_factor;
      }
    }

    t = (clipped && dt == config.t_final - t) ? config.t_final : t + dt;
    ++res.step_count;
    res.mass_history.push_back(total_mass(res.u, m));
    const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
    res.min_history.push_back(*lo);
    res.max_history.push_back(*hi);
  }
  res.t_end = t;
  return res;
}

}  // namespace crt
