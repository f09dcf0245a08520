#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "crt/cr_space.hpp"
#include "crt/errors.hpp"
#include "crt/sparse.hpp"

namespace crt {

// Symmetric, zero-row-sum viscosity matrix on the pattern of S.
using ViscosityMatrix = SparseMatrix;

namespace detail {

inline void close_diagonal(SparseMatrix& V) {
  const SparsePattern& p = V.pattern();
  for (int i = 0; i < p.rows(); ++i) {
    double off = 0.0;
    int diag = -1;
    for (int k = p.row_begin(i); k < p.row_end(i); ++k) {
      if (p.col(k) == i)
        diag = k;
      else
        off += V.value(k);
    }
    V.value(diag) = -off;
  }
}

}  // namespace detail

// v_ij = max(0, s_ij, s_ji) off the diagonal; diagonal closes the row sum.
inline ViscosityMatrix min_viscosity(const SparseMatrix& S) {
  ViscosityMatrix V(S.pattern_ptr());
  const SparsePattern& p = S.pattern();
  for (int i = 0; i < p.rows(); ++i) {
    for (int k = p.row_begin(i); k < p.row_end(i); ++k) {
      const int j = p.col(k);
      if (j == i) continue;
      V.value(k) = std::max({0.0, S.value(k), S(j, i)});
    }
  }
  detail::close_diagonal(V);
  return V;
}

// v_ij = max over ordered pairs (l, k) of edges of the cell shared by i
// and j of max(0, s_lk); pairs with no shared cell (the cross-face part
// of the pattern) fall back to the minimum-viscosity value so the
// domination property v_ij >= s_ij holds on the whole pattern. Diagonal
// closes the row sum.
inline ViscosityMatrix bilinear_viscosity(const SparseMatrix& S,
                                          const TriMesh& mesh) {
  ViscosityMatrix V(S.pattern_ptr());
  const SparsePattern& p = S.pattern();
  auto shared_cell = [&](int i, int j) {
    const Edge& ei = mesh.edge(i);
    const Edge& ej = mesh.edge(j);
    for (int c : {ei.cell0, ei.cell1}) {
      if (c < 0) continue;
      if (c == ej.cell0 || c == ej.cell1) return c;
    }
    return -1;
  };
  for (int i = 0; i < p.rows(); ++i) {
    for (int k = p.row_begin(i); k < p.row_end(i); ++k) {
      const int j = p.col(k);
      if (j == i) continue;
      double v = std::max({0.0, S.value(k), S(j, i)});
      const int c = shared_cell(i, j);
      if (c >= 0) {
        const auto& e = mesh.cell_edges(c);
        for (int sl = 0; sl < 3; ++sl)
          for (int sk = 0; sk < 3; ++sk)
            if (sl != sk) v = std::max(v, S(e[sl], e[sk]));
      }
      V.value(k) = v;
    }
  }
  detail::close_diagonal(V);
  return V;
}

// Largest dt with nonnegative update coefficients:
//   dt <= m_i / sum_{j != i}(v_ij - s_ij)
// (equals m_i / (s_ii - v_ii) when both matrices have zero row sums).
inline double cfl_max_dt(const SparseMatrix& S, const ViscosityMatrix& V,
                         const MassVector& m) {
  const SparsePattern& p = S.pattern();
  double dt = std::numeric_limits<double>::infinity();
  for (int i = 0; i < p.rows(); ++i) {
    double d = 0.0;
    for (int k = p.row_begin(i); k < p.row_end(i); ++k)
      if (p.col(k) != i) d += V.value(k) - S.value(k);
    if (d > 0.0) dt = std::min(dt, m[i] / d);
  }
  return dt;
}

// Stabilized forward Euler step in flux form:
//   U_i^{n+1} = U_i - (dt/m_i) sum_{j != i} (s_ij - v_ij)(U_j - U_i).
// Each off-diagonal coefficient is nonnegative, so under the CFL bound
// the update is a convex combination of stencil values.
inline std::vector<double> low_order_update(const std::vector<double>& u,
                                            const SparseMatrix& S,
                                            const ViscosityMatrix& V,
                                            const MassVector& m, double dt) {
  if (dt > cfl_max_dt(S, V, m) * (1.0 + 1e-12))
    throw CflViolation("low_order_update: dt exceeds the CFL bound");
  const SparsePattern& p = S.pattern();
  std::vector<double> next(u.size());
  for (int i = 0; i < p.rows(); ++i) {
    double acc = 0.0;
    for (int k = p.row_begin(i); k < p.row_end(i); ++k) {
      const int j = p.col(k);
      if (j == i) continue;
      acc += (S.value(k) - V.value(k)) * (u[j] - u[i]);
    }
    next[i] = u[i] - dt / m[i] * acc;
  }
  return next;
}

struct ThetaGamma {
  std::vector<double> theta;
  std::vector<double> gamma;
  std::vector<double> gamma_plus;
  std::vector<double> gamma_minus;
};

// Normalized position theta_i of U_i in its stencil range, and the
// viscous CFL numbers gamma_i, gamma_i^{+-} (sums of |v_ij| over the
// strictly larger / strictly smaller stencil neighbors).
inline ThetaGamma theta_gamma(const std::vector<double>& u,
                              const SparseMatrix& S, const ViscosityMatrix& VL,
                              const MassVector& m, double dt) {
  const SparsePattern& p = S.pattern();
  const int n = p.rows();
  ThetaGamma tg{std::vector<double>(n), std::vector<double>(n),
                std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (int i = 0; i < n; ++i) {
    double umin = u[i], umax = u[i];
    double d = 0.0;
    for (int k = p.row_begin(i); k < p.row_end(i); ++k) {
      const int j = p.col(k);
      if (j == i) continue;
      umin = std::min(umin, u[j]);
      umax = std::max(umax, u[j]);
      d += VL.value(k) - S.value(k);
      if (u[j] > u[i]) tg.gamma_plus[i] += std::abs(VL.value(k));
      if (u[j] < u[i]) tg.gamma_minus[i] += std::abs(VL.value(k));
    }
    tg.gamma[i] = dt / m[i] * d;
    tg.gamma_plus[i] *= dt / m[i];
    tg.gamma_minus[i] *= dt / m[i];
    tg.theta[i] = (umax > umin) ? (u[i] - umin) / (umax - umin) : 0.5;
  }
  return tg;
}

// Greedy scaling factor (k = 1):
//   psi_i = max(1 - (1 - gamma_i) min((1-th)/(th g-), th/((1-th) g+)), 0),
// with zero denominators read as +infinity.
inline std::vector<double> greedy_psi(const ThetaGamma& tg) {
  const std::size_t n = tg.theta.size();
  std::vector<double> psi(n);
  constexpr double inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double th = tg.theta[i];
    const double d1 = th * tg.gamma_minus[i];
    const double d2 = (1.0 - th) * tg.gamma_plus[i];
    const double r1 = d1 > 0.0 ? (1.0 - th) / d1 : inf;
    const double r2 = d2 > 0.0 ? th / d2 : inf;
    const double r = std::min(r1, r2);
    const double v = std::isinf(r) ? 0.0 : 1.0 - (1.0 - tg.gamma[i]) * r;
    psi[i] = std::min(1.0, std::max(0.0, v));
  }
  return psi;
}

// V^H off-diagonals are max(psi_i, psi_j) v^L_ij; diagonal closes the
// row sum, which keeps symmetry and conservation exact.
inline ViscosityMatrix scale_viscosity(const std::vector<double>& psi,
                                       const ViscosityMatrix& VL) {
  ViscosityMatrix VH(VL.pattern_ptr());
  const SparsePattern& p = VL.pattern();
  for (int i = 0; i < p.rows(); ++i) {
    for (int k = p.row_begin(i); k < p.row_end(i); ++k) {
      const int j = p.col(k);
      if (j == i) continue;
      VH.value(k) = std::max(psi[i], psi[j]) * VL.value(k);
    }
  }
  detail::close_diagonal(VH);
  return VH;
}

enum class BoundsMode { Local, Global };

struct LimiterBounds {
  std::vector<double> u_min;
  std::vector<double> u_max;
  BoundsMode mode = BoundsMode::Global;
};

// Local mode: extrema of the low-order solution over I(S_i).
// Global mode: the constant range of the initial (and inflow) data.
inline LimiterBounds compute_bounds(BoundsMode mode,
                                    const std::vector<double>& u_low,
                                    const TriMesh& mesh, double global_min,
                                    double global_max) {
  const int n = static_cast<int>(u_low.size());
  LimiterBounds b;
  b.mode = mode;
  b.u_min.resize(n);
  b.u_max.resize(n);
  if (mode == BoundsMode::Global) {
    std::fill(b.u_min.begin(), b.u_min.end(), global_min);
    std::fill(b.u_max.begin(), b.u_max.end(), global_max);
    return b;
  }
  for (int i = 0; i < n; ++i) {
    double lo = u_low[i], hi = u_low[i];
    for (int j : mesh.support_neighbors(i)) {
      lo = std::min(lo, u_low[j]);
      hi = std::max(hi, u_low[j]);
    }
    b.u_min[i] = lo;
    b.u_max[i] = hi;
  }
  return b;
}

struct FctWorkspace {
  std::vector<double> p_plus, p_minus, q_plus, q_minus, r_plus, r_minus, alpha;
};

// Zalesak-style symmetric correction of the low-order solution with the
// antidiffusive fluxes t_ij = -v^L_ij (U_j - U_i), plus the alpha-limited
// boundary residual when one is supplied. The result stays within
// [u_min_i, u_max_i].
inline std::vector<double> fct_correct(const std::vector<double>& u_n,
                                       const std::vector<double>& u_low,
                                       const ViscosityMatrix& VL,
                                       const LimiterBounds& bounds,
                                       const MassVector& m, double dt,
                                       const std::vector<double>* boundary_l,
                                       FctWorkspace* ws = nullptr) {
  const SparsePattern& p = VL.pattern();
  const int n = p.rows();

  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    scale = std::max({scale, std::abs(bounds.u_min[i]),
                      std::abs(bounds.u_max[i])});
  const double tol = 1e-11 * std::max(1.0, scale);
  for (int i = 0; i < n; ++i)
    if (u_low[i] < bounds.u_min[i] - tol || u_low[i] > bounds.u_max[i] + tol)
      throw BoundsViolatedByLowOrder(
          "fct_correct: low-order value outside the prescribed bounds at DOF " +
          std::to_string(i));

  std::vector<double> alpha(n, 1.0), al(n, 0.0);
  if (boundary_l) {
    for (int i = 0; i < n; ++i) {
      const double li = (*boundary_l)[i];
      if (li != 0.0) {
        const double mdt = m[i] / dt;
        alpha[i] = std::min(
            1.0, std::max({0.0, mdt * (bounds.u_max[i] - u_low[i]) / li,
                           mdt * (bounds.u_min[i] - u_low[i]) / li}));
      }
      al[i] = alpha[i] * li;
    }
  }

  auto t_ij = [&](int i, int k) {
    const int j = p.col(k);
    return -VL.value(k) * (u_n[j] - u_n[i]);
  };

  std::vector<double> r_plus(n), r_minus(n);
  FctWorkspace local;
  FctWorkspace& w = ws ? *ws : local;
  w.p_plus.assign(n, 0.0);
  w.p_minus.assign(n, 0.0);
  w.q_plus.resize(n);
  w.q_minus.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int k = p.row_begin(i); k < p.row_end(i); ++k) {
      if (p.col(k) == i) continue;
      const double t = t_ij(i, k);
      if (t > 0.0)
        w.p_plus[i] += t;
      else
        w.p_minus[i] += t;
    }
    w.q_plus[i] = m[i] / dt * (bounds.u_max[i] - u_low[i]) - al[i];
    w.q_minus[i] = m[i] / dt * (bounds.u_min[i] - u_low[i]) - al[i];
    r_plus[i] = w.p_plus[i] != 0.0
                    ? std::min(1.0, std::max(0.0, w.q_plus[i]) / w.p_plus[i])
                    : 1.0;
    r_minus[i] = w.p_minus[i] != 0.0
                     ? std::min(1.0, std::min(0.0, w.q_minus[i]) / w.p_minus[i])
                     : 1.0;
  }
  w.r_plus = r_plus;
  w.r_minus = r_minus;
  w.alpha = alpha;

  std::vector<double> next(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int k = p.row_begin(i); k < p.row_end(i); ++k) {
      const int j = p.col(k);
      if (j == i) continue;
      const double t = t_ij(i, k);
      const double lij = t >= 0.0 ? std::min(r_plus[i], r_minus[j])
                                  : std::min(r_minus[i], r_plus[j]);
      acc += lij * t;
    }
    next[i] = u_low[i] + dt / m[i] * (acc + al[i]);
  }
  return next;
}

}  // namespace crt
