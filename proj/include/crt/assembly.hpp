#pragma once

#include <array>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "crt/cr_space.hpp"
#include "crt/mesh.hpp"
#include "crt/quadrature.hpp"
#include "crt/sparse.hpp"

namespace crt {

// Velocity description. When a stream function is given the assembly
// samples beta through a cell-wise quadratic interpolant of it, so the
// discrete field is exactly divergence-free per cell and its normal
// component on a face depends only on data living on that face. This
// makes the operator's column sums cancel to roundoff, which is what
// keeps the total mass of the flux-form updates constant.
struct VelocityField {
  std::function<Vec2(const Vec2&, double)> beta;
  std::function<double(const Vec2&, double)> stream;  // optional
  bool divergence_free = false;
  bool impermeable = false;
  bool time_dependent = false;
};

inline double upwind_flux(double u_minus, double u_plus, double beta_dot_n) {
  return u_minus * std::max(0.0, beta_dot_n) +
         u_plus * std::min(0.0, beta_dot_n);
}

namespace detail {

// Gradients of the CR basis on a cell; function of edge s is 1 - 2*lambda_s.
inline std::array<Vec2, 3> cr_gradients(const std::array<Vec2, 3>& v,
                                        double area) {
  std::array<Vec2, 3> g;
  for (int s = 0; s < 3; ++s) {
    const Vec2 t = v[(s + 2) % 3] - v[(s + 1) % 3];
    g[s] = Vec2{-t.y, t.x} * (-1.0 / area);  // -2 * grad(lambda_s)
  }
  return g;
}

// Values of the three CR basis functions of a cell at a point.
inline std::array<double, 3> cr_values(const std::array<Vec2, 3>& v,
                                       const Vec2& p) {
  const auto lambda = barycentric(v[0], v[1], v[2], p);
  return {1.0 - 2.0 * lambda[0], 1.0 - 2.0 * lambda[1],
          1.0 - 2.0 * lambda[2]};
}

// Velocity samples at the three edge midpoints of a cell. With a stream
// function psi, beta = (d_y psi, -d_x psi) of the quadratic interpolant
// of psi at the cell's vertices and edge midpoints.
inline std::array<Vec2, 3> cell_beta_samples(const TriMesh& mesh, int c,
                                             const VelocityField& field,
                                             double t) {
  const auto v = mesh.cell_vertices(c);
  std::array<Vec2, 3> mid;
  for (int s = 0; s < 3; ++s) mid[s] = (v[(s + 1) % 3] + v[(s + 2) % 3]) * 0.5;
  std::array<Vec2, 3> beta;
  if (!field.stream) {
    for (int s = 0; s < 3; ++s) beta[s] = field.beta(mid[s], t);
    return beta;
  }
  const double area = mesh.cell_area(c);
  const auto g = cr_gradients(v, area);  // g[s] = -2 grad(lambda_s)
  std::array<Vec2, 3> gl;                // grad(lambda_s)
  for (int s = 0; s < 3; ++s) gl[s] = g[s] * -0.5;
  std::array<double, 3> pv, pm;
  for (int s = 0; s < 3; ++s) {
    pv[s] = field.stream(v[s], t);
    pm[s] = field.stream(mid[s], t);
  }
  // Gradient of the quadratic interpolant at midpoint m_s, where the
  // barycentric coordinates are lambda_s = 0 and the other two 1/2:
  //   grad psi = sum_r pv_r (4 lambda_r - 1) grad(lambda_r)
  //            + 4 sum_r pm_r (lambda_{r+1} grad(lambda_{r+2})
  //                            + lambda_{r+2} grad(lambda_{r+1})).
  for (int s = 0; s < 3; ++s) {
    const int s1 = (s + 1) % 3, s2 = (s + 2) % 3;
    Vec2 grad = gl[s] * -pv[s] + gl[s1] * pv[s1] + gl[s2] * pv[s2];
    grad += (gl[s1] + gl[s2]) * (2.0 * pm[s]);
    grad += gl[s] * (2.0 * (pm[s1] + pm[s2]));
    beta[s] = Vec2{grad.y, -grad.x};
  }
  return beta;
}

// Normal velocity at the two Gauss points of a face. With a stream
// function, beta.n is the tangential derivative of the quadratic trace
// of psi along the face, so both cells see the same value exactly.
inline std::array<double, 2> face_bn_samples(const TriMesh& mesh, int f,
                                             const VelocityField& field,
                                             double t) {
  const Edge& ed = mesh.edge(f);
  const Vec2 p0 = mesh.vertex(ed.v0);
  const Vec2 p1 = mesh.vertex(ed.v1);
  const auto& rule = seg_gauss2_rule();
  std::array<double, 2> bn;
  if (!field.stream) {
    for (int q = 0; q < 2; ++q) {
      const Vec2 x = p0 + (p1 - p0) * rule[q].s;
      bn[q] = dot(field.beta(x, t), ed.normal);
    }
    return bn;
  }
  const double psi0 = field.stream(p0, t);
  const double psim = field.stream(ed.midpoint, t);
  const double psi1 = field.stream(p1, t);
  // Quadratic trace q(xi) through psi0, psim, psi1; beta.n along the
  // left-of-tangent normal is -q'(xi)/len. Flip if the stored normal
  // points the other way.
  const Vec2 tangent = p1 - p0;
  const double orient =
      (-tangent.y * ed.normal.x + tangent.x * ed.normal.y) > 0.0 ? 1.0 : -1.0;
  for (int q = 0; q < 2; ++q) {
    const double xi = rule[q].s;
    const double dq = psi0 * (4.0 * xi - 3.0) + psim * (4.0 - 8.0 * xi) +
                      psi1 * (4.0 * xi - 1.0);
    bn[q] = -orient * dq / ed.length;
  }
  return bn;
}

}  // namespace detail

// Advective cell part: a_ij = sum_K int_K (beta . grad phi_j) phi_i with
// the edge-midpoint rule. Since phi_i(m_s) = delta_is the rule collapses
// to a_ij = sum_K (|K|/3) beta(m_i) . grad phi_j. Row sums vanish to
// roundoff for every row because sum_j grad phi_j = 0 on each cell, so
// the operator annihilates constants exactly.
inline SparseMatrix assemble_A(const TriMesh& mesh, const VelocityField& field,
                               double t,
                               std::shared_ptr<const SparsePattern> pattern) {
  SparseMatrix A(pattern);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto v = mesh.cell_vertices(c);
    const double area = mesh.cell_area(c);
    const auto grad = detail::cr_gradients(v, area);
    const auto& e = mesh.cell_edges(c);
    const auto beta = detail::cell_beta_samples(mesh, c, field, t);
    const double w = area / 3.0;
    for (int si = 0; si < 3; ++si)
      for (int sj = 0; sj < 3; ++sj)
        A.add(e[si], e[sj], w * dot(beta[si], grad[sj]));
  }
  return A;
}

// Upwind penalty part over interior faces,
//   b_ij = -sum_F int_F [[phi_j]] ([bn]+ phi_i^+ + [bn]- phi_i^-),
// with the two-point Gauss rule and the sign of beta.n taken per
// quadrature point. It vanishes entry-wise on constants ([[1]] = 0) and
// its column sums reduce to -int_F bn [[phi_j]] per face, the exact
// counterpart of the cell term's boundary flux.
inline SparseMatrix assemble_B(const TriMesh& mesh, const VelocityField& field,
                               double t,
                               std::shared_ptr<const SparsePattern> pattern) {
  SparseMatrix B(pattern);
  for (int f = 0; f < mesh.num_edges(); ++f) {
    const Edge& ed = mesh.edge(f);
    if (ed.boundary) continue;
    const Vec2 p0 = mesh.vertex(ed.v0);
    const Vec2 p1 = mesh.vertex(ed.v1);
    const int c0 = ed.cell0;  // minus side: normal points c0 -> c1
    const int c1 = ed.cell1;
    const auto v0 = mesh.cell_vertices(c0);
    const auto v1 = mesh.cell_vertices(c1);
    const auto& e0 = mesh.cell_edges(c0);
    const auto& e1 = mesh.cell_edges(c1);

    const auto bn = detail::face_bn_samples(mesh, f, field, t);
    const auto& rule = seg_gauss2_rule();
    for (int q = 0; q < 2; ++q) {
      const Vec2 x = p0 + (p1 - p0) * rule[q].s;
      const double bp = std::max(0.0, bn[q]);
      const double bm = std::min(0.0, bn[q]);
      const double w = rule[q].weight * ed.length;
      const auto phi0 = detail::cr_values(v0, x);  // minus traces
      const auto phi1 = detail::cr_values(v1, x);  // plus traces
      for (int si = 0; si < 3; ++si) {
        for (int sj = 0; sj < 3; ++sj) {
          // [[phi_j]] = phi_j^+ - phi_j^-, tested against the upwind
          // weight bp phi_i^+ + bm phi_i^-.
          B.add(e1[si], e1[sj], -w * bp * phi1[sj] * phi1[si]);
          B.add(e1[si], e0[sj], w * bp * phi0[sj] * phi1[si]);
          B.add(e0[si], e1[sj], -w * bm * phi1[sj] * phi0[si]);
          B.add(e0[si], e0[sj], w * bm * phi0[sj] * phi0[si]);
        }
      }
    }
  }
  return B;
}

// Weak inflow term l_h(u_h, phi_i) split as l = C U - d.
struct InflowTerm {
  SparseMatrix matrix;       // C
  std::vector<double> rhs;   // d
  // Range of the boundary data over the inflow quadrature points seen by
  // each row; empty range (+inf, -inf) where no inflow touches the row.
  // Local limiter bounds are widened by it so new extrema can enter.
  std::vector<double> data_min, data_max;

  // l_i = (C U - d)_i
  std::vector<double> inflow_l(const std::vector<double>& u) const {
    std::vector<double> l = matrix.multiply(u);
    for (std::size_t i = 0; i < l.size(); ++i) l[i] -= rhs[i];
    return l;
  }
};

inline InflowTerm assemble_inflow(const TriMesh& mesh,
                                  const VelocityField& field,
                                  const SpaceTimeField& u_in, double t,
                                  std::shared_ptr<const SparsePattern> pattern) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  InflowTerm inflow{SparseMatrix(pattern),
                    std::vector<double>(mesh.num_edges(), 0.0),
                    std::vector<double>(mesh.num_edges(), inf),
                    std::vector<double>(mesh.num_edges(), -inf)};
  for (int f = 0; f < mesh.num_edges(); ++f) {
    const Edge& ed = mesh.edge(f);
    if (!ed.boundary) continue;
    const Vec2 p0 = mesh.vertex(ed.v0);
    const Vec2 p1 = mesh.vertex(ed.v1);
    const int c = ed.cell0;
    const auto v = mesh.cell_vertices(c);
    const auto& e = mesh.cell_edges(c);
    for (const auto& qp : seg_gauss2_rule()) {
      const Vec2 x = p0 + (p1 - p0) * qp.s;
      const double bn = dot(field.beta(x, t), ed.normal);
      if (!(bn < 0.0)) continue;  // inflow only, pointwise
      const double w = qp.weight * ed.length * bn;
      const double uin = u_in(x, t);
      const auto phi = detail::cr_values(v, x);
      for (int si = 0; si < 3; ++si) {
        for (int sj = 0; sj < 3; ++sj)
          inflow.matrix.add(e[si], e[sj], w * phi[sj] * phi[si]);
        inflow.rhs[e[si]] += w * uin * phi[si];
        inflow.data_min[e[si]] = std::min(inflow.data_min[e[si]], uin);
        inflow.data_max[e[si]] = std::max(inflow.data_max[e[si]], uin);
      }
    }
  }
  return inflow;
}

// S = A - B plus the affine inflow term, assembled at time t. The
// semi-discrete system is m_i u_i' = -(S u)_i + l_i.
struct TransportSystem {
  SparseMatrix S;
  SparseMatrix inflow_matrix;
  std::vector<double> inflow_rhs;
  double time = 0.0;

  bool has_inflow_term() const { return !inflow_rhs.empty(); }

  // l_i = (C U - d)_i
  std::vector<double> inflow_l(const std::vector<double>& u) const {
    std::vector<double> l = inflow_matrix.multiply(u);
    for (std::size_t i = 0; i < l.size(); ++i) l[i] -= inflow_rhs[i];
    return l;
  }
};

inline TransportSystem assemble_system(
    const TriMesh& mesh, const VelocityField& field, const SpaceTimeField* u_in,
    double t, std::shared_ptr<const SparsePattern> pattern = nullptr) {
  if (!pattern) pattern = SparsePattern::from_stencil(mesh);
  TransportSystem sys;
  sys.time = t;
  sys.S = assemble_A(mesh, field, t, pattern);
  const SparseMatrix B = assemble_B(mesh, field, t, pattern);
  for (int k = 0; k < pattern->nnz(); ++k) sys.S.value(k) -= B.value(k);
  if (u_in) {
    InflowTerm inflow = assemble_inflow(mesh, field, *u_in, t, pattern);
    sys.inflow_matrix = std::move(inflow.matrix);
    sys.inflow_rhs = std::move(inflow.rhs);
  }
  return sys;
}

}  // namespace crt
