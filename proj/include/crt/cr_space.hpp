#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "crt/errors.hpp"
#include "crt/mesh.hpp"
#include "crt/quadrature.hpp"

namespace crt {

using ScalarField = std::function<double(const Vec2&)>;

// One value per edge midpoint.
struct CRFunction {
  const TriMesh* mesh = nullptr;
  std::vector<double> dof_values;

  CRFunction() = default;
  explicit CRFunction(const TriMesh& m, double fill = 0.0)
      : mesh(&m), dof_values(m.num_edges(), fill) {}

  double& operator[](int i) { return dof_values[i]; }
  double operator[](int i) const { return dof_values[i]; }
  int size() const { return static_cast<int>(dof_values.size()); }
};

// Diagonal CR mass: m_i = |S_i| / 3.
struct MassVector {
  std::vector<double> m;
  double& operator[](int i) { return m[i]; }
  double operator[](int i) const { return m[i]; }
  int size() const { return static_cast<int>(m.size()); }
};

inline MassVector mass_vector(const TriMesh& mesh) {
  MassVector mv;
  mv.m.assign(mesh.num_edges(), 0.0);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const double third = mesh.cell_area(c) / 3.0;
    for (int e : mesh.cell_edges(c)) mv.m[e] += third;
  }
  return mv;
}

inline CRFunction cr_interpolate(const ScalarField& f, const TriMesh& mesh) {
  CRFunction u(mesh);
  for (int i = 0; i < mesh.num_edges(); ++i) {
    const double v = f(mesh.edge(i).midpoint);
    if (!std::isfinite(v))
      throw InvalidField("cr_interpolate: non-finite value at edge " +
                         std::to_string(i));
    u[i] = v;
  }
  return u;
}

// CR basis on a cell: the function of edge s (opposite vertex s) is
// 1 - 2*lambda_s.
inline double evaluate(const CRFunction& u, int cell, const Vec2& p) {
  const TriMesh& mesh = *u.mesh;
  const auto v = mesh.cell_vertices(cell);
  const auto lambda = barycentric(v[0], v[1], v[2], p);
  for (double l : lambda)
    if (l < -1e-12)
      throw PointOutsideCell("evaluate: point outside cell " +
                             std::to_string(cell));
  const auto& e = mesh.cell_edges(cell);
  double val = 0.0;
  for (int s = 0; s < 3; ++s) val += u[e[s]] * (1.0 - 2.0 * lambda[s]);
  return val;
}

inline double total_mass(const CRFunction& u, const MassVector& m) {
  KahanSum s;
  for (int i = 0; i < u.size(); ++i) s.add(m[i] * u[i]);
  return s.value();
}

struct ErrorReport {
  double l2 = 0.0;
  double linf = 0.0;
  int dof_count = 0;
  double h = 0.0;
};

using SpaceTimeField = std::function<double(const Vec2&, double)>;

// L2 with a degree-4 rule; Linf at the DOF sites (edge midpoints).
inline ErrorReport error_norms(const CRFunction& u, const SpaceTimeField& exact,
                               double t) {
  const TriMesh& mesh = *u.mesh;
  ErrorReport rep;
  rep.dof_count = u.size();
  rep.h = mesh.mesh_size();

  KahanSum l2sq;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto v = mesh.cell_vertices(c);
    const auto& e = mesh.cell_edges(c);
    for (const auto& qp : tri_degree4_rule()) {
      double uh = 0.0;
      for (int s = 0; s < 3; ++s) uh += u[e[s]] * (1.0 - 2.0 * qp.lambda[s]);
      const double d = exact(bary_point(v, qp.lambda), t) - uh;
      l2sq.add(mesh.cell_area(c) * qp.weight * d * d);
    }
  }
  rep.l2 = std::sqrt(std::max(0.0, l2sq.value()));

  for (int i = 0; i < mesh.num_edges(); ++i)
    rep.linf = std::max(rep.linf,
                        std::abs(exact(mesh.edge(i).midpoint, t) - u[i]));
  return rep;
}

}  // namespace crt
