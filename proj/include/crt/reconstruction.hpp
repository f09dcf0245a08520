#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "crt/cr_space.hpp"
#include "crt/errors.hpp"
#include "crt/half_mesh.hpp"
#include "crt/mesh.hpp"
#include "crt/quadrature.hpp"

namespace crt {

// Wachspress coordinates of a point strictly inside a convex polygon
// y_1..y_s (counterclockwise):
//   w_i ~ A(y_{i-1}, y_i, y_{i+1}) / (A(x, y_{i-1}, y_i) A(x, y_i, y_{i+1})),
// normalized to sum to one.
inline std::vector<double> wachspress(const std::vector<Vec2>& poly,
                                      const Vec2& x) {
  const int s = static_cast<int>(poly.size());
  if (s < 3) throw MeshError("wachspress: polygon needs at least 3 vertices");

  Vec2 centroid{0.0, 0.0};
  for (const Vec2& y : poly) centroid = centroid + y;
  centroid = centroid / static_cast<double>(s);
  double scale = 0.0;
  for (const Vec2& y : poly) scale = std::max(scale, dist(y, centroid));
  const double tol = 1e-14 * scale * scale;

  std::vector<double> tri(s);  // A(x, y_i, y_{i+1})
  for (int i = 0; i < s; ++i) {
    tri[i] = signed_area(x, poly[i], poly[(i + 1) % s]);
    if (!(tri[i] > tol))
      throw PointOnBoundaryOrOutside(
          "wachspress: point is not strictly inside the polygon");
  }

  std::vector<double> w(s);
  double sum = 0.0;
  for (int i = 0; i < s; ++i) {
    const int prev = (i + s - 1) % s;
    const double corner =
        signed_area(poly[prev], poly[i], poly[(i + 1) % s]);
    w[i] = corner / (tri[prev] * tri[i]);
    sum += w[i];
  }
  for (double& wi : w) wi /= sum;
  return w;
}

// Continuous P1 function on the refined mesh, one value per vertex.
struct P1HalfMeshFunction {
  const HalfMesh* half = nullptr;
  std::vector<double> vertex_values;

  double operator[](int i) const { return vertex_values[i]; }
  int size() const { return static_cast<int>(vertex_values.size()); }

  double evaluate(int cell, const Vec2& p) const {
    const TriMesh& m = half->mesh();
    const auto v = m.cell_vertices(cell);
    const auto lambda = barycentric(v[0], v[1], v[2], p);
    const auto& c = m.cells()[cell];
    double val = 0.0;
    for (int s = 0; s < 3; ++s) val += vertex_values[c[s]] * lambda[s];
    return val;
  }
};

// Vertex-interpolated reconstruction on the half mesh:
//   - midpoints of parent edges take the DOF value,
//   - interior parent vertices take the Wachspress combination of the
//     DOF values on the surrounding ring of edge midpoints,
//   - boundary parent vertices take boundary_data when given, else the
//     average of the adjacent-cell finite element values.
inline P1HalfMeshFunction reconstruct(const CRFunction& u, const HalfMesh& half,
                                      const ScalarField* boundary_data =
                                          nullptr) {
  const TriMesh& parent = half.parent();
  P1HalfMeshFunction rec;
  rec.half = &half;
  rec.vertex_values.assign(half.mesh().num_vertices(), 0.0);

  for (int i = 0; i < half.mesh().num_vertices(); ++i) {
    const HalfVertexClass& cls = half.classes()[i];
    switch (cls.kind) {
      case HalfVertexKind::MidpointOfParentEdge:
        rec.vertex_values[i] = u[cls.parent];
        break;
      case HalfVertexKind::InteriorParentVertex: {
        const RingPolygon ring = ring_polygon(half, cls.parent);
        const std::vector<double> w = wachspress(ring.vertices, ring.center);
        double val = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j)
          val += w[j] * u[ring.parent_edges[j]];
        rec.vertex_values[i] = val;
        break;
      }
      case HalfVertexKind::BoundaryParentVertex: {
        const Vec2 x = parent.vertex(cls.parent);
        if (boundary_data) {
          rec.vertex_values[i] = (*boundary_data)(x);
          break;
        }
        double val = 0.0;
        int count = 0;
        std::vector<int> seen;
        for (int e : half.incident_parent_edges(cls.parent)) {
          const Edge& ed = parent.edge(e);
          for (int c : {ed.cell0, ed.cell1}) {
            if (c < 0) continue;
            if (std::find(seen.begin(), seen.end(), c) != seen.end()) continue;
            seen.push_back(c);
            val += evaluate(u, c, x);
            ++count;
          }
        }
        rec.vertex_values[i] = val / count;
        break;
      }
    }
  }
  return rec;
}

// L2 with a degree-4 rule on the half mesh; Linf at the half-mesh
// vertices. h reported is the parent mesh size.
inline ErrorReport error_norms(const P1HalfMeshFunction& rec,
                               const SpaceTimeField& exact, double t) {
  const TriMesh& m = rec.half->mesh();
  ErrorReport rep;
  rep.dof_count = rec.size();
  rep.h = rec.half->parent().mesh_size();

  KahanSum l2sq;
  for (int c = 0; c < m.num_cells(); ++c) {
    const auto v = m.cell_vertices(c);
    const auto& cv = m.cells()[c];
    for (const auto& qp : tri_degree4_rule()) {
      double uh = 0.0;
      for (int s = 0; s < 3; ++s) uh += rec.vertex_values[cv[s]] * qp.lambda[s];
      const double d = exact(bary_point(v, qp.lambda), t) - uh;
      l2sq.add(m.cell_area(c) * qp.weight * d * d);
    }
  }
  rep.l2 = std::sqrt(std::max(0.0, l2sq.value()));

  for (int i = 0; i < m.num_vertices(); ++i)
    rep.linf = std::max(rep.linf,
                        std::abs(exact(m.vertex(i), t) - rec.vertex_values[i]));
  return rep;
}

// The reconstruction can overshoot the data range of the DOF values by
// at most the range itself: values stay in [2 lo - hi, 2 hi - lo].
struct BoundCheckResult {
  double lower = 0.0;
  double upper = 0.0;
  double worst_violation = 0.0;
  bool ok = true;
};

inline BoundCheckResult global_bound_check(const P1HalfMeshFunction& rec,
                                           double lo, double hi,
                                           double tol = 0.0) {
  BoundCheckResult res;
  res.lower = 2.0 * lo - hi;
  res.upper = 2.0 * hi - lo;
  for (double v : rec.vertex_values) {
    const double viol = std::max(res.lower - v, v - res.upper);
    res.worst_violation = std::max(res.worst_violation, viol);
  }
  res.ok = res.worst_violation <= tol;
  return res;
}

}  // namespace crt
