#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "crt/errors.hpp"
#include "crt/mesh.hpp"

namespace crt {

enum class HalfVertexKind : std::uint8_t {
  MidpointOfParentEdge,
  InteriorParentVertex,
  BoundaryParentVertex,
};

struct HalfVertexClass {
  HalfVertexKind kind;
  int parent;  // parent edge index (midpoint) or parent vertex index
};

// Counterclockwise ring of parent-edge midpoints around an interior
// parent vertex.
struct RingPolygon {
  std::vector<Vec2> vertices;      // y_1..y_s
  std::vector<int> parent_edges;   // parent edge whose midpoint is y_j
  Vec2 center;                     // y_0
  bool convex = false;
};

// Uniform 4-way refinement of a TriMesh: each cell is split at its edge
// midpoints. Child vertex i < V is parent vertex i; child vertex V + e
// is the midpoint of parent edge e.
class HalfMesh {
 public:
  explicit HalfMesh(const TriMesh& parent) : parent_(&parent) {
    const int pv = parent.num_vertices();
    const int pe = parent.num_edges();

    std::vector<Vec2> verts;
    verts.reserve(pv + pe);
    verts.insert(verts.end(), parent.vertices().begin(),
                 parent.vertices().end());
    for (const Edge& e : parent.edges()) verts.push_back(e.midpoint);

    std::vector<std::array<int, 3>> cells;
    cells.reserve(4 * static_cast<std::size_t>(parent.num_cells()));
    for (int c = 0; c < parent.num_cells(); ++c) {
      const auto& v = parent.cells()[c];
      const auto& e = parent.cell_edges(c);  // edge s opposite vertex s
      const int m0 = pv + e[0], m1 = pv + e[1], m2 = pv + e[2];
      cells.push_back({v[0], m2, m1});
      cells.push_back({v[1], m0, m2});
      cells.push_back({v[2], m1, m0});
      cells.push_back({m0, m1, m2});
    }
    mesh_ = std::make_unique<TriMesh>(std::move(verts), std::move(cells));

    // A parent vertex is interior iff none of its incident parent edges
    // is a boundary edge.
    std::vector<bool> on_boundary(pv, false);
    incident_edges_.resize(pv);
    for (int i = 0; i < pe; ++i) {
      const Edge& ed = parent.edge(i);
      incident_edges_[ed.v0].push_back(i);
      incident_edges_[ed.v1].push_back(i);
      if (ed.boundary) {
        on_boundary[ed.v0] = true;
        on_boundary[ed.v1] = true;
      }
    }

    classes_.reserve(pv + pe);
    for (int i = 0; i < pv; ++i)
      classes_.push_back({on_boundary[i] ? HalfVertexKind::BoundaryParentVertex
                                         : HalfVertexKind::InteriorParentVertex,
                          i});
    for (int i = 0; i < pe; ++i)
      classes_.push_back({HalfVertexKind::MidpointOfParentEdge, i});

    for (int i = 0; i < pv; ++i)
      if (classes_[i].kind == HalfVertexKind::InteriorParentVertex)
        interior_parent_vertices_.push_back(i);
  }

  const TriMesh& mesh() const { return *mesh_; }
  const TriMesh& parent() const { return *parent_; }
  const std::vector<HalfVertexClass>& classes() const { return classes_; }
  const std::vector<int>& interior_parent_vertices() const {
    return interior_parent_vertices_;
  }
  const std::vector<int>& incident_parent_edges(int parent_vertex) const {
    return incident_edges_[parent_vertex];
  }

 private:
  const TriMesh* parent_;
  std::unique_ptr<TriMesh> mesh_;
  std::vector<HalfVertexClass> classes_;
  std::vector<int> interior_parent_vertices_;
  std::vector<std::vector<int>> incident_edges_;
};

inline HalfMesh refine_half(const TriMesh& mesh) { return HalfMesh(mesh); }

// Ring of parent-edge midpoints around an interior parent vertex,
// ordered counterclockwise by walking cell-to-cell around the vertex.
// Throws NonConvexRing when the polygon fails the convexity sign test.
inline RingPolygon ring_polygon(const HalfMesh& half, int parent_vertex) {
  const TriMesh& parent = half.parent();
  if (parent_vertex < 0 || parent_vertex >= parent.num_vertices() ||
      half.classes()[parent_vertex].kind != HalfVertexKind::InteriorParentVertex)
    throw MeshError("ring_polygon: vertex is not an interior parent vertex");

  const auto& incident = half.incident_parent_edges(parent_vertex);

  // Walk around the vertex: from edge e through its adjacent cell that
  // has not been visited yet to the next incident edge.
  auto other_incident_edge = [&](int cell, int e) {
    for (int j : parent.cell_edges(cell)) {
      if (j == e) continue;
      const Edge& ej = parent.edge(j);
      if (ej.v0 == parent_vertex || ej.v1 == parent_vertex) return j;
    }
    throw MeshError("ring_polygon: inconsistent incidence");
  };

  RingPolygon ring;
  ring.center = parent.vertex(parent_vertex);
  int e = incident.front();
  int cell = parent.edge(e).cell0;
  for (std::size_t step = 0; step < incident.size(); ++step) {
    ring.parent_edges.push_back(e);
    ring.vertices.push_back(parent.edge(e).midpoint);
    const int next = other_incident_edge(cell, e);
    const Edge& en = parent.edge(next);
    cell = (en.cell0 == cell) ? en.cell1 : en.cell0;
    if (cell < 0) throw MeshError("ring_polygon: ring is not closed");
    e = next;
  }
  if (e != incident.front())
    throw MeshError("ring_polygon: walk did not close");

  const std::size_t s = ring.vertices.size();
  if (s < 3) throw MeshError("ring_polygon: fewer than 3 ring vertices");

  // Make the orientation counterclockwise.
  double area2 = 0.0;
  for (std::size_t j = 0; j < s; ++j) {
    const Vec2& a = ring.vertices[j];
    const Vec2& b = ring.vertices[(j + 1) % s];
    area2 += cross(a, b);
  }
  if (area2 < 0.0) {
    std::reverse(ring.vertices.begin(), ring.vertices.end());
    std::reverse(ring.parent_edges.begin(), ring.parent_edges.end());
  }

  // Convexity: normalized cross products of consecutive edge vectors
  // must all be nonnegative within tolerance.
  ring.convex = true;
  for (std::size_t j = 0; j < s; ++j) {
    const Vec2 u = ring.vertices[(j + 1) % s] - ring.vertices[j];
    const Vec2 w = ring.vertices[(j + 2) % s] - ring.vertices[(j + 1) % s];
    const double c = cross(u, w) / (norm(u) * norm(w));
    if (c < -1e-12) {
      ring.convex = false;
      break;
    }
  }
  if (!ring.convex)
    throw NonConvexRing("ring around parent vertex " +
                        std::to_string(parent_vertex) + " is not convex");
  return ring;
}

}  // namespace crt
