#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "crt/errors.hpp"
#include "crt/geometry.hpp"

namespace crt {

// Mesh edge. Vertex indices are stored sorted. The unit normal is the
// 90-degree counterclockwise rotation of the tangent v0 -> v1; adjacent
// cells are ordered so the normal points from cell0 toward cell1. On
// boundary edges the normal points outward.
struct Edge {
  int v0 = -1;
  int v1 = -1;
  Vec2 midpoint;
  Vec2 normal;
  double length = 0.0;
  int cell0 = -1;
  int cell1 = -1;  // -1 on boundary edges
  bool boundary = false;
};

class TriMesh {
 public:
  TriMesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> cells)
      : vertices_(std::move(vertices)), cells_(std::move(cells)) {
    build();
  }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& cells() const { return cells_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int i) const { return edges_[i]; }
  const Vec2& vertex(int i) const { return vertices_[i]; }

  // Edge s of cell c is opposite local vertex s.
  const std::array<int, 3>& cell_edges(int c) const { return cell_edges_[c]; }
  double cell_area(int c) const { return cell_areas_[c]; }
  std::array<Vec2, 3> cell_vertices(int c) const {
    return {vertices_[cells_[c][0]], vertices_[cells_[c][1]],
            vertices_[cells_[c][2]]};
  }

  // I(S_i): edges whose basis support overlaps S_i in area, self included.
  const std::vector<int>& support_neighbors(int i) const {
    return support_neighbors_[i];
  }

  // Coupling stencil of the assembled transport operator: edges of cells
  // adjacent to S_i, plus edges of cells across the faces of S_i (the
  // upwind jump term reaches one cell layer further than I(S_i)).
  const std::vector<int>& stencil(int i) const { return stencil_[i]; }

  // Max circumscribed-circle diameter over cells.
  double mesh_size() const { return h_; }

  double domain_area() const {
    KahanSum s;
    for (double a : cell_areas_) s.add(a);
    return s.value();
  }

 private:
  void build() {
    const int nv = num_vertices();
    if (cells_.empty()) throw MeshError("mesh has no cells");

    cell_areas_.resize(cells_.size());
    h_ = 0.0;
    for (std::size_t c = 0; c < cells_.size(); ++c) {
      for (int v : cells_[c])
        if (v < 0 || v >= nv) throw MeshError("cell vertex index out of range");
      const auto [a, b, d] = cell_vertices(static_cast<int>(c));
      const double area = signed_area(a, b, d);
      if (!(area > 0.0))
        throw MeshError("cell " + std::to_string(c) +
                        " is degenerate or not counterclockwise");
      cell_areas_[c] = area;
      h_ = std::max(h_, circumdiameter(a, b, d));
    }

    // Edge s is opposite local vertex s: endpoints (s+1, s+2).
    std::map<std::pair<int, int>, int> edge_index;
    cell_edges_.assign(cells_.size(), {-1, -1, -1});
    for (std::size_t c = 0; c < cells_.size(); ++c) {
      for (int s = 0; s < 3; ++s) {
        int a = cells_[c][(s + 1) % 3];
        int b = cells_[c][(s + 2) % 3];
        if (a > b) std::swap(a, b);
        auto [it, inserted] = edge_index.try_emplace({a, b}, num_edges());
        if (inserted) {
          Edge e;
          e.v0 = a;
          e.v1 = b;
          e.midpoint = (vertices_[a] + vertices_[b]) * 0.5;
          const Vec2 t = vertices_[b] - vertices_[a];
          e.length = norm(t);
          if (!(e.length > 0.0)) throw MeshError("zero-length edge");
          e.normal = Vec2{-t.y, t.x} / e.length;
          e.cell0 = static_cast<int>(c);
          edges_.push_back(e);
        } else {
          Edge& e = edges_[it->second];
          if (e.cell1 != -1)
            throw MeshError("edge shared by more than two cells");
          e.cell1 = static_cast<int>(c);
        }
        cell_edges_[c][s] = it->second;
      }
    }

    for (Edge& e : edges_) {
      e.boundary = (e.cell1 == -1);
      const Vec2 c0 = centroid(e.cell0);
      if (e.boundary) {
        if (dot(e.normal, c0 - e.midpoint) > 0.0) {
          e.normal = e.normal * -1.0;
        }
      } else {
        const Vec2 c1 = centroid(e.cell1);
        if (dot(e.normal, c1 - c0) < 0.0) std::swap(e.cell0, e.cell1);
      }
    }

    support_neighbors_.resize(edges_.size());
    stencil_.resize(edges_.size());
    for (int i = 0; i < num_edges(); ++i) {
      std::vector<int>& nb = support_neighbors_[i];
      std::vector<int>& st = stencil_[i];
      for (int c : {edges_[i].cell0, edges_[i].cell1}) {
        if (c < 0) continue;
        for (int j : cell_edges_[c]) {
          nb.push_back(j);
          st.push_back(j);
        }
        // One layer across each face of the cell.
        for (int f : cell_edges_[c]) {
          const Edge& ef = edges_[f];
          const int other = (ef.cell0 == c) ? ef.cell1 : ef.cell0;
          if (other < 0) continue;
          for (int j : cell_edges_[other]) st.push_back(j);
        }
      }
      auto dedup = [](std::vector<int>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
      };
      dedup(nb);
      dedup(st);
    }
  }

  Vec2 centroid(int c) const {
    const auto [a, b, d] = cell_vertices(c);
    return (a + b + d) / 3.0;
  }

  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> cells_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> cell_edges_;
  std::vector<double> cell_areas_;
  std::vector<std::vector<int>> support_neighbors_;
  std::vector<std::vector<int>> stencil_;
  double h_ = 0.0;
};

struct BBox {
  double xmin, ymin, xmax, ymax;
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
};

// Uniform n x n grid of squares, each split along its SW-NE diagonal.
inline TriMesh build_uniform_mesh(const BBox& bbox, int n) {
  if (n < 1) throw MeshError("build_uniform_mesh: n must be >= 1");
  if (!(bbox.width() > 0.0) || !(bbox.height() > 0.0))
    throw MeshError("build_uniform_mesh: degenerate bounding box");

  std::vector<Vec2> verts;
  verts.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      verts.emplace_back(bbox.xmin + bbox.width() * i / n,
                         bbox.ymin + bbox.height() * j / n);

  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> cells;
  cells.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int a = vid(i, j), b = vid(i + 1, j);
      const int c = vid(i + 1, j + 1), d = vid(i, j + 1);
      cells.push_back({a, b, c});
      cells.push_back({a, c, d});
    }
  }
  return TriMesh(std::move(verts), std::move(cells));
}

namespace detail {

inline void append_double(std::string& out, double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace detail

// Plain-text mesh format: line "V C", then V lines "x y", then C lines
// "i j k" (0-based, counterclockwise). Doubles are written shortest
// round-trip, so write/read/write is stable.
inline void write_mesh(const TriMesh& mesh, std::ostream& os) {
  std::string out;
  out += std::to_string(mesh.num_vertices());
  out += ' ';
  out += std::to_string(mesh.num_cells());
  out += '\n';
  for (const Vec2& v : mesh.vertices()) {
    detail::append_double(out, v.x);
    out += ' ';
    detail::append_double(out, v.y);
    out += '\n';
  }
  for (const auto& c : mesh.cells()) {
    out += std::to_string(c[0]);
    out += ' ';
    out += std::to_string(c[1]);
    out += ' ';
    out += std::to_string(c[2]);
    out += '\n';
  }
  os << out;
  if (!os) throw IoError("write_mesh: stream failure");
}

inline void write_mesh(const TriMesh& mesh, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("write_mesh: cannot open " + path);
  write_mesh(mesh, os);
}

inline TriMesh read_mesh(std::istream& is) {
  int nv = 0, nc = 0;
  if (!(is >> nv >> nc)) throw IoError("read_mesh: bad header");
  std::vector<Vec2> verts(nv);
  for (int i = 0; i < nv; ++i)
    if (!(is >> verts[i].x >> verts[i].y))
      throw IoError("read_mesh: bad vertex line " + std::to_string(i));
  std::vector<std::array<int, 3>> cells(nc);
  for (int c = 0; c < nc; ++c)
    if (!(is >> cells[c][0] >> cells[c][1] >> cells[c][2]))
      throw IoError("read_mesh: bad cell line " + std::to_string(c));
  return TriMesh(std::move(verts), std::move(cells));
}

inline TriMesh read_mesh(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("read_mesh: cannot open " + path);
  return read_mesh(is);
}

}  // namespace crt
