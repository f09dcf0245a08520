#include <algorithm>
#include <sstream>

#include <doctest.h>

#include "crt/mesh.hpp"

using namespace crt;

TEST_CASE("uniform mesh entity counts satisfy the Euler formula") {
  for (int n : {1, 2, 5, 8}) {
    const TriMesh mesh = build_uniform_mesh({0, 0, 1, 1}, n);
    CHECK(mesh.num_vertices() == (n + 1) * (n + 1));
    CHECK(mesh.num_cells() == 2 * n * n);
    CHECK(mesh.num_edges() == 3 * n * n + 2 * n);
    // V - E + F = 1 for a triangulated disk (outer face excluded).
    CHECK(mesh.num_vertices() - mesh.num_edges() + mesh.num_cells() == 1);
    CHECK(mesh.domain_area() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("cell areas positive and edge opposite-vertex convention") {
  const TriMesh mesh = build_uniform_mesh({-1, -1, 1, 1}, 3);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    CHECK(mesh.cell_area(c) > 0.0);
    const auto v = mesh.cell_vertices(c);
    const auto& e = mesh.cell_edges(c);
    for (int s = 0; s < 3; ++s) {
      // Edge s must not contain vertex s.
      const Edge& ed = mesh.edge(e[s]);
      const int vs = mesh.cells()[c][s];
      CHECK(ed.v0 != vs);
      CHECK(ed.v1 != vs);
      // Its midpoint is the average of the other two vertices.
      const Vec2 m = (v[(s + 1) % 3] + v[(s + 2) % 3]) * 0.5;
      CHECK(ed.midpoint.x == doctest::Approx(m.x).epsilon(1e-15));
      CHECK(ed.midpoint.y == doctest::Approx(m.y).epsilon(1e-15));
    }
  }
}

TEST_CASE("edge normals point from cell0 to cell1 and outward on the boundary") {
  const TriMesh mesh = build_uniform_mesh({0, 0, 2, 1}, 4);
  auto centroid = [&](int c) {
    const auto v = mesh.cell_vertices(c);
    return (v[0] + v[1] + v[2]) / 3.0;
  };
  for (const Edge& e : mesh.edges()) {
    CHECK(norm(e.normal) == doctest::Approx(1.0).epsilon(1e-14));
    if (e.boundary) {
      CHECK(e.cell1 == -1);
      CHECK(dot(e.normal, centroid(e.cell0) - e.midpoint) < 0.0);
    } else {
      CHECK(dot(e.normal, centroid(e.cell1) - centroid(e.cell0)) > 0.0);
    }
  }
}

TEST_CASE("support neighborhood and operator stencil sizes on a uniform mesh") {
  const TriMesh mesh = build_uniform_mesh({0, 0, 1, 1}, 6);
  for (int i = 0; i < mesh.num_edges(); ++i) {
    const auto& nb = mesh.support_neighbors(i);
    const auto& st = mesh.stencil(i);
    CHECK(std::count(nb.begin(), nb.end(), i) == 1);
    if (!mesh.edge(i).boundary) {
      CHECK((nb.size() == 5 || nb.size() == 6));
      // The upwind coupling reaches one cell layer beyond the support.
      CHECK(st.size() > nb.size());
      CHECK(st.size() <= 13);
    }
    // The stencil contains the support neighborhood.
    for (int j : nb) CHECK(std::count(st.begin(), st.end(), j) == 1);
  }
}

TEST_CASE("mesh text format round-trips bit-identically") {
  const TriMesh mesh = build_uniform_mesh({-1, -1, 1, 1}, 3);
  std::stringstream first;
  write_mesh(mesh, first);
  const TriMesh reread = read_mesh(first);
  std::stringstream second;
  write_mesh(reread, second);
  CHECK(first.str() == second.str());
  CHECK(reread.num_vertices() == mesh.num_vertices());
  for (int i = 0; i < mesh.num_vertices(); ++i) {
    CHECK(reread.vertex(i).x == mesh.vertex(i).x);
    CHECK(reread.vertex(i).y == mesh.vertex(i).y);
  }
}

TEST_CASE("mesh validation rejects bad input") {
  using Cells = std::vector<std::array<int, 3>>;
  const std::vector<Vec2> verts = {{0, 0}, {1, 0}, {0, 1}};
  CHECK_THROWS_AS(TriMesh(verts, Cells{{0, 2, 1}}), MeshError);  // clockwise
  CHECK_THROWS_AS(TriMesh(verts, Cells{{0, 1, 3}}), MeshError);  // bad index
  CHECK_THROWS_AS(TriMesh(verts, Cells{}), MeshError);           // no cells
  CHECK_THROWS_AS(TriMesh({{0, 0}, {1, 0}, {2, 0}}, Cells{{0, 1, 2}}),
                  MeshError);  // degenerate
  std::stringstream bad("3 1\n0 0\n1 0\n");
  CHECK_THROWS_AS(read_mesh(bad), IoError);
}
