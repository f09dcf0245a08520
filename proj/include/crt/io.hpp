#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "crt/cr_space.hpp"
#include "crt/errors.hpp"
#include "crt/reconstruction.hpp"

namespace crt {
namespace detail {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.5e", v);
  return buf;
}

}  // namespace detail

// CSV table "h,l2,rate,linf,linf_rate"; lines starting with '#' are
// comments. Six significant digits, scientific notation.
template <typename Row>
inline void write_csv(const std::vector<Row>& rows, std::ostream& os,
                      const std::string& comment = "") {
  if (!comment.empty()) os << "# " << comment << '\n';
  os << "h,l2,rate,linf,linf_rate\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    os << detail::sci(r.h) << ',' << detail::sci(r.l2) << ',';
    if (i > 0) os << detail::sci(r.rate);
    os << ',' << detail::sci(r.linf) << ',';
    if (i > 0) os << detail::sci(r.linf_rate);
    os << '\n';
  }
  if (!os) throw IoError("write_csv: stream failure");
}

template <typename Row>
inline void write_csv(const std::vector<Row>& rows, const std::string& path,
                      const std::string& comment = "") {
  std::ofstream os(path);
  if (!os) throw IoError("write_csv: cannot open " + path);
  write_csv(rows, os, comment);
}

// Legacy ASCII VTK. The CR field is discontinuous across edges away from
// the midpoints, so each cell is written as an independent block of its
// three vertex evaluations.
inline void write_vtk(const CRFunction& u, std::ostream& os,
                      const std::string& field_name = "u") {
  const TriMesh& mesh = *u.mesh;
  const int nc = mesh.num_cells();
  os << "# vtk DataFile Version 3.0\n"
     << "cr field\nASCII\nDATASET UNSTRUCTURED_GRID\n"
     << "POINTS " << 3 * nc << " double\n";
  for (int c = 0; c < nc; ++c)
    for (const Vec2& v : mesh.cell_vertices(c))
      os << v.x << ' ' << v.y << " 0\n";
  os << "CELLS " << nc << ' ' << 4 * nc << '\n';
  for (int c = 0; c < nc; ++c)
    os << "3 " << 3 * c << ' ' << 3 * c + 1 << ' ' << 3 * c + 2 << '\n';
  os << "CELL_TYPES " << nc << '\n';
  for (int c = 0; c < nc; ++c) os << "5\n";
  os << "POINT_DATA " << 3 * nc << "\nSCALARS " << field_name
     << " double 1\nLOOKUP_TABLE default\n";
  for (int c = 0; c < nc; ++c) {
    const auto& e = mesh.cell_edges(c);
    // Vertex s value: sum of 1 - 2*lambda_t over edges, lambda = unit vector.
    for (int s = 0; s < 3; ++s) {
      double val = 0.0;
      for (int t = 0; t < 3; ++t)
        val += u[e[t]] * (t == s ? -1.0 : 1.0);
      os << val << '\n';
    }
  }
  if (!os) throw IoError("write_vtk: stream failure");
}

inline void write_vtk(const CRFunction& u, const std::string& path,
                      const std::string& field_name = "u") {
  std::ofstream os(path);
  if (!os) throw IoError("write_vtk: cannot open " + path);
  write_vtk(u, os, field_name);
}

// The reconstruction is continuous, so points are shared.
inline void write_vtk(const P1HalfMeshFunction& rec, std::ostream& os,
                      const std::string& field_name = "u") {
  const TriMesh& mesh = rec.half->mesh();
  os << "# vtk DataFile Version 3.0\n"
     << "p1 reconstruction\nASCII\nDATASET UNSTRUCTURED_GRID\n"
     << "POINTS " << mesh.num_vertices() << " double\n";
  for (const Vec2& v : mesh.vertices()) os << v.x << ' ' << v.y << " 0\n";
  os << "CELLS " << mesh.num_cells() << ' ' << 4 * mesh.num_cells() << '\n';
  for (const auto& c : mesh.cells())
    os << "3 " << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  os << "CELL_TYPES " << mesh.num_cells() << '\n';
  for (int c = 0; c < mesh.num_cells(); ++c) os << "5\n";
  os << "POINT_DATA " << mesh.num_vertices() << "\nSCALARS " << field_name
     << " double 1\nLOOKUP_TABLE default\n";
  for (double v : rec.vertex_values) os << v << '\n';
  if (!os) throw IoError("write_vtk: stream failure");
}

inline void write_vtk(const P1HalfMeshFunction& rec, const std::string& path,
                      const std::string& field_name = "u") {
  std::ofstream os(path);
  if (!os) throw IoError("write_vtk: cannot open " + path);
  write_vtk(rec, os, field_name);
}

}  // namespace crt
