// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#include <geoprim/mesh_io.hpp>

#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace geoprim {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "geoprim-mesh";
constexpr int kVersion = 1;

// Lexicographic to VTK (counterclockwise) vertex order.
constexpr std::array<int, 4> kVtkQuad{0, 1, 3, 2};
constexpr std::array<int, 8> kVtkHex{0, 1, 3, 2, 4, 5, 7, 6};

std::string number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

[[noreturn]] void parse_fail(const std::string& what) {
  fail(ErrorCode::ParseError, "mesh document: " + what);
}

}  // namespace

std::string write_native_mesh(const Mesh& input) {
  const Mesh mesh = input.flattened();
  json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["dim"] = mesh.dim();
  doc["spacedim"] = mesh.spacedim();
  json vertices = json::array();
  for (const Point& p : mesh.vertices()) {
    json row = json::array();
    for (int i = 0; i < p.size(); ++i) row.push_back(p[i]);
    vertices.push_back(std::move(row));
  }
  doc["vertices"] = std::move(vertices);
  json cells = json::array(), ids = json::array();
  for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
    cells.push_back(mesh.cell(c).vertices);
    ids.push_back(mesh.cell(c).manifold_id);
  }
  doc["cells"] = std::move(cells);
  doc["cell_manifold_ids"] = std::move(ids);
  json edges = json::array();
  for (const auto& [key, info] : mesh.edges())
    if (info.manifold_id != kUnsetManifoldId)
      edges.push_back({{"vertices", key}, {"manifold_id", info.manifold_id}});
  doc["edges"] = std::move(edges);
  json faces = json::array();
  for (const auto& [key, info] : mesh.faces())
    if (info.manifold_id != kUnsetManifoldId)
      faces.push_back({{"vertices", key}, {"manifold_id", info.manifold_id}});
  doc["faces"] = std::move(faces);
  return doc.dump(1) + "\n";
}

Mesh read_native_mesh(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    parse_fail(e.what());
  }
  try {
    if (doc.value("format", "") != kFormat) parse_fail("format must be \"geoprim-mesh\"");
    if (doc.value("version", 0) != kVersion) parse_fail("unsupported version");
    const int dim = doc.at("dim").get<int>();
    const int spacedim = doc.at("spacedim").get<int>();
    if (dim < 2 || dim > 3 || spacedim < dim || spacedim > 3)
      parse_fail("dim/spacedim must be 2/2, 2/3 or 3/3");
    Mesh mesh(dim, spacedim);
    for (const json& row : doc.at("vertices")) {
      const auto c = row.get<std::vector<double>>();
      if (static_cast<int>(c.size()) != spacedim) parse_fail("vertex with wrong number of coordinates");
      Point p(spacedim);
      for (int i = 0; i < spacedim; ++i) {
        if (!std::isfinite(c[i])) parse_fail("non-finite vertex coordinate");
        p[i] = c[i];
      }
      mesh.add_vertex(p);
    }
    const json& cells = doc.at("cells");
    const json& ids = doc.at("cell_manifold_ids");
    if (cells.size() != ids.size()) parse_fail("cells and cell_manifold_ids differ in length");
    const long nv = static_cast<long>(mesh.n_vertices());
    auto check_vertex = [nv](long v) {
      if (v < 0 || v >= nv) parse_fail("vertex index " + std::to_string(v) + " out of range");
    };
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto v = cells[c].get<std::vector<long>>();
      if (static_cast<int>(v.size()) != (1 << dim)) parse_fail("cell with wrong number of vertices");
      for (long x : v) check_vertex(x);
      const ManifoldId id = ids[c].get<ManifoldId>();
      if (id < 0) parse_fail("negative manifold id");
      mesh.add_cell(v, id);
    }
    for (const json& e : doc.value("edges", json::array())) {
      const auto v = e.at("vertices").get<std::vector<long>>();
      if (v.size() != 2) parse_fail("edge needs two vertices");
      for (long x : v) check_vertex(x);
      if (!mesh.edge(v[0], v[1])) parse_fail("edge is not part of any cell");
      mesh.set_edge_manifold(v[0], v[1], e.at("manifold_id").get<ManifoldId>());
    }
    for (const json& f : doc.value("faces", json::array())) {
      const auto v = f.at("vertices").get<std::vector<long>>();
      if (v.size() != 4) parse_fail("face needs four vertices");
      for (long x : v) check_vertex(x);
      const std::array<VertexIndex, 4> a{v[0], v[1], v[2], v[3]};
      if (!mesh.face(a)) parse_fail("face is not part of any cell");
      mesh.set_face_manifold(a, f.at("manifold_id").get<ManifoldId>());
    }
    return mesh;
  } catch (const json::exception& e) {
    parse_fail(e.what());
  } catch (const GeometryError& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    parse_fail(e.what());
  }
}

std::string write_vtk(const Mesh& mesh, const std::string& title, const std::vector<CellField>& fields) {
  const std::vector<CellIndex> active = mesh.active_cells();
  for (const CellField& f : fields)
    if (f.values.size() != active.size())
      fail(ErrorCode::InvalidArgument, "write_vtk: field '" + f.name + "' needs one value per active cell");

  std::ostringstream out;
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.n_vertices() << " double\n";
  for (const Point& p : mesh.vertices()) {
    for (int i = 0; i < 3; ++i) out << (i ? " " : "") << number(i < p.size() ? p[i] : 0.0);
    out << '\n';
  }
  const int nv = 1 << mesh.dim();
  out << "CELLS " << active.size() << ' ' << active.size() * (nv + 1) << '\n';
  for (CellIndex c : active) {
    out << nv;
    for (int k = 0; k < nv; ++k)
      out << ' ' << mesh.cell(c).vertices[mesh.dim() == 2 ? kVtkQuad[k] : kVtkHex[k]];
    out << '\n';
  }
  out << "CELL_TYPES " << active.size() << '\n';
  for (std::size_t i = 0; i < active.size(); ++i) out << (mesh.dim() == 2 ? 9 : 12) << '\n';

  out << "CELL_DATA " << active.size() << '\n';
  out << "SCALARS manifold_id int 1\nLOOKUP_TABLE default\n";
  for (CellIndex c : active) out << mesh.cell(c).manifold_id << '\n';
  out << "SCALARS level int 1\nLOOKUP_TABLE default\n";
  for (CellIndex c : active) out << mesh.cell(c).level << '\n';
  for (const CellField& f : fields) {
    out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : f.values) out << number(v) << '\n';
  }
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) fail(ErrorCode::IoError, "write to '" + path + "' failed");
}

}  // namespace geoprim
