// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#include <geoprim/mesh.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <set>

namespace geoprim {

// ---------------------------------------------------------------- registry

ManifoldRegistry::ManifoldRegistry(int spacedim)
    : spacedim_(spacedim), flat_(std::make_shared<FlatManifold>(spacedim)) {}

void ManifoldRegistry::set(ManifoldId id, ManifoldRef manifold) {
  if (!manifold) fail(ErrorCode::InvalidArgument, "ManifoldRegistry: null oracle");
  if (id < 0) fail(ErrorCode::InvalidArgument, "ManifoldRegistry: ids must be non-negative");
  if (manifold->spacedim() != spacedim_)
    fail(ErrorCode::InvalidArgument, "ManifoldRegistry: oracle has the wrong space dimension");
  map_[id] = std::move(manifold);
}

const Manifold& ManifoldRegistry::get(ManifoldId id) const { return *get_ref(id); }

ManifoldRef ManifoldRegistry::get_ref(ManifoldId id) const {
  auto it = map_.find(id);
  return it == map_.end() ? ManifoldRef(flat_) : it->second;
}

std::vector<ManifoldId> ManifoldRegistry::ids() const {
  std::vector<ManifoldId> out;
  for (const auto& [id, m] : map_) out.push_back(id);
  return out;
}

// ---------------------------------------------------------------- keys

EdgeKey edge_key(VertexIndex a, VertexIndex b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

FaceKey face_key(std::array<VertexIndex, 4> v) {
  std::sort(v.begin(), v.end());
  return v;
}

namespace {

using Lattice = std::array<int, 3>;

Lattice vertex_lattice(int dim, int v) {
  Lattice p{0, 0, 0};
  for (int k = 0; k < dim; ++k) p[k] = 2 * ((v >> k) & 1);
  return p;
}

Lattice midpoint_lattice(const Lattice& a, const Lattice& b) {
  return {(a[0] + b[0]) / 2, (a[1] + b[1]) / 2, (a[2] + b[2]) / 2};
}

// True if every lattice point in `pts` lies in the closure of the parent
// entity spanned by `corners`.
bool lies_in(int dim, const std::vector<Lattice>& pts, const std::vector<Lattice>& corners) {
  for (int k = 0; k < dim; ++k) {
    const bool fixed = std::all_of(corners.begin(), corners.end(),
                                   [&](const Lattice& c) { return c[k] == corners[0][k]; });
    if (!fixed) continue;
    for (const Lattice& p : pts)
      if (p[k] != corners[0][k]) return false;
  }
  return true;
}

double det_of(const SmallMatrix& J) {
  if (J.rows() == 2) return J(0, 0) * J(1, 1) - J(0, 1) * J(1, 0);
  if (J.rows() == 3)
    return J.col(0).head<3>().dot(J.col(1).head<3>().cross(J.col(2).head<3>()));
  return J(0, 0);
}

Eigen::Vector3d cell_normal(const std::vector<Point>& v) {
  const SmallMatrix J = dlinear_jacobian(v, make_point({0.5, 0.5}));
  const Eigen::Vector3d a(J(0, 0), J(1, 0), J(2, 0)), b(J(0, 1), J(1, 1), J(2, 1));
  const Eigen::Vector3d n = a.cross(b);
  const double len = n.norm();
  return len > 0 ? Eigen::Vector3d(n / len) : Eigen::Vector3d::Zero();
}

}  // namespace

std::vector<double> vertex_jacobian_determinants(const std::vector<Point>& vertices) {
  const int dim = vertices.size() == 4 ? 2 : vertices.size() == 8 ? 3 : 1;
  std::vector<double> dets;
  for (int v = 0; v < (1 << dim); ++v)
    dets.push_back(det_of(dlinear_jacobian(vertices, reference::vertex_position(dim, v))));
  return dets;
}

// ---------------------------------------------------------------- mesh

Mesh::Mesh(int dim, int spacedim) : dim_(dim), spacedim_(spacedim) {
  if (dim < 2 || dim > 3 || spacedim < dim || spacedim > 3)
    fail(ErrorCode::InvalidArgument, "Mesh: supported are dim 2 or 3 with dim <= spacedim <= 3");
}

VertexIndex Mesh::add_vertex(const Point& p) {
  if (p.size() != spacedim_) fail(ErrorCode::InvalidArgument, "Mesh: vertex has wrong dimension");
  if (!all_finite(p)) fail(ErrorCode::InvalidArgument, "Mesh: vertex coordinates must be finite");
  vertices_.push_back(p);
  return static_cast<VertexIndex>(vertices_.size()) - 1;
}

CellIndex Mesh::add_cell(std::vector<VertexIndex> vertices, ManifoldId id) {
  if (static_cast<int>(vertices.size()) != reference::n_vertices(dim_))
    fail(ErrorCode::InvalidArgument, "Mesh: cell has the wrong number of vertices");
  for (VertexIndex v : vertices)
    if (v < 0 || v >= static_cast<VertexIndex>(vertices_.size()))
      fail(ErrorCode::InvalidArgument, "Mesh: cell vertex index out of range");
  if (id < 0) fail(ErrorCode::InvalidArgument, "Mesh: cell manifold id must be non-negative");
  Cell cell;
  cell.vertices = std::move(vertices);
  cell.manifold_id = id;
  cell.coarse = static_cast<CellIndex>(cells_.size());
  cells_.push_back(std::move(cell));
  register_cell_entities(cells_.back().coarse);
  return cells_.back().coarse;
}

void Mesh::register_cell_entities(CellIndex c) {
  const Cell& cell = cells_[c];
  for (const auto& e : reference::edges(dim_)) edge_entry(cell.vertices[e[0]], cell.vertices[e[1]]);
  if (dim_ == 3)
    for (const auto& f : reference::kHexFaces)
      face_entry({cell.vertices[f[0]], cell.vertices[f[1]], cell.vertices[f[2]], cell.vertices[f[3]]});
}

EdgeInfo& Mesh::edge_entry(VertexIndex a, VertexIndex b) { return edges_[edge_key(a, b)]; }

FaceInfo& Mesh::face_entry(std::array<VertexIndex, 4> v) { return faces_[face_key(v)]; }

void Mesh::set_edge_manifold(VertexIndex a, VertexIndex b, ManifoldId id) {
  auto it = edges_.find(edge_key(a, b));
  if (it == edges_.end()) fail(ErrorCode::InvalidArgument, "Mesh: no such edge");
  it->second.manifold_id = id;
}

void Mesh::set_face_manifold(std::array<VertexIndex, 4> vertices, ManifoldId id) {
  auto it = faces_.find(face_key(vertices));
  if (it == faces_.end()) fail(ErrorCode::InvalidArgument, "Mesh: no such face");
  it->second.manifold_id = id;
}

const EdgeInfo* Mesh::edge(VertexIndex a, VertexIndex b) const {
  auto it = edges_.find(edge_key(a, b));
  return it == edges_.end() ? nullptr : &it->second;
}

const FaceInfo* Mesh::face(std::array<VertexIndex, 4> vertices) const {
  auto it = faces_.find(face_key(vertices));
  return it == faces_.end() ? nullptr : &it->second;
}

std::vector<CellIndex> Mesh::active_cells() const {
  std::vector<CellIndex> out;
  for (CellIndex c = 0; c < static_cast<CellIndex>(cells_.size()); ++c)
    if (cells_[c].active()) out.push_back(c);
  return out;
}

std::size_t Mesh::n_active_cells() const {
  return static_cast<std::size_t>(
      std::count_if(cells_.begin(), cells_.end(), [](const Cell& c) { return c.active(); }));
}

ManifoldId Mesh::edge_manifold_id(CellIndex c, int local_edge) const {
  const auto e = reference::edges(dim_)[local_edge];
  const EdgeInfo* info = edge(cells_[c].vertices[e[0]], cells_[c].vertices[e[1]]);
  return info && info->manifold_id != kUnsetManifoldId ? info->manifold_id : cells_[c].manifold_id;
}

ManifoldId Mesh::face_manifold_id(CellIndex c, int local_face) const {
  const auto& f = reference::kHexFaces[local_face];
  const auto& v = cells_[c].vertices;
  const FaceInfo* info = face({v[f[0]], v[f[1]], v[f[2]], v[f[3]]});
  return info && info->manifold_id != kUnsetManifoldId ? info->manifold_id : cells_[c].manifold_id;
}

std::vector<Point> Mesh::cell_vertices(CellIndex c) const {
  std::vector<Point> out;
  for (VertexIndex v : cells_[c].vertices) out.push_back(vertices_[v]);
  return out;
}

double Mesh::cell_diameter(CellIndex c) const {
  const std::vector<Point> v = cell_vertices(c);
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) d = std::max(d, (v[i] - v[j]).norm());
  return d;
}

CellGeometry Mesh::cell_geometry(CellIndex c, const ManifoldRegistry& registry) const {
  CellGeometry g;
  g.dim = dim_;
  g.vertices = cell_vertices(c);
  g.vertex_ids = cells_[c].vertices;
  for (int e = 0; e < reference::n_edges(dim_); ++e)
    g.edge_manifolds.push_back(&registry.get(edge_manifold_id(c, e)));
  for (int f = 0; f < reference::n_faces(dim_); ++f)
    g.face_manifolds.push_back(&registry.get(face_manifold_id(c, f)));
  g.cell_manifold = &registry.get(cells_[c].manifold_id);
  return g;
}

CellGeometry Mesh::face_geometry(CellIndex c, int local_face,
                                 const ManifoldRegistry& registry) const {
  const auto& v = cells_[c].vertices;
  CellGeometry g;
  g.dim = dim_ - 1;
  if (dim_ == 2) {
    const auto& e = reference::kQuadEdges.at(local_face);
    g.vertex_ids = {v[e[0]], v[e[1]]};
    g.cell_manifold = &registry.get(edge_manifold_id(c, local_face));
    g.edge_manifolds = {g.cell_manifold};
  } else {
    const auto& f = reference::kHexFaces.at(local_face);
    for (int k : f) g.vertex_ids.push_back(v[k]);
    g.cell_manifold = &registry.get(face_manifold_id(c, local_face));
    for (const auto& qe : reference::kQuadEdges) {
      const EdgeInfo* info = edge(g.vertex_ids[qe[0]], g.vertex_ids[qe[1]]);
      const ManifoldId id = info && info->manifold_id != kUnsetManifoldId
                                ? info->manifold_id
                                : face_manifold_id(c, local_face);
      g.edge_manifolds.push_back(&registry.get(id));
    }
  }
  for (long id : g.vertex_ids) g.vertices.push_back(vertices_[id]);
  return g;
}

RefinementFlags Mesh::isotropic_flags() const {
  RefinementFlags flags(cells_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c)
    if (cells_[c].active()) flags[c].kind = FlagKind::Isotropic;
  return flags;
}

Mesh Mesh::refine_uniform(const ManifoldRegistry& registry) const {
  return refine(isotropic_flags(), registry);
}

Mesh Mesh::refine(const RefinementFlags& flags, const ManifoldRegistry& registry) const {
  if (flags.size() != cells_.size())
    fail(ErrorCode::InvalidArgument, "refine: one flag per cell is required");
  if (registry.spacedim() != spacedim_)
    fail(ErrorCode::InvalidArgument, "refine: registry and mesh dimensions differ");
  Mesh out = *this;
  for (CellIndex c = 0; c < static_cast<CellIndex>(cells_.size()); ++c) {
    if (flags[c].kind == FlagKind::None) continue;
    if (!cells_[c].active())
      fail(ErrorCode::InvalidArgument, "refine: flag on a cell that is already refined");
    try {
      out.refine_cell(c, flags[c], registry);
    } catch (const GeometryError& e) {
      // Oracle failures learn which cell was being refined.
      if (e.entity()) throw;
      throw GeometryError(e.code(), e.what(), c);
    }
  }
  out.collect_hanging_vertices();
  return out;
}

void Mesh::refine_cell(CellIndex c, const RefinementFlag& flag, const ManifoldRegistry& registry) {
  const std::vector<VertexIndex> corner_ids = cells_[c].vertices;
  const ManifoldId cell_id = cells_[c].manifold_id;
  const int nv = reference::n_vertices(dim_);
  const auto ref_edges = reference::edges(dim_);

  const bool aniso = flag.kind == FlagKind::Anisotropic;
  if (aniso && (dim_ != 2 || flag.axis < 0 || flag.axis > 1))
    fail(ErrorCode::InvalidArgument, "refine: anisotropic flags are supported on quadrilaterals only");

  std::map<Lattice, VertexIndex> lattice;
  for (int v = 0; v < nv; ++v) lattice[vertex_lattice(dim_, v)] = corner_ids[v];

  // Edge midpoints: (1/2, 1/2) on the edge's oracle, end points in
  // increasing global order.
  std::vector<VertexIndex> edge_mid(ref_edges.size(), -1);
  for (std::size_t e = 0; e < ref_edges.size(); ++e) {
    if (aniso && reference::edge_axis(dim_, static_cast<int>(e)) != flag.axis) continue;
    VertexIndex a = corner_ids[ref_edges[e][0]], b = corner_ids[ref_edges[e][1]];
    EdgeInfo& info = edge_entry(a, b);
    if (info.midpoint < 0) {
      if (b < a) std::swap(a, b);
      const std::array<Point, 2> pts{vertices_[a], vertices_[b]};
      const std::array<double, 2> w{0.5, 0.5};
      const Point m = registry.get(edge_manifold_id(c, static_cast<int>(e))).new_point(pts, w);
      const VertexIndex id = add_vertex(m);
      edge_entry(a, b).midpoint = id;
    }
    edge_mid[e] = edge_entry(a, b).midpoint;
    lattice[midpoint_lattice(vertex_lattice(dim_, ref_edges[e][0]),
                             vertex_lattice(dim_, ref_edges[e][1]))] = edge_mid[e];
  }

  // Quad center from 4 vertices (-1/4) and 4 edge midpoints (1/2).
  auto quad_center = [&](const std::array<int, 4>& fv, const std::array<int, 4>& fe,
                         const Manifold& m) {
    std::vector<Point> pts;
    std::vector<double> w;
    for (int v : fv) {
      pts.push_back(vertices_[corner_ids[v]]);
      w.push_back(-0.25);
    }
    for (int e : fe) {
      pts.push_back(vertices_[edge_mid[e]]);
      w.push_back(0.5);
    }
    return m.new_point(pts, w);
  };

  std::vector<VertexIndex> face_center(reference::n_faces(dim_), -1);
  if (!aniso && dim_ == 2) {
    const VertexIndex id =
        add_vertex(quad_center({0, 1, 2, 3}, {0, 1, 2, 3}, registry.get(cell_id)));
    lattice[{1, 1, 0}] = id;
  } else if (!aniso && dim_ == 3) {
    auto hex_edge = [&](int a, int b) {
      for (int e = 0; e < 12; ++e)
        if (reference::kHexEdges[e][0] == a && reference::kHexEdges[e][1] == b) return e;
      return -1;
    };
    for (int f = 0; f < 6; ++f) {
      const auto& fv = reference::kHexFaces[f];
      FaceInfo& info = face_entry({corner_ids[fv[0]], corner_ids[fv[1]], corner_ids[fv[2]],
                                   corner_ids[fv[3]]});
      if (info.center < 0) {
        const std::array<int, 4> fe{hex_edge(fv[0], fv[1]), hex_edge(fv[2], fv[3]),
                                    hex_edge(fv[0], fv[2]), hex_edge(fv[1], fv[3])};
        const Point p = quad_center(fv, fe, registry.get(face_manifold_id(c, f)));
        const VertexIndex id = add_vertex(p);
        face_entry({corner_ids[fv[0]], corner_ids[fv[1]], corner_ids[fv[2]], corner_ids[fv[3]]})
            .center = id;
      }
      face_center[f] = face_entry({corner_ids[fv[0]], corner_ids[fv[1]], corner_ids[fv[2]],
                                   corner_ids[fv[3]]})
                           .center;
      Lattice pos{0, 0, 0};
      for (int v : fv)
        for (int k = 0; k < 3; ++k) pos[k] += vertex_lattice(3, v)[k];
      for (int& p : pos) p /= 4;
      lattice[pos] = face_center[f];
    }
    // Hex center: vertices 1/8, edge midpoints -1/4, face centers 1/2.
    std::vector<Point> pts;
    std::vector<double> w;
    for (int v = 0; v < 8; ++v) {
      pts.push_back(vertices_[corner_ids[v]]);
      w.push_back(0.125);
    }
    for (int e = 0; e < 12; ++e) {
      pts.push_back(vertices_[edge_mid[e]]);
      w.push_back(-0.25);
    }
    for (int f = 0; f < 6; ++f) {
      pts.push_back(vertices_[face_center[f]]);
      w.push_back(0.5);
    }
    lattice[{1, 1, 1}] = add_vertex(registry.get(cell_id).new_point(pts, w));
  }

  // Children.
  std::vector<std::vector<Lattice>> child_positions;
  if (aniso) {
    for (int i = 0; i < 2; ++i) {
      std::vector<Lattice> pos;
      for (int v = 0; v < 4; ++v) {
        const int p = v & 1, q = (v >> 1) & 1;
        pos.push_back(flag.axis == 0 ? Lattice{i + p, 2 * q, 0} : Lattice{2 * p, i + q, 0});
      }
      child_positions.push_back(pos);
    }
  } else {
    for (int ch = 0; ch < nv; ++ch) {
      std::vector<Lattice> pos;
      for (int v = 0; v < nv; ++v) {
        Lattice p{0, 0, 0};
        for (int k = 0; k < dim_; ++k) p[k] = ((ch >> k) & 1) + ((v >> k) & 1);
        pos.push_back(p);
      }
      child_positions.push_back(pos);
    }
  }

  // Parent entities, as lattice corner sets, for id inheritance.
  std::vector<std::pair<std::vector<Lattice>, EdgeKey>> parent_edges;
  for (const auto& e : ref_edges)
    parent_edges.push_back({{vertex_lattice(dim_, e[0]), vertex_lattice(dim_, e[1])},
                            edge_key(corner_ids[e[0]], corner_ids[e[1]])});
  std::vector<std::pair<std::vector<Lattice>, FaceKey>> parent_faces;
  if (dim_ == 3)
    for (const auto& f : reference::kHexFaces) {
      std::vector<Lattice> corners;
      for (int v : f) corners.push_back(vertex_lattice(3, v));
      parent_faces.push_back({corners, face_key({corner_ids[f[0]], corner_ids[f[1]],
                                                 corner_ids[f[2]], corner_ids[f[3]]})});
    }

  const bool volume = dim_ == spacedim_;
  for (const auto& pos : child_positions) {
    Cell child;
    for (const Lattice& p : pos) child.vertices.push_back(lattice.at(p));
    child.manifold_id = cell_id;
    child.level = cells_[c].level + 1;
    child.parent = c;
    child.coarse = cells_[c].coarse;
    if (volume) {
      std::vector<Point> cv;
      for (VertexIndex v : child.vertices) cv.push_back(vertices_[v]);
      for (double d : vertex_jacobian_determinants(cv))
        if (!(d > 0.0))
          throw GeometryError(ErrorCode::InvertedChild,
                              "refine: child of cell " + std::to_string(c) +
                                  " has a non-positive Jacobian determinant",
                              c);
    }
    const CellIndex id = static_cast<CellIndex>(cells_.size());
    cells_.push_back(child);
    cells_[c].children.push_back(id);
    register_cell_entities(id);

    for (const auto& e : ref_edges) {
      const std::vector<Lattice> ep{pos[e[0]], pos[e[1]]};
      const EdgeKey key = edge_key(child.vertices[e[0]], child.vertices[e[1]]);
      EdgeInfo& info = edges_[key];
      for (const auto& [corners, pkey] : parent_edges)
        if (lies_in(dim_, ep, corners)) {
          if (key != pkey) info.parent = pkey;
          if (info.manifold_id == kUnsetManifoldId) info.manifold_id = edges_[pkey].manifold_id;
        }
      for (const auto& [corners, pkey] : parent_faces)
        if (lies_in(dim_, ep, corners) && info.manifold_id == kUnsetManifoldId)
          info.manifold_id = faces_[pkey].manifold_id;
    }
    if (dim_ == 3)
      for (const auto& f : reference::kHexFaces) {
        const std::vector<Lattice> fp{pos[f[0]], pos[f[1]], pos[f[2]], pos[f[3]]};
        FaceInfo& info = faces_[face_key({child.vertices[f[0]], child.vertices[f[1]],
                                          child.vertices[f[2]], child.vertices[f[3]]})];
        for (const auto& [corners, pkey] : parent_faces)
          if (lies_in(dim_, fp, corners) && info.manifold_id == kUnsetManifoldId)
            info.manifold_id = faces_[pkey].manifold_id;
      }
  }
  cells_[c].split_axis = aniso ? flag.axis : -1;
}

void Mesh::collect_hanging_vertices() {
  std::map<VertexIndex, std::vector<VertexIndex>> found;
  for (const Cell& cell : cells_) {
    if (!cell.active()) continue;
    for (const auto& e : reference::edges(dim_)) {
      const EdgeInfo* info = edge(cell.vertices[e[0]], cell.vertices[e[1]]);
      if (info && info->midpoint >= 0) {
        const EdgeKey k = edge_key(cell.vertices[e[0]], cell.vertices[e[1]]);
        found[info->midpoint] = {k[0], k[1]};
      }
    }
    if (dim_ == 3)
      for (const auto& f : reference::kHexFaces) {
        const std::array<VertexIndex, 4> fv{cell.vertices[f[0]], cell.vertices[f[1]],
                                            cell.vertices[f[2]], cell.vertices[f[3]]};
        const FaceInfo* info = face(fv);
        if (info && info->center >= 0) {
          const FaceKey k = face_key(fv);
          found[info->center] = {k.begin(), k.end()};
        }
      }
  }
  hanging_.clear();
  for (auto& [v, on] : found) hanging_.push_back({v, std::move(on)});
}

Mesh Mesh::flattened() const {
  Mesh out(dim_, spacedim_);
  out.vertices_ = vertices_;
  for (const Cell& cell : cells_)
    if (cell.active()) out.add_cell(cell.vertices, cell.manifold_id);
  for (auto& [key, info] : out.edges_) {
    const EdgeInfo* src = edge(key[0], key[1]);
    if (src) info.manifold_id = src->manifold_id;
  }
  for (auto& [key, info] : out.faces_) {
    auto it = faces_.find(key);
    if (it != faces_.end()) info.manifold_id = it->second.manifold_id;
  }
  return out;
}

// ---------------------------------------------------------------- indicators

std::vector<double> curvature_indicator(const Mesh& mesh) {
  if (mesh.dim() != 2 || mesh.spacedim() != 3)
    fail(ErrorCode::NotASurfaceMesh, "curvature_indicator: requires a surface mesh (dim 2 in 3D)");
  const std::vector<CellIndex> active = mesh.active_cells();
  std::map<EdgeKey, std::vector<CellIndex>> cells_of;
  std::map<CellIndex, Eigen::Vector3d> normal;
  for (CellIndex c : active) {
    normal[c] = cell_normal(mesh.cell_vertices(c));
    for (const auto& e : reference::kQuadEdges)
      cells_of[edge_key(mesh.cell(c).vertices[e[0]], mesh.cell(c).vertices[e[1]])].push_back(c);
  }

  auto length = [&](VertexIndex a, VertexIndex b) {
    return (mesh.vertex(a) - mesh.vertex(b)).norm();
  };

  std::vector<double> eta;
  eta.reserve(active.size());
  for (CellIndex c : active) {
    double sum = 0.0;
    auto add = [&](double len, CellIndex other) {
      Eigen::Vector3d n2 = normal.at(other);
      if (n2.dot(normal.at(c)) < 0) n2 = -n2;
      sum += len * (normal.at(c) - n2).squaredNorm();
    };
    std::function<void(VertexIndex, VertexIndex)> segment = [&](VertexIndex a, VertexIndex b) {
      const EdgeKey key = edge_key(a, b);
      for (CellIndex other : cells_of[key])
        if (other != c) {
          add(length(a, b), other);
          return;
        }
      const EdgeInfo* info = mesh.edge(a, b);
      if (!info) return;
      if (info->midpoint >= 0) {
        segment(a, info->midpoint);
        segment(info->midpoint, b);
        return;
      }
      for (std::optional<EdgeKey> up = info->parent; up;) {
        auto it = cells_of.find(*up);
        if (it != cells_of.end())
          for (CellIndex other : it->second)
            if (other != c) {
              add(length(a, b), other);
              return;
            }
        up = mesh.edge((*up)[0], (*up)[1])->parent;
      }
    };
    for (const auto& e : reference::kQuadEdges)
      segment(mesh.cell(c).vertices[e[0]], mesh.cell(c).vertices[e[1]]);
    eta.push_back(std::sqrt(mesh.cell_diameter(c) / 24.0 * sum));
  }
  return eta;
}

std::vector<bool> mark_fraction(const std::vector<double>& indicators, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    fail(ErrorCode::InvalidArgument, "mark_fraction: fraction must lie in (0, 1]");
  const std::size_t n = indicators.size();
  const std::size_t k = std::min(n, static_cast<std::size_t>(std::ceil(fraction * n)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return indicators[a] > indicators[b]; });
  std::vector<bool> marks(n, false);
  for (std::size_t i = 0; i < k; ++i) marks[order[i]] = true;
  return marks;
}

RefinementFlags flags_from_marks(const Mesh& mesh, const std::vector<bool>& marks) {
  const std::vector<CellIndex> active = mesh.active_cells();
  if (marks.size() != active.size())
    fail(ErrorCode::InvalidArgument, "flags_from_marks: one mark per active cell is required");
  RefinementFlags flags(mesh.n_cells());
  for (std::size_t i = 0; i < active.size(); ++i)
    if (marks[i]) flags[active[i]].kind = FlagKind::Isotropic;
  return flags;
}

RefinementFlags aspect_ratio_flags(const Mesh& mesh, const ManifoldRegistry& registry,
                                   double lambda_max) {
  if (!(lambda_max > 1.0))
    fail(ErrorCode::InvalidArgument, "aspect_ratio_flags: lambda_max must exceed 1");
  if (mesh.dim() != 2)
    fail(ErrorCode::InvalidArgument, "aspect_ratio_flags: quadrilateral meshes only");
  RefinementFlags flags(mesh.n_cells());
  for (CellIndex c : mesh.active_cells()) {
    std::array<double, 4> len{};
    for (int e = 0; e < 4; ++e) {
      VertexIndex a = mesh.cell(c).vertices[reference::kQuadEdges[e][0]];
      VertexIndex b = mesh.cell(c).vertices[reference::kQuadEdges[e][1]];
      if (b < a) std::swap(a, b);
      const Manifold& m = registry.get(mesh.edge_manifold_id(c, e));
      const std::array<Point, 2> pts{mesh.vertex(a), mesh.vertex(b)};
      const std::array<double, 2> w{0.5, 0.5};
      const Point mid = m.new_point(pts, w);
      len[e] = m.tangent_vector(mid, mesh.vertex(a)).norm() + m.tangent_vector(mid, mesh.vertex(b)).norm();
    }
    const auto [lo, hi] = std::minmax_element(len.begin(), len.end());
    if (*hi > lambda_max * *lo) {
      flags[c].kind = FlagKind::Anisotropic;
      flags[c].axis = len[0] + len[1] >= len[2] + len[3] ? 0 : 1;
    }
  }
  return flags;
}

std::shared_ptr<TransfiniteManifold> make_transfinite_manifold(const Mesh& mesh,
                                                               const ManifoldRegistry& registry,
                                                               ManifoldId id) {
  auto flat = std::make_shared<FlatManifold>(mesh.spacedim());
  std::vector<ManifoldRef> keep{flat};
  std::vector<TransfiniteCell> cells;
  auto resolve = [&](ManifoldId m) -> const Manifold* {
    if (m == id) return flat.get();
    keep.push_back(registry.get_ref(m));
    return keep.back().get();
  };
  for (CellIndex c = 0; c < static_cast<CellIndex>(mesh.n_cells()); ++c) {
    const Cell& cell = mesh.cell(c);
    if (cell.level != 0 || cell.manifold_id != id) continue;
    CellGeometry g;
    g.dim = mesh.dim();
    g.vertices = mesh.cell_vertices(c);
    g.vertex_ids = cell.vertices;
    for (int e = 0; e < reference::n_edges(mesh.dim()); ++e)
      g.edge_manifolds.push_back(resolve(mesh.edge_manifold_id(c, e)));
    for (int f = 0; f < reference::n_faces(mesh.dim()); ++f)
      g.face_manifolds.push_back(resolve(mesh.face_manifold_id(c, f)));
    g.cell_manifold = flat.get();
    cells.emplace_back(std::move(g));
  }
  if (cells.empty())
    fail(ErrorCode::ConfigError, "transfinite manifold " + std::to_string(id) + " has no coarse cells");
  return std::make_shared<TransfiniteManifold>(mesh.spacedim(), std::move(cells), std::move(keep));
}

// ---------------------------------------------------------------- builders

namespace meshes {

Mesh hypercube(int dim, int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "hypercube: n must be positive");
  Mesh mesh(dim, dim);
  const int np = n + 1;
  const int total = dim == 2 ? np * np : np * np * np;
  for (int i = 0; i < total; ++i) {
    Point p(dim);
    int rest = i;
    for (int k = 0; k < dim; ++k) {
      p[k] = double(rest % np) / n;
      rest /= np;
    }
    mesh.add_vertex(p);
  }
  const int ncells = dim == 2 ? n * n : n * n * n;
  for (int c = 0; c < ncells; ++c) {
    int idx[3] = {0, 0, 0}, rest = c;
    for (int k = 0; k < dim; ++k) {
      idx[k] = rest % n;
      rest /= n;
    }
    std::vector<VertexIndex> v;
    for (int corner = 0; corner < (1 << dim); ++corner) {
      long id = 0, stride = 1;
      for (int k = 0; k < dim; ++k) {
        id += (idx[k] + ((corner >> k) & 1)) * stride;
        stride *= np;
      }
      v.push_back(id);
    }
    mesh.add_cell(v, kFlatManifoldId);
  }
  return mesh;
}

Mesh rectangle(double a, double b) {
  Mesh mesh(2, 2);
  mesh.add_vertex(make_point({0, 0}));
  mesh.add_vertex(make_point({a, 0}));
  mesh.add_vertex(make_point({0, b}));
  mesh.add_vertex(make_point({a, b}));
  mesh.add_cell({0, 1, 2, 3}, kFlatManifoldId);
  return mesh;
}

Mesh annulus(int n, double inner, double outer, ManifoldId cell_id, ManifoldId boundary_id) {
  if (n < 3) fail(ErrorCode::InvalidArgument, "annulus: at least three cells are required");
  Mesh mesh(2, 2);
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n;
    mesh.add_vertex(make_point({inner * std::cos(t), inner * std::sin(t)}));
    mesh.add_vertex(make_point({outer * std::cos(t), outer * std::sin(t)}));
  }
  for (int k = 0; k < n; ++k) {
    const long a = 2 * k, b = 2 * ((k + 1) % n);
    mesh.add_cell({a, a + 1, b, b + 1}, cell_id);
    mesh.set_edge_manifold(a, b, boundary_id);
    mesh.set_edge_manifold(a + 1, b + 1, boundary_id);
  }
  return mesh;
}

Mesh quarter_annulus(double inner, double outer, ManifoldId cell_id, ManifoldId boundary_id) {
  Mesh mesh(2, 2);
  mesh.add_vertex(make_point({inner, 0}));
  mesh.add_vertex(make_point({outer, 0}));
  mesh.add_vertex(make_point({0, inner}));
  mesh.add_vertex(make_point({0, outer}));
  mesh.add_cell({0, 1, 2, 3}, cell_id);
  mesh.set_edge_manifold(0, 2, boundary_id);
  mesh.set_edge_manifold(1, 3, boundary_id);
  return mesh;
}

namespace {

// The six faces of the cube [-1,1]^3 as corner sign vectors, with local
// vertex order chosen so that (u, v, outward) is right-handed.
std::vector<std::array<Eigen::Vector3d, 4>> cube_faces() {
  std::vector<std::array<Eigen::Vector3d, 4>> faces;
  for (int axis = 0; axis < 3; ++axis)
    for (int sign : {-1, 1}) {
      int b = (axis + 1) % 3, c = (axis + 2) % 3;
      if (sign < 0) std::swap(b, c);
      std::array<Eigen::Vector3d, 4> f;
      for (int v = 0; v < 4; ++v) {
        Eigen::Vector3d p;
        p[axis] = sign;
        p[b] = (v & 1) ? 1 : -1;
        p[c] = (v & 2) ? 1 : -1;
        f[v] = p;
      }
      faces.push_back(f);
    }
  return faces;
}

}  // namespace

Mesh cube_shell(double inner, double outer, ManifoldId cell_id, ManifoldId boundary_id) {
  if (!(0.0 < inner && inner < outer)) fail(ErrorCode::InvalidArgument, "cube_shell: bad radii");
  Mesh mesh(3, 3);
  std::map<std::array<int, 4>, VertexIndex> ids;
  auto vertex = [&](const Eigen::Vector3d& s, int layer) {
    const std::array<int, 4> key{int(s.x()), int(s.y()), int(s.z()), layer};
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    const Eigen::Vector3d p = s.normalized() * (layer ? outer : inner);
    const VertexIndex id = mesh.add_vertex(make_point({p.x(), p.y(), p.z()}));
    ids.emplace(key, id);
    return id;
  };
  for (const auto& f : cube_faces()) {
    std::vector<VertexIndex> v;
    for (int layer = 0; layer < 2; ++layer)
      for (int k = 0; k < 4; ++k) v.push_back(vertex(f[k], layer));
    mesh.add_cell(v, cell_id);
    mesh.set_face_manifold({v[0], v[1], v[2], v[3]}, boundary_id);
    mesh.set_face_manifold({v[4], v[5], v[6], v[7]}, boundary_id);
    for (int layer = 0; layer < 2; ++layer) {
      const int o = 4 * layer;
      mesh.set_edge_manifold(v[o + 0], v[o + 1], boundary_id);
      mesh.set_edge_manifold(v[o + 2], v[o + 3], boundary_id);
      mesh.set_edge_manifold(v[o + 0], v[o + 2], boundary_id);
      mesh.set_edge_manifold(v[o + 1], v[o + 3], boundary_id);
    }
  }
  return mesh;
}

Mesh cube_sphere_surface(double radius, ManifoldId cell_id) {
  Mesh mesh(2, 3);
  std::map<std::array<int, 3>, VertexIndex> ids;
  for (const auto& f : cube_faces()) {
    std::vector<VertexIndex> v;
    for (const Eigen::Vector3d& s : f) {
      const std::array<int, 3> key{int(s.x()), int(s.y()), int(s.z())};
      auto it = ids.find(key);
      if (it == ids.end()) {
        const Eigen::Vector3d p = s.normalized() * radius;
        it = ids.emplace(key, mesh.add_vertex(make_point({p.x(), p.y(), p.z()}))).first;
      }
      v.push_back(it->second);
    }
    mesh.add_cell(v, cell_id);
  }
  return mesh;
}

}  // namespace meshes

}  // namespace geoprim
