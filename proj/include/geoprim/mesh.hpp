// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#pragma once

#include <geoprim/cell.hpp>
#include <geoprim/manifold.hpp>
#include <geoprim/transfinite.hpp>

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace geoprim {

/// Maps manifold ids to oracles. Unregistered ids resolve to the flat
/// manifold of the registry's space dimension.
class ManifoldRegistry {
public:
  explicit ManifoldRegistry(int spacedim);

  int spacedim() const { return spacedim_; }
  void set(ManifoldId id, ManifoldRef manifold);
  bool contains(ManifoldId id) const { return map_.count(id) != 0; }
  const Manifold& get(ManifoldId id) const;
  ManifoldRef get_ref(ManifoldId id) const;
  std::vector<ManifoldId> ids() const;

private:
  int spacedim_;
  std::shared_ptr<const FlatManifold> flat_;
  std::map<ManifoldId, ManifoldRef> map_;
};

using VertexIndex = long;
using CellIndex = long;

struct Cell {
  /// 2^dim vertex numbers in lexicographic reference order.
  std::vector<VertexIndex> vertices;
  ManifoldId manifold_id = kFlatManifoldId;
  int level = 0;
  CellIndex parent = -1;
  std::vector<CellIndex> children;
  /// Axis of an anisotropic split, -1 for isotropic.
  int split_axis = -1;
  CellIndex coarse = -1;

  bool active() const { return children.empty(); }
};

/// Sorted vertex numbers of an edge (2) or hex face (4).
using EdgeKey = std::array<VertexIndex, 2>;
using FaceKey = std::array<VertexIndex, 4>;

struct EdgeInfo {
  ManifoldId manifold_id = kUnsetManifoldId;
  VertexIndex midpoint = -1;
  std::optional<EdgeKey> parent;
};

struct FaceInfo {
  ManifoldId manifold_id = kUnsetManifoldId;
  VertexIndex center = -1;
};

struct HangingVertex {
  VertexIndex vertex;
  /// Vertices of the unrefined edge (second entry -1 unused) or face the
  /// vertex sits on.
  std::vector<VertexIndex> on;
};

enum class FlagKind { None, Isotropic, Anisotropic };

struct RefinementFlag {
  FlagKind kind = FlagKind::None;
  /// Direction to halve for anisotropic flags.
  int axis = -1;
};

/// One entry per cell of the mesh (inactive cells must carry None).
using RefinementFlags = std::vector<RefinementFlag>;

/// Hierarchical quadrilateral/hexahedral mesh whose entities carry
/// manifold ids. dim = 2 with spacedim = 3 is a surface mesh.
class Mesh {
public:
  Mesh(int dim, int spacedim);

  int dim() const { return dim_; }
  int spacedim() const { return spacedim_; }

  VertexIndex add_vertex(const Point& p);
  /// Adds a coarse (level 0) cell.
  CellIndex add_cell(std::vector<VertexIndex> vertices, ManifoldId id);
  void set_edge_manifold(VertexIndex a, VertexIndex b, ManifoldId id);
  void set_face_manifold(std::array<VertexIndex, 4> vertices, ManifoldId id);

  std::size_t n_vertices() const { return vertices_.size(); }
  std::size_t n_cells() const { return cells_.size(); }
  const Point& vertex(VertexIndex v) const { return vertices_[v]; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const Cell& cell(CellIndex c) const { return cells_[c]; }
  std::vector<CellIndex> active_cells() const;
  std::size_t n_active_cells() const;

  const std::map<EdgeKey, EdgeInfo>& edges() const { return edges_; }
  const std::map<FaceKey, FaceInfo>& faces() const { return faces_; }
  const EdgeInfo* edge(VertexIndex a, VertexIndex b) const;
  const FaceInfo* face(std::array<VertexIndex, 4> vertices) const;
  const std::vector<HangingVertex>& hanging_vertices() const { return hanging_; }

  /// Manifold id governing an edge / face of a cell: the entity's own id
  /// if set, otherwise the cell's.
  ManifoldId edge_manifold_id(CellIndex c, int local_edge) const;
  ManifoldId face_manifold_id(CellIndex c, int local_face) const;

  /// Vertices and oracles of a cell, for mappings.
  CellGeometry cell_geometry(CellIndex c, const ManifoldRegistry& registry) const;
  /// Geometry of a face of cell c (an edge for quadrilaterals), with the
  /// face's oracle as its cell oracle. Vertex order follows the reference
  /// face.
  CellGeometry face_geometry(CellIndex c, int local_face, const ManifoldRegistry& registry) const;

  std::vector<Point> cell_vertices(CellIndex c) const;
  double cell_diameter(CellIndex c) const;

  /// Returns the refined mesh; the input is left untouched. Throws
  /// InvertedChild (entity = parent cell) if a child of a volume cell has a
  /// non-positive d-linear Jacobian determinant at one of its vertices.
  Mesh refine(const RefinementFlags& flags, const ManifoldRegistry& registry) const;
  Mesh refine_uniform(const ManifoldRegistry& registry) const;

  /// Flags for all active cells.
  RefinementFlags isotropic_flags() const;

  /// Mesh made of the active cells only, as level-0 cells, keeping every
  /// manifold id that is set on a surviving edge or face.
  Mesh flattened() const;

private:
  EdgeInfo& edge_entry(VertexIndex a, VertexIndex b);
  FaceInfo& face_entry(std::array<VertexIndex, 4> v);
  void register_cell_entities(CellIndex c);
  void refine_cell(CellIndex c, const RefinementFlag& flag, const ManifoldRegistry& registry);
  void collect_hanging_vertices();

  int dim_, spacedim_;
  std::vector<Point> vertices_;
  std::vector<Cell> cells_;
  std::map<EdgeKey, EdgeInfo> edges_;
  std::map<FaceKey, FaceInfo> faces_;
  std::vector<HangingVertex> hanging_;
};

EdgeKey edge_key(VertexIndex a, VertexIndex b);
FaceKey face_key(std::array<VertexIndex, 4> v);

/// Determinants of the d-linear Jacobian at each vertex of a volume cell.
std::vector<double> vertex_jacobian_determinants(const std::vector<Point>& vertices);

/// Kelly-type curvature indicator of a surface mesh: for active cell K,
///   eta_K = ( h_K / 24 * sum over edges of int_e |n_K - n_K'|^2 ds )^(1/2)
/// with n the unit normal of each cell at its center (neighbour normals
/// sign-aligned), h_K the cell diameter, and hanging edges split into their
/// conforming pieces. Boundary edges contribute nothing. Returns one value
/// per active cell, in active_cells() order. Throws NotASurfaceMesh unless
/// dim = spacedim - 1 = 2.
std::vector<double> curvature_indicator(const Mesh& mesh);

/// Flags the ceil(fraction * n) entries with the largest indicator (ties:
/// lower index first). Result is indexed like `indicators`.
std::vector<bool> mark_fraction(const std::vector<double>& indicators, double fraction);

/// Maps per-active-cell marks to mesh-wide isotropic flags.
RefinementFlags flags_from_marks(const Mesh& mesh, const std::vector<bool>& marks);

/// Anisotropic flags for quadrilaterals whose ratio of longest to shortest
/// edge exceeds lambda_max (strictly). Edge lengths are |t(m, a)| + |t(m, b)|
/// for edge end points a, b and the edge's new point m. The flagged axis is
/// the one whose edges are longer on average.
RefinementFlags aspect_ratio_flags(const Mesh& mesh, const ManifoldRegistry& registry,
                                   double lambda_max);

/// Oracle from the transfinite interpolation of the coarse cells carrying
/// `id`. Edge and face oracles come from the registry; entities that
/// resolve to `id` itself are treated as flat.
std::shared_ptr<TransfiniteManifold> make_transfinite_manifold(const Mesh& mesh,
                                                               const ManifoldRegistry& registry,
                                                               ManifoldId id);

/// Coarse meshes used in tests, experiments and the command line tool.
namespace meshes {

/// n x n (x n) cells on [0,1]^dim, all id 0.
Mesh hypercube(int dim, int n);

/// Single rectangle [0,a] x [0,b].
Mesh rectangle(double a, double b);

/// 2D annulus around the origin with `n` cells in one radial layer.
/// Reference x runs radially, y counterclockwise. Cells get `cell_id`,
/// inner and outer boundary edges get `boundary_id`.
Mesh annulus(int n, double inner, double outer, ManifoldId cell_id, ManifoldId boundary_id);

/// One cell: quarter annulus with vertices (r_in,0), (r_out,0), (0,r_in),
/// (0,r_out).
Mesh quarter_annulus(double inner, double outer, ManifoldId cell_id, ManifoldId boundary_id);

/// Six hexahedra between two concentric cubes projected to spheres.
Mesh cube_shell(double inner, double outer, ManifoldId cell_id, ManifoldId boundary_id);

/// Six quadrilaterals on a sphere of the given radius (cube projected),
/// surface mesh in 3D.
Mesh cube_sphere_surface(double radius, ManifoldId cell_id);

}  // namespace meshes

}  // namespace geoprim
