// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#pragma once

#include <geoprim/manifold.hpp>

#include <array>
#include <vector>

namespace geoprim {

/// Reference cell [0,1]^dim. Vertices are numbered lexicographically,
/// vertex v sits at (v & 1, (v >> 1) & 1, (v >> 2) & 1).
///
/// Quad edges: 0 = (0,1) bottom, 1 = (2,3) top, 2 = (0,2) left,
/// 3 = (1,3) right. Hex edges: the four x-parallel edges, then the four
/// y-parallel ones, then z, each group ordered lexicographically by the
/// remaining coordinates. Hex faces: x=0, x=1, y=0, y=1, z=0, z=1; the
/// vertices of a face are listed lexicographically in its two free
/// coordinates.
namespace reference {

inline constexpr std::array<std::array<int, 2>, 4> kQuadEdges{{{0, 1}, {2, 3}, {0, 2}, {1, 3}}};

inline constexpr std::array<std::array<int, 2>, 12> kHexEdges{{{0, 1}, {2, 3}, {4, 5}, {6, 7},
                                                                {0, 2}, {1, 3}, {4, 6}, {5, 7},
                                                                {0, 4}, {1, 5}, {2, 6}, {3, 7}}};

inline constexpr std::array<std::array<int, 4>, 6> kHexFaces{{{0, 2, 4, 6}, {1, 3, 5, 7},
                                                               {0, 1, 4, 5}, {2, 3, 6, 7},
                                                               {0, 1, 2, 3}, {4, 5, 6, 7}}};

inline int n_vertices(int dim) { return 1 << dim; }
int n_edges(int dim);
int n_faces(int dim);
/// Vertex pairs of the edges of a dim-cell (dim = 1: the cell itself).
std::vector<std::array<int, 2>> edges(int dim);

/// Direction (0, 1, 2) an edge runs along.
int edge_axis(int dim, int edge);

/// Values of the 2^dim d-linear shape functions at xhat.
std::vector<double> dlinear_weights(const Coords& xhat);

/// Reference coordinates of vertex v.
Coords vertex_position(int dim, int v);

}  // namespace reference

/// Everything the mapping and transfinite code needs to know about one
/// cell: its vertices and the oracle governing each sub-entity. Oracles are
/// borrowed; the owner (usually a ManifoldRegistry) must outlive the value.
struct CellGeometry {
  int dim = 0;
  std::vector<Point> vertices;
  /// Global vertex numbers; edge points are computed in the direction of
  /// increasing global number so that neighbours agree bit for bit. May be
  /// empty, in which case local order is used.
  std::vector<long> vertex_ids;
  /// One per reference edge (dim = 1: a single entry).
  std::vector<const Manifold*> edge_manifolds;
  /// One per hex face (dim = 3 only).
  std::vector<const Manifold*> face_manifolds;
  const Manifold* cell_manifold = nullptr;

  double diameter() const;
};

/// Weighted point on edge `e` of `cell`: new_point with weights (1-s, s)
/// from the edge's first to its second local vertex. The oracle is queried
/// in canonical (increasing global id) order.
Point edge_point(const CellGeometry& cell, int e, double s);

/// Bilinear or trilinear interpolation of the vertices.
Point dlinear_point(const std::vector<Point>& vertices, const Coords& xhat);

/// Jacobian of the d-linear map through the vertices, spacedim x dim.
SmallMatrix dlinear_jacobian(const std::vector<Point>& vertices, const Coords& xhat);

}  // namespace geoprim
