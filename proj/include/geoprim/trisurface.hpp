// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#pragma once

#include <geoprim/error.hpp>
#include <geoprim/types.hpp>

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace geoprim {

/// An indexed triangle surface in 3D with an axis-aligned bounding box tree.
/// Immutable after construction; all queries are read-only.
class TriSurface {
public:
  using Index = std::int32_t;
  using Triangle = std::array<Index, 3>;

  struct ClosestHit {
    Point point;
    Index triangle;
    double distance;
  };

  struct RayHit {
    Point point;
    Index triangle;
    /// Signed line parameter: point = origin + t * direction.
    double t;
  };

  /// Triangles with area <= 1e-14 * (bounding box diagonal)^2 are dropped
  /// and counted. Throws EmptySurface if nothing is left.
  TriSurface(std::vector<Point> vertices, std::vector<Triangle> triangles);

  /// ASCII or binary STL. Identical vertex coordinates are merged.
  static TriSurface load_stl(const std::string& path);
  static TriSurface parse_stl(std::string_view bytes);

  std::size_t n_vertices() const { return vertices_.size(); }
  std::size_t n_triangles() const { return triangles_.size(); }
  std::size_t n_dropped_degenerate() const { return dropped_; }
  const Point& vertex(std::size_t i) const { return vertices_[i]; }
  const Triangle& triangle(std::size_t i) const { return triangles_[i]; }
  /// Unit normal following the vertex order of the triangle.
  const Point& normal(std::size_t i) const { return normals_[i]; }
  double bbox_diagonal() const { return diagonal_; }

  /// Globally nearest point on the surface. Among equidistant candidates
  /// the triangle with the smallest index wins.
  ClosestHit closest_point(const Point& x) const;
  ClosestHit closest_point_brute_force(const Point& x) const;

  /// Intersection of the whole line x + t d (t of either sign) with the
  /// surface closest to x, i.e. with smallest |t|.
  std::optional<RayHit> ray_intersect(const Point& x, const Vector& d) const;
  std::optional<RayHit> ray_intersect_brute_force(const Point& x, const Vector& d) const;

  /// Triangle indices in tree-leaf order. Every triangle appears once.
  std::vector<Index> tree_leaf_triangles() const;

private:
  struct Node {
    Eigen::Vector3d lo, hi;
    Index left = -1, right = -1;
    Index first = 0, count = 0;
  };

  void build_tree();
  Index build_node(Index first, Index count);
  Eigen::Vector3d corner(Index tri, int k) const;
  void closest_on_triangle(const Eigen::Vector3d& p, Index tri, Eigen::Vector3d& q, double& d2) const;
  std::optional<double> intersect_triangle(const Eigen::Vector3d& o, const Eigen::Vector3d& d,
                                           Index tri) const;

  std::vector<Point> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Point> normals_;
  std::size_t dropped_ = 0;
  double diagonal_ = 0.0;
  std::vector<Node> nodes_;
  std::vector<Index> order_;
};

/// Unit icosphere: icosahedron refined `levels` times by 4-way splits with
/// new vertices pushed to the sphere; 20 * 4^levels triangles, outward
/// orientation.
TriSurface make_icosphere(int levels);

/// Binary STL bytes of a surface.
std::string to_binary_stl(const TriSurface& surface);

}  // namespace geoprim
