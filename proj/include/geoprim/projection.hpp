// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#pragma once

#include <geoprim/manifold.hpp>
#include <geoprim/trisurface.hpp>

#include <memory>
#include <span>

namespace geoprim {

/// Unit normal of the area spanned by `points`.
///
/// For three or more points this is the normal of the least-squares plane,
/// oriented to agree with the surface normal nearest to their centroid. For
/// two points it is the mean of the surface normals at the two endpoints,
/// made perpendicular to the segment. Throws DegenerateConfiguration when
/// the points are collinear or the projected normal vanishes.
Vector normal_of_point_set(std::span<const Point> points, const TriSurface& surface);

/// NEW POINT by projecting the Euclidean average onto a triangulated
/// surface. TANGENT VECTOR uses the finite-difference default.
class ProjectionManifold final : public Manifold {
public:
  enum class Strategy {
    /// Along a fixed direction; a miss raises ProjectionMiss.
    Directional,
    /// Along the normal of the input point set, falling back to the
    /// closest point if the line misses the surface.
    NormalToMesh,
    ClosestPoint,
  };

  ProjectionManifold(std::shared_ptr<const TriSurface> surface, Strategy strategy,
                     Vector direction = Vector());

  int spacedim() const override { return 3; }
  std::string name() const override { return "stl_projection"; }
  Strategy strategy() const { return strategy_; }
  const TriSurface& surface() const { return *surface_; }

  /// Projection of a single point with this oracle's strategy; `support`
  /// is the point set whose normal drives NormalToMesh.
  Point project(const Point& x, std::span<const Point> support) const;

protected:
  Point compute_new_point(const WeightedPoints& wp) const override;

private:
  std::shared_ptr<const TriSurface> surface_;
  Strategy strategy_;
  Vector direction_;
};

}  // namespace geoprim
