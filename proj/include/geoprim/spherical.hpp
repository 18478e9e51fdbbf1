// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#pragma once

#include <geoprim/manifold.hpp>

namespace geoprim {

/// Average in the ambient space, then project back onto the sphere through
/// `center`. The radius of the result is the weighted mean of the input
/// radii, so for points on one sphere this is the plain normalize-after-
/// average projection. This oracle does not satisfy
///   x*(x1, x2; 3/4, 1/4) == x*(x1, x*(x1, x2; 1/2, 1/2); 1/2, 1/2).
class SphereProjectionManifold final : public Manifold {
public:
  explicit SphereProjectionManifold(Point center);
  int spacedim() const override { return static_cast<int>(center_.size()); }
  std::string name() const override { return "sphere_projection"; }
  const Point& center() const { return center_; }

protected:
  Point compute_new_point(const WeightedPoints& wp) const override;
  Vector compute_tangent(const Point& x1, const Point& x2) const override;

private:
  Point center_;
};

/// Radius is the weighted mean of the input radii; the direction is the
/// weighted spherical (Karcher) mean of the input directions, i.e. the
/// point p on the unit sphere with sum_i w_i log_p(u_i) = 0. For two points
/// this is exactly the constant-speed great-circle interpolation.
class SphericalAverageManifold final : public Manifold {
public:
  explicit SphericalAverageManifold(Point center);
  int spacedim() const override { return static_cast<int>(center_.size()); }
  std::string name() const override { return "spherical_average"; }

protected:
  Point compute_new_point(const WeightedPoints& wp) const override;
  Vector compute_tangent(const Point& x1, const Point& x2) const override;

private:
  Point center_;
};

/// Constant angular speed great-circle interpolation between two points of
/// a sphere around `center` (both at the same radius). t = 0 gives a,
/// t = 1 gives b; t outside [0, 1] extrapolates along the great circle.
Point slerp(const Point& center, const Point& a, const Point& b, double t);

/// Oracles built only from great-circle interpolation. With more than two
/// points the result depends on how the points are combined; both variants
/// are available to study that effect.
class SphereGeodesicManifold final : public Manifold {
public:
  enum class Averaging {
    /// Merge the first two points along their geodesic, then fold in the
    /// remaining points one by one in input order.
    Recursive,
    /// Mean of the recursive result over all N! input orders, re-projected
    /// onto the sphere. Limited to N <= 8.
    Permuted,
  };

  SphereGeodesicManifold(Point center, Averaging mode);
  int spacedim() const override { return static_cast<int>(center_.size()); }
  std::string name() const override {
    return mode_ == Averaging::Recursive ? "sphere_geodesic_recursive"
                                         : "sphere_geodesic_permuted";
  }

  Point new_point_recursive(const WeightedPoints& wp) const;
  Point new_point_permuted(const WeightedPoints& wp) const;

protected:
  Point compute_new_point(const WeightedPoints& wp) const override;
  Vector compute_tangent(const Point& x1, const Point& x2) const override;

private:
  double common_radius(const WeightedPoints& wp) const;

  Point center_;
  Averaging mode_;
};

}  // namespace geoprim
