// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#include <geoprim/projection.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>

namespace geoprim {

Vector normal_of_point_set(std::span<const Point> points, const TriSurface& surface) {
  if (points.size() < 2)
    fail(ErrorCode::InvalidArgument, "normal_of_point_set: at least two points are required");

  if (points.size() == 2) {
    const Vector seg = points[1] - points[0];
    if (seg.norm() == 0.0) return surface.normal(surface.closest_point(points[0]).triangle);
    const Vector s = seg.normalized();
    Vector n = surface.normal(surface.closest_point(points[0]).triangle) +
               surface.normal(surface.closest_point(points[1]).triangle);
    n -= n.dot(s) * s;
    if (n.norm() < 1e-12)
      fail(ErrorCode::DegenerateConfiguration, "normal_of_point_set: projected normal vanishes");
    return n.normalized();
  }

  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const Point& p : points) centroid += Eigen::Vector3d(p[0], p[1], p[2]);
  centroid /= static_cast<double>(points.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const Point& p : points) {
    const Eigen::Vector3d d = Eigen::Vector3d(p[0], p[1], p[2]) - centroid;
    cov += d * d.transpose();
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  const Eigen::Vector3d lambda = eig.eigenvalues();
  if (!(lambda[1] > 1e-20 * lambda[2]) || lambda[2] <= 0.0)
    fail(ErrorCode::DegenerateConfiguration, "normal_of_point_set: points are collinear");
  Eigen::Vector3d n = eig.eigenvectors().col(0);
  const Point c = make_point({centroid.x(), centroid.y(), centroid.z()});
  const Point& ref = surface.normal(surface.closest_point(c).triangle);
  if (n.dot(Eigen::Vector3d(ref[0], ref[1], ref[2])) < 0.0) n = -n;
  return make_point({n.x(), n.y(), n.z()});
}

ProjectionManifold::ProjectionManifold(std::shared_ptr<const TriSurface> surface, Strategy strategy,
                                       Vector direction)
    : surface_(std::move(surface)), strategy_(strategy), direction_(std::move(direction)) {
  if (!surface_) fail(ErrorCode::InvalidArgument, "ProjectionManifold: no surface");
  if (strategy_ == Strategy::Directional) {
    if (direction_.size() != 3 || !(direction_.norm() > 0.0))
      fail(ErrorCode::InvalidArgument, "ProjectionManifold: direction must be a nonzero 3D vector");
    direction_.normalize();
  }
}

Point ProjectionManifold::project(const Point& x, std::span<const Point> support) const {
  switch (strategy_) {
    case Strategy::Directional: {
      const auto hit = surface_->ray_intersect(x, direction_);
      if (!hit)
        fail(ErrorCode::ProjectionMiss, "stl_projection: line along the projection direction "
                                        "misses the surface");
      return hit->point;
    }
    case Strategy::NormalToMesh: {
      const Vector n = normal_of_point_set(support, *surface_);
      if (const auto hit = surface_->ray_intersect(x, n)) return hit->point;
      return surface_->closest_point(x).point;
    }
    case Strategy::ClosestPoint:
      break;
  }
  return surface_->closest_point(x).point;
}

Point ProjectionManifold::compute_new_point(const WeightedPoints& wp) const {
  return project(affine_combination(wp), wp.points);
}

}  // namespace geoprim
