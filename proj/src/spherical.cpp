// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#include <geoprim/spherical.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace geoprim {

namespace {

double radius_of(const Point& x, const Point& center) {
  const double r = (x - center).norm();
  if (r <= 1e-14)
    fail(ErrorCode::OracleFailure, "spherical oracle: point coincides with the center");
  return r;
}

// Log map of the unit sphere at q: the tangent vector at q pointing to p
// whose length is the great-circle distance.
Vector sphere_log(const Vector& q, const Vector& p) {
  const double c = std::clamp(q.dot(p), -1.0, 1.0);
  const Vector v = p - c * q;
  const double s = v.norm();
  if (c <= -1.0 + 1e-12)
    fail(ErrorCode::AntipodalPoints, "spherical oracle: antipodal directions");
  if (s < 1e-300) return Vector::Zero(q.size());
  return (std::atan2(s, c) / s) * v;
}

Vector sphere_exp(const Vector& q, const Vector& g) {
  const double n = g.norm();
  if (n == 0.0) return q;
  return (std::cos(n) * q + (std::sin(n) / n) * g).normalized();
}

}  // namespace

Point slerp(const Point& center, const Point& a, const Point& b, double t) {
  const Vector da = a - center, db = b - center;
  const double r = da.norm();
  const Vector ua = da / r, ub = db / db.norm();
  const double c = std::clamp(ua.dot(ub), -1.0, 1.0);
  if (c <= -1.0 + 1e-12)
    fail(ErrorCode::AntipodalPoints, "slerp: antipodal points have no unique geodesic");
  const double s = (ub - c * ua).norm();
  const double theta = std::atan2(s, c);
  if (theta < 1e-15) return a;
  const double st = std::sin(theta);
  return center + r * ((std::sin((1.0 - t) * theta) / st) * ua + (std::sin(t * theta) / st) * ub);
}

// ---------------------------------------------------------------- projection

SphereProjectionManifold::SphereProjectionManifold(Point center) : center_(std::move(center)) {}

Point SphereProjectionManifold::compute_new_point(const WeightedPoints& wp) const {
  double radius = 0.0;
  Vector mean = Vector::Zero(center_.size());
  for (std::size_t i = 0; i < wp.points.size(); ++i) {
    radius += wp.weights[i] * radius_of(wp.points[i], center_);
    mean += wp.weights[i] * (wp.points[i] - center_);
  }
  const double n = mean.norm();
  if (n <= 1e-14 * std::max(1.0, std::abs(radius)))
    fail(ErrorCode::OracleFailure, "sphere_projection: weighted average lies at the center");
  return center_ + (radius / n) * mean;
}

Vector SphereProjectionManifold::compute_tangent(const Point& x1, const Point& x2) const {
  const double r1 = radius_of(x1, center_), r2 = radius_of(x2, center_);
  const Vector u1 = (x1 - center_) / r1;
  const Vector d = x2 - x1;
  return (r2 - r1) * u1 + d - u1.dot(d) * u1;
}

// ---------------------------------------------------------------- Karcher mean

SphericalAverageManifold::SphericalAverageManifold(Point center) : center_(std::move(center)) {}

Point SphericalAverageManifold::compute_new_point(const WeightedPoints& wp) const {
  const std::size_t n = wp.points.size();
  double radius = 0.0;
  std::vector<Vector> dirs;
  dirs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = radius_of(wp.points[i], center_);
    radius += wp.weights[i] * r;
    dirs.push_back((wp.points[i] - center_) / r);
  }

  if (n == 2) {
    const Point a = center_ + dirs[0], b = center_ + dirs[1];
    return center_ + radius * (slerp(center_, a, b, wp.weights[1]) - center_);
  }

  Vector q = Vector::Zero(center_.size());
  for (std::size_t i = 0; i < n; ++i) q += wp.weights[i] * dirs[i];
  if (q.norm() < 1e-12) {
    const auto heaviest = std::max_element(wp.weights.begin(), wp.weights.end());
    q = dirs[static_cast<std::size_t>(heaviest - wp.weights.begin())];
  }
  q.normalize();

  double step = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    Vector g = Vector::Zero(q.size());
    for (std::size_t i = 0; i < n; ++i) g += wp.weights[i] * sphere_log(q, dirs[i]);
    step = g.norm();
    q = sphere_exp(q, g);
    if (step < 1e-15) break;
  }
  if (step > 1e-10)
    fail(ErrorCode::OracleFailure, "spherical_average: mean direction did not converge");
  return center_ + radius * q;
}

Vector SphericalAverageManifold::compute_tangent(const Point& x1, const Point& x2) const {
  const double r1 = radius_of(x1, center_), r2 = radius_of(x2, center_);
  const Vector u1 = (x1 - center_) / r1, u2 = (x2 - center_) / r2;
  return (r2 - r1) * u1 + r1 * sphere_log(u1, u2);
}

// ---------------------------------------------------------------- geodesic

SphereGeodesicManifold::SphereGeodesicManifold(Point center, Averaging mode)
    : center_(std::move(center)), mode_(mode) {}

double SphereGeodesicManifold::common_radius(const WeightedPoints& wp) const {
  const double r0 = radius_of(wp.points.front(), center_);
  for (const Point& x : wp.points)
    if (std::abs(radius_of(x, center_) - r0) > 1e-8 * r0)
      fail(ErrorCode::InvalidArgument, "sphere_geodesic: points are not on one sphere");
  return r0;
}

Point SphereGeodesicManifold::new_point_recursive(const WeightedPoints& wp) const {
  validate(wp);
  common_radius(wp);
  Point merged = wp.points[0];
  double weight = wp.weights[0];
  for (std::size_t i = 1; i < wp.points.size(); ++i) {
    const double combined = weight + wp.weights[i];
    if (std::abs(combined) < 1e-14)
      fail(ErrorCode::InvalidArgument,
           "sphere_geodesic: partial weight sum vanishes, reorder the input");
    merged = slerp(center_, merged, wp.points[i], wp.weights[i] / combined);
    weight = combined;
  }
  return merged;
}

Point SphereGeodesicManifold::new_point_permuted(const WeightedPoints& wp) const {
  validate(wp);
  const std::size_t n = wp.points.size();
  if (n > 8)
    fail(ErrorCode::TooManyPoints, "sphere_geodesic: permuted averaging is limited to 8 points");
  const double radius = common_radius(wp);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<Point> pts(n);
  std::vector<double> w(n);
  Vector sum = Vector::Zero(center_.size());
  do {
    for (std::size_t i = 0; i < n; ++i) {
      pts[i] = wp.points[order[i]];
      w[i] = wp.weights[order[i]];
    }
    sum += new_point_recursive(WeightedPoints{pts, w}) - center_;
  } while (std::next_permutation(order.begin(), order.end()));

  const double len = sum.norm();
  if (len <= 1e-14)
    fail(ErrorCode::OracleFailure, "sphere_geodesic: permutation mean lies at the center");
  return center_ + (radius / len) * sum;
}

Point SphereGeodesicManifold::compute_new_point(const WeightedPoints& wp) const {
  return mode_ == Averaging::Recursive ? new_point_recursive(wp) : new_point_permuted(wp);
}

Vector SphereGeodesicManifold::compute_tangent(const Point& x1, const Point& x2) const {
  const double r1 = radius_of(x1, center_), r2 = radius_of(x2, center_);
  if (std::abs(r1 - r2) > 1e-8 * r1)
    fail(ErrorCode::InvalidArgument, "sphere_geodesic: points are not on one sphere");
  return r1 * sphere_log((x1 - center_) / r1, (x2 - center_) / r2);
}

}  // namespace geoprim
