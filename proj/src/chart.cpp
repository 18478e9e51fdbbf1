// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#include <geoprim/chart.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace geoprim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double half_period_tolerance(double period) { return 1e-12 * std::max(1.0, period); }

// Wraps d into [-L/2, L/2] and rejects the ambiguous |d| == L/2 case.
double wrap_difference(double d, double period) {
  d -= period * std::round(d / period);
  if (std::abs(std::abs(d) - 0.5 * period) <= half_period_tolerance(period))
    fail(ErrorCode::HalfPeriodAmbiguity,
         "periodic chart: two points are exactly half a period apart");
  return d;
}

double reduce_modulo(double value, double period) {
  double r = std::fmod(value, period);
  if (r < 0.0) r += period;
  if (r >= period || period - r <= 1e-14 * period) r = 0.0;
  return r;
}

double azimuth(double y, double x) {
  double a = std::atan2(y, x);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

}  // namespace

double periodic_average(std::span<const double> values, std::span<const double> weights,
                        double period) {
  if (values.size() != weights.size() || values.empty())
    fail(ErrorCode::InvalidArgument, "periodic_average: mismatched or empty input");
  if (!(period > 0.0))
    fail(ErrorCode::InvalidArgument, "periodic_average: period must be positive");

  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      double d = std::fmod(std::abs(values[i] - values[j]), period);
      d = std::min(d, period - d);
      if (std::abs(d - 0.5 * period) <= half_period_tolerance(period))
        fail(ErrorCode::HalfPeriodAmbiguity,
             "periodic_average: two values are exactly half a period apart");
    }

  const double anchor = values[0];
  double lo = anchor, hi = anchor, sum = 0.0;
  bool negative_weight = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double shifted = anchor + wrap_difference(values[i] - anchor, period);
    lo = std::min(lo, shifted);
    hi = std::max(hi, shifted);
    sum += weights[i] * shifted;
    negative_weight = negative_weight || weights[i] < 0.0;
  }
  if (negative_weight && hi - lo >= 0.5 * period)
    fail(ErrorCode::HalfPeriodAmbiguity,
         "periodic_average: negative weights on values spanning half a period or more");
  return reduce_modulo(sum, period);
}

ChartManifold::ChartManifold(int spacedim, int chartdim, Coords periodicity)
    : spacedim_(spacedim), chartdim_(chartdim), periodicity_(std::move(periodicity)) {
  if (chartdim < 1 || chartdim > spacedim || spacedim > 3)
    fail(ErrorCode::InvalidArgument, "ChartManifold: invalid dimensions");
  if (periodicity_.size() != chartdim)
    fail(ErrorCode::InvalidArgument, "ChartManifold: periodicity has wrong length");
}

ChartPoint ChartManifold::chart_difference(const ChartPoint& u1, const ChartPoint& u2) const {
  ChartPoint d = u2 - u1;
  for (int k = 0; k < chartdim_; ++k)
    if (periodicity_[k] > 0.0) d[k] = wrap_difference(d[k], periodicity_[k]);
  return d;
}

Point ChartManifold::compute_new_point(const WeightedPoints& wp) const {
  const std::size_t n = wp.points.size();
  std::vector<ChartPoint> pulled;
  pulled.reserve(n);
  for (const Point& x : wp.points) pulled.push_back(pull_back(x));

  ChartPoint mean = ChartPoint::Zero(chartdim_);
  std::vector<double> component(n);
  for (int k = 0; k < chartdim_; ++k) {
    if (periodicity_[k] > 0.0) {
      for (std::size_t i = 0; i < n; ++i) component[i] = pulled[i][k];
      mean[k] = periodic_average(component, wp.weights, periodicity_[k]);
    } else {
      for (std::size_t i = 0; i < n; ++i) mean[k] += wp.weights[i] * pulled[i][k];
    }
  }
  return push_forward(mean);
}

Vector ChartManifold::compute_tangent(const Point& x1, const Point& x2) const {
  const ChartPoint u1 = pull_back(x1);
  const ChartPoint u2 = pull_back(x2);
  return push_forward_gradient(u1) * chart_difference(u1, u2);
}

// ---------------------------------------------------------------- identity

IdentityChart::IdentityChart(int dim) : ChartManifold(dim, dim, Coords::Zero(dim)) {}

SmallMatrix IdentityChart::push_forward_gradient(const ChartPoint& u) const {
  return SmallMatrix::Identity(u.size(), u.size());
}

// ---------------------------------------------------------------- polar

PolarChart::PolarChart(Point center)
    : ChartManifold(2, 2, make_point({0.0, kTwoPi})), center_(std::move(center)) {
  if (center_.size() != 2) fail(ErrorCode::InvalidArgument, "PolarChart: center must be 2D");
}

ChartPoint PolarChart::pull_back(const Point& x) const {
  const Vector d = x - center_;
  const double r = d.norm();
  if (r <= 1e-12)
    fail(ErrorCode::PullBackFailure, "polar chart: point at the chart singularity r = 0");
  return make_point({r, azimuth(d[1], d[0])});
}

Point PolarChart::push_forward(const ChartPoint& u) const {
  return center_ + u[0] * make_point({std::cos(u[1]), std::sin(u[1])});
}

SmallMatrix PolarChart::push_forward_gradient(const ChartPoint& u) const {
  SmallMatrix g(2, 2);
  const double c = std::cos(u[1]), s = std::sin(u[1]);
  g << c, -u[0] * s, s, u[0] * c;
  return g;
}

// ---------------------------------------------------------------- spherical

SphericalChart::SphericalChart(Point center)
    : ChartManifold(3, 3, make_point({0.0, 0.0, kTwoPi})), center_(std::move(center)) {
  if (center_.size() != 3)
    fail(ErrorCode::InvalidArgument, "SphericalChart: center must be 3D");
}

ChartPoint SphericalChart::pull_back(const Point& x) const {
  const Vector d = x - center_;
  const double r = d.norm();
  const double rho = std::hypot(d[0], d[1]);
  if (r <= 1e-12 || rho <= 1e-12 * r)
    fail(ErrorCode::PullBackFailure, "spherical chart: point on the polar axis");
  return make_point({r, std::atan2(rho, d[2]), azimuth(d[1], d[0])});
}

Point SphericalChart::push_forward(const ChartPoint& u) const {
  const double st = std::sin(u[1]), ct = std::cos(u[1]);
  const double sp = std::sin(u[2]), cp = std::cos(u[2]);
  return center_ + u[0] * make_point({st * cp, st * sp, ct});
}

SmallMatrix SphericalChart::push_forward_gradient(const ChartPoint& u) const {
  const double r = u[0];
  const double st = std::sin(u[1]), ct = std::cos(u[1]);
  const double sp = std::sin(u[2]), cp = std::cos(u[2]);
  SmallMatrix g(3, 3);
  g << st * cp, r * ct * cp, -r * st * sp,
       st * sp, r * ct * sp, r * st * cp,
       ct, -r * st, 0.0;
  return g;
}

// ---------------------------------------------------------------- cylindrical

CylindricalChart::CylindricalChart(Point origin, Vector axis)
    : ChartManifold(3, 3, make_point({0.0, kTwoPi, 0.0})), origin_(std::move(origin)) {
  if (origin_.size() != 3 || axis.size() != 3 || axis.norm() == 0.0)
    fail(ErrorCode::InvalidArgument, "CylindricalChart: origin and axis must be 3D, axis nonzero");
  axis_ = Eigen::Vector3d(axis[0], axis[1], axis[2]).normalized();
  const Eigen::Vector3d trial =
      std::abs(axis_.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  e1_ = (trial - trial.dot(axis_) * axis_).normalized();
  e2_ = axis_.cross(e1_);
}

ChartPoint CylindricalChart::pull_back(const Point& x) const {
  const Eigen::Vector3d d(x[0] - origin_[0], x[1] - origin_[1], x[2] - origin_[2]);
  const double z = d.dot(axis_);
  const double a = d.dot(e1_), b = d.dot(e2_);
  const double r = std::hypot(a, b);
  if (r <= 1e-12)
    fail(ErrorCode::PullBackFailure, "cylindrical chart: point on the axis");
  return make_point({r, azimuth(b, a), z});
}

Point CylindricalChart::push_forward(const ChartPoint& u) const {
  const Eigen::Vector3d p =
      u[0] * (std::cos(u[1]) * e1_ + std::sin(u[1]) * e2_) + u[2] * axis_;
  return origin_ + make_point({p.x(), p.y(), p.z()});
}

SmallMatrix CylindricalChart::push_forward_gradient(const ChartPoint& u) const {
  const Eigen::Vector3d dr = std::cos(u[1]) * e1_ + std::sin(u[1]) * e2_;
  const Eigen::Vector3d dphi = u[0] * (-std::sin(u[1]) * e1_ + std::cos(u[1]) * e2_);
  SmallMatrix g(3, 3);
  g.col(0) = dr;
  g.col(1) = dphi;
  g.col(2) = axis_;
  return g;
}

// ---------------------------------------------------------------- graded

GradedSquareChart::GradedSquareChart() : ChartManifold(2, 2, Coords::Zero(2)) {}

ChartPoint GradedSquareChart::pull_back(const Point& x) const {
  if (x[0] < -1e-12 || x[1] < -1e-12)
    fail(ErrorCode::PullBackFailure, "graded_square chart: negative coordinate");
  return make_point({std::sqrt(std::max(0.0, x[0])), std::sqrt(std::max(0.0, x[1]))});
}

Point GradedSquareChart::push_forward(const ChartPoint& u) const {
  return make_point({u[0] * u[0], u[1] * u[1]});
}

SmallMatrix GradedSquareChart::push_forward_gradient(const ChartPoint& u) const {
  SmallMatrix g = SmallMatrix::Zero(2, 2);
  g(0, 0) = 2.0 * u[0];
  g(1, 1) = 2.0 * u[1];
  return g;
}

GradedSineChart::GradedSineChart() : ChartManifold(2, 2, Coords::Zero(2)) {}

ChartPoint GradedSineChart::pull_back(const Point& x) const {
  ChartPoint u(2);
  for (int k = 0; k < 2; ++k) {
    const double t = 2.0 * x[k] - 1.0;
    if (std::abs(t) > 1.0 + 1e-12)
      fail(ErrorCode::PullBackFailure, "graded_sine chart: point outside the unit square");
    u[k] = std::asin(std::clamp(t, -1.0, 1.0)) / std::numbers::pi + 0.5;
  }
  return u;
}

Point GradedSineChart::push_forward(const ChartPoint& u) const {
  Point x(2);
  for (int k = 0; k < 2; ++k) x[k] = 0.5 * std::sin(std::numbers::pi * (u[k] - 0.5)) + 0.5;
  return x;
}

SmallMatrix GradedSineChart::push_forward_gradient(const ChartPoint& u) const {
  SmallMatrix g = SmallMatrix::Zero(2, 2);
  for (int k = 0; k < 2; ++k)
    g(k, k) = 0.5 * std::numbers::pi * std::cos(std::numbers::pi * (u[k] - 0.5));
  return g;
}

}  // namespace geoprim
