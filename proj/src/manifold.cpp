// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#include <geoprim/manifold.hpp>

#include <array>
#include <cmath>

namespace geoprim {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::WeightSumViolation: return "WeightSumViolation";
    case ErrorCode::OracleFailure: return "OracleFailure";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::PullBackFailure: return "PullBackFailure";
    case ErrorCode::HalfPeriodAmbiguity: return "HalfPeriodAmbiguity";
    case ErrorCode::AntipodalPoints: return "AntipodalPoints";
    case ErrorCode::TooManyPoints: return "TooManyPoints";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptySurface: return "EmptySurface";
    case ErrorCode::ProjectionMiss: return "ProjectionMiss";
    case ErrorCode::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorCode::NewtonDivergence: return "NewtonDivergence";
    case ErrorCode::OutsideCell: return "OutsideCell";
    case ErrorCode::InvertedChild: return "InvertedChild";
    case ErrorCode::NotASurfaceMesh: return "NotASurfaceMesh";
    case ErrorCode::DegenerateCell: return "DegenerateCell";
    case ErrorCode::DegenerateTangents: return "DegenerateTangents";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::NoChildren: return "NoChildren";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

void validate(const WeightedPoints& wp) {
  if (wp.points.size() != wp.weights.size())
    fail(ErrorCode::InvalidArgument, "new_point: points and weights differ in length");
  if (wp.points.size() < 2)
    fail(ErrorCode::InvalidArgument, "new_point: at least two points are required");
  double sum = 0.0;
  for (double w : wp.weights) sum += w;
  if (!(std::abs(sum - 1.0) <= kWeightSumTolerance))
    fail(ErrorCode::WeightSumViolation,
         "new_point: weights sum to " + std::to_string(sum) + ", expected 1");
}

Point affine_combination(const WeightedPoints& wp) {
  Point result = Point::Zero(wp.points.front().size());
  for (std::size_t i = 0; i < wp.points.size(); ++i)
    result += wp.weights[i] * wp.points[i];
  return result;
}

Point Manifold::new_point(const WeightedPoints& wp) const {
  validate(wp);
  return compute_new_point(wp);
}

Vector Manifold::tangent_vector(const Point& x1, const Point& x2) const {
  const double scale = std::max(1.0, x1.norm());
  if ((x2 - x1).norm() <= 1e-14 * scale)
    fail(ErrorCode::DegenerateInput, "tangent_vector: x1 and x2 coincide");
  return compute_tangent(x1, x2);
}

Vector Manifold::tangent_vector_fd(const Point& x1, const Point& x2, double eps) const {
  if (!(eps > 0.0 && eps < 0.5))
    fail(ErrorCode::InvalidArgument, "tangent_vector_fd: eps must lie in (0, 1/2)");
  const std::array<Point, 2> pts{x1, x2};
  const std::array<double, 2> w{1.0 - eps, eps};
  return (new_point(pts, w) - x1) / eps;
}

Vector Manifold::compute_tangent(const Point& x1, const Point& x2) const {
  return tangent_vector_fd(x1, x2, kDefaultTangentEpsilon);
}

FlatManifold::FlatManifold(int spacedim) : spacedim_(spacedim) {
  if (spacedim < 1 || spacedim > 3)
    fail(ErrorCode::InvalidArgument, "FlatManifold: spacedim must be 1, 2 or 3");
}

Point FlatManifold::compute_new_point(const WeightedPoints& wp) const {
  return affine_combination(wp);
}

Vector FlatManifold::compute_tangent(const Point& x1, const Point& x2) const {
  return x2 - x1;
}

}  // namespace geoprim
