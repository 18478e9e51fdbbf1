// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#pragma once

#include <geoprim/error.hpp>
#include <geoprim/types.hpp>

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace geoprim {

inline constexpr double kWeightSumTolerance = 1e-12;
inline constexpr double kDefaultTangentEpsilon = 1e-8;

/// Non-owning view of the input to a NEW POINT query. Weights must sum to
/// one; individual weights may be negative (the quad-center refinement rule
/// uses -1/4).
struct WeightedPoints {
  std::span<const Point> points;
  std::span<const double> weights;
};

/// Throws WeightSumViolation / InvalidArgument if `wp` is not a valid query.
void validate(const WeightedPoints& wp);

/// A geometry oracle. It answers exactly two questions about the manifold
/// it describes:
///
///  - new_point: a point that interpolates N >= 2 points with weights that
///    sum to one;
///  - tangent_vector: the derivative at w = 0 of new_point({x1, x2}, {1-w, w}),
///    i.e. the non-normalized tangent at x1 pointing towards x2.
///
/// Oracles know nothing about meshes. They are immutable after construction
/// and every query is safe to issue concurrently.
class Manifold {
public:
  virtual ~Manifold() = default;

  /// Dimension of the ambient space the returned points live in.
  virtual int spacedim() const = 0;

  virtual std::string name() const = 0;

  Point new_point(const WeightedPoints& wp) const;
  Point new_point(std::span<const Point> points,
                  std::span<const double> weights) const {
    return new_point(WeightedPoints{points, weights});
  }

  /// Exact tangent where the oracle provides one, otherwise the finite
  /// difference approximation with epsilon = 1e-8.
  Vector tangent_vector(const Point& x1, const Point& x2) const;

  /// (new_point({x1, x2}, {1 - eps, eps}) - x1) / eps, for 0 < eps < 1/2.
  Vector tangent_vector_fd(const Point& x1, const Point& x2, double eps) const;

protected:
  virtual Point compute_new_point(const WeightedPoints& wp) const = 0;
  virtual Vector compute_tangent(const Point& x1, const Point& x2) const;
};

using ManifoldRef = std::shared_ptr<const Manifold>;

/// Euclidean space: the affine combination of the inputs.
class FlatManifold final : public Manifold {
public:
  explicit FlatManifold(int spacedim);

  int spacedim() const override { return spacedim_; }
  std::string name() const override { return "flat"; }

protected:
  Point compute_new_point(const WeightedPoints& wp) const override;
  Vector compute_tangent(const Point& x1, const Point& x2) const override;

private:
  int spacedim_;
};

/// Plain sum_i w_i x_i, with no validation.
Point affine_combination(const WeightedPoints& wp);

}  // namespace geoprim
