// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <initializer_list>

namespace geoprim {

/// Coordinates in a space of dimension 1..3, stored inline (no heap).
/// Points, tangent vectors and chart coordinates all use this layout; the
/// aliases below document the role a value plays.
using Coords = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;

using Point = Coords;
using Vector = Coords;
using ChartPoint = Coords;

/// spacedim x dim matrix, e.g. a Jacobian or a push-forward gradient.
using SmallMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 3, 3>;

inline Coords make_point(std::initializer_list<double> values) {
  Coords p(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) p[i++] = v;
  return p;
}

inline bool all_finite(const Coords& p) { return p.allFinite(); }

using ManifoldId = std::int32_t;
inline constexpr ManifoldId kFlatManifoldId = 0;
inline constexpr ManifoldId kUnsetManifoldId = -1;

}  // namespace geoprim
