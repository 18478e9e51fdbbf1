// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#pragma once

#include <geoprim/cell.hpp>

#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace geoprim {

/// New point from a weighted set in which several entries may coincide or
/// carry zero weight: identical points are merged and zero weights dropped
/// before the oracle is queried, so that boundary cases of blending
/// formulas reproduce their inputs exactly.
Point combine(const Manifold& m, std::span<const Point> points, std::span<const double> weights);

/// Transfinite (Gordon-Hall) interpolation of one coarse cell.
///
/// In 2D, with c0..c3 the bottom, top, left and right edge curves,
///   x(s,t) = (1-t) c0(s) + t c1(s) + (1-s) c2(t) + s c3(t)
///            - [(1-s)(1-t) x0 + s(1-t) x1 + (1-s)t x2 + st x3],
/// where c0(s) = new_point(x0, x1; 1-s, s) on the edge's oracle. In 3D the
/// six faces enter with +, the twelve edges with - and the eight vertices
/// with +. A face point is the new point of its oracle over the face's
/// boundary curves and corners with the 2D weights above.
class TransfiniteCell {
public:
  /// All edge (and, in 3D, face) oracles of `geometry` must be set.
  explicit TransfiniteCell(CellGeometry geometry);

  int dim() const { return geometry_.dim; }
  int spacedim() const { return static_cast<int>(geometry_.vertices.front().size()); }
  const CellGeometry& geometry() const { return geometry_; }

  Point eval(const Coords& xhat) const;

  /// Newton inversion of eval(). Throws NewtonDivergence if it fails to
  /// reach |eval(xhat) - x| <= 1e-10 * diameter in 30 steps, OutsideCell if
  /// the result lies outside [-0.1, 1.1]^dim.
  Coords pull_back(const Point& x) const;

  /// Face point of face f at face coordinates (s, t) (3D only).
  Point face_point(int f, double s, double t) const;

private:
  SmallMatrix fd_jacobian(const Coords& xhat) const;

  CellGeometry geometry_;
  double diameter_;
};

/// An oracle defined by the transfinite interpolation of a set of coarse
/// cells. A query is answered in the first cell (by index) into which all
/// its points pull back; the reference coordinates are averaged and mapped
/// forward. Pull-backs are cached; the cache is guarded by a mutex.
class TransfiniteManifold final : public Manifold {
public:
  /// `keep_alive` holds the oracles the cells' geometry points to.
  TransfiniteManifold(int spacedim, std::vector<TransfiniteCell> cells,
                      std::vector<ManifoldRef> keep_alive = {});

  int spacedim() const override { return spacedim_; }
  std::string name() const override { return "transfinite"; }
  std::size_t n_cells() const { return cells_.size(); }
  const TransfiniteCell& cell(std::size_t i) const { return cells_[i]; }

  /// Reference coordinates of x in coarse cell `c`.
  Coords pull_back(std::size_t c, const Point& x) const;

protected:
  Point compute_new_point(const WeightedPoints& wp) const override;

private:
  bool may_contain(std::size_t c, const Point& x) const;

  int spacedim_;
  std::vector<TransfiniteCell> cells_;
  std::vector<ManifoldRef> keep_alive_;
  std::vector<std::pair<Point, Point>> boxes_;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::pair<std::size_t, std::array<double, 3>>, std::optional<Coords>> cache_;
};

}  // namespace geoprim
