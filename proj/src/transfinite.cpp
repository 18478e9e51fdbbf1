// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#include <geoprim/transfinite.hpp>

#include <algorithm>
#include <cmath>

namespace geoprim {

namespace {

constexpr int kMaxNewtonSteps = 30;
constexpr double kFdStep = 1e-6;

// Hex edge index joining local vertices a < b.
int hex_edge(int a, int b) {
  for (int e = 0; e < 12; ++e)
    if (reference::kHexEdges[e][0] == a && reference::kHexEdges[e][1] == b) return e;
  fail(ErrorCode::InvalidArgument, "hex_edge: vertices do not form an edge");
}

Coords solve_least_squares(const SmallMatrix& J, const Vector& r) {
  return J.colPivHouseholderQr().solve(r);
}

}  // namespace

Point combine(const Manifold& m, std::span<const Point> points, std::span<const double> weights) {
  std::vector<Point> pts;
  std::vector<double> w;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (weights[i] == 0.0) continue;
    auto it = std::find(pts.begin(), pts.end(), points[i]);
    if (it == pts.end()) {
      pts.push_back(points[i]);
      w.push_back(weights[i]);
    } else {
      w[it - pts.begin()] += weights[i];
    }
  }
  for (std::size_t i = pts.size(); i-- > 0;)
    if (w[i] == 0.0) {
      pts.erase(pts.begin() + i);
      w.erase(w.begin() + i);
    }
  if (pts.size() == 1 && std::abs(w[0] - 1.0) <= kWeightSumTolerance) return pts[0];
  if (pts.empty()) fail(ErrorCode::WeightSumViolation, "combine: all weights cancel");
  return m.new_point(pts, w);
}

TransfiniteCell::TransfiniteCell(CellGeometry geometry) : geometry_(std::move(geometry)) {
  const int dim = geometry_.dim;
  if (dim < 2 || dim > 3)
    fail(ErrorCode::InvalidArgument, "TransfiniteCell: only quadrilaterals and hexahedra");
  if (static_cast<int>(geometry_.vertices.size()) != reference::n_vertices(dim) ||
      static_cast<int>(geometry_.edge_manifolds.size()) != reference::n_edges(dim) ||
      static_cast<int>(geometry_.face_manifolds.size()) != reference::n_faces(dim))
    fail(ErrorCode::InvalidArgument, "TransfiniteCell: incomplete cell description");
  for (const Manifold* m : geometry_.edge_manifolds)
    if (!m) fail(ErrorCode::InvalidArgument, "TransfiniteCell: missing edge oracle");
  for (const Manifold* m : geometry_.face_manifolds)
    if (!m) fail(ErrorCode::InvalidArgument, "TransfiniteCell: missing face oracle");
  diameter_ = geometry_.diameter();
}

Point TransfiniteCell::face_point(int f, double s, double t) const {
  const auto& fv = reference::kHexFaces[f];
  const std::array<Point, 8> pts{edge_point(geometry_, hex_edge(fv[0], fv[1]), s),
                                 edge_point(geometry_, hex_edge(fv[2], fv[3]), s),
                                 edge_point(geometry_, hex_edge(fv[0], fv[2]), t),
                                 edge_point(geometry_, hex_edge(fv[1], fv[3]), t),
                                 geometry_.vertices[fv[0]],
                                 geometry_.vertices[fv[1]],
                                 geometry_.vertices[fv[2]],
                                 geometry_.vertices[fv[3]]};
  const std::array<double, 8> w{1 - t, t, 1 - s, s, -(1 - s) * (1 - t), -s * (1 - t), -(1 - s) * t,
                                -s * t};
  return combine(*geometry_.face_manifolds[f], pts, w);
}

Point TransfiniteCell::eval(const Coords& xhat) const {
  const std::vector<Point>& x = geometry_.vertices;
  if (geometry_.dim == 2) {
    const double s = xhat[0], t = xhat[1];
    Point p = (1 - t) * edge_point(geometry_, 0, s) + t * edge_point(geometry_, 1, s) +
              (1 - s) * edge_point(geometry_, 2, t) + s * edge_point(geometry_, 3, t);
    p -= (1 - s) * (1 - t) * x[0] + s * (1 - t) * x[1] + (1 - s) * t * x[2] + s * t * x[3];
    return p;
  }

  const double u[3] = {xhat[0], xhat[1], xhat[2]};
  Point p = Point::Zero(spacedim());
  // Faces: x=0/1 use (y,z), y=0/1 use (x,z), z=0/1 use (x,y).
  for (int f = 0; f < 6; ++f) {
    const int axis = f / 2;
    const double blend = (f % 2) ? u[axis] : 1 - u[axis];
    const int a = axis == 0 ? 1 : 0, b = axis == 2 ? 1 : 2;
    if (blend != 0.0) p += blend * face_point(f, u[a], u[b]);
  }
  for (int e = 0; e < 12; ++e) {
    const int axis = e / 4;
    const int a = axis == 0 ? 1 : 0, b = axis == 2 ? 1 : 2;
    const double wa = (e & 1) ? u[a] : 1 - u[a];
    const double wb = (e & 2) ? u[b] : 1 - u[b];
    if (wa * wb != 0.0) p -= wa * wb * edge_point(geometry_, e, u[axis]);
  }
  const std::vector<double> w = reference::dlinear_weights(xhat);
  for (int v = 0; v < 8; ++v) p += w[v] * x[v];
  return p;
}

SmallMatrix TransfiniteCell::fd_jacobian(const Coords& xhat) const {
  SmallMatrix J(spacedim(), dim());
  for (int k = 0; k < dim(); ++k) {
    Coords xp = xhat, xm = xhat;
    xp[k] += kFdStep;
    xm[k] -= kFdStep;
    J.col(k) = (eval(xp) - eval(xm)) / (2 * kFdStep);
  }
  return J;
}

Coords TransfiniteCell::pull_back(const Point& x) const {
  const double tol = 1e-10 * diameter_;
  const bool surface = spacedim() > dim();

  // Initial guess: invert the d-linear map through the vertices.
  Coords xhat = Coords::Constant(dim(), 0.5);
  for (int it = 0; it < 20; ++it) {
    const Vector r = x - dlinear_point(geometry_.vertices, xhat);
    const Coords step = solve_least_squares(dlinear_jacobian(geometry_.vertices, xhat), r);
    if (!step.allFinite()) break;
    xhat += step;
    if (xhat.cwiseAbs().maxCoeff() > 10.0) {
      xhat = Coords::Constant(dim(), 0.5);
      break;
    }
    if (step.norm() < 1e-12) break;
  }

  Vector r = x - eval(xhat);
  for (int it = 0; it <= kMaxNewtonSteps; ++it) {
    if (r.norm() <= tol) break;
    if (it == kMaxNewtonSteps)
      fail(ErrorCode::NewtonDivergence, "transfinite pull-back did not converge");
    const Coords step = solve_least_squares(fd_jacobian(xhat), r);
    if (!step.allFinite())
      fail(ErrorCode::NewtonDivergence, "transfinite pull-back: singular Jacobian");
    double alpha = 1.0;
    Coords trial = xhat + step;
    Vector rt = x - eval(trial);
    for (int k = 0; k < 6 && rt.norm() > r.norm(); ++k) {
      alpha *= 0.5;
      trial = xhat + alpha * step;
      rt = x - eval(trial);
    }
    xhat = trial;
    r = rt;
    if (xhat.cwiseAbs().maxCoeff() > 10.0)
      fail(ErrorCode::NewtonDivergence, "transfinite pull-back left the reference cell");
    // Off-surface points: accept the least-squares foot point.
    if (surface && alpha * step.norm() < 1e-13) break;
  }
  for (int k = 0; k < dim(); ++k)
    if (xhat[k] < -0.1 || xhat[k] > 1.1)
      fail(ErrorCode::OutsideCell, "transfinite pull-back: point lies outside the cell");
  return xhat;
}

TransfiniteManifold::TransfiniteManifold(int spacedim, std::vector<TransfiniteCell> cells,
                                         std::vector<ManifoldRef> keep_alive)
    : spacedim_(spacedim), cells_(std::move(cells)), keep_alive_(std::move(keep_alive)) {
  if (cells_.empty()) fail(ErrorCode::InvalidArgument, "TransfiniteManifold: no cells");
  for (const TransfiniteCell& c : cells_) {
    if (c.spacedim() != spacedim)
      fail(ErrorCode::InvalidArgument, "TransfiniteManifold: cell dimension mismatch");
    Point lo = c.geometry().vertices.front(), hi = lo;
    for (const Point& v : c.geometry().vertices) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
    const double pad = 0.25 * c.geometry().diameter();
    boxes_.emplace_back(lo.array() - pad, hi.array() + pad);
  }
}

bool TransfiniteManifold::may_contain(std::size_t c, const Point& x) const {
  return (x.array() >= boxes_[c].first.array()).all() && (x.array() <= boxes_[c].second.array()).all();
}

Coords TransfiniteManifold::pull_back(std::size_t c, const Point& x) const {
  std::array<double, 3> key{0, 0, 0};
  for (int k = 0; k < x.size(); ++k) key[k] = x[k];
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = cache_.find({c, key}); it != cache_.end()) {
      if (!it->second) fail(ErrorCode::OutsideCell, "transfinite: point outside cell");
      return *it->second;
    }
  }
  std::optional<Coords> result;
  try {
    result = cells_[c].pull_back(x);
  } catch (const GeometryError& e) {
    if (e.code() != ErrorCode::OutsideCell && e.code() != ErrorCode::NewtonDivergence) throw;
  }
  {
    std::lock_guard lock(cache_mutex_);
    cache_.emplace(std::pair{c, key}, result);
  }
  if (!result) fail(ErrorCode::OutsideCell, "transfinite: point outside cell");
  return *result;
}

Point TransfiniteManifold::compute_new_point(const WeightedPoints& wp) const {
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    if (!std::all_of(wp.points.begin(), wp.points.end(),
                     [&](const Point& x) { return may_contain(c, x); }))
      continue;
    Coords mean = Coords::Zero(cells_[c].dim());
    bool inside = true;
    for (std::size_t i = 0; i < wp.points.size() && inside; ++i) {
      try {
        mean += wp.weights[i] * pull_back(c, wp.points[i]);
      } catch (const GeometryError& e) {
        if (e.code() != ErrorCode::OutsideCell) throw;
        inside = false;
      }
    }
    if (inside) return cells_[c].eval(mean);
  }
  fail(ErrorCode::OutsideCell, "transfinite: no coarse cell contains all query points");
}

}  // namespace geoprim
