// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#include <geoprim/cell.hpp>

#include <algorithm>

namespace geoprim {

namespace reference {

int n_edges(int dim) { return dim == 1 ? 1 : dim == 2 ? 4 : 12; }

int n_faces(int dim) { return dim == 3 ? 6 : 0; }

std::vector<std::array<int, 2>> edges(int dim) {
  switch (dim) {
    case 1: return {{0, 1}};
    case 2: return {kQuadEdges.begin(), kQuadEdges.end()};
    case 3: return {kHexEdges.begin(), kHexEdges.end()};
    default: fail(ErrorCode::InvalidArgument, "reference cell: dim must be 1, 2 or 3");
  }
}

int edge_axis(int dim, int edge) {
  const auto e = edges(dim)[edge];
  const int diff = e[0] ^ e[1];
  return diff == 1 ? 0 : diff == 2 ? 1 : 2;
}

std::vector<double> dlinear_weights(const Coords& xhat) {
  const int dim = static_cast<int>(xhat.size());
  std::vector<double> w(1u << dim);
  for (int v = 0; v < (1 << dim); ++v) {
    double p = 1.0;
    for (int k = 0; k < dim; ++k) p *= ((v >> k) & 1) ? xhat[k] : 1.0 - xhat[k];
    w[v] = p;
  }
  return w;
}

Coords vertex_position(int dim, int v) {
  Coords x(dim);
  for (int k = 0; k < dim; ++k) x[k] = (v >> k) & 1;
  return x;
}

}  // namespace reference

double CellGeometry::diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t j = i + 1; j < vertices.size(); ++j)
      d = std::max(d, (vertices[i] - vertices[j]).norm());
  return d;
}

Point edge_point(const CellGeometry& cell, int e, double s) {
  const auto ev = reference::edges(cell.dim)[e];
  const Point& a = cell.vertices[ev[0]];
  const Point& b = cell.vertices[ev[1]];
  const bool flip = !cell.vertex_ids.empty() && cell.vertex_ids[ev[1]] < cell.vertex_ids[ev[0]];
  const std::array<Point, 2> pts = flip ? std::array<Point, 2>{b, a} : std::array<Point, 2>{a, b};
  const std::array<double, 2> w = flip ? std::array<double, 2>{s, 1.0 - s}
                                       : std::array<double, 2>{1.0 - s, s};
  if (s == 0.0) return a;
  if (s == 1.0) return b;
  return cell.edge_manifolds[e]->new_point(pts, w);
}

Point dlinear_point(const std::vector<Point>& vertices, const Coords& xhat) {
  const std::vector<double> w = reference::dlinear_weights(xhat);
  Point x = Point::Zero(vertices.front().size());
  for (std::size_t v = 0; v < vertices.size(); ++v) x += w[v] * vertices[v];
  return x;
}

SmallMatrix dlinear_jacobian(const std::vector<Point>& vertices, const Coords& xhat) {
  const int dim = static_cast<int>(xhat.size());
  const int spacedim = static_cast<int>(vertices.front().size());
  SmallMatrix J = SmallMatrix::Zero(spacedim, dim);
  for (int v = 0; v < (1 << dim); ++v)
    for (int k = 0; k < dim; ++k) {
      double p = ((v >> k) & 1) ? 1.0 : -1.0;
      for (int m = 0; m < dim; ++m)
        if (m != k) p *= ((v >> m) & 1) ? xhat[m] : 1.0 - xhat[m];
      J.col(k) += p * vertices[v];
    }
  return J;
}

}  // namespace geoprim
