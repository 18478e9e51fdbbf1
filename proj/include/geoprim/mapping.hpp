// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#pragma once

#include <geoprim/cell.hpp>
#include <geoprim/chart.hpp>

#include <array>
#include <optional>
#include <vector>

namespace geoprim {

namespace lagrange {

/// Values, first and second derivatives of the p+1 equidistant Lagrange
/// polynomials on [0, 1] at t.
struct Basis1d {
  std::vector<double> value, first, second;
};
Basis1d basis_1d(int degree, double t);

/// Tensor-product shape functions on [0,1]^dim, numbered lexicographically
/// (x index fastest).
int n_shape_functions(int dim, int degree);
Coords node(int dim, int degree, int i);
std::vector<double> values(int dim, int degree, const Coords& xhat);
/// Reference gradients, one dim-vector per shape function.
std::vector<Coords> gradients(int dim, int degree, const Coords& xhat);
/// Reference Hessians, one dim x dim matrix per shape function.
std::vector<SmallMatrix> hessians(int dim, int degree, const Coords& xhat);

}  // namespace lagrange

/// Degree-p polynomial cell mapping F(xhat) = sum_i v_i phi_i(xhat).
struct MappingQ {
  int dim = 0;
  int degree = 1;
  /// (p+1)^dim support points in lagrange numbering.
  std::vector<Point> support;

  int spacedim() const { return static_cast<int>(support.front().size()); }
  double diameter() const;
};

enum class InteriorRule {
  /// Face and interior points from the transfinite weights of the
  /// surrounding edge (and face) points, evaluated at the node.
  Transfinite,
  /// Interior points from the discrete Laplace equation on the node
  /// lattice, boundary points held fixed.
  Laplace,
};

/// Support points of a degree-p mapping. Vertices are copied, edge points
/// are new_point((1-s, s)) on the edge oracle, then face and interior
/// points are computed from points already placed through the face and
/// cell oracles.
MappingQ place_support_points(const CellGeometry& cell, int degree,
                              InteriorRule rule = InteriorRule::Transfinite);

Point map_forward(const MappingQ& mq, const Coords& xhat);
SmallMatrix jacobian_polynomial(const MappingQ& mq, const Coords& xhat);
/// d J / d xhat_k, for k = 0..dim-1.
std::vector<SmallMatrix> jacobian_gradient(const MappingQ& mq, const Coords& xhat);

/// Newton inversion of map_forward. For spacedim > dim the least-squares
/// foot point is returned. Throws NewtonDivergence after 30 steps or if the
/// iterate leaves [-1, 2]^dim.
Coords inverse_map(const MappingQ& mq, const Point& x);

/// Jacobian from the two oracle primitives alone: x0 is the cell oracle's
/// new point for the d-linear weights at xhat; for each direction i a
/// second point is taken as far from xhat as the cell allows (+e_i when
/// xhat_i <= 1/2, -e_i otherwise) and tangent_vector(x0, x_i) / L_i is
/// column i. Throws DegenerateCell if some L_i < 1e-6.
SmallMatrix jacobian_exact(const CellGeometry& cell, const Coords& xhat);

/// Columns of jacobian_exact.
std::vector<Vector> tangent_basis(const CellGeometry& entity, const Coords& xhat);
/// Gram-Schmidt in column order. Throws DegenerateTangents on a
/// (numerically) dependent basis.
std::vector<Vector> orthonormalize(std::vector<Vector> basis);

/// Unit normal of a codimension-one entity (edge in 2D, face or surface
/// cell in 3D) from the wedge product of its tangents. If `inside` is
/// given the normal points away from it. Throws DegenerateTangents if the
/// wedge product is shorter than 1e-12.
Vector normal_vector(const CellGeometry& entity, const Coords& xhat,
                     const std::optional<Point>& inside = std::nullopt);

/// Cubic edge with the end points of the edge and end tangents parallel to
/// the oracle's tangent_vector towards the other end point. Tangent lengths
/// are the chord length.
struct CubicEdge {
  std::array<Point, 4> bernstein;

  Point eval(double t) const;
  Vector derivative(double t) const;
  /// Points at t = 0, 1/3, 2/3, 1.
  std::array<Point, 4> support_points() const;
};

CubicEdge c1_cubic_edge(const Point& a, const Point& b, const Manifold& edge_manifold);

/// Real-space Hessian of shape function i (degree = mq.degree) under a
/// square polynomial mapping:
///   H = J^-T ( Hhat - sum_m (grad phi)_m d^2 F_m ) J^-1.
/// Throws SingularJacobian if J is singular.
SmallMatrix shape_hessian_real(const MappingQ& mq, const Coords& xhat, int i);

/// The same with J from jacobian_exact and dJ from its central finite
/// differences (step 1e-5), for a degree-p shape function.
SmallMatrix shape_hessian_real(const CellGeometry& cell, int degree, const Coords& xhat, int i);

/// A chart whose push-forward is a polynomial cell mapping. Useful to make
/// the manifold coincide with its own polynomial interpolant.
class PolynomialChartManifold final : public ChartManifold {
public:
  explicit PolynomialChartManifold(MappingQ mq);
  std::string name() const override { return "polynomial"; }
  ChartPoint pull_back(const Point& x) const override { return inverse_map(mq_, x); }
  Point push_forward(const ChartPoint& u) const override { return map_forward(mq_, u); }
  SmallMatrix push_forward_gradient(const ChartPoint& u) const override {
    return jacobian_polynomial(mq_, u);
  }
  const MappingQ& mapping() const { return mq_; }

private:
  MappingQ mq_;
};

}  // namespace geoprim
