// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#pragma once

#include <geoprim/mapping.hpp>
#include <geoprim/mesh.hpp>

#include <cstddef>
#include <functional>
#include <vector>

namespace geoprim {

/// Quadrature on [0,1]^dim; weights sum to 1.
struct QuadratureRule {
  std::vector<Coords> points;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [0, 1], exact for degree 2n - 1.
QuadratureRule gauss_rule(int n);
/// Tensor product of gauss_rule(n).
QuadratureRule gauss_rule(int dim, int n);

using ScalarFunction = std::function<double(const Point&)>;

/// Continuous scalar Lagrange field of degree p on the active cells of a
/// mesh, with isoparametric cell mappings. Support points shared between
/// cells (equal to 1e-10) carry a single coefficient.
struct FEField {
  int dim = 0;
  int degree = 1;
  /// Active cells of the mesh the field lives on, in mesh order.
  std::vector<CellIndex> cells;
  std::vector<MappingQ> mappings;
  /// Per cell, the global coefficient of each local shape function.
  std::vector<std::vector<std::size_t>> dofs;
  std::vector<Point> points;
  std::vector<double> values;

  std::size_t n_dofs() const { return values.size(); }
  /// Value in cell number k (position in `cells`) at reference point xhat.
  double eval(std::size_t k, const Coords& xhat) const;
};

/// Nodal interpolation of f at the support points placed through the
/// registry's oracles.
FEField interpolate(const Mesh& mesh, const ManifoldRegistry& registry, int degree,
                    const ScalarFunction& f);

/// sqrt( sum over cells and quadrature points of w |u_h - f|^2 |det J| ),
/// J from the cell's polynomial mapping (Gram determinant for surfaces),
/// with an n-point Gauss rule per direction. With `subdivide` the rule is
/// applied on each of the 2^dim reference sub-cells instead, which places
/// the quadrature points exactly where the rule on the refined mesh puts
/// them.
double l2_error(const FEField& field, const ScalarFunction& f, int n_points, bool subdivide = false);

/// Transfers a field to the uniformly refined mesh `fine` (which must be
/// the result of refining the field's mesh): every child coefficient is the
/// parent polynomial evaluated at the child node's parent reference
/// coordinates. Child mappings come from the registry's oracles. Throws
/// NoChildren if a cell of the field was not refined.
FEField embed_to_children(const FEField& field, const Mesh& fine, const ManifoldRegistry& registry);

struct Table1Row {
  std::size_t ndof;
  double error_coarse;
  double error_after_refine;
};

/// The smooth function used by the interpolation experiment:
/// u(x) = exp(x_1) sin(x_2 + 2 x_3).
double table1_function(const Point& x);

/// Interpolation/embedding experiment on a spherical shell (radii 0.5 and
/// 1, six cells, spherical-average oracle; all-flat oracles with
/// `flat_control`). Row k uses the shell refined k times.
std::vector<Table1Row> table1_experiment(int degree, int cycles, bool flat_control = false);

}  // namespace geoprim
