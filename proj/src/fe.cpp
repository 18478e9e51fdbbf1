// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#include <geoprim/fe.hpp>
#include <geoprim/spherical.hpp>

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>

namespace geoprim {

QuadratureRule gauss_rule(int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "gauss_rule: at least one point is required");
  QuadratureRule rule;
  for (int i = 0; i < n; ++i) {
    // Newton on the Legendre polynomial P_n, starting from the Chebyshev
    // approximation of the i-th root.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    rule.points.push_back(make_point({0.5 * (1.0 - x)}));
    rule.weights.push_back(1.0 / ((1.0 - x * x) * dp * dp));
  }
  return rule;
}

QuadratureRule gauss_rule(int dim, int n) {
  const QuadratureRule line = gauss_rule(n);
  QuadratureRule rule;
  int total = 1;
  for (int k = 0; k < dim; ++k) total *= n;
  for (int i = 0; i < total; ++i) {
    Coords x(dim);
    double w = 1.0;
    int rest = i;
    for (int k = 0; k < dim; ++k) {
      x[k] = line.points[rest % n][0];
      w *= line.weights[rest % n];
      rest /= n;
    }
    rule.points.push_back(x);
    rule.weights.push_back(w);
  }
  return rule;
}

// ---------------------------------------------------------------- fields

double FEField::eval(std::size_t k, const Coords& xhat) const {
  const std::vector<double> phi = lagrange::values(dim, degree, xhat);
  double u = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) u += phi[i] * values[dofs[k][i]];
  return u;
}

namespace {

constexpr double kDedupResolution = 1e-10;

// Assigns global numbers to support points; points within the resolution
// of an earlier one (checked in the neighbouring buckets too) share it.
class PointNumbering {
public:
  explicit PointNumbering(std::vector<Point>& points) : points_(points) {}

  std::pair<std::size_t, bool> insert(const Point& x) {
    const Key k = key(x);
    if (auto own = buckets_.find(k); own != buckets_.end())
      for (std::size_t idx : own->second)
        if ((points_[idx] - x).norm() <= kDedupResolution) return {idx, false};
    const int d = static_cast<int>(x.size());
    int n_neighbours = 1;
    for (int i = 0; i < d; ++i) n_neighbours *= 3;
    for (int nb = 0; nb < n_neighbours; ++nb) {
      if (nb == n_neighbours / 2) continue;
      Key q = k;
      int rest = nb;
      for (int i = 0; i < d; ++i) {
        q[i] += rest % 3 - 1;
        rest /= 3;
      }
      auto it = buckets_.find(q);
      if (it == buckets_.end()) continue;
      for (std::size_t idx : it->second)
        if ((points_[idx] - x).norm() <= kDedupResolution) return {idx, false};
    }
    points_.push_back(x);
    buckets_[k].push_back(points_.size() - 1);
    return {points_.size() - 1, true};
  }

private:
  using Key = std::array<long long, 3>;
  static Key key(const Point& x) {
    Key k{0, 0, 0};
    for (int i = 0; i < x.size(); ++i) k[i] = std::llround(x[i] / kDedupResolution);
    return k;
  }

  std::vector<Point>& points_;
  std::map<Key, std::vector<std::size_t>> buckets_;
};

// |det J| for square J, the Gram determinant's root otherwise.
double measure(const Eigen::Matrix3d& J, int spacedim, int dim) {
  if (dim == 3) return std::abs(J.determinant());
  const Eigen::Vector3d a = J.col(0), b = J.col(1);
  if (dim == 2) return spacedim == 2 ? std::abs(a[0] * b[1] - a[1] * b[0]) : a.cross(b).norm();
  return a.norm();
}

}  // namespace

FEField interpolate(const Mesh& mesh, const ManifoldRegistry& registry, int degree,
                    const ScalarFunction& f) {
  if (degree < 1) fail(ErrorCode::InvalidArgument, "interpolate: degree must be at least 1");
  FEField field;
  field.dim = mesh.dim();
  field.degree = degree;
  PointNumbering numbering(field.points);
  for (CellIndex c : mesh.active_cells()) {
    field.cells.push_back(c);
    field.mappings.push_back(place_support_points(mesh.cell_geometry(c, registry), degree));
    std::vector<std::size_t> dofs;
    for (const Point& x : field.mappings.back().support) {
      const auto [idx, fresh] = numbering.insert(x);
      if (fresh) field.values.push_back(f(x));
      dofs.push_back(idx);
    }
    field.dofs.push_back(std::move(dofs));
  }
  return field;
}

double l2_error(const FEField& field, const ScalarFunction& f, int n_points, bool subdivide) {
  const QuadratureRule base = gauss_rule(field.dim, n_points);
  QuadratureRule rule;
  if (!subdivide) {
    rule = base;
  } else {
    const double scale = 1.0 / (1 << field.dim);
    for (int child = 0; child < (1 << field.dim); ++child)
      for (std::size_t q = 0; q < base.points.size(); ++q) {
        Coords x(field.dim);
        for (int k = 0; k < field.dim; ++k) x[k] = 0.5 * (((child >> k) & 1) + base.points[q][k]);
        rule.points.push_back(x);
        rule.weights.push_back(scale * base.weights[q]);
      }
  }

  // Shape values and gradients are the same for every cell.
  std::vector<std::vector<double>> phi;
  std::vector<std::vector<Coords>> grad;
  for (const Coords& x : rule.points) {
    phi.push_back(lagrange::values(field.dim, field.degree, x));
    grad.push_back(lagrange::gradients(field.dim, field.degree, x));
  }

  const int dim = field.dim;
  double sum = 0.0;
  for (std::size_t k = 0; k < field.cells.size(); ++k) {
    const MappingQ& mq = field.mappings[k];
    const int sd = mq.spacedim();
    double cell_sum = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      Eigen::Vector3d x = Eigen::Vector3d::Zero();
      Eigen::Matrix3d J = Eigen::Matrix3d::Zero();
      double uh = 0.0;
      for (std::size_t i = 0; i < phi[q].size(); ++i) {
        const Point& v = mq.support[i];
        for (int a = 0; a < sd; ++a) {
          x[a] += phi[q][i] * v[a];
          for (int b = 0; b < dim; ++b) J(a, b) += v[a] * grad[q][i][b];
        }
        uh += phi[q][i] * field.values[field.dofs[k][i]];
      }
      const double e = uh - f(Point(x.head(sd)));
      cell_sum += rule.weights[q] * e * e * measure(J, sd, dim);
    }
    sum += cell_sum;
  }
  return std::sqrt(sum);
}

FEField embed_to_children(const FEField& field, const Mesh& fine, const ManifoldRegistry& registry) {
  FEField out;
  out.dim = field.dim;
  out.degree = field.degree;
  PointNumbering numbering(out.points);
  const int n_shape = lagrange::n_shape_functions(field.dim, field.degree);
  for (std::size_t k = 0; k < field.cells.size(); ++k) {
    const CellIndex parent = field.cells[k];
    if (parent >= static_cast<CellIndex>(fine.n_cells()) || fine.cell(parent).children.empty())
      throw GeometryError(ErrorCode::NoChildren,
                          "embed_to_children: cell " + std::to_string(parent) + " was not refined",
                          parent);
    const auto& children = fine.cell(parent).children;
    if (static_cast<int>(children.size()) != (1 << field.dim))
      fail(ErrorCode::InvalidArgument, "embed_to_children: only isotropic refinement is supported");
    for (std::size_t ch = 0; ch < children.size(); ++ch) {
      out.cells.push_back(children[ch]);
      out.mappings.push_back(
          place_support_points(fine.cell_geometry(children[ch], registry), field.degree));
      std::vector<std::size_t> dofs;
      for (int i = 0; i < n_shape; ++i) {
        const auto [idx, fresh] = numbering.insert(out.mappings.back().support[i]);
        if (fresh) {
          const Coords xi = lagrange::node(field.dim, field.degree, i);
          Coords xp(field.dim);
          for (int d = 0; d < field.dim; ++d) xp[d] = 0.5 * (((ch >> d) & 1) + xi[d]);
          out.values.push_back(field.eval(k, xp));
        }
        dofs.push_back(idx);
      }
      out.dofs.push_back(std::move(dofs));
    }
  }
  return out;
}

// ---------------------------------------------------------------- Table 1

double table1_function(const Point& x) { return std::exp(x[0]) * std::sin(x[1] + 2.0 * x[2]); }

std::vector<Table1Row> table1_experiment(int degree, int cycles, bool flat_control) {
  if (degree < 1 || degree > 7)
    fail(ErrorCode::InvalidArgument, "table1: degree must lie in 1..7");
  if (cycles < 1) fail(ErrorCode::InvalidArgument, "table1: at least one cycle is required");

  ManifoldRegistry registry(3);
  if (!flat_control) {
    auto sphere = std::make_shared<SphericalAverageManifold>(make_point({0, 0, 0}));
    registry.set(1, sphere);
    registry.set(2, sphere);
  }
  const int n_points = degree + 2;
  std::vector<Table1Row> rows;
  Mesh mesh = meshes::cube_shell(0.5, 1.0, 1, 2);
  for (int cycle = 0; cycle < cycles; ++cycle) {
    const FEField coarse = interpolate(mesh, registry, degree, table1_function);
    const Mesh fine = mesh.refine_uniform(registry);
    const FEField embedded = embed_to_children(coarse, fine, registry);
    rows.push_back({coarse.n_dofs(), l2_error(coarse, table1_function, n_points, true),
                    l2_error(embedded, table1_function, n_points)});
    mesh = fine.flattened();
  }
  return rows;
}

}  // namespace geoprim
