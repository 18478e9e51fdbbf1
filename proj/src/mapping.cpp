// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#include <geoprim/mapping.hpp>
#include <geoprim/transfinite.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>

namespace geoprim {

namespace lagrange {

Basis1d basis_1d(int degree, double t) {
  if (degree < 1) fail(ErrorCode::InvalidArgument, "lagrange: degree must be at least 1");
  const int n = degree + 1;
  std::vector<double> z(n);
  for (int m = 0; m < n; ++m) z[m] = double(m) / degree;

  Basis1d b{std::vector<double>(n), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (int k = 0; k < n; ++k) {
    double denom = 1.0;
    for (int m = 0; m < n; ++m)
      if (m != k) denom *= z[k] - z[m];

    double value = 1.0;
    for (int m = 0; m < n; ++m)
      if (m != k) value *= t - z[m];

    double first = 0.0, second = 0.0;
    for (int a = 0; a < n; ++a) {
      if (a == k) continue;
      double pa = 1.0;
      for (int m = 0; m < n; ++m)
        if (m != k && m != a) pa *= t - z[m];
      first += pa;
      for (int c = 0; c < n; ++c) {
        if (c == k || c == a) continue;
        double pac = 1.0;
        for (int m = 0; m < n; ++m)
          if (m != k && m != a && m != c) pac *= t - z[m];
        second += pac;
      }
    }
    b.value[k] = value / denom;
    b.first[k] = first / denom;
    b.second[k] = second / denom;
  }
  return b;
}

int n_shape_functions(int dim, int degree) {
  int n = 1;
  for (int k = 0; k < dim; ++k) n *= degree + 1;
  return n;
}

namespace {

std::array<int, 3> digits(int dim, int degree, int i) {
  std::array<int, 3> d{0, 0, 0};
  for (int k = 0; k < dim; ++k) {
    d[k] = i % (degree + 1);
    i /= degree + 1;
  }
  return d;
}

std::vector<Basis1d> bases(int dim, int degree, const Coords& xhat) {
  std::vector<Basis1d> b;
  for (int k = 0; k < dim; ++k) b.push_back(basis_1d(degree, xhat[k]));
  return b;
}

}  // namespace

Coords node(int dim, int degree, int i) {
  const auto d = digits(dim, degree, i);
  Coords x(dim);
  for (int k = 0; k < dim; ++k) x[k] = double(d[k]) / degree;
  return x;
}

std::vector<double> values(int dim, int degree, const Coords& xhat) {
  const auto b = bases(dim, degree, xhat);
  std::vector<double> v(n_shape_functions(dim, degree));
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto d = digits(dim, degree, static_cast<int>(i));
    double p = 1.0;
    for (int k = 0; k < dim; ++k) p *= b[k].value[d[k]];
    v[i] = p;
  }
  return v;
}

std::vector<Coords> gradients(int dim, int degree, const Coords& xhat) {
  const auto b = bases(dim, degree, xhat);
  std::vector<Coords> g(n_shape_functions(dim, degree), Coords::Zero(dim));
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto d = digits(dim, degree, static_cast<int>(i));
    for (int a = 0; a < dim; ++a) {
      double p = 1.0;
      for (int k = 0; k < dim; ++k) p *= k == a ? b[k].first[d[k]] : b[k].value[d[k]];
      g[i][a] = p;
    }
  }
  return g;
}

std::vector<SmallMatrix> hessians(int dim, int degree, const Coords& xhat) {
  const auto b = bases(dim, degree, xhat);
  std::vector<SmallMatrix> h(n_shape_functions(dim, degree), SmallMatrix::Zero(dim, dim));
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto d = digits(dim, degree, static_cast<int>(i));
    for (int a = 0; a < dim; ++a)
      for (int c = 0; c < dim; ++c) {
        double p = 1.0;
        for (int k = 0; k < dim; ++k) {
          if (a == c && k == a)
            p *= b[k].second[d[k]];
          else if (k == a || k == c)
            p *= b[k].first[d[k]];
          else
            p *= b[k].value[d[k]];
        }
        h[i](a, c) = p;
      }
  }
  return h;
}

}  // namespace lagrange

double MappingQ::diameter() const {
  const int p = degree;
  std::vector<Point> corners;
  for (int v = 0; v < (1 << dim); ++v) {
    int idx = 0, stride = 1;
    for (int k = 0; k < dim; ++k) {
      idx += ((v >> k) & 1) * p * stride;
      stride *= p + 1;
    }
    corners.push_back(support[idx]);
  }
  double d = 0.0;
  for (std::size_t i = 0; i < corners.size(); ++i)
    for (std::size_t j = i + 1; j < corners.size(); ++j)
      d = std::max(d, (corners[i] - corners[j]).norm());
  return d;
}

// ---------------------------------------------------------------- placement

namespace {

struct Lattice {
  int dim, p;
  int index(const std::array<int, 3>& d) const {
    int idx = 0, stride = 1;
    for (int k = 0; k < dim; ++k) {
      idx += d[k] * stride;
      stride *= p + 1;
    }
    return idx;
  }
  std::array<int, 3> digits(int i) const {
    std::array<int, 3> d{0, 0, 0};
    for (int k = 0; k < dim; ++k) {
      d[k] = i % (p + 1);
      i /= p + 1;
    }
    return d;
  }
};

// Boolean-sum (Gordon-Hall) blending of the boundary of the sub-lattice
// spanned by `axes` through node `d`: every nonempty subset S of axes
// contributes (-1)^(|S|+1) times the tensor-linear interpolation of the
// nodes with the S coordinates moved to 0 or p.
void transfinite_stencil(const Lattice& lat, const std::array<int, 3>& d,
                         const std::vector<int>& axes, std::vector<int>& nodes,
                         std::vector<double>& weights) {
  const int na = static_cast<int>(axes.size());
  for (int subset = 1; subset < (1 << na); ++subset) {
    std::vector<int> in;
    for (int a = 0; a < na; ++a)
      if ((subset >> a) & 1) in.push_back(axes[a]);
    const double sign = in.size() % 2 == 1 ? 1.0 : -1.0;
    for (int ends = 0; ends < (1 << in.size()); ++ends) {
      std::array<int, 3> e = d;
      double w = sign;
      for (std::size_t a = 0; a < in.size(); ++a) {
        const double s = double(d[in[a]]) / lat.p;
        const bool high = (ends >> a) & 1;
        e[in[a]] = high ? lat.p : 0;
        w *= high ? s : 1.0 - s;
      }
      if (w == 0.0) continue;
      nodes.push_back(lat.index(e));
      weights.push_back(w);
    }
  }
}

bool is_interior(const Lattice& lat, const std::array<int, 3>& d, const std::vector<int>& axes) {
  return std::all_of(axes.begin(), axes.end(), [&](int a) { return d[a] > 0 && d[a] < lat.p; });
}

}  // namespace

MappingQ place_support_points(const CellGeometry& cell, int degree, InteriorRule rule) {
  if (degree < 1) fail(ErrorCode::InvalidArgument, "place_support_points: degree must be at least 1");
  if (cell.dim < 1 || cell.dim > 3 || !cell.cell_manifold)
    fail(ErrorCode::InvalidArgument, "place_support_points: incomplete cell description");
  const int dim = cell.dim;
  const Lattice lat{dim, degree};
  MappingQ mq{dim, degree, std::vector<Point>(lagrange::n_shape_functions(dim, degree))};
  std::vector<bool> placed(mq.support.size(), false);

  for (int v = 0; v < (1 << dim); ++v) {
    std::array<int, 3> d{0, 0, 0};
    for (int k = 0; k < dim; ++k) d[k] = ((v >> k) & 1) * degree;
    mq.support[lat.index(d)] = cell.vertices[v];
    placed[lat.index(d)] = true;
  }

  const auto edges = reference::edges(dim);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const int axis = reference::edge_axis(dim, static_cast<int>(e));
    std::array<int, 3> d{0, 0, 0};
    for (int k = 0; k < dim; ++k) d[k] = ((edges[e][0] >> k) & 1) * degree;
    for (int j = 1; j < degree; ++j) {
      d[axis] = j;
      mq.support[lat.index(d)] = edge_point(cell, static_cast<int>(e), double(j) / degree);
      placed[lat.index(d)] = true;
    }
  }
  if (dim == 1 || degree == 1) return mq;

  auto blend = [&](const std::array<int, 3>& d, const std::vector<int>& axes, const Manifold& m) {
    std::vector<int> nodes;
    std::vector<double> w;
    transfinite_stencil(lat, d, axes, nodes, w);
    std::vector<Point> pts;
    for (int n : nodes) pts.push_back(mq.support[n]);
    return combine(m, pts, w);
  };

  if (dim == 3) {
    for (int f = 0; f < 6; ++f) {
      const int fixed = f / 2;
      std::vector<int> axes;
      for (int k = 0; k < 3; ++k)
        if (k != fixed) axes.push_back(k);
      if (!cell.face_manifolds.at(f))
        fail(ErrorCode::InvalidArgument, "place_support_points: missing face oracle");
      for (std::size_t i = 0; i < mq.support.size(); ++i) {
        const auto d = lat.digits(static_cast<int>(i));
        if (d[fixed] != (f % 2) * degree || !is_interior(lat, d, axes)) continue;
        mq.support[i] = blend(d, axes, *cell.face_manifolds[f]);
        placed[i] = true;
      }
    }
  }

  std::vector<int> all_axes;
  for (int k = 0; k < dim; ++k) all_axes.push_back(k);

  if (rule == InteriorRule::Transfinite) {
    for (std::size_t i = 0; i < mq.support.size(); ++i) {
      const auto d = lat.digits(static_cast<int>(i));
      if (!is_interior(lat, d, all_axes)) continue;
      mq.support[i] = blend(d, all_axes, *cell.cell_manifold);
      placed[i] = true;
    }
    return mq;
  }

  // Discrete Laplace equation on the node lattice: every interior node is
  // the mean of its 2 dim lattice neighbours. The solution expresses each
  // interior node as a weighted combination of the boundary nodes, which is
  // then handed to the cell oracle.
  std::vector<int> interior, boundary;
  std::map<int, int> slot;
  for (int i = 0; i < static_cast<int>(mq.support.size()); ++i) {
    if (placed[i]) {
      slot[i] = static_cast<int>(boundary.size());
      boundary.push_back(i);
    } else {
      slot[i] = static_cast<int>(interior.size());
      interior.push_back(i);
    }
  }
  const int ni = static_cast<int>(interior.size()), nb = static_cast<int>(boundary.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(ni, ni);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(ni, nb);
  for (int r = 0; r < ni; ++r) {
    const auto d = lat.digits(interior[r]);
    A(r, r) = 2.0 * dim;
    for (int k = 0; k < dim; ++k)
      for (int step : {-1, 1}) {
        auto nd = d;
        nd[k] += step;
        const int n = lat.index(nd);
        if (placed[n])
          B(r, slot[n]) += 1.0;
        else
          A(r, slot[n]) -= 1.0;
      }
  }
  const Eigen::MatrixXd W = A.partialPivLu().solve(B);
  std::vector<Point> pts;
  for (int b : boundary) pts.push_back(mq.support[b]);
  for (int r = 0; r < ni; ++r) {
    std::vector<double> w(nb);
    double sum = 0.0;
    for (int c = 0; c < nb; ++c) sum += (w[c] = W(r, c));
    // Remove the rounding error so the weights pass the sum-to-one check.
    for (double& x : w) x /= sum;
    mq.support[interior[r]] = combine(*cell.cell_manifold, pts, w);
  }
  return mq;
}

// ---------------------------------------------------------------- evaluation

Point map_forward(const MappingQ& mq, const Coords& xhat) {
  const std::vector<double> phi = lagrange::values(mq.dim, mq.degree, xhat);
  Point x = Point::Zero(mq.spacedim());
  for (std::size_t i = 0; i < phi.size(); ++i) x += phi[i] * mq.support[i];
  return x;
}

SmallMatrix jacobian_polynomial(const MappingQ& mq, const Coords& xhat) {
  const std::vector<Coords> g = lagrange::gradients(mq.dim, mq.degree, xhat);
  SmallMatrix J = SmallMatrix::Zero(mq.spacedim(), mq.dim);
  for (std::size_t i = 0; i < g.size(); ++i) J += mq.support[i] * g[i].transpose();
  return J;
}

std::vector<SmallMatrix> jacobian_gradient(const MappingQ& mq, const Coords& xhat) {
  const std::vector<SmallMatrix> h = lagrange::hessians(mq.dim, mq.degree, xhat);
  std::vector<SmallMatrix> dJ(mq.dim, SmallMatrix::Zero(mq.spacedim(), mq.dim));
  for (std::size_t i = 0; i < h.size(); ++i)
    for (int k = 0; k < mq.dim; ++k) dJ[k] += mq.support[i] * h[i].row(k);
  return dJ;
}

Coords inverse_map(const MappingQ& mq, const Point& x) {
  const double tol = 1e-11 * mq.diameter();
  const bool surface = mq.spacedim() > mq.dim;

  std::vector<Point> corners;
  for (int v = 0; v < (1 << mq.dim); ++v) {
    int idx = 0, stride = 1;
    for (int k = 0; k < mq.dim; ++k) {
      idx += ((v >> k) & 1) * mq.degree * stride;
      stride *= mq.degree + 1;
    }
    corners.push_back(mq.support[idx]);
  }
  Coords xhat = Coords::Constant(mq.dim, 0.5);
  for (int it = 0; it < 20; ++it) {
    const SmallMatrix J = dlinear_jacobian(corners, xhat);
    const Coords step = J.colPivHouseholderQr().solve(x - dlinear_point(corners, xhat));
    if (!step.allFinite() || (xhat + step).cwiseAbs().maxCoeff() > 10.0) break;
    xhat += step;
    if (step.norm() < 1e-12) break;
  }
  if ((xhat.array() < -1.0).any() || (xhat.array() > 2.0).any())
    xhat = Coords::Constant(mq.dim, 0.5);

  for (int it = 0; it <= 30; ++it) {
    const Vector r = x - map_forward(mq, xhat);
    if (r.norm() <= tol) return xhat;
    if (it == 30) break;
    const SmallMatrix J = jacobian_polynomial(mq, xhat);
    const SmallMatrix JtJ = J.transpose() * J;
    const Coords step = JtJ.ldlt().solve(J.transpose() * r);
    if (!step.allFinite())
      fail(ErrorCode::NewtonDivergence, "inverse_map: singular Jacobian");
    xhat += step;
    if ((xhat.array() < -1.0).any() || (xhat.array() > 2.0).any())
      fail(ErrorCode::NewtonDivergence, "inverse_map: iterate left the reference cell");
    if (surface && step.norm() < 1e-13) return xhat;
  }
  fail(ErrorCode::NewtonDivergence, "inverse_map: Newton iteration did not converge");
}

// ---------------------------------------------------------------- primitives

namespace {

Point cell_point(const CellGeometry& cell, const Coords& xhat) {
  return cell.cell_manifold->new_point(cell.vertices, reference::dlinear_weights(xhat));
}

}  // namespace

SmallMatrix jacobian_exact(const CellGeometry& cell, const Coords& xhat) {
  if (!cell.cell_manifold) fail(ErrorCode::InvalidArgument, "jacobian_exact: no cell oracle");
  if (xhat.size() != cell.dim)
    fail(ErrorCode::InvalidArgument, "jacobian_exact: reference point has wrong dimension");
  // Slightly outside is allowed so that finite differences can straddle
  // the boundary.
  if ((xhat.array() < -1e-3).any() || (xhat.array() > 1.0 + 1e-3).any())
    fail(ErrorCode::InvalidArgument, "jacobian_exact: reference point outside the cell");
  const Point x0 = cell_point(cell, xhat);
  SmallMatrix J(x0.size(), cell.dim);
  for (int i = 0; i < cell.dim; ++i) {
    const double dir = xhat[i] <= 0.5 ? 1.0 : -1.0;
    const double L = dir > 0 ? 1.0 - xhat[i] : xhat[i];
    if (!(L >= 1e-6))
      fail(ErrorCode::DegenerateCell, "jacobian_exact: no room for a difference direction");
    Coords xi = xhat;
    xi[i] = dir > 0 ? 1.0 : 0.0;
    const Point x1 = cell_point(cell, xi);
    try {
      J.col(i) = (dir / L) * cell.cell_manifold->tangent_vector(x0, x1);
    } catch (const GeometryError& e) {
      if (e.code() != ErrorCode::DegenerateInput) throw;
      fail(ErrorCode::DegenerateCell, "jacobian_exact: cell is collapsed in direction " +
                                          std::to_string(i));
    }
  }
  return J;
}

std::vector<Vector> tangent_basis(const CellGeometry& entity, const Coords& xhat) {
  const SmallMatrix J = jacobian_exact(entity, xhat);
  std::vector<Vector> basis;
  for (int k = 0; k < J.cols(); ++k) basis.push_back(J.col(k));
  return basis;
}

std::vector<Vector> orthonormalize(std::vector<Vector> basis) {
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double original = basis[i].norm();
    for (std::size_t j = 0; j < i; ++j) basis[i] -= basis[j].dot(basis[i]) * basis[j];
    // Second pass keeps the result orthogonal to machine precision.
    for (std::size_t j = 0; j < i; ++j) basis[i] -= basis[j].dot(basis[i]) * basis[j];
    const double n = basis[i].norm();
    if (!(n > 1e-12 * std::max(original, 1e-300)) || original < 1e-12)
      fail(ErrorCode::DegenerateTangents, "orthonormalize: tangent vectors are linearly dependent");
    basis[i] /= n;
  }
  return basis;
}

Vector normal_vector(const CellGeometry& entity, const Coords& xhat,
                     const std::optional<Point>& inside) {
  const SmallMatrix J = jacobian_exact(entity, xhat);
  if (J.rows() != J.cols() + 1)
    fail(ErrorCode::InvalidArgument, "normal_vector: entity must have codimension one");
  Vector n(J.rows());
  if (J.rows() == 2) {
    n << J(1, 0), -J(0, 0);
  } else {
    const Eigen::Vector3d a = J.col(0).head<3>(), b = J.col(1).head<3>();
    const Eigen::Vector3d c = a.cross(b);
    n << c.x(), c.y(), c.z();
  }
  const double len = n.norm();
  if (!(len >= 1e-12)) fail(ErrorCode::DegenerateTangents, "normal_vector: tangents are degenerate");
  n /= len;
  if (inside && n.dot(cell_point(entity, xhat) - *inside) < 0.0) n = -n;
  return n;
}

// ---------------------------------------------------------------- C1 cubic

Point CubicEdge::eval(double t) const {
  const double s = 1.0 - t;
  return s * s * s * bernstein[0] + 3 * s * s * t * bernstein[1] + 3 * s * t * t * bernstein[2] +
         t * t * t * bernstein[3];
}

Vector CubicEdge::derivative(double t) const {
  const double s = 1.0 - t;
  return 3 * (s * s * (bernstein[1] - bernstein[0]) + 2 * s * t * (bernstein[2] - bernstein[1]) +
              t * t * (bernstein[3] - bernstein[2]));
}

std::array<Point, 4> CubicEdge::support_points() const {
  return {bernstein[0], eval(1.0 / 3.0), eval(2.0 / 3.0), bernstein[3]};
}

CubicEdge c1_cubic_edge(const Point& a, const Point& b, const Manifold& m) {
  const Vector ta = m.tangent_vector(a, b), tb = m.tangent_vector(b, a);
  if (!(ta.norm() >= 1e-12) || !(tb.norm() >= 1e-12))
    fail(ErrorCode::DegenerateTangents, "c1_cubic_edge: vanishing end tangent");
  const double chord = (b - a).norm();
  const Vector da = chord * ta.normalized();
  const Vector db = -chord * tb.normalized();
  return CubicEdge{{a, a + da / 3.0, b - db / 3.0, b}};
}

// ---------------------------------------------------------------- Hessians

namespace {

SmallMatrix real_hessian(const SmallMatrix& J, const std::vector<SmallMatrix>& dJ,
                         const Coords& grad_hat, const SmallMatrix& hess_hat) {
  const int d = static_cast<int>(J.cols());
  if (J.rows() != J.cols())
    fail(ErrorCode::InvalidArgument, "shape_hessian_real: mapping must be square");
  const double det = J.determinant();
  if (!(std::abs(det) > 1e-14 * std::pow(J.norm(), d)))
    fail(ErrorCode::SingularJacobian, "shape_hessian_real: singular Jacobian");
  const SmallMatrix Jinv = J.inverse();
  const Coords grad = Jinv.transpose() * grad_hat;
  SmallMatrix M = hess_hat;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      for (int m = 0; m < d; ++m) M(j, k) -= grad[m] * dJ[k](m, j);
  return Jinv.transpose() * M * Jinv;
}

void check_shape_index(int dim, int degree, int i) {
  if (i < 0 || i >= lagrange::n_shape_functions(dim, degree))
    fail(ErrorCode::InvalidArgument, "shape_hessian_real: shape index out of range");
}

}  // namespace

SmallMatrix shape_hessian_real(const MappingQ& mq, const Coords& xhat, int i) {
  check_shape_index(mq.dim, mq.degree, i);
  return real_hessian(jacobian_polynomial(mq, xhat), jacobian_gradient(mq, xhat),
                      lagrange::gradients(mq.dim, mq.degree, xhat)[i],
                      lagrange::hessians(mq.dim, mq.degree, xhat)[i]);
}

SmallMatrix shape_hessian_real(const CellGeometry& cell, int degree, const Coords& xhat, int i) {
  check_shape_index(cell.dim, degree, i);
  constexpr double h = 1e-5;
  std::vector<SmallMatrix> dJ;
  for (int k = 0; k < cell.dim; ++k) {
    Coords xp = xhat, xm = xhat;
    xp[k] += h;
    xm[k] -= h;
    dJ.push_back((jacobian_exact(cell, xp) - jacobian_exact(cell, xm)) / (2 * h));
  }
  return real_hessian(jacobian_exact(cell, xhat), dJ, lagrange::gradients(cell.dim, degree, xhat)[i],
                      lagrange::hessians(cell.dim, degree, xhat)[i]);
}

// ---------------------------------------------------------------- chart

PolynomialChartManifold::PolynomialChartManifold(MappingQ mq)
    : ChartManifold(mq.spacedim(), mq.dim, Coords::Zero(mq.dim)), mq_(std::move(mq)) {}

}  // namespace geoprim
