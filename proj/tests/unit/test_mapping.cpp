// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#include <geoprim/chart.hpp>
#include <geoprim/mapping.hpp>
#include <geoprim/mesh.hpp>
#include <geoprim/spherical.hpp>

#include <gtest/gtest.h>

#include <Eigen/SVD>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

using namespace geoprim;

namespace {

constexpr double pi = std::numbers::pi;

void expect_near(const Coords& a, const Coords& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], tol) << "component " << i;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const GeometryError& e) {
    return e.code();
  }
  return ErrorCode{0};
}

const FlatManifold& flat2() {
  static const FlatManifold m(2);
  return m;
}

CellGeometry flat_quad(std::vector<Point> v) {
  CellGeometry g;
  g.dim = 2;
  g.vertices = std::move(v);
  g.edge_manifolds.assign(4, &flat2());
  g.cell_manifold = &flat2();
  return g;
}

CellGeometry unit_square() {
  return flat_quad({make_point({0, 0}), make_point({1, 0}), make_point({0, 1}), make_point({1, 1})});
}

// Quarter annulus r in [0.5, 1] with polar arcs, flat interior.
struct QuarterAnnulus {
  Mesh mesh = meshes::quarter_annulus(0.5, 1.0, 1, 2);
  ManifoldRegistry registry{2};
  QuarterAnnulus() { registry.set(2, std::make_shared<PolarChart>(make_point({0, 0}))); }
  CellGeometry cell() const { return mesh.cell_geometry(0, registry); }
};

double min_determinant(const MappingQ& mq) {
  double m = 1e300;
  for (int i = 0; i <= 40; ++i)
    for (int j = 0; j <= 40; ++j) m = std::min(m, jacobian_polynomial(mq, make_point({i / 40.0, j / 40.0})).determinant());
  return m;
}

// Random degree-p perturbation of the unit square. Cubic draws can fold, so
// draws without a clearly positive Jacobian are rejected.
MappingQ random_mapping(int p, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-0.08, 0.08);
  for (;;) {
    MappingQ mq{2, p, {}};
    for (int i = 0; i < lagrange::n_shape_functions(2, p); ++i) {
      Point x = lagrange::node(2, p, i);
      x[0] += u(rng);
      x[1] += u(rng);
      mq.support.push_back(x);
    }
    if (min_determinant(mq) >= 0.5) return mq;
  }
}

// A cell whose cell oracle is the polynomial mapping itself.
struct PolynomialCell {
  std::shared_ptr<PolynomialChartManifold> chart;
  CellGeometry geometry;
  explicit PolynomialCell(const MappingQ& mq) : chart(std::make_shared<PolynomialChartManifold>(mq)) {
    geometry.dim = mq.dim;
    for (int v = 0; v < (1 << mq.dim); ++v)
      geometry.vertices.push_back(map_forward(mq, reference::vertex_position(mq.dim, v)));
    geometry.edge_manifolds.assign(reference::n_edges(mq.dim), chart.get());
    geometry.cell_manifold = chart.get();
  }
};

std::pair<double, double> singular_range(const MappingQ& mq) {
  double lo = 1e300, hi = 0.0;
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; j <= 10; ++j) {
      const SmallMatrix J = jacobian_polynomial(mq, make_point({i / 10.0, j / 10.0}));
      const Eigen::Matrix2d A = J;
      const auto s = Eigen::JacobiSVD<Eigen::Matrix2d>(A).singularValues();
      lo = std::min(lo, s.minCoeff());
      hi = std::max(hi, s.maxCoeff());
    }
  return {lo, hi};
}

}  // namespace

TEST(Lagrange, PartitionOfUnityAndNodes) {
  for (int p = 1; p <= 6; ++p) {
    const auto b = lagrange::basis_1d(p, 0.37);
    double s = 0.0, ds = 0.0, dds = 0.0;
    for (int k = 0; k <= p; ++k) {
      s += b.value[k];
      ds += b.first[k];
      dds += b.second[k];
    }
    EXPECT_NEAR(s, 1.0, 1e-13);
    EXPECT_NEAR(ds, 0.0, 1e-11);
    EXPECT_NEAR(dds, 0.0, 1e-9);
    for (int k = 0; k <= p; ++k) {
      const auto at = lagrange::basis_1d(p, double(k) / p);
      for (int m = 0; m <= p; ++m) EXPECT_NEAR(at.value[m], k == m ? 1.0 : 0.0, 1e-14);
    }
  }
}

TEST(Lagrange, DerivativesMatchDifferences) {
  const int p = 4;
  const Coords x = make_point({0.3, 0.8});
  const double h = 1e-6;
  const auto g = lagrange::gradients(2, p, x);
  const auto H = lagrange::hessians(2, p, x);
  for (int i = 0; i < lagrange::n_shape_functions(2, p); i += 3)
    for (int k = 0; k < 2; ++k) {
      Coords xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      const double fd = (lagrange::values(2, p, xp)[i] - lagrange::values(2, p, xm)[i]) / (2 * h);
      EXPECT_NEAR(g[i][k], fd, 1e-7);
      const Coords gd = (lagrange::gradients(2, p, xp)[i] - lagrange::gradients(2, p, xm)[i]) / (2 * h);
      EXPECT_NEAR(H[i](0, k), gd[0], 1e-6);
      EXPECT_NEAR(H[i](1, k), gd[1], 1e-6);
    }
}

TEST(MappingQ, LinearUsesVertices) {
  QuarterAnnulus q;
  const MappingQ mq = place_support_points(q.cell(), 1);
  ASSERT_EQ(mq.support.size(), 4u);
  for (int v = 0; v < 4; ++v) EXPECT_EQ(mq.support[v], q.mesh.vertex(v));
  expect_near(map_forward(place_support_points(unit_square(), 1), make_point({0.3, 0.7})),
              make_point({0.3, 0.7}), 1e-15);
}

TEST(MappingQ, FlatCubicIsEquidistant) {
  const MappingQ mq = place_support_points(unit_square(), 3);
  for (int i = 0; i < 16; ++i) expect_near(mq.support[i], lagrange::node(2, 3, i), 1e-15);
  const MappingQ hex = place_support_points(
      meshes::hypercube(3, 1).cell_geometry(0, ManifoldRegistry(3)), 3);
  for (int i = 0; i < 64; ++i) expect_near(hex.support[i], lagrange::node(3, 3, i), 1e-15);
}

TEST(MappingQ, SphereSixthSupportPointsOnSphere) {
  ManifoldRegistry reg(3);
  reg.set(0, std::make_shared<SphereProjectionManifold>(make_point({0, 0, 0})));
  const Mesh m = meshes::cube_sphere_surface(1.0, 0);
  const MappingQ mq = place_support_points(m.cell_geometry(0, reg), 2);
  for (const Point& x : mq.support) EXPECT_NEAR(x.norm(), 1.0, 1e-10);
  for (int i = 0; i < 9; ++i) expect_near(map_forward(mq, lagrange::node(2, 2, i)), mq.support[i], 1e-15);
  // The cell center is itself a node; halfway between nodes the quadratic
  // leaves the sphere a little.
  EXPECT_NEAR(map_forward(mq, make_point({0.5, 0.5})).norm(), 1.0, 1e-14);
  const double gap = 1.0 - map_forward(mq, make_point({0.5, 0.25})).norm();
  EXPECT_GT(gap, 0.0);
  EXPECT_LT(gap, 1e-2);
}

TEST(MappingQ, ShellSupportPointsOnSpheres) {
  ManifoldRegistry reg(3);
  reg.set(1, std::make_shared<SphericalAverageManifold>(make_point({0, 0, 0})));
  reg.set(2, std::make_shared<SphericalAverageManifold>(make_point({0, 0, 0})));
  const Mesh m = meshes::cube_shell(0.5, 1.0, 1, 2);
  const MappingQ mq = place_support_points(m.cell_geometry(3, reg), 3);
  for (int i = 0; i < 64; ++i) {
    const double z = lagrange::node(3, 3, i)[2];
    EXPECT_NEAR(mq.support[i].norm(), 0.5 + 0.5 * z, 1e-12);
  }
}

TEST(MappingQ, TransfiniteInteriorOfQuarterAnnulus) {
  QuarterAnnulus q;
  const MappingQ mq = place_support_points(q.cell(), 4);
  // Discrete Coons patch of the polar boundary: radial lines stay at the
  // node's radius and angle.
  for (int i = 0; i < 25; ++i) {
    const Coords n = lagrange::node(2, 4, i);
    EXPECT_NEAR(mq.support[i].norm(), 0.5 + 0.5 * n[0], 1e-12);
    EXPECT_NEAR(std::atan2(mq.support[i][1], mq.support[i][0]), n[1] * pi / 2, 1e-12);
  }
}

TEST(MappingQ, LaplaceInteriorOnFlatCell) {
  // On a flat cell with straight edges the discrete harmonic interior is
  // the equidistant lattice again.
  const MappingQ mq = place_support_points(unit_square(), 5, InteriorRule::Laplace);
  for (int i = 0; i < 36; ++i) expect_near(mq.support[i], lagrange::node(2, 5, i), 1e-13);
}

TEST(MappingQ, InverseMapRoundTrip) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int p = 1; p <= 3; ++p) {
    const MappingQ mq = random_mapping(p, rng);
    for (int k = 0; k < 10; ++k) {
      const Coords xh = make_point({u(rng), u(rng)});
      expect_near(inverse_map(mq, map_forward(mq, xh)), xh, 1e-10);
    }
  }
  expect_near(inverse_map(place_support_points(unit_square(), 2), make_point({0.2, 0.9})),
              make_point({0.2, 0.9}), 1e-12);
}

TEST(MappingQ, InverseMapFarPointDiverges) {
  QuarterAnnulus q;
  const MappingQ mq = place_support_points(q.cell(), 2);
  EXPECT_EQ(code_of([&] { inverse_map(mq, make_point({40.0, -70.0})); }), ErrorCode::NewtonDivergence);
}

TEST(Jacobian, IdentityAndAffine) {
  const CellGeometry sq = unit_square();
  for (double x : {0.0, 0.25, 0.5, 0.9})
    EXPECT_TRUE(jacobian_exact(sq, make_point({x, 1.0 - x})).isApprox(SmallMatrix::Identity(2, 2)));
  const Point a = make_point({2.0, 0.5}), b = make_point({-0.3, 1.2}), o = make_point({1, 1});
  const CellGeometry par = flat_quad({o, o + a, o + b, o + a + b});
  const SmallMatrix J = jacobian_exact(par, make_point({0.7, 0.2}));
  expect_near(J.col(0), a, 1e-14);
  expect_near(J.col(1), b, 1e-14);
  const SmallMatrix Jp = jacobian_polynomial(place_support_points(par, 1), make_point({0.1, 0.6}));
  EXPECT_LT((Jp - J).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Jacobian, ExactMatchesPolynomial) {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int p = 1; p <= 3; ++p)
    for (int trial = 0; trial < 5; ++trial) {
      const MappingQ mq = random_mapping(p, rng);
      const PolynomialCell cell(mq);
      for (int k = 0; k < 5; ++k) {
        const Coords xh = make_point({u(rng), u(rng)});
        const SmallMatrix d = jacobian_exact(cell.geometry, xh) - jacobian_polynomial(mq, xh);
        EXPECT_LT(d.cwiseAbs().maxCoeff(), 1e-10) << "p = " << p;
      }
    }
}

TEST(Jacobian, PolarCellIsOrthogonal) {
  ManifoldRegistry reg(2);
  reg.set(2, std::make_shared<PolarChart>(make_point({0, 0})));
  Mesh m = meshes::quarter_annulus(0.5, 1.0, 2, 2);
  const CellGeometry g = m.cell_geometry(0, reg);
  const Coords xh = make_point({0.3, 0.6});
  const auto t = tangent_basis(g, xh);
  EXPECT_NEAR(t[0].dot(t[1]), 0.0, 1e-12);
  // Analytic polar map r = 0.5 + 0.5 x, theta = pi/2 y.
  EXPECT_NEAR(t[0].norm(), 0.5, 1e-12);
  EXPECT_NEAR(t[1].norm(), 0.65 * pi / 2, 1e-12);
}

TEST(Jacobian, DegenerateCell) {
  const CellGeometry collapsed =
      flat_quad({make_point({0, 0}), make_point({1, 0}), make_point({0, 0}), make_point({1, 0})});
  EXPECT_EQ(code_of([&] { jacobian_exact(collapsed, make_point({0.5, 0.5})); }),
            ErrorCode::DegenerateCell);
  EXPECT_EQ(code_of([] { jacobian_exact(unit_square(), make_point({2.5, 0.5})); }),
            ErrorCode::InvalidArgument);
}

TEST(TangentBasis, Orthonormalization) {
  const auto raw = std::vector<Vector>{make_point({1, 1, 0}), make_point({0.3, 2, 1})};
  const auto q = orthonormalize(raw);
  EXPECT_NEAR(q[0].norm(), 1.0, 1e-15);
  EXPECT_NEAR(q[1].norm(), 1.0, 1e-15);
  EXPECT_LE(std::abs(q[0].dot(q[1])), 1e-12);
  // Same span: equal orthogonal projectors.
  Eigen::Matrix<double, 3, 2> A, Q;
  A << raw[0], raw[1];
  Q << q[0], q[1];
  const Eigen::Matrix3d PA = A * (A.transpose() * A).inverse() * A.transpose();
  EXPECT_LT((PA - Q * Q.transpose()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ(code_of([] { orthonormalize({make_point({1, 2}), make_point({2, 4})}); }),
            ErrorCode::DegenerateTangents);
}

TEST(Normals, UnitSquareBottom) {
  const Mesh m = meshes::hypercube(2, 1);
  ManifoldRegistry reg(2);
  const CellGeometry face = m.face_geometry(0, 0, reg);
  expect_near(normal_vector(face, make_point({0.5}), make_point({0.5, 0.5})), make_point({0, -1}),
              1e-15);
}

TEST(Normals, AnnulusOuterBoundary) {
  ManifoldRegistry reg(2);
  reg.set(1, std::make_shared<PolarChart>(make_point({0, 0})));
  const Mesh m = meshes::annulus(8, 0.5, 1.0, 0, 1);
  // Outer arc of cell 0 is local edge 3, from (1,0) to angle pi/4.
  const CellGeometry face = m.face_geometry(0, 3, reg);
  const Vector n = normal_vector(face, make_point({0.0}), make_point({0.75, 0.1}));
  expect_near(n, make_point({1, 0}), 1e-12);
  const Vector mid = normal_vector(face, make_point({0.5}), make_point({0.75, 0.1}));
  expect_near(mid, make_point({std::cos(pi / 8), std::sin(pi / 8)}), 1e-12);
}

TEST(Normals, SphereSurfaceAndTangents) {
  ManifoldRegistry reg(3);
  reg.set(0, std::make_shared<SphereProjectionManifold>(make_point({0, 0, 0})));
  const Mesh m = meshes::cube_sphere_surface(1.0, 0);
  for (CellIndex c = 0; c < 6; ++c) {
    const CellGeometry g = m.cell_geometry(c, reg);
    const Coords xh = make_point({0.3, 0.8});
    const Point p = reg.get(0).new_point(g.vertices, reference::dlinear_weights(xh));
    const Vector n = normal_vector(g, xh, make_point({0, 0, 0}));
    EXPECT_NEAR(n.norm(), 1.0, 1e-14);
    expect_near(n, p, 1e-10);
    // Without a reference point the cube orientation is already outward.
    expect_near(normal_vector(g, xh), p, 1e-10);
    const auto t = tangent_basis(g, xh);
    for (const Vector& v : t) EXPECT_LE(std::abs(v.dot(n)), 1e-10 * v.norm());
    const auto q = orthonormalize(t);
    const Eigen::Vector3d a = q[0], b = q[1];
    expect_near(Vector(a.cross(b)), n, 1e-10);
    // Reversed pivot order gives the same normal up to sign.
    const auto r = orthonormalize({t[1], t[0]});
    const Eigen::Vector3d ra = r[0], rb = r[1];
    expect_near(Vector(-ra.cross(rb)), n, 1e-10);
  }
}

TEST(CubicEdge, StraightEdge) {
  const CubicEdge c = c1_cubic_edge(make_point({0, 0}), make_point({3, 3}), flat2());
  const auto s = c.support_points();
  for (int k = 0; k < 4; ++k) expect_near(s[k], make_point({double(k), double(k)}), 1e-14);
}

TEST(CubicEdge, QuarterCircle) {
  PolarChart polar(make_point({0, 0}));
  const Point a = make_point({1, 0}), b = make_point({0, 1});
  const CubicEdge c = c1_cubic_edge(a, b, polar);
  EXPECT_EQ(c.eval(0.0), a);
  EXPECT_EQ(c.eval(1.0), b);
  const Vector ta = c.derivative(0.0).normalized(), tb = c.derivative(1.0).normalized();
  EXPECT_NEAR(std::abs(ta[0]), 0.0, 1e-10);
  EXPECT_NEAR(ta[1], 1.0, 1e-10);
  EXPECT_NEAR(tb[0], -1.0, 1e-10);
  // Interior points are close to, but not on, the circle.
  const auto s = c.support_points();
  EXPECT_GT(std::abs(s[1].norm() - 1.0), 1e-6);
  EXPECT_LT(std::abs(s[1].norm() - 1.0), 5e-2);
}

TEST(CubicEdge, C1AcrossVertices) {
  PolarChart polar(make_point({0, 0}));
  const int n = 7;
  std::vector<Point> v;
  for (int k = 0; k < n; ++k) v.push_back(make_point({std::cos(2 * pi * k / n), std::sin(2 * pi * k / n)}));
  for (int k = 0; k < n; ++k) {
    const CubicEdge left = c1_cubic_edge(v[k], v[(k + 1) % n], polar);
    const CubicEdge right = c1_cubic_edge(v[(k + 1) % n], v[(k + 2) % n], polar);
    const Vector a = left.derivative(1.0).normalized(), b = right.derivative(0.0).normalized();
    const double angle = std::atan2(std::abs(a[0] * b[1] - a[1] * b[0]), a.dot(b));
    EXPECT_LE(angle, 1e-8);
  }
}

TEST(Hessian, AffineCell) {
  const Point a = make_point({2.0, 0.5}), b = make_point({-0.3, 1.2}), o = make_point({1, 1});
  const MappingQ mq = place_support_points(flat_quad({o, o + a, o + b, o + a + b}), 1);
  Eigen::Matrix2d J;
  J << a, b;
  const Eigen::Matrix2d Jinv = J.inverse();
  const Coords xh = make_point({0.4, 0.3});
  for (int i = 0; i < 4; ++i) {
    const SmallMatrix expected = Jinv.transpose() * lagrange::hessians(2, 1, xh)[i] * Jinv;
    EXPECT_LT((shape_hessian_real(mq, xh, i) - expected).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(Hessian, IdentityBiquadratic) {
  const MappingQ mq = place_support_points(unit_square(), 2);
  const Coords xh = make_point({0.5, 0.5});
  for (int i = 0; i < 9; ++i) {
    EXPECT_LT((shape_hessian_real(mq, xh, i) - lagrange::hessians(2, 2, xh)[i]).cwiseAbs().maxCoeff(),
              1e-12);
    EXPECT_LT((shape_hessian_real(unit_square(), 2, xh, i) - lagrange::hessians(2, 2, xh)[i])
                  .cwiseAbs()
                  .maxCoeff(),
              1e-6);
  }
}

TEST(Hessian, FiniteDifferenceMatchesAnalytic) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  for (int trial = 0; trial < 5; ++trial) {
    const MappingQ mq = random_mapping(2, rng);
    const PolynomialCell cell(mq);
    const Coords xh = make_point({u(rng), u(rng)});
    for (int i = 0; i < 9; ++i) {
      const SmallMatrix exact = shape_hessian_real(mq, xh, i);
      const SmallMatrix fd = shape_hessian_real(cell.geometry, 2, xh, i);
      EXPECT_LE((fd - exact).norm(), 1e-4 * exact.norm());
      EXPECT_LE(std::abs(fd(0, 1) - fd(1, 0)), 1e-8 * std::max(1.0, fd.norm()));
    }
  }
}

TEST(Hessian, SingularJacobian) {
  const CellGeometry flat =
      flat_quad({make_point({0, 0}), make_point({1, 0}), make_point({2, 0}), make_point({3, 0})});
  EXPECT_EQ(code_of([&] { shape_hessian_real(place_support_points(flat, 1), make_point({0.5, 0.5}), 0); }),
            ErrorCode::SingularJacobian);
}

TEST(SingularValues, QuarterAnnulusDegreeTen) {
  QuarterAnnulus q;
  const auto [lo, hi] = singular_range(place_support_points(q.cell(), 10));
  // Analytic polar map: radial stretch 0.5, angular stretch r pi / 2.
  EXPECT_GE(lo, 0.49);
  EXPECT_NEAR(lo, 0.5, 1e-6);
  EXPECT_LE(hi / lo, 3.2);
  const auto [llo, lhi] = singular_range(place_support_points(q.cell(), 10, InteriorRule::Laplace));
  EXPECT_GE(lhi / llo, 10.0);
}
