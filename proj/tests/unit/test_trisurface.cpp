// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#include <geoprim/trisurface.hpp>

#include "../support/surfaces.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <string>
#include <utility>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <random>

using namespace geoprim;
using geoprim::testsupport::Soup;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const GeometryError& e) {
    return e.code();
  }
  return ErrorCode{0};
}

Soup one_triangle() {
  Soup s;
  s.vertices = {make_point({0, 0, 0}), make_point({1, 0, 0}), make_point({0, 1, 0})};
  s.triangles = {{0, 1, 2}};
  return s;
}

TriSurface surface_of(const Soup& s) { return TriSurface(s.vertices, s.triangles); }

}  // namespace

TEST(Stl, AsciiSingleTriangle) {
  const TriSurface s = TriSurface::parse_stl(testsupport::ascii_stl(one_triangle()));
  EXPECT_EQ(s.n_triangles(), 1u);
  EXPECT_EQ(s.n_vertices(), 3u);
}

TEST(Stl, BinaryTruncated) {
  std::string bytes = testsupport::binary_stl(one_triangle());
  const std::uint32_t two = 2;
  std::memcpy(bytes.data() + 80, &two, 4);
  EXPECT_EQ(code_of([&] { TriSurface::parse_stl(bytes); }), ErrorCode::ParseError);
}

TEST(Stl, MalformedAscii) {
  EXPECT_EQ(code_of([] { TriSurface::parse_stl("solid x\n facet normal 0 0 0\n outer loop\n vertex 1 2\n"); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { TriSurface::parse_stl("solid x\nendsolid x\n"); }), ErrorCode::EmptySurface);
}

TEST(Stl, IcosphereFileRoundTrip) {
  const Soup ico = testsupport::icosphere(3);
  ASSERT_EQ(ico.triangles.size(), 1280u);
  const auto dir = std::filesystem::temp_directory_path();
  const std::array<std::pair<std::string, std::string>, 2> files{
      std::pair{"ico_ascii.stl", testsupport::ascii_stl(ico)},
      std::pair{"ico_binary.stl", testsupport::binary_stl(ico)}};
  for (const auto& [name, bytes] : files) {
    const std::string path = (dir / name).string();
    testsupport::write_file(path, bytes);
    const TriSurface s = TriSurface::load_stl(path);
    EXPECT_EQ(s.n_triangles(), 1280u);
    EXPECT_EQ(s.n_vertices(), ico.vertices.size());
    for (std::size_t i = 0; i < s.n_vertices(); ++i) EXPECT_NEAR(s.vertex(i).norm(), 1.0, 1e-6);
  }
  EXPECT_EQ(code_of([&] { TriSurface::load_stl((dir / "does_not_exist.stl").string()); }),
            ErrorCode::IoError);
}

TEST(TriSurface, DropsDegenerateTriangles) {
  Soup s = one_triangle();
  s.vertices.push_back(make_point({2, 0, 0}));
  s.triangles.push_back({0, 1, 3});
  const TriSurface surf = surface_of(s);
  EXPECT_EQ(surf.n_triangles(), 1u);
  EXPECT_EQ(surf.n_dropped_degenerate(), 1u);
}

TEST(TriSurface, ClosestPointExamples) {
  const TriSurface s = surface_of(one_triangle());
  const auto a = s.closest_point(make_point({0.25, 0.25, 1}));
  EXPECT_NEAR((a.point - make_point({0.25, 0.25, 0})).norm(), 0.0, 1e-15);
  EXPECT_NEAR(a.distance, 1.0, 1e-15);

  const auto b = s.closest_point(make_point({2, 2, 0}));
  // Independent check: sweep the triangle's barycentric parameters.
  double best = 1e300;
  Point best_p;
  const int n = 400;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; i + j <= n; ++j) {
      const Point p = make_point({double(i) / n, double(j) / n, 0});
      const double d = (p - make_point({2, 2, 0})).norm();
      if (d < best) {
        best = d;
        best_p = p;
      }
    }
  EXPECT_NEAR((b.point - best_p).norm(), 0.0, 1e-12);
  EXPECT_NEAR((b.point - make_point({0.5, 0.5, 0})).norm(), 0.0, 1e-15);

  const Point on = make_point({0.1, 0.2, 0});
  EXPECT_NEAR((s.closest_point(on).point - on).norm(), 0.0, 1e-15);
}

TEST(TriSurface, RayExamples) {
  const TriSurface s = surface_of(one_triangle());
  const auto hit = s.ray_intersect(make_point({0.25, 0.25, 1}), make_point({0, 0, -1}));
  ASSERT_TRUE(hit);
  EXPECT_NEAR((hit->point - make_point({0.25, 0.25, 0})).norm(), 0.0, 1e-15);
  // The line is considered in both directions.
  const auto back = s.ray_intersect(make_point({0.25, 0.25, 1}), make_point({0, 0, 1}));
  ASSERT_TRUE(back);
  EXPECT_NEAR(back->t, -1.0, 1e-15);
  EXPECT_FALSE(s.ray_intersect(make_point({0.25, 0.25, 1}), make_point({1, 0, 0})));
}

TEST(TriSurface, RayThroughIcosphere) {
  const TriSurface s = surface_of(testsupport::icosphere(3));
  const auto hit = s.ray_intersect(make_point({0, 0, 0}), make_point({1, 0, 0}));
  ASSERT_TRUE(hit);
  EXPECT_NEAR(hit->point.norm(), 1.0, 2e-3);
}

TEST(TriSurface, TreeHoldsEveryTriangleOnce) {
  const TriSurface s = surface_of(testsupport::icosphere(3));
  std::vector<TriSurface::Index> leaves = s.tree_leaf_triangles();
  std::sort(leaves.begin(), leaves.end());
  ASSERT_EQ(leaves.size(), s.n_triangles());
  for (std::size_t i = 0; i < leaves.size(); ++i) EXPECT_EQ(leaves[i], static_cast<int>(i));
}

TEST(TriSurface, TreeMatchesBruteForce) {
  const TriSurface s = surface_of(testsupport::height_field(20, 15));
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(-0.5, 1.5), dir(-1, 1);
  for (int q = 0; q < 300; ++q) {
    const Point x = make_point({u(rng), u(rng), 0.5 * u(rng)});
    const auto a = s.closest_point(x), b = s.closest_point_brute_force(x);
    EXPECT_EQ(a.triangle, b.triangle);
    EXPECT_NEAR(a.distance, b.distance, 1e-12);
    Vector d = make_point({dir(rng), dir(rng), dir(rng)});
    d.normalize();
    const auto ra = s.ray_intersect(x, d), rb = s.ray_intersect_brute_force(x, d);
    ASSERT_EQ(ra.has_value(), rb.has_value());
    if (ra) {
      EXPECT_EQ(ra->triangle, rb->triangle);
      EXPECT_NEAR(ra->t, rb->t, 1e-12);
    }
  }
}

TEST(TriSurface, ClosestPointTieUsesSmallestIndex) {
  // Two triangles sharing an edge; a point above the edge midpoint is
  // equidistant from both.
  Soup s;
  s.vertices = {make_point({0, 0, 0}), make_point({1, 0, 0}), make_point({0, 1, 0}),
                make_point({1, 1, 0})};
  s.triangles = {{1, 3, 2}, {0, 1, 2}};
  const TriSurface surf = surface_of(s);
  EXPECT_EQ(surf.closest_point(make_point({0.5, 0.5, 1})).triangle, 0);
  EXPECT_EQ(surf.closest_point_brute_force(make_point({0.5, 0.5, 1})).triangle, 0);
}
