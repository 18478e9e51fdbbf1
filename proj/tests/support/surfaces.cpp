// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#include "surfaces.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

namespace geoprim::testsupport {

Soup icosphere(int levels) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  Soup s;
  for (const auto& v : {make_point({-1, t, 0}), make_point({1, t, 0}), make_point({-1, -t, 0}),
                        make_point({1, -t, 0}), make_point({0, -1, t}), make_point({0, 1, t}),
                        make_point({0, -1, -t}), make_point({0, 1, -t}), make_point({t, 0, -1}),
                        make_point({t, 0, 1}), make_point({-t, 0, -1}), make_point({-t, 0, 1})})
    s.vertices.push_back(v.normalized());
  s.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                 {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                 {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                 {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int level = 0; level < levels; ++level) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      s.vertices.push_back((s.vertices[a] + s.vertices[b]).normalized());
      const int id = static_cast<int>(s.vertices.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<TriSurface::Triangle> next;
    for (const auto& tri : s.triangles) {
      const int a = midpoint(tri[0], tri[1]), b = midpoint(tri[1], tri[2]), c = midpoint(tri[2], tri[0]);
      next.push_back({tri[0], a, c});
      next.push_back({tri[1], b, a});
      next.push_back({tri[2], c, b});
      next.push_back({a, b, c});
    }
    s.triangles = std::move(next);
  }
  return s;
}

Soup height_field(int nx, int ny) {
  Soup s;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const double x = double(i) / nx, y = double(j) / ny;
      s.vertices.push_back(make_point({x, y, 0.1 * std::sin(3 * x) * std::cos(2 * y)}));
    }
  auto id = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      s.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      s.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return s;
}

std::string ascii_stl(const Soup& s) {
  std::ostringstream out;
  out.precision(17);
  out << "solid test\n";
  for (const auto& t : s.triangles) {
    out << "  facet normal 0 0 0\n    outer loop\n";
    for (int k = 0; k < 3; ++k) {
      const Point& p = s.vertices[t[k]];
      out << "      vertex " << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
    }
    out << "    endloop\n  endfacet\n";
  }
  out << "endsolid test\n";
  return out.str();
}

std::string binary_stl(const Soup& s) {
  std::string bytes(80, ' ');
  const std::uint32_t n = static_cast<std::uint32_t>(s.triangles.size());
  bytes.append(reinterpret_cast<const char*>(&n), 4);
  for (const auto& t : s.triangles) {
    float rec[12] = {};
    for (int k = 0; k < 3; ++k)
      for (int c = 0; c < 3; ++c) rec[3 + 3 * k + c] = static_cast<float>(s.vertices[t[k]][c]);
    bytes.append(reinterpret_cast<const char*>(rec), sizeof rec);
    bytes.append(2, '\0');
  }
  return bytes;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out << bytes;
}

double min_plane_distance_to_origin(const Soup& s) {
  double best = 1e300;
  for (const auto& t : s.triangles) {
    const Point& a = s.vertices[t[0]];
    const Eigen::Vector3d e1(s.vertices[t[1]][0] - a[0], s.vertices[t[1]][1] - a[1],
                             s.vertices[t[1]][2] - a[2]);
    const Eigen::Vector3d e2(s.vertices[t[2]][0] - a[0], s.vertices[t[2]][1] - a[1],
                             s.vertices[t[2]][2] - a[2]);
    const Eigen::Vector3d n = e1.cross(e2).normalized();
    best = std::min(best, std::abs(n.dot(Eigen::Vector3d(a[0], a[1], a[2]))));
  }
  return best;
}

}  // namespace geoprim::testsupport
