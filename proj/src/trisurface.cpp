// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#include <geoprim/trisurface.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace geoprim {

namespace {

constexpr int kLeafSize = 4;
constexpr double kBarycentricSlack = 1e-12;

Eigen::Vector3d v3(const Point& p) {
  if (p.size() != 3) fail(ErrorCode::InvalidArgument, "TriSurface: points must be 3D");
  return {p[0], p[1], p[2]};
}

Point pt(const Eigen::Vector3d& v) { return make_point({v.x(), v.y(), v.z()}); }

// Closest point on triangle abc to p (Ericson, Real-Time Collision
// Detection, 5.1.5).
Eigen::Vector3d closest_on_abc(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                               const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  const Eigen::Vector3d ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return a;
  const Eigen::Vector3d bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + (d1 / (d1 - d3)) * ab;
  const Eigen::Vector3d cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + (d2 / (d2 - d6)) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0)
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

double box_distance2(const Eigen::Vector3d& p, const Eigen::Vector3d& lo, const Eigen::Vector3d& hi) {
  double d2 = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double e = std::max({lo[k] - p[k], 0.0, p[k] - hi[k]});
    d2 += e * e;
  }
  return d2;
}

// Smallest |t| over the part of the line o + t d inside the box, or nullopt
// if the line misses it.
std::optional<double> box_line_distance(const Eigen::Vector3d& o, const Eigen::Vector3d& d,
                                        const Eigen::Vector3d& lo, const Eigen::Vector3d& hi) {
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    if (d[k] == 0.0) {
      if (o[k] < lo[k] || o[k] > hi[k]) return std::nullopt;
      continue;
    }
    double a = (lo[k] - o[k]) / d[k], b = (hi[k] - o[k]) / d[k];
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
  }
  if (t0 > t1) return std::nullopt;
  if (t0 <= 0.0 && t1 >= 0.0) return 0.0;
  return std::min(std::abs(t0), std::abs(t1));
}

TriSurface from_soup(const std::vector<std::array<Eigen::Vector3d, 3>>& facets) {
  std::map<std::array<double, 3>, TriSurface::Index> ids;
  std::vector<Point> vertices;
  std::vector<TriSurface::Triangle> triangles;
  triangles.reserve(facets.size());
  for (const auto& f : facets) {
    TriSurface::Triangle t{};
    for (int k = 0; k < 3; ++k) {
      const std::array<double, 3> key{f[k].x(), f[k].y(), f[k].z()};
      auto [it, inserted] = ids.try_emplace(key, static_cast<TriSurface::Index>(vertices.size()));
      if (inserted) vertices.push_back(pt(f[k]));
      t[k] = it->second;
    }
    triangles.push_back(t);
  }
  return TriSurface(std::move(vertices), std::move(triangles));
}

double parse_number(std::istream& in) {
  std::string tok;
  if (!(in >> tok)) fail(ErrorCode::ParseError, "STL: unexpected end of file");
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size() || !std::isfinite(v))
    fail(ErrorCode::ParseError, "STL: bad number '" + tok + "'");
  return v;
}

void expect_token(std::istream& in, const char* word) {
  std::string tok;
  if (!(in >> tok) || tok != word)
    fail(ErrorCode::ParseError, std::string("STL: expected '") + word + "', found '" + tok + "'");
}

TriSurface parse_ascii(std::string_view bytes) {
  std::istringstream in{std::string(bytes)};
  std::vector<std::array<Eigen::Vector3d, 3>> facets;
  std::string tok;
  bool in_solid = false;
  while (in >> tok) {
    if (tok == "solid") {
      std::string name;
      std::getline(in, name);
      in_solid = true;
    } else if (tok == "endsolid") {
      std::string name;
      std::getline(in, name);
      in_solid = false;
    } else if (tok == "facet" && in_solid) {
      expect_token(in, "normal");
      for (int k = 0; k < 3; ++k) parse_number(in);
      expect_token(in, "outer");
      expect_token(in, "loop");
      std::array<Eigen::Vector3d, 3> f;
      for (auto& v : f) {
        expect_token(in, "vertex");
        for (int k = 0; k < 3; ++k) v[k] = parse_number(in);
      }
      expect_token(in, "endloop");
      expect_token(in, "endfacet");
      facets.push_back(f);
    } else {
      fail(ErrorCode::ParseError, "STL: unexpected token '" + tok + "'");
    }
  }
  if (in_solid) fail(ErrorCode::ParseError, "STL: missing 'endsolid'");
  return from_soup(facets);
}

TriSurface parse_binary(std::string_view bytes) {
  if (bytes.size() < 84) fail(ErrorCode::ParseError, "STL: binary header truncated");
  std::uint32_t count = 0;
  std::memcpy(&count, bytes.data() + 80, 4);
  if (bytes.size() != 84 + 50 * static_cast<std::size_t>(count))
    fail(ErrorCode::ParseError, "STL: binary triangle count " + std::to_string(count) +
                                    " does not match file size " + std::to_string(bytes.size()));
  std::vector<std::array<Eigen::Vector3d, 3>> facets(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const char* rec = bytes.data() + 84 + 50 * static_cast<std::size_t>(i) + 12;
    for (int v = 0; v < 3; ++v)
      for (int k = 0; k < 3; ++k) {
        float f;
        std::memcpy(&f, rec + 12 * v + 4 * k, 4);
        if (!std::isfinite(f)) fail(ErrorCode::ParseError, "STL: non-finite coordinate");
        facets[i][v][k] = f;
      }
  }
  return from_soup(facets);
}

}  // namespace

TriSurface::TriSurface(std::vector<Point> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)) {
  Eigen::Vector3d lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
  Eigen::Vector3d hi = -lo;
  for (const Point& p : vertices_) {
    if (!all_finite(p)) fail(ErrorCode::InvalidArgument, "TriSurface: non-finite vertex");
    lo = lo.cwiseMin(v3(p));
    hi = hi.cwiseMax(v3(p));
  }
  diagonal_ = vertices_.empty() ? 0.0 : (hi - lo).norm();
  const double min_area = 1e-14 * diagonal_ * diagonal_;
  for (const Triangle& t : triangles) {
    for (Index i : t)
      if (i < 0 || static_cast<std::size_t>(i) >= vertices_.size())
        fail(ErrorCode::InvalidArgument, "TriSurface: triangle index out of range");
    const Eigen::Vector3d a = v3(vertices_[t[0]]);
    const Eigen::Vector3d n = (v3(vertices_[t[1]]) - a).cross(v3(vertices_[t[2]]) - a);
    if (0.5 * n.norm() <= min_area) {
      ++dropped_;
      continue;
    }
    triangles_.push_back(t);
    normals_.push_back(pt(n.normalized()));
  }
  if (triangles_.empty()) fail(ErrorCode::EmptySurface, "TriSurface: no non-degenerate triangles");
  build_tree();
}

TriSurface TriSurface::load_stl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open STL file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_stl(buf.str());
}

TriSurface TriSurface::parse_stl(std::string_view bytes) {
  if (bytes.size() >= 84) {
    std::uint32_t count = 0;
    std::memcpy(&count, bytes.data() + 80, 4);
    if (bytes.size() == 84 + 50 * static_cast<std::size_t>(count)) return parse_binary(bytes);
  }
  std::size_t first = bytes.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && bytes.substr(first, 5) == "solid") return parse_ascii(bytes);
  return parse_binary(bytes);
}

Eigen::Vector3d TriSurface::corner(Index tri, int k) const {
  return v3(vertices_[triangles_[tri][k]]);
}

void TriSurface::build_tree() {
  order_.resize(triangles_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<Index>(i);
  nodes_.clear();
  nodes_.reserve(2 * triangles_.size() / kLeafSize + 2);
  build_node(0, static_cast<Index>(order_.size()));
}

TriSurface::Index TriSurface::build_node(Index first, Index count) {
  const Index id = static_cast<Index>(nodes_.size());
  nodes_.emplace_back();
  Eigen::Vector3d lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
  Eigen::Vector3d hi = -lo, clo = lo, chi = hi;
  for (Index i = first; i < first + count; ++i) {
    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    for (int k = 0; k < 3; ++k) {
      const Eigen::Vector3d c = corner(order_[i], k);
      lo = lo.cwiseMin(c);
      hi = hi.cwiseMax(c);
      centroid += c / 3.0;
    }
    clo = clo.cwiseMin(centroid);
    chi = chi.cwiseMax(centroid);
  }
  nodes_[id].lo = lo;
  nodes_[id].hi = hi;
  if (count <= kLeafSize) {
    nodes_[id].first = first;
    nodes_[id].count = count;
    return id;
  }
  int axis = 0;
  (chi - clo).maxCoeff(&axis);
  auto centroid_of = [&](Index t) {
    return corner(t, 0)[axis] + corner(t, 1)[axis] + corner(t, 2)[axis];
  };
  const Index half = count / 2;
  std::nth_element(order_.begin() + first, order_.begin() + first + half,
                   order_.begin() + first + count, [&](Index a, Index b) {
                     const double ca = centroid_of(a), cb = centroid_of(b);
                     return ca < cb || (ca == cb && a < b);
                   });
  const Index left = build_node(first, half);
  const Index right = build_node(first + half, count - half);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void TriSurface::closest_on_triangle(const Eigen::Vector3d& p, Index tri, Eigen::Vector3d& q,
                                     double& d2) const {
  q = closest_on_abc(p, corner(tri, 0), corner(tri, 1), corner(tri, 2));
  d2 = (q - p).squaredNorm();
}

TriSurface::ClosestHit TriSurface::closest_point(const Point& x) const {
  const Eigen::Vector3d p = v3(x);
  double best = std::numeric_limits<double>::infinity();
  Index best_tri = -1;
  Eigen::Vector3d best_q = Eigen::Vector3d::Zero();
  std::vector<Index> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (box_distance2(p, node.lo, node.hi) > best) continue;
    if (node.left < 0) {
      for (Index i = node.first; i < node.first + node.count; ++i) {
        const Index tri = order_[i];
        Eigen::Vector3d q;
        double d2;
        closest_on_triangle(p, tri, q, d2);
        if (d2 < best || (d2 == best && tri < best_tri)) {
          best = d2;
          best_tri = tri;
          best_q = q;
        }
      }
      continue;
    }
    const double dl = box_distance2(p, nodes_[node.left].lo, nodes_[node.left].hi);
    const double dr = box_distance2(p, nodes_[node.right].lo, nodes_[node.right].hi);
    if (dl <= dr) {
      stack.push_back(node.right);
      stack.push_back(node.left);
    } else {
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
  return {pt(best_q), best_tri, std::sqrt(best)};
}

TriSurface::ClosestHit TriSurface::closest_point_brute_force(const Point& x) const {
  const Eigen::Vector3d p = v3(x);
  double best = std::numeric_limits<double>::infinity();
  Index best_tri = -1;
  Eigen::Vector3d best_q = Eigen::Vector3d::Zero();
  for (Index tri = 0; tri < static_cast<Index>(triangles_.size()); ++tri) {
    Eigen::Vector3d q;
    double d2;
    closest_on_triangle(p, tri, q, d2);
    if (d2 < best) {
      best = d2;
      best_tri = tri;
      best_q = q;
    }
  }
  return {pt(best_q), best_tri, std::sqrt(best)};
}

// Moeller-Trumbore with a small barycentric slack so that rays through a
// shared edge hit at least one of the two triangles.
std::optional<double> TriSurface::intersect_triangle(const Eigen::Vector3d& o,
                                                     const Eigen::Vector3d& d, Index tri) const {
  const Eigen::Vector3d a = corner(tri, 0);
  const Eigen::Vector3d e1 = corner(tri, 1) - a, e2 = corner(tri, 2) - a;
  const Eigen::Vector3d pvec = d.cross(e2);
  const double det = e1.dot(pvec);
  if (std::abs(det) <= 1e-12 * e1.cross(e2).norm() * d.norm()) return std::nullopt;
  const double inv = 1.0 / det;
  const Eigen::Vector3d tvec = o - a;
  const double u = tvec.dot(pvec) * inv;
  if (u < -kBarycentricSlack || u > 1.0 + kBarycentricSlack) return std::nullopt;
  const Eigen::Vector3d qvec = tvec.cross(e1);
  const double v = d.dot(qvec) * inv;
  if (v < -kBarycentricSlack || u + v > 1.0 + kBarycentricSlack) return std::nullopt;
  return e2.dot(qvec) * inv;
}

std::optional<TriSurface::RayHit> TriSurface::ray_intersect(const Point& x, const Vector& dir) const {
  const Eigen::Vector3d o = v3(x), d = v3(dir);
  const Eigen::Vector3d pad = Eigen::Vector3d::Constant(1e-12 * std::max(1.0, diagonal_));
  double best = std::numeric_limits<double>::infinity(), best_t = 0.0;
  Index best_tri = -1;
  std::vector<Index> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    const auto near = box_line_distance(o, d, node.lo - pad, node.hi + pad);
    if (!near || *near > best) continue;
    if (node.left < 0) {
      for (Index i = node.first; i < node.first + node.count; ++i) {
        const Index tri = order_[i];
        const auto t = intersect_triangle(o, d, tri);
        if (t && (std::abs(*t) < best || (std::abs(*t) == best && tri < best_tri))) {
          best = std::abs(*t);
          best_t = *t;
          best_tri = tri;
        }
      }
      continue;
    }
    stack.push_back(node.right);
    stack.push_back(node.left);
  }
  if (best_tri < 0) return std::nullopt;
  return RayHit{pt(o + best_t * d), best_tri, best_t};
}

std::optional<TriSurface::RayHit> TriSurface::ray_intersect_brute_force(const Point& x,
                                                                        const Vector& dir) const {
  const Eigen::Vector3d o = v3(x), d = v3(dir);
  double best = std::numeric_limits<double>::infinity(), best_t = 0.0;
  Index best_tri = -1;
  for (Index tri = 0; tri < static_cast<Index>(triangles_.size()); ++tri) {
    const auto t = intersect_triangle(o, d, tri);
    if (t && std::abs(*t) < best) {
      best = std::abs(*t);
      best_t = *t;
      best_tri = tri;
    }
  }
  if (best_tri < 0) return std::nullopt;
  return RayHit{pt(o + best_t * d), best_tri, best_t};
}

std::vector<TriSurface::Index> TriSurface::tree_leaf_triangles() const {
  std::vector<Index> out;
  for (const Node& n : nodes_)
    if (n.left < 0)
      for (Index i = n.first; i < n.first + n.count; ++i) out.push_back(order_[i]);
  return out;
}

// ---------------------------------------------------------------- generators

TriSurface make_icosphere(int levels) {
  if (levels < 0 || levels > 8) fail(ErrorCode::InvalidArgument, "make_icosphere: levels must lie in 0..8");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Point> v;
  for (const auto& c : std::vector<std::array<double, 3>>{{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
                                                         {0, -1, t}, {0, 1, t},  {0, -1, -t}, {0, 1, -t},
                                                         {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}})
    v.push_back(make_point({c[0], c[1], c[2]}).normalized());
  std::vector<TriSurface::Triangle> tris{{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                         {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                         {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                         {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int l = 0; l < levels; ++l) {
    std::map<std::pair<TriSurface::Index, TriSurface::Index>, TriSurface::Index> mid;
    auto midpoint = [&](TriSurface::Index a, TriSurface::Index b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back(Point((v[a] + v[b]).normalized()));
      const auto idx = static_cast<TriSurface::Index>(v.size() - 1);
      mid.emplace(key, idx);
      return idx;
    };
    std::vector<TriSurface::Triangle> next;
    next.reserve(4 * tris.size());
    for (const auto& [a, b, c] : tris) {
      const auto ab = midpoint(a, b), bc = midpoint(b, c), ca = midpoint(c, a);
      next.push_back({a, ab, ca});
      next.push_back({b, bc, ab});
      next.push_back({c, ca, bc});
      next.push_back({ab, bc, ca});
    }
    tris = std::move(next);
  }
  return TriSurface(std::move(v), std::move(tris));
}

std::string to_binary_stl(const TriSurface& s) {
  std::string out(80, '\0');
  const std::string header = "geoprim binary STL";
  std::copy(header.begin(), header.end(), out.begin());
  const auto count = static_cast<std::uint32_t>(s.n_triangles());
  out.append(reinterpret_cast<const char*>(&count), 4);
  auto put = [&out](const Point& p) {
    for (int k = 0; k < 3; ++k) {
      const float f = static_cast<float>(p[k]);
      out.append(reinterpret_cast<const char*>(&f), 4);
    }
  };
  for (std::size_t i = 0; i < s.n_triangles(); ++i) {
    put(s.normal(i));
    for (auto idx : s.triangle(i)) put(s.vertex(idx));
    out.append(2, '\0');
  }
  return out;
}

}  // namespace geoprim
