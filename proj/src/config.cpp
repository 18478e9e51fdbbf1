// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#include <geoprim/chart.hpp>
#include <geoprim/config.hpp>
#include <geoprim/mesh_io.hpp>
#include <geoprim/projection.hpp>
#include <geoprim/spherical.hpp>
#include <geoprim/trisurface.hpp>

#include <json.hpp>

#include <filesystem>
#include <memory>
#include <set>

namespace geoprim {

using nlohmann::json;

namespace {

[[noreturn]] void config_fail(const std::string& what) {
  fail(ErrorCode::ConfigError, "geometry document: " + what);
}

Point vector_param(const json& m, const char* key, int size, ManifoldId id) {
  if (!m.contains(key)) config_fail("manifold " + std::to_string(id) + " needs '" + key + "'");
  const auto v = m.at(key).get<std::vector<double>>();
  if (static_cast<int>(v.size()) != size)
    config_fail("manifold " + std::to_string(id) + ": '" + key + "' must have " + std::to_string(size) +
                " entries");
  Point p(size);
  for (int i = 0; i < size; ++i) p[i] = v[i];
  return p;
}

Point center_or_origin(const json& m, int spacedim, ManifoldId id) {
  return m.contains("center") ? vector_param(m, "center", spacedim, id) : Point(Point::Zero(spacedim));
}

void require_spacedim(int actual, int wanted, const std::string& kind) {
  if (actual != wanted)
    config_fail("kind '" + kind + "' needs spacedim " + std::to_string(wanted));
}

Vector unit(Vector v, ManifoldId id) {
  const double n = v.norm();
  if (!(n > 0.0)) config_fail("manifold " + std::to_string(id) + ": zero direction");
  return v / n;
}

ManifoldRef make_oracle(const json& m, int spacedim, ManifoldId id, const std::string& base_dir) {
  const std::string kind = m.at("kind").get<std::string>();
  if (kind == "flat") return std::make_shared<FlatManifold>(spacedim);
  if (kind == "polar") {
    require_spacedim(spacedim, 2, kind);
    return std::make_shared<PolarChart>(center_or_origin(m, 2, id));
  }
  if (kind == "spherical") {
    require_spacedim(spacedim, 3, kind);
    return std::make_shared<SphericalChart>(center_or_origin(m, 3, id));
  }
  if (kind == "cylindrical") {
    require_spacedim(spacedim, 3, kind);
    const Point origin = m.contains("origin") ? vector_param(m, "origin", 3, id) : Point(Point::Zero(3));
    return std::make_shared<CylindricalChart>(origin, unit(vector_param(m, "axis", 3, id), id));
  }
  if (kind == "sphere_projection") return std::make_shared<SphereProjectionManifold>(center_or_origin(m, spacedim, id));
  if (kind == "spherical_average") return std::make_shared<SphericalAverageManifold>(center_or_origin(m, spacedim, id));
  if (kind == "graded_square") {
    require_spacedim(spacedim, 2, kind);
    return std::make_shared<GradedSquareChart>();
  }
  if (kind == "graded_sine") {
    require_spacedim(spacedim, 2, kind);
    return std::make_shared<GradedSineChart>();
  }
  if (kind == "stl_projection") {
    require_spacedim(spacedim, 3, kind);
    if (!m.contains("stl_path")) config_fail("manifold " + std::to_string(id) + " needs 'stl_path'");
    std::filesystem::path path = m.at("stl_path").get<std::string>();
    if (path.is_relative() && !base_dir.empty()) path = std::filesystem::path(base_dir) / path;
    std::shared_ptr<const TriSurface> surface;
    try {
      surface = std::make_shared<TriSurface>(TriSurface::load_stl(path.string()));
    } catch (const GeometryError& e) {
      config_fail("manifold " + std::to_string(id) + ": " + e.what());
    }
    const std::string s = m.value("strategy", "closest_point");
    if (s == "closest_point")
      return std::make_shared<ProjectionManifold>(surface, ProjectionManifold::Strategy::ClosestPoint);
    if (s == "normal_to_mesh")
      return std::make_shared<ProjectionManifold>(surface, ProjectionManifold::Strategy::NormalToMesh);
    if (s == "directional")
      return std::make_shared<ProjectionManifold>(surface, ProjectionManifold::Strategy::Directional,
                                                  unit(vector_param(m, "direction", 3, id), id));
    config_fail("manifold " + std::to_string(id) + ": unknown strategy '" + s + "'");
  }
  config_fail("manifold " + std::to_string(id) + ": unknown kind '" + kind + "'");
}

}  // namespace

ManifoldRegistry load_geometry(const std::string& text, const std::string& base_dir, const Mesh* mesh) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    config_fail(e.what());
  }
  try {
    if (doc.value("format", "") != "geoprim-geometry") config_fail("format must be \"geoprim-geometry\"");
    if (doc.value("version", 0) != 1) config_fail("unsupported version");
    const int spacedim = doc.at("spacedim").get<int>();
    if (spacedim < 2 || spacedim > 3) config_fail("spacedim must be 2 or 3");
    if (mesh && mesh->spacedim() != spacedim) config_fail("spacedim does not match the mesh");

    ManifoldRegistry registry(spacedim);
    std::set<ManifoldId> seen;
    std::vector<ManifoldId> transfinite;
    for (const json& m : doc.value("manifolds", json::array())) {
      const ManifoldId id = m.at("id").get<ManifoldId>();
      if (id < 0) config_fail("manifold ids must be non-negative");
      if (!seen.insert(id).second) config_fail("manifold " + std::to_string(id) + " listed twice");
      if (m.at("kind").get<std::string>() == "transfinite") {
        transfinite.push_back(id);
        continue;
      }
      registry.set(id, make_oracle(m, spacedim, id, base_dir));
    }
    for (ManifoldId id : transfinite) {
      if (!mesh) config_fail("kind 'transfinite' needs a mesh");
      registry.set(id, make_transfinite_manifold(*mesh, registry, id));
    }
    return registry;
  } catch (const json::exception& e) {
    config_fail(e.what());
  } catch (const GeometryError& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    config_fail(e.what());
  }
}

ManifoldRegistry load_geometry_file(const std::string& path, const Mesh* mesh) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const GeometryError& e) {
    config_fail(e.what());
  }
  return load_geometry(text, std::filesystem::path(path).parent_path().string(), mesh);
}

}  // namespace geoprim
