// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#include <geoprim/config.hpp>
#include <geoprim/experiments.hpp>
#include <geoprim/fe.hpp>
#include <geoprim/geoprim.h>
#include <geoprim/mesh_io.hpp>
#include <geoprim/trisurface.hpp>

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

struct gp_mesh {
  geoprim::Mesh mesh;
};

struct gp_registry {
  geoprim::ManifoldRegistry registry;
};

struct gp_refine_report {
  geoprim::RefineRun run;
  std::string json;
};

namespace {

thread_local std::string last_error;
thread_local long last_entity = -1;

void clear_error() {
  last_error.clear();
  last_entity = -1;
}

gp_status set_error(gp_status status, const std::string& message, long entity = -1) {
  last_error = message;
  last_entity = entity;
  return status;
}

// Runs f, translating exceptions into status codes.
template <class F>
gp_status guarded(F&& f) noexcept {
  clear_error();
  try {
    f();
    return GP_OK;
  } catch (const geoprim::GeometryError& e) {
    return set_error(static_cast<gp_status>(e.code()), e.what(), e.entity().value_or(-1));
  } catch (const std::bad_alloc&) {
    return set_error(GP_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return set_error(GP_INTERNAL_ERROR, e.what());
  } catch (...) {
    return set_error(GP_INTERNAL_ERROR, "unknown failure");
  }
}

gp_status null_argument(const char* function) {
  clear_error();
  return set_error(GP_INVALID_ARGUMENT, std::string(function) + ": null argument");
}

geoprim::Point point_from(const double* x, int n) {
  geoprim::Point p(n);
  for (int i = 0; i < n; ++i) p[i] = x[i];
  return p;
}

}  // namespace

extern "C" {

const char* gp_last_error(void) { return last_error.c_str(); }

long gp_last_error_entity(void) { return last_entity; }

const char* gp_status_name(gp_status status) {
  if (status == GP_OK) return "Ok";
  if (status == GP_INTERNAL_ERROR) return "InternalError";
  return geoprim::to_string(static_cast<geoprim::ErrorCode>(status));
}

// ---------------------------------------------------------------- meshes

gp_status gp_mesh_load(const char* path, gp_mesh** out) {
  if (!path || !out) return null_argument("gp_mesh_load");
  return guarded([&] {
    *out = new gp_mesh{geoprim::read_native_mesh(geoprim::read_text_file(path))};
  });
}

gp_status gp_mesh_builtin(const char* name, gp_mesh** out) {
  if (!name || !out) return null_argument("gp_mesh_builtin");
  return guarded([&] {
    namespace m = geoprim::meshes;
    const std::string n = name;
    if (n == "square")
      *out = new gp_mesh{m::hypercube(2, 1)};
    else if (n == "cube")
      *out = new gp_mesh{m::hypercube(3, 1)};
    else if (n == "annulus4")
      *out = new gp_mesh{m::annulus(4, 0.5, 1.0, 1, 2)};
    else if (n == "annulus10")
      *out = new gp_mesh{m::annulus(10, 0.5, 1.0, 1, 2)};
    else if (n == "quarter_annulus")
      *out = new gp_mesh{m::quarter_annulus(0.5, 1.0, 1, 2)};
    else if (n == "cube_shell")
      *out = new gp_mesh{m::cube_shell(0.5, 1.0, 1, 2)};
    else if (n == "cube_sphere")
      *out = new gp_mesh{m::cube_sphere_surface(1.0, 1)};
    else
      geoprim::fail(geoprim::ErrorCode::InvalidArgument, "unknown built-in mesh '" + n + "'");
  });
}

void gp_mesh_destroy(gp_mesh* mesh) { delete mesh; }

int gp_mesh_dim(const gp_mesh* mesh) { return mesh ? mesh->mesh.dim() : 0; }

int gp_mesh_spacedim(const gp_mesh* mesh) { return mesh ? mesh->mesh.spacedim() : 0; }

size_t gp_mesh_n_vertices(const gp_mesh* mesh) { return mesh ? mesh->mesh.n_vertices() : 0; }

size_t gp_mesh_n_active_cells(const gp_mesh* mesh) { return mesh ? mesh->mesh.n_active_cells() : 0; }

gp_status gp_mesh_vertex(const gp_mesh* mesh, size_t i, double* xyz) {
  if (!mesh || !xyz) return null_argument("gp_mesh_vertex");
  clear_error();
  if (i >= mesh->mesh.n_vertices()) return set_error(GP_INVALID_ARGUMENT, "gp_mesh_vertex: index out of range");
  const geoprim::Point& p = mesh->mesh.vertex(static_cast<geoprim::VertexIndex>(i));
  for (int k = 0; k < p.size(); ++k) xyz[k] = p[k];
  return GP_OK;
}

gp_status gp_mesh_refine_uniform(const gp_mesh* mesh, const gp_registry* registry, gp_mesh** out) {
  if (!mesh || !registry || !out) return null_argument("gp_mesh_refine_uniform");
  return guarded([&] { *out = new gp_mesh{mesh->mesh.refine_uniform(registry->registry)}; });
}

gp_status gp_mesh_write_native(const gp_mesh* mesh, const char* path) {
  if (!mesh || !path) return null_argument("gp_mesh_write_native");
  return guarded([&] { geoprim::write_text_file(path, geoprim::write_native_mesh(mesh->mesh)); });
}

gp_status gp_mesh_write_vtk(const gp_mesh* mesh, const char* path, const char* title) {
  if (!mesh || !path) return null_argument("gp_mesh_write_vtk");
  return guarded([&] {
    geoprim::write_text_file(path, geoprim::write_vtk(mesh->mesh, title ? title : "geoprim mesh"));
  });
}

// ---------------------------------------------------------------- oracles

gp_status gp_registry_create(int spacedim, gp_registry** out) {
  if (!out) return null_argument("gp_registry_create");
  return guarded([&] {
    if (spacedim < 1 || spacedim > 3)
      geoprim::fail(geoprim::ErrorCode::InvalidArgument, "gp_registry_create: spacedim must lie in 1..3");
    *out = new gp_registry{geoprim::ManifoldRegistry(spacedim)};
  });
}

gp_status gp_registry_load(const char* path, const gp_mesh* mesh, gp_registry** out) {
  if (!path || !out) return null_argument("gp_registry_load");
  return guarded([&] { *out = new gp_registry{geoprim::load_geometry_file(path, mesh ? &mesh->mesh : nullptr)}; });
}

void gp_registry_destroy(gp_registry* registry) { delete registry; }

gp_status gp_new_point(const gp_registry* registry, int id, size_t n, const double* points,
                       const double* weights, double* out) {
  if (!registry || !points || !weights || !out) return null_argument("gp_new_point");
  return guarded([&] {
    const int d = registry->registry.spacedim();
    std::vector<geoprim::Point> p;
    for (size_t i = 0; i < n; ++i) p.push_back(point_from(points + d * i, d));
    const std::vector<double> w(weights, weights + n);
    const geoprim::Point x = registry->registry.get(id).new_point(p, w);
    for (int k = 0; k < d; ++k) out[k] = x[k];
  });
}

gp_status gp_tangent_vector(const gp_registry* registry, int id, const double* x1, const double* x2,
                            double* out) {
  if (!registry || !x1 || !x2 || !out) return null_argument("gp_tangent_vector");
  return guarded([&] {
    const int d = registry->registry.spacedim();
    const geoprim::Vector t = registry->registry.get(id).tangent_vector(point_from(x1, d), point_from(x2, d));
    for (int k = 0; k < d; ++k) out[k] = t[k];
  });
}

// ---------------------------------------------------------------- refinement

gp_status gp_refine(const gp_mesh* mesh, const gp_registry* registry, int cycles, double adaptive_fraction,
                    double aniso_lambda, gp_refine_report** out) {
  if (!mesh || !registry || !out) return null_argument("gp_refine");
  return guarded([&] {
    geoprim::RefineOptions options;
    options.cycles = cycles;
    if (adaptive_fraction > 0.0) options.adaptive_fraction = adaptive_fraction;
    if (aniso_lambda > 0.0) options.aniso_lambda = aniso_lambda;
    geoprim::RefineRun run = geoprim::run_refinement(mesh->mesh, registry->registry, options);
    std::string json = geoprim::refine_report_json(run, options);
    *out = new gp_refine_report{std::move(run), std::move(json)};
  });
}

void gp_refine_report_destroy(gp_refine_report* report) { delete report; }

gp_status gp_refine_report_mesh(const gp_refine_report* report, gp_mesh** out) {
  if (!report || !out) return null_argument("gp_refine_report_mesh");
  return guarded([&] { *out = new gp_mesh{report->run.mesh}; });
}

const char* gp_refine_report_json(const gp_refine_report* report) { return report ? report->json.c_str() : ""; }

// ---------------------------------------------------------------- experiments

gp_status gp_table1(int degree, int cycles, int flat_control, gp_table1_row* rows) {
  if (!rows) return null_argument("gp_table1");
  return guarded([&] {
    const auto result = geoprim::table1_experiment(degree, cycles, flat_control != 0);
    for (std::size_t i = 0; i < result.size(); ++i)
      rows[i] = {result[i].ndof, result[i].error_coarse, result[i].error_after_refine};
  });
}

gp_status gp_annulus_svd(int degree, int interior, gp_svd_sample* samples) {
  if (!samples) return null_argument("gp_annulus_svd");
  return guarded([&] {
    if (interior != 0 && interior != 1)
      geoprim::fail(geoprim::ErrorCode::InvalidArgument, "gp_annulus_svd: interior must be 0 or 1");
    const auto result = geoprim::annulus_svd(
        degree, interior == 0 ? geoprim::InteriorRule::Transfinite : geoprim::InteriorRule::Laplace);
    for (std::size_t i = 0; i < result.size(); ++i)
      samples[i] = {result[i].xi, result[i].eta, result[i].sigma_min, result[i].sigma_max};
  });
}

gp_status gp_graded(int chart, int cycles, gp_mesh** out) {
  if (!out) return null_argument("gp_graded");
  return guarded([&] {
    if (chart != 0 && chart != 1)
      geoprim::fail(geoprim::ErrorCode::InvalidArgument, "gp_graded: chart must be 0 or 1");
    *out = new gp_mesh{
        geoprim::graded_mesh(chart == 0 ? geoprim::GradedChart::Square : geoprim::GradedChart::Sine, cycles)};
  });
}

gp_status gp_write_icosphere_stl(int levels, const char* path) {
  if (!path) return null_argument("gp_write_icosphere_stl");
  return guarded([&] { geoprim::write_text_file(path, geoprim::to_binary_stl(geoprim::make_icosphere(levels))); });
}

}  // extern "C"
