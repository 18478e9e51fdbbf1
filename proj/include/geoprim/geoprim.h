/* ------------------------------------------------------------------------
 * SPDX-License-Identifier: Apache-2.0
 * Copyright (C) 2026 by the geoprim authors
 * ------------------------------------------------------------------------
 *
 * C interface of libgeoprim. Objects are opaque handles owned by the
 * caller and released with the matching *_destroy function. Every function
 * returns a gp_status; on failure gp_last_error() and gp_last_error_entity()
 * describe the error of the calling thread.
 */

#ifndef GEOPRIM_H
#define GEOPRIM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define GP_API __attribute__((visibility("default")))
#else
#define GP_API
#endif

typedef enum gp_status {
  GP_OK = 0,
  GP_INVALID_ARGUMENT = 1,
  GP_WEIGHT_SUM_VIOLATION = 2,
  GP_ORACLE_FAILURE = 3,
  GP_DEGENERATE_INPUT = 4,
  GP_PULL_BACK_FAILURE = 5,
  GP_HALF_PERIOD_AMBIGUITY = 6,
  GP_ANTIPODAL_POINTS = 7,
  GP_TOO_MANY_POINTS = 8,
  GP_PARSE_ERROR = 9,
  GP_EMPTY_SURFACE = 10,
  GP_PROJECTION_MISS = 11,
  GP_DEGENERATE_CONFIGURATION = 12,
  GP_NEWTON_DIVERGENCE = 13,
  GP_OUTSIDE_CELL = 14,
  GP_INVERTED_CHILD = 15,
  GP_NOT_A_SURFACE_MESH = 16,
  GP_DEGENERATE_CELL = 17,
  GP_DEGENERATE_TANGENTS = 18,
  GP_SINGULAR_JACOBIAN = 19,
  GP_NO_CHILDREN = 20,
  GP_IO_ERROR = 21,
  GP_CONFIG_ERROR = 22,
  GP_INTERNAL_ERROR = 99
} gp_status;

typedef struct gp_mesh gp_mesh;
typedef struct gp_registry gp_registry;
typedef struct gp_refine_report gp_refine_report;

/* Message of the last failure on this thread ("" if none). */
GP_API const char* gp_last_error(void);
/* Mesh entity (cell index) involved in the last failure, -1 if none. */
GP_API long gp_last_error_entity(void);
GP_API const char* gp_status_name(gp_status status);

/* ---- meshes */

/* Native mesh document (see the README for the schema). */
GP_API gp_status gp_mesh_load(const char* path, gp_mesh** out);
/* Built-in coarse meshes: "square", "cube", "annulus4", "annulus10",
 * "quarter_annulus", "cube_shell", "cube_sphere". Manifold ids are listed
 * in the README. */
GP_API gp_status gp_mesh_builtin(const char* name, gp_mesh** out);
GP_API void gp_mesh_destroy(gp_mesh* mesh);
GP_API int gp_mesh_dim(const gp_mesh* mesh);
GP_API int gp_mesh_spacedim(const gp_mesh* mesh);
GP_API size_t gp_mesh_n_vertices(const gp_mesh* mesh);
GP_API size_t gp_mesh_n_active_cells(const gp_mesh* mesh);
/* Copies spacedim coordinates of vertex i into xyz. */
GP_API gp_status gp_mesh_vertex(const gp_mesh* mesh, size_t i, double* xyz);
GP_API gp_status gp_mesh_refine_uniform(const gp_mesh* mesh, const gp_registry* registry, gp_mesh** out);
GP_API gp_status gp_mesh_write_native(const gp_mesh* mesh, const char* path);
GP_API gp_status gp_mesh_write_vtk(const gp_mesh* mesh, const char* path, const char* title);

/* ---- oracles */

/* Registry with every id resolving to the flat manifold. */
GP_API gp_status gp_registry_create(int spacedim, gp_registry** out);
/* Geometry document; `mesh` may be NULL unless it uses transfinite
 * manifolds. */
GP_API gp_status gp_registry_load(const char* path, const gp_mesh* mesh, gp_registry** out);
GP_API void gp_registry_destroy(gp_registry* registry);
/* NEW POINT on manifold `id`: n points of spacedim coordinates, n weights
 * summing to one. */
GP_API gp_status gp_new_point(const gp_registry* registry, int id, size_t n, const double* points,
                              const double* weights, double* out);
/* TANGENT VECTOR at x1 toward x2 on manifold `id`. */
GP_API gp_status gp_tangent_vector(const gp_registry* registry, int id, const double* x1,
                                   const double* x2, double* out);

/* ---- refinement pipeline */

/* cycles rounds of refinement; adaptive_fraction <= 0 means uniform and
 * aniso_lambda <= 0 skips the anisotropic pass. */
GP_API gp_status gp_refine(const gp_mesh* mesh, const gp_registry* registry, int cycles,
                           double adaptive_fraction, double aniso_lambda, gp_refine_report** out);
GP_API void gp_refine_report_destroy(gp_refine_report* report);
/* The refined mesh, as a new handle. */
GP_API gp_status gp_refine_report_mesh(const gp_refine_report* report, gp_mesh** out);
/* Deterministic JSON description of the run (per-cycle metrics and
 * warnings). Valid until the report is destroyed. */
GP_API const char* gp_refine_report_json(const gp_refine_report* report);

/* ---- experiments */

typedef struct gp_table1_row {
  size_t ndof;
  double error_coarse;
  double error_after_refine;
} gp_table1_row;

/* rows must hold `cycles` entries. flat_control != 0 replaces the sphere
 * oracles by flat ones. */
GP_API gp_status gp_table1(int degree, int cycles, int flat_control, gp_table1_row* rows);

typedef struct gp_svd_sample {
  double xi, eta;
  double sigma_min, sigma_max;
} gp_svd_sample;

enum { GP_SVD_SAMPLES = 121 };

/* interior: 0 transfinite, 1 Laplace. samples must hold GP_SVD_SAMPLES. */
GP_API gp_status gp_annulus_svd(int degree, int interior, gp_svd_sample* samples);

/* chart: 0 square (x^2), 1 sine. */
GP_API gp_status gp_graded(int chart, int cycles, gp_mesh** out);

/* Binary STL of the unit icosphere with 20 * 4^levels triangles. */
GP_API gp_status gp_write_icosphere_stl(int levels, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* GEOPRIM_H */
