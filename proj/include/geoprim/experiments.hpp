// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

// Refinement pipeline and the small experiments driven by the command line
// tool.

#pragma once

#include <geoprim/mapping.hpp>
#include <geoprim/mesh.hpp>

#include <optional>
#include <string>
#include <vector>

namespace geoprim {

struct RefineOptions {
  int cycles = 1;
  /// Fixed-fraction marking with the curvature indicator (surface meshes);
  /// uniform refinement when unset.
  std::optional<double> adaptive_fraction;
  /// Aspect-ratio threshold of one anisotropic pass run before the cycles.
  std::optional<double> aniso_lambda;
};

struct LevelMetrics {
  int level;
  std::size_t cells;
  double min_diameter;
  double max_diameter;
};

/// State of the mesh after a cycle (cycle 0: before the first one).
struct CycleMetrics {
  int cycle;
  std::size_t active_cells;
  std::size_t vertices;
  std::size_t hanging_vertices;
  std::size_t marked_cells;
  double min_diameter;
  double max_diameter;
  /// Cell diameters grouped by refinement level.
  std::vector<LevelMetrics> levels;
  /// Curvature indicator statistics; surface meshes only.
  std::optional<double> indicator_max;
  std::optional<double> indicator_mean;
  /// Extremes of |x| over all vertices.
  double vertex_norm_min;
  double vertex_norm_max;
};

struct RefineRun {
  Mesh mesh;
  std::size_t anisotropic_cells = 0;
  std::vector<CycleMetrics> cycles;
  std::vector<std::string> warnings;
};

CycleMetrics measure_mesh(const Mesh& mesh, int cycle);

/// Optional anisotropic pass, then `cycles` rounds of uniform or
/// indicator-driven refinement. Throws InvalidArgument for adaptive runs on
/// meshes that are not surfaces.
RefineRun run_refinement(const Mesh& mesh, const ManifoldRegistry& registry, const RefineOptions& options);

/// Deterministic JSON document of a run: options, per-cycle metrics and
/// warnings.
std::string refine_report_json(const RefineRun& run, const RefineOptions& options);

struct SvdSample {
  double xi, eta;
  double sigma_min, sigma_max;
};

/// Singular values of the Jacobian of a degree-p mapping of the quarter
/// annulus (radii 0.5 and 1, polar boundary), sampled on the 11 x 11 grid
/// of reference points i/10.
std::vector<SvdSample> annulus_svd(int degree, InteriorRule rule);

enum class GradedChart { Square, Sine };

/// The unit square refined `cycles` times under a graded chart oracle.
Mesh graded_mesh(GradedChart chart, int cycles);

}  // namespace geoprim
