// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#include <geoprim/chart.hpp>
#include <geoprim/experiments.hpp>

#include <Eigen/SVD>
#include <json.hpp>

#include <algorithm>
#include <limits>
#include <map>
#include <memory>

namespace geoprim {

CycleMetrics measure_mesh(const Mesh& mesh, int cycle) {
  CycleMetrics m{};
  m.cycle = cycle;
  m.active_cells = mesh.n_active_cells();
  m.vertices = mesh.n_vertices();
  m.hanging_vertices = mesh.hanging_vertices().size();
  m.min_diameter = std::numeric_limits<double>::infinity();
  m.max_diameter = 0.0;
  std::map<int, LevelMetrics> levels;
  for (CellIndex c : mesh.active_cells()) {
    const double h = mesh.cell_diameter(c);
    m.min_diameter = std::min(m.min_diameter, h);
    m.max_diameter = std::max(m.max_diameter, h);
    const int level = mesh.cell(c).level;
    auto [it, fresh] = levels.try_emplace(level, LevelMetrics{level, 0, h, h});
    it->second.cells += 1;
    it->second.min_diameter = std::min(it->second.min_diameter, h);
    it->second.max_diameter = std::max(it->second.max_diameter, h);
  }
  for (const auto& [level, lm] : levels) m.levels.push_back(lm);

  if (mesh.dim() == 2 && mesh.spacedim() == 3) {
    const std::vector<double> eta = curvature_indicator(mesh);
    double sum = 0.0, top = 0.0;
    for (double e : eta) {
      sum += e;
      top = std::max(top, e);
    }
    m.indicator_max = top;
    m.indicator_mean = eta.empty() ? 0.0 : sum / eta.size();
  }

  m.vertex_norm_min = std::numeric_limits<double>::infinity();
  m.vertex_norm_max = 0.0;
  for (const Point& p : mesh.vertices()) {
    m.vertex_norm_min = std::min(m.vertex_norm_min, p.norm());
    m.vertex_norm_max = std::max(m.vertex_norm_max, p.norm());
  }
  return m;
}

RefineRun run_refinement(const Mesh& mesh, const ManifoldRegistry& registry, const RefineOptions& options) {
  if (options.cycles < 0) fail(ErrorCode::InvalidArgument, "refine: cycles must be non-negative");
  const bool surface = mesh.dim() == 2 && mesh.spacedim() == 3;
  if (options.adaptive_fraction) {
    const double f = *options.adaptive_fraction;
    if (!(f > 0.0 && f <= 1.0)) fail(ErrorCode::InvalidArgument, "refine: adaptive fraction must lie in (0, 1]");
    if (!surface) fail(ErrorCode::InvalidArgument, "refine: adaptive refinement needs a surface mesh");
  }
  if (options.aniso_lambda) {
    if (!(*options.aniso_lambda > 1.0)) fail(ErrorCode::InvalidArgument, "refine: aniso threshold must exceed 1");
    if (mesh.dim() != 2) fail(ErrorCode::InvalidArgument, "refine: anisotropic refinement needs quadrilaterals");
  }

  RefineRun run{mesh, 0, {}, {}};
  if (options.aniso_lambda) {
    const RefinementFlags flags = aspect_ratio_flags(run.mesh, registry, *options.aniso_lambda);
    for (const RefinementFlag& f : flags)
      if (f.kind != FlagKind::None) ++run.anisotropic_cells;
    if (run.anisotropic_cells > 0) run.mesh = run.mesh.refine(flags, registry);
  }
  run.cycles.push_back(measure_mesh(run.mesh, 0));

  for (int cycle = 1; cycle <= options.cycles; ++cycle) {
    std::size_t marked = run.mesh.n_active_cells();
    if (options.adaptive_fraction) {
      const std::vector<bool> marks = mark_fraction(curvature_indicator(run.mesh), *options.adaptive_fraction);
      marked = static_cast<std::size_t>(std::count(marks.begin(), marks.end(), true));
      run.mesh = run.mesh.refine(flags_from_marks(run.mesh, marks), registry);
    } else {
      run.mesh = run.mesh.refine_uniform(registry);
    }
    CycleMetrics m = measure_mesh(run.mesh, cycle);
    m.marked_cells = marked;
    if (m.hanging_vertices > 0 && run.cycles.back().hanging_vertices == 0)
      run.warnings.push_back("cycle " + std::to_string(cycle) + ": mesh has hanging vertices");
    run.cycles.push_back(std::move(m));
  }
  return run;
}

std::string refine_report_json(const RefineRun& run, const RefineOptions& options) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["format"] = "geoprim-refine-report";
  doc["version"] = 1;
  doc["options"] = {{"cycles", options.cycles},
                    {"adaptive_fraction", options.adaptive_fraction ? ordered_json(*options.adaptive_fraction)
                                                                    : ordered_json(nullptr)},
                    {"aniso_lambda", options.aniso_lambda ? ordered_json(*options.aniso_lambda)
                                                          : ordered_json(nullptr)}};
  doc["anisotropic_cells"] = run.anisotropic_cells;
  ordered_json cycles = ordered_json::array();
  for (const CycleMetrics& m : run.cycles) {
    ordered_json c;
    c["cycle"] = m.cycle;
    c["active_cells"] = m.active_cells;
    c["vertices"] = m.vertices;
    c["hanging_vertices"] = m.hanging_vertices;
    c["marked_cells"] = m.marked_cells;
    c["min_cell_diameter"] = m.min_diameter;
    c["max_cell_diameter"] = m.max_diameter;
    ordered_json levels = ordered_json::array();
    for (const LevelMetrics& l : m.levels)
      levels.push_back({{"level", l.level},
                        {"cells", l.cells},
                        {"min_cell_diameter", l.min_diameter},
                        {"max_cell_diameter", l.max_diameter}});
    c["levels"] = std::move(levels);
    c["indicator_max"] = m.indicator_max ? ordered_json(*m.indicator_max) : ordered_json(nullptr);
    c["indicator_mean"] = m.indicator_mean ? ordered_json(*m.indicator_mean) : ordered_json(nullptr);
    c["vertex_norm_min"] = m.vertex_norm_min;
    c["vertex_norm_max"] = m.vertex_norm_max;
    cycles.push_back(std::move(c));
  }
  doc["cycles"] = std::move(cycles);
  doc["warnings"] = run.warnings;
  return doc.dump(2) + "\n";
}

std::vector<SvdSample> annulus_svd(int degree, InteriorRule rule) {
  if (degree < 1) fail(ErrorCode::InvalidArgument, "annulus_svd: degree must be at least 1");
  const Mesh mesh = meshes::quarter_annulus(0.5, 1.0, 1, 2);
  ManifoldRegistry registry(2);
  registry.set(2, std::make_shared<PolarChart>(make_point({0, 0})));
  const MappingQ mq = place_support_points(mesh.cell_geometry(0, registry), degree, rule);
  std::vector<SvdSample> out;
  for (int j = 0; j <= 10; ++j)
    for (int i = 0; i <= 10; ++i) {
      const Coords xhat = make_point({i / 10.0, j / 10.0});
      const Eigen::Matrix2d J = jacobian_polynomial(mq, xhat);
      const Eigen::Vector2d s = Eigen::JacobiSVD<Eigen::Matrix2d>(J).singularValues();
      out.push_back({xhat[0], xhat[1], s.minCoeff(), s.maxCoeff()});
    }
  return out;
}

Mesh graded_mesh(GradedChart chart, int cycles) {
  if (cycles < 0) fail(ErrorCode::InvalidArgument, "graded: cycles must be non-negative");
  ManifoldRegistry registry(2);
  if (chart == GradedChart::Square)
    registry.set(0, std::make_shared<GradedSquareChart>());
  else
    registry.set(0, std::make_shared<GradedSineChart>());
  Mesh mesh = meshes::hypercube(2, 1);
  for (int k = 0; k < cycles; ++k) mesh = mesh.refine_uniform(registry);
  return mesh;
}

}  // namespace geoprim
