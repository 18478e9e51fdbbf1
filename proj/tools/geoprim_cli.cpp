// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

// geoprim command line tool. Talks to the library through the C interface
// only.
//
// Exit codes: 0 success, 2 usage or configuration problem, 3 failure while
// running (oracle, mesh or numerics).

#include <geoprim/geoprim.h>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct Failure {
  int exit_code;
};

int exit_code_for(gp_status s) {
  switch (s) {
    case GP_INVALID_ARGUMENT:
    case GP_PARSE_ERROR:
    case GP_IO_ERROR:
    case GP_CONFIG_ERROR:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

// Reports a failed call and unwinds to main.
void check(gp_status s, const std::string& what) {
  if (s == GP_OK) return;
  std::cerr << "geoprim: " << what << " failed: " << gp_status_name(s);
  if (gp_last_error_entity() >= 0) std::cerr << " (cell " << gp_last_error_entity() << ")";
  std::cerr << ": " << gp_last_error() << '\n';
  throw Failure{exit_code_for(s)};
}

[[noreturn]] void usage_error(const std::string& message) {
  std::cerr << "geoprim: " << message << '\n';
  throw Failure{kExitUsage};
}

using MeshPtr = std::unique_ptr<gp_mesh, decltype(&gp_mesh_destroy)>;
using RegistryPtr = std::unique_ptr<gp_registry, decltype(&gp_registry_destroy)>;
using ReportPtr = std::unique_ptr<gp_refine_report, decltype(&gp_refine_report_destroy)>;

MeshPtr load_mesh(const std::string& source) {
  gp_mesh* m = nullptr;
  const std::string prefix = "builtin:";
  if (source.rfind(prefix, 0) == 0)
    check(gp_mesh_builtin(source.substr(prefix.size()).c_str(), &m), "loading mesh '" + source + "'");
  else
    check(gp_mesh_load(source.c_str(), &m), "loading mesh '" + source + "'");
  return MeshPtr(m, gp_mesh_destroy);
}

std::string format(const char* fmt, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "geoprim: cannot write '" << path << "'\n";
    throw Failure{kExitUsage};
  }
  out << text;
}

// Writes to `path`, or to standard output if it is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_file(path, text);
}

// ---------------------------------------------------------------- refine

struct RefineArgs {
  std::string mesh, geometry, out;
  int cycles = 1;
  double adaptive = 0.0;
  double aniso = 0.0;
};

int cmd_refine(const RefineArgs& a) {
  MeshPtr mesh = load_mesh(a.mesh);
  gp_registry* r = nullptr;
  if (a.geometry.empty())
    check(gp_registry_create(gp_mesh_spacedim(mesh.get()), &r), "creating registry");
  else
    check(gp_registry_load(a.geometry.c_str(), mesh.get(), &r), "loading geometry '" + a.geometry + "'");
  RegistryPtr registry(r, gp_registry_destroy);

  gp_refine_report* rep = nullptr;
  check(gp_refine(mesh.get(), registry.get(), a.cycles, a.adaptive, a.aniso, &rep), "refinement");
  ReportPtr report(rep, gp_refine_report_destroy);
  gp_mesh* fm = nullptr;
  check(gp_refine_report_mesh(report.get(), &fm), "refinement");
  MeshPtr fine(fm, gp_mesh_destroy);

  check(gp_mesh_write_vtk(fine.get(), (a.out + ".vtk").c_str(), "geoprim refine"), "writing VTK");
  check(gp_mesh_write_native(fine.get(), (a.out + ".mesh.json").c_str()), "writing mesh");
  write_file(a.out + ".report.json", gp_refine_report_json(report.get()));
  std::cout << "refined " << gp_mesh_n_active_cells(mesh.get()) << " -> " << gp_mesh_n_active_cells(fine.get())
            << " active cells; wrote " << a.out << ".{vtk,mesh.json,report.json}\n";
  return 0;
}

// ---------------------------------------------------------------- table1

int cmd_table1(int degree, int cycles, bool flat, const std::string& out) {
  if (cycles < 1) usage_error("table1: --cycles must be at least 1");
  std::vector<gp_table1_row> rows(static_cast<std::size_t>(cycles));
  check(gp_table1(degree, cycles, flat ? 1 : 0, rows.data()), "table1");
  std::string csv = "ndof,error_coarse,error_after_refine\n";
  for (const gp_table1_row& r : rows)
    csv += std::to_string(r.ndof) + "," + format("%.10e", r.error_coarse) + "," +
           format("%.10e", r.error_after_refine) + "\n";
  emit(out, csv);
  return 0;
}

// ---------------------------------------------------------------- annulus_svd

int cmd_annulus_svd(int degree, const std::string& interior, const std::string& out) {
  std::vector<gp_svd_sample> samples(GP_SVD_SAMPLES);
  check(gp_annulus_svd(degree, interior == "laplace" ? 1 : 0, samples.data()), "annulus_svd");
  std::string csv = "xi,eta,sigma_min,sigma_max\n";
  double lo = samples[0].sigma_min, hi = samples[0].sigma_max;
  for (const gp_svd_sample& s : samples) {
    csv += format("%.1f", s.xi) + "," + format("%.1f", s.eta) + "," + format("%.12e", s.sigma_min) + "," +
           format("%.12e", s.sigma_max) + "\n";
    lo = std::min(lo, s.sigma_min);
    hi = std::max(hi, s.sigma_max);
  }
  emit(out, csv);
  std::cerr << "sigma_min " << format("%.6f", lo) << ", sigma_max " << format("%.6f", hi) << ", ratio "
            << format("%.4f", hi / lo) << '\n';
  return 0;
}

// ---------------------------------------------------------------- graded

int cmd_graded(const std::string& chart, int cycles, const std::string& out) {
  gp_mesh* m = nullptr;
  check(gp_graded(chart == "sine" ? 1 : 0, cycles, &m), "graded");
  MeshPtr mesh(m, gp_mesh_destroy);
  check(gp_mesh_write_vtk(mesh.get(), out.c_str(), ("geoprim graded " + chart).c_str()), "writing VTK");
  std::cout << "wrote " << gp_mesh_n_active_cells(mesh.get()) << " cells to " << out << '\n';
  return 0;
}

// ---------------------------------------------------------------- generate

int cmd_generate(const std::string& mesh, int icosphere, const std::string& out) {
  if (mesh.empty() == (icosphere < 0)) usage_error("generate: give exactly one of --mesh and --icosphere");
  if (icosphere >= 0) {
    check(gp_write_icosphere_stl(icosphere, out.c_str()), "writing icosphere");
  } else {
    MeshPtr m = load_mesh("builtin:" + mesh);
    check(gp_mesh_write_native(m.get(), out.c_str()), "writing mesh");
  }
  std::cout << "wrote " << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geoprim: geometry oracles, refinement and mapping experiments"};
  app.require_subcommand(1);

  RefineArgs refine;
  auto* r = app.add_subcommand("refine", "Refine a mesh under a geometry description");
  r->add_option("--mesh", refine.mesh, "Native mesh file or builtin:NAME")->required();
  r->add_option("--geometry", refine.geometry, "Geometry document (all flat if omitted)");
  r->add_option("--cycles", refine.cycles, "Refinement cycles")->check(CLI::NonNegativeNumber);
  r->add_option("--adaptive", refine.adaptive, "Refine this fraction of cells by curvature indicator");
  r->add_option("--aniso", refine.aniso, "Aspect ratio threshold for one anisotropic pass");
  r->add_option("--out", refine.out, "Output prefix")->required();

  int t_degree = 4, t_cycles = 3;
  bool t_flat = false;
  std::string t_out;
  auto* t = app.add_subcommand("table1", "Interpolation/embedding experiment on a spherical shell");
  t->add_option("--degree", t_degree, "Polynomial degree (1..7)");
  t->add_option("--cycles", t_cycles, "Refinement cycles");
  t->add_flag("--flat", t_flat, "Flat control: no sphere oracles");
  t->add_option("--out", t_out, "CSV output (default: stdout)");

  int s_degree = 10;
  std::string s_interior = "transfinite", s_out;
  auto* s = app.add_subcommand("annulus_svd", "Jacobian singular values of a quarter annulus mapping");
  s->add_option("--degree", s_degree, "Mapping degree");
  s->add_option("--interior", s_interior, "Interior support points")
      ->check(CLI::IsMember({"transfinite", "laplace"}));
  s->add_option("--out", s_out, "CSV output (default: stdout)");

  int g_cycles = 3;
  std::string g_chart = "square", g_out;
  auto* g = app.add_subcommand("graded", "Refine the unit square under a graded chart");
  g->add_option("--chart", g_chart, "Chart")->check(CLI::IsMember({"square", "sine"}));
  g->add_option("--cycles", g_cycles, "Refinement cycles");
  g->add_option("--out", g_out, "VTK output")->required();

  std::string gen_mesh, gen_out;
  int gen_ico = -1;
  auto* gen = app.add_subcommand("generate", "Write a built-in mesh or an icosphere STL");
  gen->add_option("--mesh", gen_mesh, "Built-in mesh name");
  gen->add_option("--icosphere", gen_ico, "Icosphere subdivision levels");
  gen->add_option("--out", gen_out, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*r) return cmd_refine(refine);
    if (*t) return cmd_table1(t_degree, t_cycles, t_flat, t_out);
    if (*s) return cmd_annulus_svd(s_degree, s_interior, s_out);
    if (*g) return cmd_graded(g_chart, g_cycles, g_out);
    if (*gen) return cmd_generate(gen_mesh, gen_ico, gen_out);
  } catch (const Failure& f) {
    return f.exit_code;
  }
  return kExitUsage;
}
