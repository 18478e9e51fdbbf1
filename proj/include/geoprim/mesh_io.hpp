// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

// Native mesh documents and legacy VTK output.
//
// The native format is a JSON object:
//
//   {
//     "format": "geoprim-mesh",
//     "version": 1,
//     "dim": 2,
//     "spacedim": 3,
//     "vertices": [[x, y, z], ...],
//     "cells": [[v0, v1, v2, v3], ...],          // lexicographic order
//     "cell_manifold_ids": [0, ...],
//     "edges": [{"vertices": [a, b], "manifold_id": 1}, ...],
//     "faces": [{"vertices": [a, b, c, d], "manifold_id": 2}, ...]
//   }
//
// Only the active cells are stored, as coarse cells. "edges" and "faces"
// hold the explicitly set manifold ids; they are optional on input.

#pragma once

#include <geoprim/mesh.hpp>

#include <string>
#include <utility>
#include <vector>

namespace geoprim {

std::string write_native_mesh(const Mesh& mesh);
/// Throws ParseError on malformed documents.
Mesh read_native_mesh(const std::string& text);

/// A named per-active-cell scalar for VTK output.
struct CellField {
  std::string name;
  std::vector<double> values;
};

/// Legacy ASCII unstructured grid of the active cells (types 9 and 12),
/// with manifold id and level as cell data plus any extra fields.
std::string write_vtk(const Mesh& mesh, const std::string& title,
                      const std::vector<CellField>& fields = {});

/// Whole-file helpers; IoError if the file cannot be opened.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace geoprim
