// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

// Geometry documents: which oracle describes which manifold id.
//
//   {
//     "format": "geoprim-geometry",
//     "version": 1,
//     "spacedim": 3,
//     "manifolds": [
//       {"id": 1, "kind": "spherical", "center": [0, 0, 0]},
//       {"id": 2, "kind": "stl_projection", "stl_path": "sphere.stl",
//        "strategy": "normal_to_mesh"},
//       {"id": 3, "kind": "transfinite"}
//     ]
//   }
//
// Kinds and their parameters:
//   flat
//   polar               center (2D)
//   spherical           center (3D)
//   cylindrical         origin, axis (3D)
//   sphere_projection   center
//   spherical_average   center
//   graded_square       (2D)
//   graded_sine         (2D)
//   stl_projection      stl_path (relative to the document), strategy
//                       (directional | normal_to_mesh | closest_point),
//                       direction for directional
//   transfinite         built from the coarse cells carrying the id, after
//                       all other kinds; needs a mesh
//
// Directions are normalized on load. Unlisted ids resolve to flat.

#pragma once

#include <geoprim/mesh.hpp>

#include <string>

namespace geoprim {

/// Throws ConfigError on unknown kinds, bad parameters or unreadable STL
/// files. `base_dir` resolves relative STL paths.
ManifoldRegistry load_geometry(const std::string& text, const std::string& base_dir,
                               const Mesh* mesh = nullptr);
ManifoldRegistry load_geometry_file(const std::string& path, const Mesh* mesh = nullptr);

}  // namespace geoprim
