// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace geoprim {

/// Failure categories shared by every oracle and mesh operation. The numeric
/// values are part of the C API (see geoprim.h) and must not be reordered.
enum class ErrorCode : int {
  InvalidArgument = 1,
  WeightSumViolation = 2,
  OracleFailure = 3,
  DegenerateInput = 4,
  PullBackFailure = 5,
  HalfPeriodAmbiguity = 6,
  AntipodalPoints = 7,
  TooManyPoints = 8,
  ParseError = 9,
  EmptySurface = 10,
  ProjectionMiss = 11,
  DegenerateConfiguration = 12,
  NewtonDivergence = 13,
  OutsideCell = 14,
  InvertedChild = 15,
  NotASurfaceMesh = 16,
  DegenerateCell = 17,
  DegenerateTangents = 18,
  SingularJacobian = 19,
  NoChildren = 20,
  IoError = 21,
  ConfigError = 22,
};

const char* to_string(ErrorCode code) noexcept;

class GeometryError : public std::runtime_error {
public:
  GeometryError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  GeometryError(ErrorCode code, const std::string& what, long entity)
      : std::runtime_error(what), code_(code), entity_(entity) {}

  ErrorCode code() const noexcept { return code_; }

  /// Index of the mesh entity (usually a cell) being processed when the
  /// failure happened, if known.
  std::optional<long> entity() const noexcept { return entity_; }

private:
  ErrorCode code_;
  std::optional<long> entity_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw GeometryError(code, what);
}

}  // namespace geoprim
