// ------------------------------------------------------------------------
// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 by the geoprim authors
// ------------------------------------------------------------------------

#pragma once

#include <geoprim/manifold.hpp>

#include <span>

namespace geoprim {

/// Weighted average of scalar values on a circle of circumference `period`.
///
/// Every value is first shifted by a multiple of the period so that it lies
/// within half a period of values[0]; the weighted mean of the shifted values
/// is returned modulo the period, in [0, period). Two values exactly half a
/// period apart (within 1e-12) have no well-defined average and raise
/// HalfPeriodAmbiguity. Negative weights are accepted only if the shifted
/// values span less than half a period.
double periodic_average(std::span<const double> values,
                        std::span<const double> weights, double period);

/// An oracle defined by an explicit chart: a push-forward phi from a
/// Euclidean patch to the manifold, its inverse (the pull-back), and the
/// gradient of phi.
///
///   new_point(x_n, w_n) = phi( sum_n w_n phi^{-1}(x_n) )
///   tangent(x1, x2)     = grad phi(phi^{-1}(x1)) [phi^{-1}(x2) - phi^{-1}(x1)]
///
/// Chart directions with a nonzero period are averaged with
/// periodic_average().
class ChartManifold : public Manifold {
public:
  ChartManifold(int spacedim, int chartdim, Coords periodicity);

  int spacedim() const override { return spacedim_; }
  int chartdim() const { return chartdim_; }
  const Coords& periodicity() const { return periodicity_; }

  /// Throws PullBackFailure for points outside the chart's domain.
  virtual ChartPoint pull_back(const Point& x) const = 0;
  virtual Point push_forward(const ChartPoint& u) const = 0;
  /// spacedim x chartdim matrix of partial derivatives of push_forward.
  virtual SmallMatrix push_forward_gradient(const ChartPoint& u) const = 0;

  /// Chart-space difference u2 - u1 with periodic directions wrapped to the
  /// shorter way around.
  ChartPoint chart_difference(const ChartPoint& u1, const ChartPoint& u2) const;

protected:
  Point compute_new_point(const WeightedPoints& wp) const override;
  Vector compute_tangent(const Point& x1, const Point& x2) const override;

private:
  int spacedim_;
  int chartdim_;
  Coords periodicity_;
};

class IdentityChart final : public ChartManifold {
public:
  explicit IdentityChart(int dim);
  std::string name() const override { return "identity"; }
  ChartPoint pull_back(const Point& x) const override { return x; }
  Point push_forward(const ChartPoint& u) const override { return u; }
  SmallMatrix push_forward_gradient(const ChartPoint& u) const override;
};

/// Plane polar coordinates (r, theta) around `center`; theta has period 2 pi.
class PolarChart final : public ChartManifold {
public:
  explicit PolarChart(Point center);
  std::string name() const override { return "polar"; }
  ChartPoint pull_back(const Point& x) const override;
  Point push_forward(const ChartPoint& u) const override;
  SmallMatrix push_forward_gradient(const ChartPoint& u) const override;
  const Point& center() const { return center_; }

private:
  Point center_;
};

/// Spherical coordinates (r, theta, phi) around `center`: theta in [0, pi]
/// is measured from +z, phi is the periodic azimuth. Points on the z axis
/// through the center have no well-defined azimuth and fail to pull back.
class SphericalChart final : public ChartManifold {
public:
  explicit SphericalChart(Point center);
  std::string name() const override { return "spherical"; }
  ChartPoint pull_back(const Point& x) const override;
  Point push_forward(const ChartPoint& u) const override;
  SmallMatrix push_forward_gradient(const ChartPoint& u) const override;

private:
  Point center_;
};

/// Cylindrical coordinates (r, phi, z) around the line through `origin` with
/// direction `axis`; phi is periodic.
class CylindricalChart final : public ChartManifold {
public:
  CylindricalChart(Point origin, Vector axis);
  std::string name() const override { return "cylindrical"; }
  ChartPoint pull_back(const Point& x) const override;
  Point push_forward(const ChartPoint& u) const override;
  SmallMatrix push_forward_gradient(const ChartPoint& u) const override;

private:
  Point origin_;
  Eigen::Vector3d axis_, e1_, e2_;
};

/// (x, y) -> (x^2, y^2) on the unit square. Refinement under this chart
/// grades the mesh towards the x = 0 and y = 0 sides.
class GradedSquareChart final : public ChartManifold {
public:
  GradedSquareChart();
  std::string name() const override { return "graded_square"; }
  ChartPoint pull_back(const Point& x) const override;
  Point push_forward(const ChartPoint& u) const override;
  SmallMatrix push_forward_gradient(const ChartPoint& u) const override;
};

/// (x, y) -> (sin(pi (x - 1/2)) / 2 + 1/2, same for y). Grades towards all
/// four sides of the unit square.
class GradedSineChart final : public ChartManifold {
public:
  GradedSineChart();
  std::string name() const override { return "graded_sine"; }
  ChartPoint pull_back(const Point& x) const override;
  Point push_forward(const ChartPoint& u) const override;
  SmallMatrix push_forward_gradient(const ChartPoint& u) const override;
};

}  // namespace geoprim
