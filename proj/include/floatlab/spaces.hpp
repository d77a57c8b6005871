#pragma once

#include "floatlab/floating.hpp"
#include "floatlab/stochastic.hpp"

namespace floatlab {

enum class Geometry { Spherical, Hyperbolic };

const char* to_string(Geometry g);

/// Gnomonic chart of S^n (upper hemisphere) or of the hyperboloid H^n
/// about e_{n+1}. Model points live in R^{n+1}, chart points in R^n.
template <int Dim>
class GeometryChart
{
public:
  using Chart = Point<Dim>;
  using Model = Point<Dim + 1>;

  explicit GeometryChart(Geometry kind) : kind_(kind) {}

  Geometry kind() const { return kind_; }
  /// +1 spherical, -1 hyperbolic
  double sign() const { return kind_ == Geometry::Spherical ? 1.0 : -1.0; }

  /// x_bar = (x_1, ..., x_n) / x_{n+1}. Throws OutOfChart off the upper
  /// hemisphere or off the upper sheet.
  Chart project(const Model& x) const;
  /// Inverse of `project`; throws OutOfChart outside the unit ball (hyperbolic).
  Model lift(const Chart& xbar) const;

  /// Density (1 + s |x|^2)^{-(n+1)/2} of the pushforward of volume.
  double density(const Chart& xbar) const;
  WeightFn<Dim> density_weight() const;

  /// Geodesic distance of model points.
  double distance(const Model& x, const Model& y) const;
  double chart_distance(const Chart& a, const Chart& b) const { return distance(lift(a), lift(b)); }

  /// Ratio of the intrinsic Gauss-Kronecker curvature to the Euclidean one
  /// at a chart boundary point with unit normal n.
  double curvature_factor(const Chart& xbar, const Chart& normal) const;
  /// Intrinsic boundary element per unit Euclidean boundary element.
  double boundary_factor(const Chart& xbar, const Chart& normal) const;

  bool in_domain(const Chart& xbar) const { return kind_ == Geometry::Spherical || xbar.squaredNorm() < 1.0; }

private:
  Geometry kind_;
};

/// Intrinsic body held as its chart image K_bar.
template <int Dim>
class ModelBody
{
public:
  /// Margins: |x_bar| <= 0.99 (hyperbolic), x.e_{n+1} >= 0.05 (spherical).
  static constexpr double kHyperbolicMargin = 0.99;
  static constexpr double kSphericalMargin = 0.05;

  /// Throws OutOfChart when the image violates the margin.
  ModelBody(GeometryChart<Dim> chart, BodyPtr<Dim> image);

  /// Geodesic ball (cap) of radius r about e_{n+1}. Throws ImproperBody for
  /// spherical radii >= pi/2.
  static ModelBody ball(Geometry kind, double radius);

  const GeometryChart<Dim>& chart() const { return chart_; }
  const BodyPtr<Dim>& image() const { return image_; }
  const ConvexBody<Dim>& chart_body() const { return *image_; }
  double max_radius() const { return max_radius_; }

private:
  GeometryChart<Dim> chart_;
  BodyPtr<Dim> image_;
  double max_radius_;
};

/// Intrinsic volume of K_bar, or of a region inside it.
template <int Dim>
QuadResult model_measure(const ModelBody<Dim>& body, const BodyQuadOptions& opts = {});
template <int Dim>
QuadResult model_measure(const ModelBody<Dim>& body, const ConvexBody<Dim>& region, const BodyQuadOptions& opts = {});

/// Intrinsic curvature at boundary(s) of the chart image.
template <int Dim>
double model_curvature_transfer(const ModelBody<Dim>& body, const Param<Dim>& s);

/// Intrinsic length (n = 2) or area (n = 3) of the boundary.
template <int Dim>
double model_surface_area(const ModelBody<Dim>& body, const BodyQuadOptions& opts = {});

/// Integral of H^{1/(n+1)} (1 + s|x|^2)^{-(n-1)/2} over the chart boundary,
/// i.e. the intrinsic floating area.
template <int Dim>
double model_floating_area(const ModelBody<Dim>& body, const BodyQuadOptions& opts = {});

/// Floating-body deficits with phi = psi = the chart density; the predicted
/// limit is alpha_n times the floating area.
template <int Dim>
FloatingLimitReport model_floating_body_limit(const ModelBody<Dim>& body, const std::vector<double>& deltas,
                                              const FloatingOptions& opts = {});

/// Random polytopes from the normalized chart density, deficits measured in
/// intrinsic volume.
template <int Dim>
std::vector<RandomPolytopeRow> model_random_polytope(const ModelBody<Dim>& body, const std::vector<int>& ms,
                                                     int replicates, std::uint64_t seed, std::uint64_t stream = 0);

}  // namespace floatlab
