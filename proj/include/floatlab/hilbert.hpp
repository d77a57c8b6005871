#pragma once

#include <vector>

#include "floatlab/bodies.hpp"

namespace floatlab {

enum class VolumeFlavor { Busemann, HolmesThompson };

const char* to_string(VolumeFlavor f);
/// Parses "busemann" or "holmes-thompson"; throws ConfigError otherwise.
VolumeFlavor parse_flavor(const std::string& name);

/// Distances t+ and t- with x + t+ v and x - t- v on the boundary, v a unit vector.
struct Chord
{
  double forward = 0.0;
  double backward = 0.0;
};

class FinslerBall;

/// Hilbert geometry on the interior of a planar convex body C with 0 in int C.
class HilbertGeometry
{
public:
  explicit HilbertGeometry(BodyPtr<2> ambient, VolumeFlavor flavor = VolumeFlavor::Busemann);

  const ConvexBody<2>& ambient() const { return *ambient_; }
  const BodyPtr<2>& ambient_ptr() const { return ambient_; }
  VolumeFlavor flavor() const { return flavor_; }
  HilbertGeometry with_flavor(VolumeFlavor f) const { return HilbertGeometry(ambient_, f); }

  /// Throws InvalidArgument when x is not interior or v vanishes.
  Chord chord(const Point<2>& x, const Point<2>& v) const;
  double distance(const Point<2>& x, const Point<2>& y) const;
  /// (1/t+ + 1/t-) |v| / 2
  double finsler_norm(const Point<2>& x, const Point<2>& v) const;
  FinslerBall unit_ball(const Point<2>& x) const;

  /// Volume density of the selected flavor.
  double density(const Point<2>& x) const;
  double density(const Point<2>& x, VolumeFlavor flavor) const;
  /// The density as a weight for the Euclidean engines (shares the ambient body).
  WeightFn<2> density_weight() const;

private:
  BodyPtr<2> ambient_;
  VolumeFlavor flavor_;
};

/// Unit ball of the Finsler norm at a point, the harmonic symmetrization of C.
class FinslerBall : public ConvexBody<2>
{
public:
  FinslerBall(const HilbertGeometry& geom, const Point<2>& x);

  BodyKind kind() const override { return BodyKind::CustomSmooth; }
  std::string describe() const override;
  /// Support value from the polar of the difference body of the polar.
  double support(const Vec& u) const override;
  Vec support_point(const Vec& u) const override;
  Vec interior_point() const override { return Vec::Zero(); }
  BoundarySample<2> boundary(const Param<2>& s) const override;
  using ConvexBody<2>::boundary;
  bool exact_curvature() const override { return false; }
  double ray_exit(const Vec& p, const Vec& d) const override;

  /// Support value from a dense radial sample of the boundary, refined locally.
  double support_radial(const Vec& u) const;
  /// Finsler norm of v at the base point.
  double norm(const Vec& v) const { return geom_.finsler_norm(x_, v); }
  double radius(double theta) const { return 1.0 / norm(unit(theta)); }

  /// Area of the ball, and of its polar, by periodic quadrature.
  QuadResult area() const;
  QuadResult polar_area() const;

  const Point<2>& base() const { return x_; }

private:
  double argmax_direction(const Vec& u) const;

  HilbertGeometry geom_;
  Point<2> x_;
};

/// Integral of H^{1/3} sigma_C^{1/3} over the boundary of K inside C.
double hilbert_floating_area(const HilbertGeometry& geom, const ConvexBody<2>& body,
                             const BodyQuadOptions& opts = {});

/// Integral of H^{1/2} (x . n)^{-(n-1)/2} over the boundary.
template <int Dim>
double centroaffine_surface_area(const ConvexBody<Dim>& body, const BodyQuadOptions& opts = {});

struct OmegaRow
{
  double lambda = 0.0;
  double floating_area = 0.0;  ///< Omega_C(lambda C)
  double normalized = 0.0;     ///< 2^{1/2} Omega_C(lambda C) (1 - lambda)^{1/2}
};

struct OmegaReport
{
  std::vector<OmegaRow> rows;
  double extrapolated = 0.0;  ///< intercept of a + b (1 - lambda)^{1/2}
  double predicted = 0.0;     ///< centro-affine surface area of C
  double rel_dev = 0.0;
  bool degraded = false;      ///< a density quadrature did not reach its tolerance
};

/// Busemann floating areas of lambda C as lambda increases to 1.
OmegaReport omegacp_limit(BodyPtr<2> ambient, const std::vector<double>& lambdas);

struct BerckCheck
{
  double scaled_density = 0.0;  ///< sigma_C(lambda x) (1 - lambda)^{3/2}
  double limit = 0.0;           ///< H^{1/2} / (2 x . n)^{3/2}
  double rel_dev = 0.0;
};

/// Boundary blow-up of the Busemann density at boundary(s) of C.
BerckCheck berck_check(const HilbertGeometry& geom, double s, double lambda);

}  // namespace floatlab
