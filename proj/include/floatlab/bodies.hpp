#pragma once

#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "floatlab/hull.hpp"
#include "floatlab/numerics.hpp"
#include "floatlab/weights.hpp"

namespace floatlab {

enum class BodyKind { Ball, Ellipsoid, Polytope, CapProduct, CustomSmooth, Affine };

const char* to_string(BodyKind k);

/// Boundary parameter: polar-type angle s in [0, 2pi) for n = 2,
/// (theta, phi) in [0, pi] x [0, 2pi) for n = 3.
template <int Dim>
using Param = Eigen::Matrix<double, Dim - 1, 1>;

template <int Dim>
struct BoundarySample
{
  Point<Dim> point;
  Point<Dim> normal;  ///< outer unit normal
  /// Gauss-Kronecker curvature; NaN where it does not exist or where the
  /// body only offers a numerical estimate (see `curvature`).
  double curvature = std::numeric_limits<double>::quiet_NaN();
  /// Length (n = 2) or area (n = 3) element per unit parameter.
  double jacobian = 0.0;
};

/// Convex body in R^2 or R^3 given by a support function and a boundary
/// parametrization. Implementations are immutable.
template <int Dim>
class ConvexBody
{
public:
  using Vec = Point<Dim>;
  virtual ~ConvexBody() = default;

  virtual BodyKind kind() const = 0;
  virtual std::string describe() const = 0;

  /// Positively homogeneous support function; u need not be normalized.
  virtual double support(const Vec& u) const = 0;
  /// A point of K attaining the support value in direction u.
  virtual Vec support_point(const Vec& u) const = 0;
  virtual Vec interior_point() const = 0;
  virtual BoundarySample<Dim> boundary(const Param<Dim>& s) const = 0;

  virtual bool smooth() const { return true; }
  virtual bool exact_curvature() const { return true; }
  /// Boundary parameters of corners (n = 2 only).
  virtual std::vector<double> kinks() const { return {}; }

  /// Distance t > 0 with p + t d on the boundary, for p inside K and unit d.
  virtual double ray_exit(const Vec& p, const Vec& d) const;
  virtual bool contains(const Vec& x, double tol = 1e-12) const;

  /// Axis aligned box containing K.
  std::pair<Vec, Vec> bounding_box() const;

  BoundarySample<Dim> boundary(double s) const
    requires(Dim == 2)
  {
    return boundary(Param<Dim>::Constant(s));
  }
};

template <int Dim>
using BodyPtr = std::shared_ptr<const ConvexBody<Dim>>;

/// Axis-parallel ellipsoid (ellipse) with the given semiaxes and centre.
template <int Dim>
class Ellipsoid : public ConvexBody<Dim>
{
public:
  using Vec = Point<Dim>;
  Ellipsoid(const Vec& semiaxes, const Vec& center = Vec::Zero());

  BodyKind kind() const override;
  std::string describe() const override;
  double support(const Vec& u) const override;
  Vec support_point(const Vec& u) const override;
  Vec interior_point() const override { return center_; }
  BoundarySample<Dim> boundary(const Param<Dim>& s) const override;
  using ConvexBody<Dim>::boundary;
  double ray_exit(const Vec& p, const Vec& d) const override;
  bool contains(const Vec& x, double tol = 1e-12) const override;

  const Vec& semiaxes() const { return axes_; }
  const Vec& center() const { return center_; }

private:
  Vec axes_;
  Vec center_;
};

template <int Dim>
BodyPtr<Dim> make_ball(double radius, const Point<Dim>& center = Point<Dim>::Zero())
{
  return std::make_shared<Ellipsoid<Dim>>(Point<Dim>::Constant(radius), center);
}

/// Convex hull of finitely many points. The boundary is parametrized by the
/// polar angle about the centroid.
template <int Dim>
class Polytope : public ConvexBody<Dim>
{
public:
  using Vec = Point<Dim>;
  explicit Polytope(const std::vector<Vec>& points);

  BodyKind kind() const override { return BodyKind::Polytope; }
  std::string describe() const override;
  double support(const Vec& u) const override;
  Vec support_point(const Vec& u) const override;
  Vec interior_point() const override { return center_; }
  BoundarySample<Dim> boundary(const Param<Dim>& s) const override;
  using ConvexBody<Dim>::boundary;
  bool smooth() const override { return false; }
  std::vector<double> kinks() const override;
  double ray_exit(const Vec& p, const Vec& d) const override;
  bool contains(const Vec& x, double tol = 1e-12) const override;

  const PolytopeApprox<Dim>& polytope() const { return poly_; }

private:
  PolytopeApprox<Dim> poly_;
  Vec center_;
};

/// Planar body with trigonometric support function
/// h(theta) = sum_k a_k cos(k theta) + b_k sin(k theta); the boundary is
/// parametrized by the normal angle. With `numeric_curvature`, the exact
/// curvature is withheld and the numerical fit is used instead.
class SupportBody : public ConvexBody<2>
{
public:
  SupportBody(std::vector<double> a, std::vector<double> b, bool numeric_curvature = false);

  BodyKind kind() const override { return BodyKind::CustomSmooth; }
  std::string describe() const override;
  double support(const Vec& u) const override;
  Vec support_point(const Vec& u) const override;
  Vec interior_point() const override;
  BoundarySample<2> boundary(const Param<2>& s) const override;
  using ConvexBody<2>::boundary;
  bool exact_curvature() const override { return !numeric_; }

  /// h, h', h'' at angle theta.
  Eigen::Vector3d h(double theta) const;

private:
  std::vector<double> a_, b_;
  bool numeric_;
};

/// Image A K + b of a body under an invertible affine map.
template <int Dim>
class AffineImage : public ConvexBody<Dim>
{
public:
  using Vec = Point<Dim>;
  using Mat = Eigen::Matrix<double, Dim, Dim>;
  AffineImage(BodyPtr<Dim> base, const Mat& A, const Vec& b = Vec::Zero());

  BodyKind kind() const override { return BodyKind::Affine; }
  std::string describe() const override;
  double support(const Vec& u) const override;
  Vec support_point(const Vec& u) const override;
  Vec interior_point() const override;
  BoundarySample<Dim> boundary(const Param<Dim>& s) const override;
  using ConvexBody<Dim>::boundary;
  bool smooth() const override { return base_->smooth(); }
  bool exact_curvature() const override { return base_->exact_curvature(); }
  std::vector<double> kinks() const override { return base_->kinks(); }
  double ray_exit(const Vec& p, const Vec& d) const override;
  bool contains(const Vec& x, double tol = 1e-12) const override;

  const Mat& matrix() const { return A_; }
  const Vec& offset() const { return b_; }

private:
  BodyPtr<Dim> base_;
  Mat A_, Ainv_;
  Vec b_;
  double det_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

struct BodyQuadOptions
{
  double rel_tol = 1e-8;
  int max_nodes = 1 << 15;
};

/// Boundary sample carrying H_{n-1}: the exact value for built-in bodies, a
/// local quadratic fit otherwise. Throws CurvatureUnavailable at corners.
template <int Dim>
BoundarySample<Dim> curvature(const ConvexBody<Dim>& body, const Param<Dim>& s);

inline BoundarySample<2> curvature(const ConvexBody<2>& body, double s)
{
  return curvature<2>(body, Param<2>::Constant(s));
}

/// Least-squares quadratic fit of the boundary in the tangent chart around
/// boundary(s), Richardson-extrapolated over stencil radii h, h/2, h/4.
template <int Dim>
double numeric_curvature(const ConvexBody<Dim>& body, const Param<Dim>& s, double h = 1e-2);

/// Integral of f(sample) over the boundary with respect to surface measure.
/// Samples passed to f carry curvature when `with_curvature` is set.
template <int Dim>
QuadResult boundary_integral(const ConvexBody<Dim>& body,
                             const std::function<double(const BoundarySample<Dim>&)>& f,
                             bool with_curvature = true, const BodyQuadOptions& opts = {});

/// Integral of psi over the body.
template <int Dim>
QuadResult measure(const ConvexBody<Dim>& body, const WeightFn<Dim>& psi,
                   const BodyQuadOptions& opts = {});

/// Integral of psi over a polytope (fan or cone triangulation).
template <int Dim>
QuadResult measure(const PolytopeApprox<Dim>& poly, const WeightFn<Dim>& psi, int order = 12);

/// Largest radius of a ball inside K that touches the boundary at boundary(s).
template <int Dim>
double rolling_radius(const ConvexBody<Dim>& body, const Param<Dim>& s);

inline double rolling_radius(const ConvexBody<2>& body, double s)
{
  return rolling_radius<2>(body, Param<2>::Constant(s));
}

/// Integral of H^{1/(n+1)} over the boundary.
template <int Dim>
double affine_surface_area(const ConvexBody<Dim>& body, const BodyQuadOptions& opts = {});

/// Perimeter (n = 2) or surface area (n = 3).
template <int Dim>
double surface_area(const ConvexBody<Dim>& body, const BodyQuadOptions& opts = {});

/// Polar body about the origin, for the kinds where it is again a built-in
/// body (centred ellipsoids, polytopes).
template <int Dim>
BodyPtr<Dim> polar_body(const ConvexBody<Dim>& body);

/// Direction (cos s, sin s).
inline Point<2> unit(double s)
{
  return Point<2>(std::cos(s), std::sin(s));
}

}  // namespace floatlab
