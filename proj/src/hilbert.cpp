#include "floatlab/hilbert.hpp"

#include <algorithm>

namespace floatlab {

namespace {

constexpr double kNormRelTol = 1e-11;

Point<2> perp(const Point<2>& v)
{
  return Point<2>(-v.y(), v.x());
}

// Finsler norm of the unit vector u without interiority checks
double unit_norm(const ConvexBody<2>& c, const Point<2>& x, const Point<2>& u)
{
  return 0.5 * (1.0 / c.ray_exit(x, u) + 1.0 / c.ray_exit(x, Point<2>(-u)));
}

// area of the Finsler ball, (1/2) int rho^2 with rho = 1 / norm; the integrand
// has period pi, so the half-period integral is the area itself
QuadResult ball_area(const ConvexBody<2>& c, const Point<2>& x)
{
  QuadResult r = integrate_periodic(
    [&](double t) {
      const double n = unit_norm(c, x, unit(t));
      return 1.0 / (n * n);
    },
    0.0, kPi, kNormRelTol, 64, 1 << 16, false);
  return r;
}

// area of the polar ball: (1/2) int (h^2 - h'^2) with h the Finsler norm
QuadResult polar_ball_area(const ConvexBody<2>& c, const Point<2>& x)
{
  const double step = 1e-4;
  return integrate_periodic(
    [&](double t) {
      const double h = unit_norm(c, x, unit(t));
      const double dh = (unit_norm(c, x, unit(t + step)) - unit_norm(c, x, unit(t - step))) / (2.0 * step);
      return h * h - dh * dh;
    },
    0.0, kPi, kNormRelTol, 64, 1 << 16, false);
}

bool degraded(const QuadResult& r)
{
  return r.error > 1e3 * kNormRelTol * std::abs(r.value);
}

}  // namespace

const char* to_string(VolumeFlavor f)
{
  return f == VolumeFlavor::Busemann ? "busemann" : "holmes-thompson";
}

VolumeFlavor parse_flavor(const std::string& name)
{
  if (name == "busemann")
    return VolumeFlavor::Busemann;
  if (name == "holmes-thompson" || name == "holmes_thompson")
    return VolumeFlavor::HolmesThompson;
  throw ConfigError("hilbert", "unknown volume flavor '" + name + "'");
}

HilbertGeometry::HilbertGeometry(BodyPtr<2> ambient, VolumeFlavor flavor)
  : ambient_(std::move(ambient)), flavor_(flavor)
{
  if (!ambient_)
    throw InvalidArgument("hilbert", "Hilbert geometry needs an ambient body");
  if (!ambient_->contains(Point<2>::Zero(), -1e-9))
    throw InvalidArgument("hilbert", "origin must be an interior point of the ambient body");
}

Chord HilbertGeometry::chord(const Point<2>& x, const Point<2>& v) const
{
  const double len = v.norm();
  if (!(len > 0))
    throw InvalidArgument("hilbert", "chord direction must be nonzero");
  if (!ambient_->contains(x, -1e-14))
    throw InvalidArgument("hilbert", "chord base point must be interior");
  const Point<2> u = v / len;
  return {ambient_->ray_exit(x, u), ambient_->ray_exit(x, Point<2>(-u))};
}

double HilbertGeometry::distance(const Point<2>& x, const Point<2>& y) const
{
  const Point<2> d = y - x;
  const double len = d.norm();
  if (!ambient_->contains(y, -1e-14))
    throw InvalidArgument("hilbert", "distance needs interior points");
  if (len == 0)
    return 0.0;
  const Chord c = chord(x, d);
  // p = x - t- u, q = x + t+ u; cross ratio (|py| |xq|) / (|px| |yq|)
  return 0.5 * (std::log1p(len / c.backward) - std::log1p(-len / c.forward));
}

double HilbertGeometry::finsler_norm(const Point<2>& x, const Point<2>& v) const
{
  const double len = v.norm();
  if (len == 0)
    return 0.0;
  const Chord c = chord(x, v);
  return 0.5 * (1.0 / c.forward + 1.0 / c.backward) * len;
}

FinslerBall HilbertGeometry::unit_ball(const Point<2>& x) const
{
  return FinslerBall(*this, x);
}

double HilbertGeometry::density(const Point<2>& x) const
{
  return density(x, flavor_);
}

double HilbertGeometry::density(const Point<2>& x, VolumeFlavor flavor) const
{
  if (!ambient_->contains(x, -1e-14))
    throw OutOfChart("hilbert", "density evaluated outside the ambient body");
  if (flavor == VolumeFlavor::Busemann)
    return kPi / ball_area(*ambient_, x).value;
  return polar_ball_area(*ambient_, x).value / kPi;
}

WeightFn<2> HilbertGeometry::density_weight() const
{
  const HilbertGeometry g = *this;
  return WeightFn<2>::from([g](const Point<2>& x) { return g.density(x); },
                           std::string("sigma_") + to_string(flavor_));
}

// ---------------------------------------------------------------------------

FinslerBall::FinslerBall(const HilbertGeometry& geom, const Point<2>& x) : geom_(geom), x_(x)
{
  if (!geom_.ambient().contains(x, -1e-14))
    throw InvalidArgument("hilbert", "Finsler ball base point must be interior");
}

std::string FinslerBall::describe() const
{
  return "finsler_ball(" + std::to_string(x_.x()) + "," + std::to_string(x_.y()) + ")";
}

double FinslerBall::argmax_direction(const Vec& u) const
{
  // minimize |v|_x / (u . v) over unit v in the open half circle around u
  const double phi = std::atan2(u.y(), u.x());
  const auto ratio = [&](double t) {
    const Vec v = unit(t);
    return -unit_norm(geom_.ambient(), x_, v) / u.normalized().dot(v);
  };
  const int n = 32;
  const double h = kPi / n;
  int best = 1;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int k = 1; k < n; ++k) {
    const double val = ratio(phi - 0.5 * kPi + k * h);
    if (val > best_val) {
      best_val = val;
      best = k;
    }
  }
  const double t0 = phi - 0.5 * kPi + (best - 1) * h;
  return golden_maximize(ratio, std::max(t0, phi - 0.5 * kPi + 1e-9), t0 + 2.0 * h, 1e-11);
}

double FinslerBall::support(const Vec& u) const
{
  const double len = u.norm();
  if (len == 0)
    return 0.0;
  const double t = argmax_direction(u);
  const Vec v = unit(t);
  return len * u.normalized().dot(v) / unit_norm(geom_.ambient(), x_, v);
}

Point<2> FinslerBall::support_point(const Vec& u) const
{
  const double t = argmax_direction(u);
  return radius(t) * unit(t);
}

double FinslerBall::support_radial(const Vec& u) const
{
  const double len = u.norm();
  if (len == 0)
    return 0.0;
  const Vec w = u / len;
  const auto height = [&](double t) { return w.dot(unit(t)) * radius(t); };
  const int n = 2048;
  int best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const double val = height(2.0 * kPi * k / n);
    if (val > best_val) {
      best_val = val;
      best = k;
    }
  }
  const double h = 2.0 * kPi / n;
  const double t = golden_maximize(height, (best - 1) * h, (best + 1) * h, 1e-12);
  return len * std::max(best_val, height(t));
}

BoundarySample<2> FinslerBall::boundary(const Param<2>& s) const
{
  const double t = s[0];
  const double e = 1e-5;
  const double r = radius(t);
  const double dr = (radius(t + e) - radius(t - e)) / (2.0 * e);
  BoundarySample<2> b;
  b.point = r * unit(t);
  const Vec tangent = dr * unit(t) + r * perp(unit(t));
  b.jacobian = tangent.norm();
  b.normal = Vec(tangent.y(), -tangent.x()) / b.jacobian;
  return b;
}

double FinslerBall::ray_exit(const Vec& p, const Vec& d) const
{
  if (p.norm() == 0)
    return radius(std::atan2(d.y(), d.x()));
  return ConvexBody<2>::ray_exit(p, d);
}

QuadResult FinslerBall::area() const
{
  return ball_area(geom_.ambient(), x_);
}

QuadResult FinslerBall::polar_area() const
{
  return polar_ball_area(geom_.ambient(), x_);
}

// ---------------------------------------------------------------------------

double hilbert_floating_area(const HilbertGeometry& geom, const ConvexBody<2>& body, const BodyQuadOptions& opts)
{
  return boundary_integral<2>(
           body,
           [&](const BoundarySample<2>& b) {
             return std::cbrt(b.curvature) * std::cbrt(geom.density(b.point));
           },
           true, opts)
    .value;
}

template <int Dim>
double centroaffine_surface_area(const ConvexBody<Dim>& body, const BodyQuadOptions& opts)
{
  return boundary_integral<Dim>(
           body,
           [](const BoundarySample<Dim>& b) {
             const double xn = b.point.dot(b.normal);
             if (!(xn > 0))
               throw InvalidArgument("hilbert", "centro-affine area needs the origin in the interior");
             return std::sqrt(b.curvature) * std::pow(xn, -(Dim - 1) / 2.0);
           },
           true, opts)
    .value;
}

OmegaReport omegacp_limit(BodyPtr<2> ambient, const std::vector<double>& lambdas)
{
  const HilbertGeometry geom(ambient, VolumeFlavor::Busemann);
  OmegaReport rep;
  rep.predicted = centroaffine_surface_area<2>(*ambient);
  std::vector<double> x, y;
  for (double lam : lambdas) {
    if (!(lam > 0 && lam < 1))
      throw InvalidArgument("hilbert", "scaling factors must lie in (0, 1)");
    const AffineImage<2> scaled(ambient, Eigen::Matrix2d::Identity() * lam);
    OmegaRow row;
    row.lambda = lam;
    row.floating_area = boundary_integral<2>(
                          scaled,
                          [&](const BoundarySample<2>& b) {
                            const QuadResult a = ball_area(*ambient, b.point);
                            rep.degraded = rep.degraded || degraded(a);
                            return std::cbrt(b.curvature) * std::cbrt(kPi / a.value);
                          },
                          true, {1e-9, 1 << 12})
                          .value;
    row.normalized = std::sqrt(2.0) * row.floating_area * std::sqrt(1.0 - lam);
    rep.rows.push_back(row);
    x.push_back(1.0 - lam);
    y.push_back(row.normalized);
  }
  if (x.size() >= 2)
    rep.extrapolated = fit_limit(x, y, 0.5).limit;
  else if (!y.empty())
    rep.extrapolated = y.back();
  rep.rel_dev = std::abs(rep.extrapolated - rep.predicted) / rep.predicted;
  return rep;
}

BerckCheck berck_check(const HilbertGeometry& geom, double s, double lambda)
{
  const BoundarySample<2> b = curvature(geom.ambient(), s);
  BerckCheck c;
  c.scaled_density = geom.density(Point<2>(lambda * b.point), VolumeFlavor::Busemann) * std::pow(1.0 - lambda, 1.5);
  c.limit = std::sqrt(b.curvature) / std::pow(2.0 * b.point.dot(b.normal), 1.5);
  c.rel_dev = std::abs(c.scaled_density - c.limit) / c.limit;
  return c;
}

template double centroaffine_surface_area<2>(const ConvexBody<2>&, const BodyQuadOptions&);
template double centroaffine_surface_area<3>(const ConvexBody<3>&, const BodyQuadOptions&);

}  // namespace floatlab
