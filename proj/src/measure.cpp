#include <algorithm>

#include "floatlab/bodies.hpp"

namespace floatlab {

namespace {

double wrap2pi(double a)
{
  a = std::fmod(a, 2.0 * kPi);
  return a < 0 ? a + 2.0 * kPi : a;
}

// Integral over a periodic parameter with optional breakpoints: trapezoid
// doubling when smooth, Gauss-Kronrod per piece otherwise.
QuadResult periodic_pieces(const std::function<double(double)>& g, std::vector<double> breaks,
                           const BodyQuadOptions& opts)
{
  if (breaks.empty())
    return integrate_periodic(g, 0.0, 2.0 * kPi, opts.rel_tol, 64, opts.max_nodes);
  for (double& b : breaks)
    b = wrap2pi(b);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  QuadResult total;
  QuadOptions q;
  q.rel_tol = opts.rel_tol;
  q.abs_tol = 1e-15;
  q.max_intervals = opts.max_nodes / 15;
  const std::size_t n = breaks.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = breaks[i];
    const double b = i + 1 < n ? breaks[i + 1] : breaks[0] + 2.0 * kPi;
    if (b - a <= 0)
      continue;
    const QuadResult r = integrate_adaptive(g, a, b, q);
    total.value += r.value;
    total.error += r.error;
    total.evaluations += r.evaluations;
  }
  return total;
}

// Nested Gauss (theta) times trapezoid (phi) on the sphere parameter square,
// doubled until two levels agree.
QuadResult sphere_param_integral(const std::function<double(double, double)>& g,
                                 const BodyQuadOptions& opts, int start = 16, int max_order = 256)
{
  QuadResult out;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int n = start; n <= max_order; n *= 2) {
    const GaussRule& rule = gauss_legendre(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double th = 0.5 * kPi * (rule.nodes[i] + 1.0);
      double row = 0.0;
      for (int j = 0; j < 2 * n; ++j)
        row += g(th, kPi * j / n);
      sum += rule.weights[i] * row * (kPi / n);
    }
    sum *= 0.5 * kPi;
    out.evaluations += 2L * n * n;
    if (!std::isnan(prev)) {
      out.value = sum;
      out.error = std::abs(sum - prev);
      if (out.error <= opts.rel_tol * std::abs(sum))
        return out;
    }
    prev = sum;
    out.value = sum;
  }
  return out;
}

// Integral of psi over the triangle (a, b, c) by a collapsed Gauss rule.
template <class W>
double triangle_integral(const W& psi, const Point<2>& a, const Point<2>& b, const Point<2>& c, int order)
{
  const GaussRule& g = gauss_legendre(order);
  const double area2 = std::abs((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
  double sum = 0.0;
  for (int i = 0; i < order; ++i) {
    const double u = 0.5 * (g.nodes[i] + 1.0);
    for (int j = 0; j < order; ++j) {
      const double v = 0.5 * (g.nodes[j] + 1.0);
      const Point<2> x = a + u * (b - a) + u * v * (c - b);
      sum += g.weights[i] * g.weights[j] * u * psi(x);
    }
  }
  return 0.25 * sum * area2;
}

template <class W>
double tetra_integral(const W& psi, const Point<3>& a, const Point<3>& b, const Point<3>& c,
                      const Point<3>& d, int order)
{
  const GaussRule& g = gauss_legendre(order);
  const double vol6 = std::abs((b - a).dot((c - a).cross(d - a)));
  double sum = 0.0;
  for (int i = 0; i < order; ++i) {
    const double u = 0.5 * (g.nodes[i] + 1.0);
    for (int j = 0; j < order; ++j) {
      const double v = 0.5 * (g.nodes[j] + 1.0);
      for (int k = 0; k < order; ++k) {
        const double w = 0.5 * (g.nodes[k] + 1.0);
        const Point<3> x = a + u * (b - a) + u * v * (c - b) + u * v * w * (d - c);
        sum += g.weights[i] * g.weights[j] * g.weights[k] * u * u * v * psi(x);
      }
    }
  }
  return 0.125 * sum * vol6;
}

}  // namespace

template <int Dim>
QuadResult boundary_integral(const ConvexBody<Dim>& body,
                             const std::function<double(const BoundarySample<Dim>&)>& f,
                             bool with_curvature, const BodyQuadOptions& opts)
{
  if constexpr (Dim == 2) {
    const auto g = [&](double s) {
      const BoundarySample<2> b =
        with_curvature ? curvature<2>(body, Param<2>::Constant(s)) : body.boundary(s);
      return f(b) * b.jacobian;
    };
    return periodic_pieces(g, body.kinks(), opts);
  } else {
    const auto g = [&](double th, double ph) {
      const Param<3> s(th, ph);
      const BoundarySample<3> b = with_curvature ? curvature<3>(body, s) : body.boundary(s);
      return f(b) * b.jacobian;
    };
    return sphere_param_integral(g, opts);
  }
}

template <int Dim>
QuadResult measure(const PolytopeApprox<Dim>& poly, const WeightFn<Dim>& psi, int order)
{
  QuadResult out;
  if (poly.degenerate || poly.vertices.size() < Dim + 1)
    return out;
  if (psi.is_constant()) {
    out.value = *psi.constant * poly.volume();
    return out;
  }
  const Point<Dim> c = poly.centroid();
  double lo = 0.0, hi = 0.0;
  if constexpr (Dim == 2) {
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& a = poly.vertices[i];
      const auto& b = poly.vertices[(i + 1) % n];
      lo += triangle_integral(psi, c, a, b, order);
      hi += triangle_integral(psi, c, a, b, order + 4);
    }
    out.evaluations = static_cast<long>(n) * (order * order + (order + 4) * (order + 4));
  } else {
    const int o = std::max(4, order / 2);
    for (const auto& f : poly.facets) {
      lo += tetra_integral(psi, c, poly.vertices[f[0]], poly.vertices[f[1]], poly.vertices[f[2]], o);
      hi += tetra_integral(psi, c, poly.vertices[f[0]], poly.vertices[f[1]], poly.vertices[f[2]], o + 2);
    }
  }
  out.value = hi;
  out.error = std::abs(hi - lo);
  return out;
}

template <int Dim>
QuadResult measure(const ConvexBody<Dim>& body, const WeightFn<Dim>& psi, const BodyQuadOptions& opts)
{
  if (const auto* p = dynamic_cast<const Polytope<Dim>*>(&body))
    return measure<Dim>(p->polytope(), psi);
  const Point<Dim> z = body.interior_point();
  QuadOptions inner;
  inner.rel_tol = opts.rel_tol * 1e-2;
  inner.abs_tol = 1e-300;
  // integral of psi r^{n-1} along the ray in direction u
  const auto radial = [&](const Point<Dim>& u) {
    const double rho = body.ray_exit(z, u);
    if (psi.is_constant())
      return *psi.constant * std::pow(rho, Dim) / Dim;
    return integrate_adaptive(
             [&](double r) { return psi(Point<Dim>(z + r * u)) * std::pow(r, Dim - 1); }, 0.0, rho, inner)
      .value;
  };
  if constexpr (Dim == 2) {
    std::vector<double> breaks;
    for (double k : body.kinks()) {
      const Point<2> r = body.boundary(k).point - z;
      breaks.push_back(std::atan2(r.y(), r.x()));
    }
    return periodic_pieces([&](double t) { return radial(unit(t)); }, breaks, opts);
  } else {
    return sphere_param_integral(
      [&](double th, double ph) {
        const double st = std::sin(th);
        return radial(Point<3>(st * std::cos(ph), st * std::sin(ph), std::cos(th))) * st;
      },
      opts);
  }
}

template <int Dim>
double affine_surface_area(const ConvexBody<Dim>& body, const BodyQuadOptions& opts)
{
  return boundary_integral<Dim>(
           body, [](const BoundarySample<Dim>& b) { return std::pow(b.curvature, 1.0 / (Dim + 1)); }, true,
           opts)
    .value;
}

template <int Dim>
double surface_area(const ConvexBody<Dim>& body, const BodyQuadOptions& opts)
{
  return boundary_integral<Dim>(body, [](const BoundarySample<Dim>&) { return 1.0; }, false, opts).value;
}

template QuadResult boundary_integral<2>(const ConvexBody<2>&, const std::function<double(const BoundarySample<2>&)>&,
                                         bool, const BodyQuadOptions&);
template QuadResult boundary_integral<3>(const ConvexBody<3>&, const std::function<double(const BoundarySample<3>&)>&,
                                         bool, const BodyQuadOptions&);
template QuadResult measure<2>(const PolytopeApprox<2>&, const WeightFn<2>&, int);
template QuadResult measure<3>(const PolytopeApprox<3>&, const WeightFn<3>&, int);
template QuadResult measure<2>(const ConvexBody<2>&, const WeightFn<2>&, const BodyQuadOptions&);
template QuadResult measure<3>(const ConvexBody<3>&, const WeightFn<3>&, const BodyQuadOptions&);
template double affine_surface_area<2>(const ConvexBody<2>&, const BodyQuadOptions&);
template double affine_surface_area<3>(const ConvexBody<3>&, const BodyQuadOptions&);
template double surface_area<2>(const ConvexBody<2>&, const BodyQuadOptions&);
template double surface_area<3>(const ConvexBody<3>&, const BodyQuadOptions&);

}  // namespace floatlab
