#include "floatlab/floating.hpp"

#include <algorithm>

namespace floatlab {

namespace {

double wrap2pi(double a)
{
  a = std::fmod(a, 2.0 * kPi);
  return a < 0 ? a + 2.0 * kPi : a;
}

// Geometry of the slices {v.x = s} of K for a fixed direction v.
template <int Dim>
struct Slicer
{
  const ConvexBody<Dim>& body;
  const WeightFn<Dim>& phi;
  const FloatingOptions& opts;
  Point<Dim> v, z, top, bottom;
  double h_top, h_bottom, zv;  // support values in v and -v, and v.z
  std::array<Point<Dim>, Dim - 1> frame;
  double abs_floor = 0.0;  // rounding floor of the cap integral

  Slicer(const ConvexBody<Dim>& b, const WeightFn<Dim>& w, const Point<Dim>& dir, const FloatingOptions& o)
    : body(b), phi(w), opts(o), v(dir.normalized())
  {
    z = body.interior_point();
    top = body.support_point(v);
    bottom = body.support_point(Point<Dim>(-v));
    h_top = body.support(v);
    h_bottom = body.support(Point<Dim>(-v));
    zv = v.dot(z);
    abs_floor = 1e-17 * std::pow(h_top + h_bottom, Dim);
    if constexpr (Dim == 2) {
      frame[0] = Point<2>(-v.y(), v.x());
    } else {
      frame[0] = v.unitOrthogonal();
      frame[1] = v.cross(frame[0]);
    }
  }

  // a point of the slice, on the segment from z to the support point
  Point<Dim> anchor(double s) const
  {
    if (s >= zv) {
      const double den = v.dot(top) - zv;
      const double lam = den > 0 ? std::clamp((s - zv) / den, 0.0, 1.0) : 0.0;
      return z + lam * (top - z);
    }
    const double den = zv - v.dot(bottom);
    const double lam = den > 0 ? std::clamp((zv - s) / den, 0.0, 1.0) : 0.0;
    return z + lam * (bottom - z);
  }

  // (n-1)-dimensional phi-measure of the slice at level s
  double slice(double s) const
  {
    const Point<Dim> c = anchor(s);
    if constexpr (Dim == 2) {
      const Point<2>& w = frame[0];
      const double a = std::max(0.0, body.ray_exit(c, w));
      const double b = std::max(0.0, body.ray_exit(c, Point<2>(-w)));
      if (phi.is_constant())
        return *phi.constant * (a + b);
      return integrate_gauss([&](double r) { return phi(Point<2>(c + r * w)); }, -b, a, opts.chord_order);
    } else {
      const auto ring = [&](double alpha) {
        const Point<3> w = std::cos(alpha) * frame[0] + std::sin(alpha) * frame[1];
        const double rho = std::max(0.0, body.ray_exit(c, w));
        if (phi.is_constant())
          return *phi.constant * 0.5 * rho * rho;
        return integrate_gauss([&](double r) { return phi(Point<3>(c + r * w)) * r; }, 0.0, rho,
                               opts.chord_order / 2);
      };
      return integrate_periodic(ring, 0.0, 2.0 * kPi, 1e-10, 32, 4096, false).value;
    }
  }

  // measure of {v.x >= h_top - tau_max^2}, integrated in tau = sqrt(h_top - s)
  double upper(double tau_max) const
  {
    if (tau_max <= 0)
      return 0.0;
    QuadOptions q;
    q.rel_tol = opts.cap_rel_tol;
    q.abs_tol = abs_floor;
    q.max_intervals = 400;
    q.throw_on_failure = false;
    return integrate_adaptive([&](double tau) { return 2.0 * tau * slice(h_top - tau * tau); }, 0.0,
                              tau_max, q)
      .value;
  }

  // measure of {v.x <= -h_bottom + sig_max^2}
  double lower(double sig_max) const
  {
    if (sig_max <= 0)
      return 0.0;
    QuadOptions q;
    q.rel_tol = opts.cap_rel_tol;
    q.abs_tol = abs_floor;
    q.max_intervals = 400;
    q.throw_on_failure = false;
    return integrate_adaptive([&](double sig) { return 2.0 * sig * slice(-h_bottom + sig * sig); }, 0.0,
                              sig_max, q)
      .value;
  }

  double cap(double t) const
  {
    if (t >= h_top)
      return 0.0;
    if (t >= zv)
      return upper(std::sqrt(h_top - t));
    const double full_upper = upper(std::sqrt(std::max(0.0, h_top - zv)));
    const double below = lower(std::sqrt(std::max(0.0, zv + h_bottom)));
    const double excluded = t <= -h_bottom ? 0.0 : lower(std::sqrt(t + h_bottom));
    return full_upper + below - excluded;
  }
};

template <int Dim>
double offset_for(const Slicer<Dim>& sl, double delta, const FloatingOptions& opts)
{
  if (!(delta > 0))
    throw InvalidArgument("floating", "floating_offset: delta must be positive");
  const double width = sl.h_top + sl.h_bottom;
  const double tau_max = std::sqrt(width);
  // cap measure as a function of tau = sqrt(h - t) is increasing from 0
  const double tau_tol = opts.offset_tol / (2.0 * tau_max + 1.0);
  const double tau = brent([&](double tau) { return sl.cap(sl.h_top - tau * tau) - delta; }, 0.0, tau_max,
                           tau_tol);
  return sl.h_top - tau * tau;
}

}  // namespace

template <int Dim>
double cap_measure(const ConvexBody<Dim>& body, const WeightFn<Dim>& phi, const Point<Dim>& v, double t,
                   const FloatingOptions& opts)
{
  Slicer<Dim> sl(body, phi, v, opts);
  return sl.cap(t);
}

template <int Dim>
double floating_offset(const ConvexBody<Dim>& body, const WeightFn<Dim>& phi, double delta,
                       const Point<Dim>& v, const FloatingOptions& opts)
{
  Slicer<Dim> sl(body, phi, v, opts);
  return offset_for(sl, delta, opts);
}

// ---------------------------------------------------------------------------

template <int Dim>
QuadResult deficit_via_cone_formula(const ConvexBody<Dim>& body, const WeightFn<Dim>& psi,
                                    const PolytopeApprox<Dim>& inner, const Point<Dim>& z)
{
  if (!inner.contains(z, -1e-14))
    throw InvalidArgument("floating", "deficit_via_cone_formula: z must be interior to the inner polytope");
  // With the origin at z, n.(x |x|^{-n}) dx is the solid-angle element, so the
  // boundary disintegration becomes an integral over directions u of the
  // radial shell between the two bodies.
  const auto shell = [&](const Point<Dim>& u, double rho_l, int order) {
    const double rho_k = body.ray_exit(z, u);
    const double r0 = std::min(rho_l, rho_k);
    if (psi.is_constant())
      return *psi.constant * (std::pow(rho_k, Dim) - std::pow(r0, Dim)) / Dim;
    return integrate_gauss([&](double r) { return psi(Point<Dim>(z + r * u)) * std::pow(r, Dim - 1); }, r0,
                           rho_k, order);
  };
  QuadResult out;
  if constexpr (Dim == 2) {
    const int n = static_cast<int>(inner.vertices.size());
    std::vector<double> vert_angle(n);
    for (int i = 0; i < n; ++i) {
      const Point<2> r = inner.vertices[i] - z;
      vert_angle[i] = std::atan2(r.y(), r.x());
    }
    std::vector<double> kink_angle;
    for (double k : body.kinks()) {
      const Point<2> r = body.boundary(k).point - z;
      kink_angle.push_back(wrap2pi(std::atan2(r.y(), r.x())));
    }
    std::sort(kink_angle.begin(), kink_angle.end());
    double lo_sum = 0.0, hi_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const Point<2>& p = inner.vertices[i];
      const Point<2>& q = inner.vertices[(i + 1) % n];
      const Point<2> e = q - p;
      const Point<2> nrm(e.y(), -e.x());
      const double off = nrm.dot(p - z);
      double a = vert_angle[i];
      double b = vert_angle[(i + 1) % n];
      while (b <= a)
        b += 2.0 * kPi;
      std::vector<double> cuts{a};
      for (double k : kink_angle) {
        double kk = k;
        while (kk <= a)
          kk += 2.0 * kPi;
        if (kk < b)
          cuts.push_back(kk);
      }
      std::sort(cuts.begin(), cuts.end());
      cuts.push_back(b);
      for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const auto g = [&](double th, int order) {
          const Point<2> u = unit(th);
          const double rho_l = off / nrm.dot(u);
          return shell(u, rho_l, order);
        };
        lo_sum += integrate_gauss([&](double th) { return g(th, 8); }, cuts[c], cuts[c + 1], 8);
        hi_sum += integrate_gauss([&](double th) { return g(th, 12); }, cuts[c], cuts[c + 1], 12);
      }
    }
    out.value = hi_sum;
    out.error = std::abs(hi_sum - lo_sum);
  } else {
    // no breakpoints on the sphere: fixed tensor rule at two resolutions
    double est[2];
    for (int level = 0; level < 2; ++level) {
      const int N = level == 0 ? 96 : 144;
      const GaussRule& g = gauss_legendre(N);
      double sum = 0.0;
      for (int i = 0; i < N; ++i) {
        const double th = 0.5 * kPi * (g.nodes[i] + 1.0);
        const double st = std::sin(th);
        double row = 0.0;
        for (int j = 0; j < 2 * N; ++j) {
          const double ph = kPi * j / N;
          const Point<3> u(st * std::cos(ph), st * std::sin(ph), std::cos(th));
          double rho_l = std::numeric_limits<double>::infinity();
          for (const auto& h : inner.halfspaces) {
            const double nu = h.normal.dot(u);
            if (nu > 0)
              rho_l = std::min(rho_l, h.slack(z) / nu);
          }
          row += shell(u, rho_l, 8);
        }
        sum += g.weights[i] * st * row * (kPi / N);
      }
      est[level] = 0.5 * kPi * sum;
    }
    out.value = est[1];
    out.error = std::abs(est[1] - est[0]);
  }
  return out;
}

template <int Dim>
FloatingBodyResult<Dim> weighted_floating_body(const FloatingSpec<Dim>& spec, const FloatingOptions& opts)
{
  if (!spec.body)
    throw InvalidArgument("floating", "weighted_floating_body: no body");
  const ConvexBody<Dim>& body = *spec.body;
  BodyQuadOptions tight;
  tight.rel_tol = 1e-12;
  const double psi_k = measure<Dim>(body, spec.psi, tight).value;

  FloatingBodyResult<Dim> res;
  std::vector<Point<Dim>> dirs;
  std::vector<double> offs;
  double prev = std::numeric_limits<double>::quiet_NaN();
  const bool fixed = !spec.directions.empty();
  int N = fixed ? static_cast<int>(spec.directions.size()) : opts.initial_directions;
  const int max_dirs = Dim == 2 ? opts.max_directions_2d : opts.max_directions_3d;

  while (true) {
    std::vector<Point<Dim>> new_dirs;
    std::vector<double> new_offs;
    if (fixed) {
      new_dirs = spec.directions;
      new_offs.assign(new_dirs.size(), 0.0);
      parallel_for(new_dirs.size(), [&](std::size_t i) {
        new_offs[i] = floating_offset<Dim>(body, spec.phi, spec.delta, new_dirs[i], opts);
      });
    } else if constexpr (Dim == 2) {
      // nested uniform angles: the even indices repeat the previous level
      new_dirs = direction_grid<2>(N, true);
      new_offs.assign(N, 0.0);
      const bool reuse = !offs.empty() && static_cast<int>(offs.size()) * 2 == N;
      parallel_for(static_cast<std::size_t>(N), [&](std::size_t i) {
        if (reuse && i % 2 == 0)
          new_offs[i] = offs[i / 2];
        else
          new_offs[i] = floating_offset<Dim>(body, spec.phi, spec.delta, new_dirs[i], opts);
      });
    } else {
      new_dirs = direction_grid<Dim>(N, true);
      new_offs.assign(new_dirs.size(), 0.0);
      parallel_for(new_dirs.size(), [&](std::size_t i) {
        new_offs[i] = floating_offset<Dim>(body, spec.phi, spec.delta, new_dirs[i], opts);
      });
    }
    dirs = std::move(new_dirs);
    offs = std::move(new_offs);

    std::vector<Halfspace<Dim>> hs(dirs.size());
    for (std::size_t i = 0; i < dirs.size(); ++i)
      hs[i] = {dirs[i], offs[i]};
    PolytopeApprox<Dim> inner;
    try {
      inner = halfspace_intersection<Dim>(hs, body.interior_point());
    } catch (const EmptyIntersection&) {
      throw EmptyFloatingBody("floating", "weighted_floating_body: floating body is empty for this delta");
    } catch (const Unbounded&) {
      throw EmptyFloatingBody("floating", "weighted_floating_body: halfspaces do not bound a body");
    }
    if (inner.degenerate || inner.volume() <= 0)
      throw EmptyFloatingBody("floating", "weighted_floating_body: floating body has no interior");

    const Point<Dim> zc = inner.centroid();
    const QuadResult cone = deficit_via_cone_formula<Dim>(body, spec.psi, inner, zc);
    bool inside = true;
    for (const auto& v : inner.vertices)
      if (!body.contains(v, 1e-9)) {
        inside = false;
        break;
      }
    res.directions = dirs;
    res.offsets = offs;
    res.inner = std::move(inner);
    res.deficit = cone.value;
    res.deficit_direct = psi_k - measure<Dim>(res.inner, spec.psi).value;
    res.directions_used = static_cast<int>(dirs.size());
    const double change = std::isnan(prev) ? std::numeric_limits<double>::infinity() : std::abs(cone.value - prev);
    res.deficit_error = cone.error + (std::isinf(change) ? 0.0 : change);
    if (fixed) {
      res.converged = inside;
      break;
    }
    if (change <= opts.refine_tol * std::abs(cone.value) && inside) {
      res.converged = true;
      break;
    }
    if (2 * N > max_dirs) {
      res.converged = false;
      break;
    }
    prev = cone.value;
    N *= 2;
  }
  res.normalized = res.deficit / std::pow(spec.delta, 2.0 / (Dim + 1));
  return res;
}

template <int Dim>
double predicted_floating_limit(const ConvexBody<Dim>& body, const WeightFn<Dim>& phi, const WeightFn<Dim>& psi,
                                const BodyQuadOptions& opts)
{
  const double e1 = 1.0 / (Dim + 1), e2 = -2.0 / (Dim + 1);
  const double integral = boundary_integral<Dim>(
                            body,
                            [&](const BoundarySample<Dim>& b) {
                              return std::pow(b.curvature, e1) * std::pow(phi(b.point), e2) * psi(b.point);
                            },
                            true, opts)
                            .value;
  return floating_constant(Dim) * integral;
}

template <int Dim>
FloatingLimitReport check_floating_limit(BodyPtr<Dim> body, const WeightFn<Dim>& phi, const WeightFn<Dim>& psi,
                                         const std::vector<double>& deltas, const FloatingOptions& opts)
{
  FloatingLimitReport rep;
  rep.predicted = predicted_floating_limit<Dim>(*body, phi, psi);
  std::vector<double> x, y;
  for (double d : deltas) {
    FloatingSpec<Dim> spec;
    spec.body = body;
    spec.phi = phi;
    spec.psi = psi;
    spec.delta = d;
    const FloatingBodyResult<Dim> r = weighted_floating_body<Dim>(spec, opts);
    FloatingRow row;
    row.delta = d;
    row.deficit = r.deficit;
    row.normalized = r.normalized;
    row.predicted_limit = rep.predicted;
    row.directions_used = r.directions_used;
    row.quadrature_err = r.deficit_error;
    row.deficit_direct = r.deficit_direct;
    row.converged = r.converged;
    rep.rows.push_back(row);
    x.push_back(d);
    y.push_back(r.normalized);
  }
  if (x.size() >= 2)
    rep.extrapolated = fit_limit(x, y, 1.0 / (Dim + 1)).limit;
  else if (!y.empty())
    rep.extrapolated = y.back();
  rep.rel_dev = std::abs(rep.extrapolated - rep.predicted) / std::abs(rep.predicted);
  return rep;
}

template double cap_measure<2>(const ConvexBody<2>&, const WeightFn<2>&, const Point<2>&, double, const FloatingOptions&);
template double cap_measure<3>(const ConvexBody<3>&, const WeightFn<3>&, const Point<3>&, double, const FloatingOptions&);
template double floating_offset<2>(const ConvexBody<2>&, const WeightFn<2>&, double, const Point<2>&, const FloatingOptions&);
template double floating_offset<3>(const ConvexBody<3>&, const WeightFn<3>&, double, const Point<3>&, const FloatingOptions&);
template FloatingBodyResult<2> weighted_floating_body<2>(const FloatingSpec<2>&, const FloatingOptions&);
template FloatingBodyResult<3> weighted_floating_body<3>(const FloatingSpec<3>&, const FloatingOptions&);
template QuadResult deficit_via_cone_formula<2>(const ConvexBody<2>&, const WeightFn<2>&, const PolytopeApprox<2>&, const Point<2>&);
template QuadResult deficit_via_cone_formula<3>(const ConvexBody<3>&, const WeightFn<3>&, const PolytopeApprox<3>&, const Point<3>&);
template double predicted_floating_limit<2>(const ConvexBody<2>&, const WeightFn<2>&, const WeightFn<2>&, const BodyQuadOptions&);
template double predicted_floating_limit<3>(const ConvexBody<3>&, const WeightFn<3>&, const WeightFn<3>&, const BodyQuadOptions&);
template FloatingLimitReport check_floating_limit<2>(BodyPtr<2>, const WeightFn<2>&, const WeightFn<2>&, const std::vector<double>&, const FloatingOptions&);
template FloatingLimitReport check_floating_limit<3>(BodyPtr<3>, const WeightFn<3>&, const WeightFn<3>&, const std::vector<double>&, const FloatingOptions&);

}  // namespace floatlab
