#include "floatlab/spaces.hpp"

#include <algorithm>

namespace floatlab {

const char* to_string(Geometry g)
{
  return g == Geometry::Spherical ? "spherical" : "hyperbolic";
}

template <int Dim>
typename GeometryChart<Dim>::Chart GeometryChart<Dim>::project(const Model& x) const
{
  const double h = x[Dim];
  if (!(h > 0.0))
    throw OutOfChart("spaces", "point is not in the chart domain about the pole");
  return x.template head<Dim>() / h;
}

template <int Dim>
typename GeometryChart<Dim>::Model GeometryChart<Dim>::lift(const Chart& xbar) const
{
  const double q = 1.0 + sign() * xbar.squaredNorm();
  if (!(q > 0.0))
    throw OutOfChart("spaces", "chart point outside the unit ball");
  Model x;
  x.template head<Dim>() = xbar;
  x[Dim] = 1.0;
  return x / std::sqrt(q);
}

template <int Dim>
double GeometryChart<Dim>::density(const Chart& xbar) const
{
  const double q = 1.0 + sign() * xbar.squaredNorm();
  if (!(q > 0.0))
    throw OutOfChart("spaces", "density evaluated outside the unit ball");
  return std::pow(q, -(Dim + 1) / 2.0);
}

template <int Dim>
WeightFn<Dim> GeometryChart<Dim>::density_weight() const
{
  WeightFn<Dim> w = WeightFn<Dim>::radial(sign(), -(Dim + 1) / 2.0);
  w.name = std::string("psi_") + to_string(kind_);
  return w;
}

template <int Dim>
double GeometryChart<Dim>::distance(const Model& x, const Model& y) const
{
  const Model d = x - y;
  if (kind_ == Geometry::Spherical)
    return 2.0 * std::asin(std::min(1.0, 0.5 * d.norm()));
  // (x - y) o (x - y) = 4 sinh^2(d/2) on the hyperboloid
  const double q = d.template head<Dim>().squaredNorm() - d[Dim] * d[Dim];
  return 2.0 * std::asinh(0.5 * std::sqrt(std::max(0.0, q)));
}

template <int Dim>
double GeometryChart<Dim>::curvature_factor(const Chart& xbar, const Chart& normal) const
{
  const double s = sign();
  const double xn = xbar.dot(normal);
  return std::pow((1.0 + s * xbar.squaredNorm()) / (1.0 + s * xn * xn), (Dim + 1) / 2.0);
}

template <int Dim>
double GeometryChart<Dim>::boundary_factor(const Chart& xbar, const Chart& normal) const
{
  const double s = sign();
  const double xn = xbar.dot(normal);
  return std::pow(1.0 + s * xbar.squaredNorm(), -Dim / 2.0) * std::sqrt(1.0 + s * xn * xn);
}

// ---------------------------------------------------------------------------

template <int Dim>
ModelBody<Dim>::ModelBody(GeometryChart<Dim> chart, BodyPtr<Dim> image) : chart_(chart), image_(std::move(image))
{
  if (!image_)
    throw InvalidArgument("spaces", "model body needs a chart image");
  max_radius_ = 0.0;
  for (const auto& u : direction_grid<Dim>(Dim == 2 ? 720 : 2000, false))
    max_radius_ = std::max(max_radius_, image_->support(u));
  if (chart_.kind() == Geometry::Hyperbolic) {
    if (max_radius_ > kHyperbolicMargin)
      throw OutOfChart("spaces", "hyperbolic chart image reaches |x| = " + std::to_string(max_radius_));
  } else {
    if (1.0 / std::sqrt(1.0 + max_radius_ * max_radius_) < kSphericalMargin)
      throw OutOfChart("spaces", "spherical body too close to the equator");
  }
}

template <int Dim>
ModelBody<Dim> ModelBody<Dim>::ball(Geometry kind, double radius)
{
  if (!(radius > 0))
    throw InvalidArgument("spaces", "geodesic radius must be positive");
  if (kind == Geometry::Spherical && radius >= 0.5 * kPi)
    throw ImproperBody("spaces", "spherical cap of radius >= pi/2 is not in an open hemisphere");
  const double r = kind == Geometry::Spherical ? std::tan(radius) : std::tanh(radius);
  return ModelBody(GeometryChart<Dim>(kind), make_ball<Dim>(r));
}

template <int Dim>
QuadResult model_measure(const ModelBody<Dim>& body, const BodyQuadOptions& opts)
{
  return measure<Dim>(body.chart_body(), body.chart().density_weight(), opts);
}

template <int Dim>
QuadResult model_measure(const ModelBody<Dim>& body, const ConvexBody<Dim>& region, const BodyQuadOptions& opts)
{
  // the region must lie in the chart domain; its interior point is a cheap probe
  if (!body.chart().in_domain(region.interior_point()))
    throw OutOfChart("spaces", "region outside the chart domain");
  return measure<Dim>(region, body.chart().density_weight(), opts);
}

template <int Dim>
double model_curvature_transfer(const ModelBody<Dim>& body, const Param<Dim>& s)
{
  const BoundarySample<Dim> b = curvature<Dim>(body.chart_body(), s);
  return b.curvature * body.chart().curvature_factor(b.point, b.normal);
}

template <int Dim>
double model_surface_area(const ModelBody<Dim>& body, const BodyQuadOptions& opts)
{
  const GeometryChart<Dim>& c = body.chart();
  return boundary_integral<Dim>(
           body.chart_body(), [&](const BoundarySample<Dim>& b) { return c.boundary_factor(b.point, b.normal); },
           false, opts)
    .value;
}

template <int Dim>
double model_floating_area(const ModelBody<Dim>& body, const BodyQuadOptions& opts)
{
  const double s = body.chart().sign();
  return boundary_integral<Dim>(
           body.chart_body(),
           [&](const BoundarySample<Dim>& b) {
             return std::pow(b.curvature, 1.0 / (Dim + 1)) *
                    std::pow(1.0 + s * b.point.squaredNorm(), -(Dim - 1) / 2.0);
           },
           true, opts)
    .value;
}

template <int Dim>
FloatingLimitReport model_floating_body_limit(const ModelBody<Dim>& body, const std::vector<double>& deltas,
                                              const FloatingOptions& opts)
{
  const WeightFn<Dim> psi = body.chart().density_weight();
  FloatingLimitReport rep = check_floating_limit<Dim>(body.image(), psi, psi, deltas, opts);
  rep.predicted = floating_constant(Dim) * model_floating_area<Dim>(body);
  for (auto& row : rep.rows)
    row.predicted_limit = rep.predicted;
  rep.rel_dev = std::abs(rep.extrapolated - rep.predicted) / rep.predicted;
  return rep;
}

template <int Dim>
std::vector<RandomPolytopeRow> model_random_polytope(const ModelBody<Dim>& body, const std::vector<int>& ms,
                                                     int replicates, std::uint64_t seed, std::uint64_t stream)
{
  SamplerConfig<Dim> cfg;
  cfg.body = body.image();
  cfg.phi = body.chart().density_weight();
  cfg.replicates = replicates;
  cfg.seed = seed;
  cfg.stream = stream;
  return random_polytope_study<Dim>(cfg, cfg.phi, ms);
}

template class GeometryChart<2>;
template class GeometryChart<3>;
template class ModelBody<2>;
template class ModelBody<3>;
template QuadResult model_measure<2>(const ModelBody<2>&, const BodyQuadOptions&);
template QuadResult model_measure<3>(const ModelBody<3>&, const BodyQuadOptions&);
template QuadResult model_measure<2>(const ModelBody<2>&, const ConvexBody<2>&, const BodyQuadOptions&);
template QuadResult model_measure<3>(const ModelBody<3>&, const ConvexBody<3>&, const BodyQuadOptions&);
template double model_curvature_transfer<2>(const ModelBody<2>&, const Param<2>&);
template double model_curvature_transfer<3>(const ModelBody<3>&, const Param<3>&);
template double model_surface_area<2>(const ModelBody<2>&, const BodyQuadOptions&);
template double model_surface_area<3>(const ModelBody<3>&, const BodyQuadOptions&);
template double model_floating_area<2>(const ModelBody<2>&, const BodyQuadOptions&);
template double model_floating_area<3>(const ModelBody<3>&, const BodyQuadOptions&);
template FloatingLimitReport model_floating_body_limit<2>(const ModelBody<2>&, const std::vector<double>&, const FloatingOptions&);
template FloatingLimitReport model_floating_body_limit<3>(const ModelBody<3>&, const std::vector<double>&, const FloatingOptions&);
template std::vector<RandomPolytopeRow> model_random_polytope<2>(const ModelBody<2>&, const std::vector<int>&, int, std::uint64_t, std::uint64_t);
template std::vector<RandomPolytopeRow> model_random_polytope<3>(const ModelBody<3>&, const std::vector<int>&, int, std::uint64_t, std::uint64_t);

}  // namespace floatlab
