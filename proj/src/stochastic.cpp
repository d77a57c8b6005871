#include "floatlab/stochastic.hpp"

#include <algorithm>

namespace floatlab {

namespace {

enum Purpose : std::uint64_t { kPoints = 1, kHalfspaces = 2 };

std::uint64_t purpose(std::uint64_t stream, Purpose p)
{
  return stream * 16 + p;
}

template <int Dim>
void check_config(const SamplerConfig<Dim>& cfg, int m)
{
  if (!cfg.body)
    throw InvalidArgument("stochastic", "sampler config has no body");
  if (m < Dim + 1)
    throw InvalidArgument("stochastic", "need at least n+1 points");
  if (cfg.replicates < 1)
    throw InvalidArgument("stochastic", "replicates must be positive");
}

template <int Dim>
double boundary_power_integral(const ConvexBody<Dim>& body, double curvature_power,
                               const std::function<double(const Point<Dim>&)>& g)
{
  return boundary_integral<Dim>(
           body, [&](const BoundarySample<Dim>& b) { return std::pow(b.curvature, curvature_power) * g(b.point); },
           true)
    .value;
}

}  // namespace

MCEstimate MCEstimate::from(std::span<const double> samples)
{
  MCEstimate e;
  e.replicates = static_cast<int>(samples.size());
  if (samples.empty())
    return e;
  double sum = 0.0;
  for (double s : samples)
    sum += s;
  e.mean = sum / samples.size();
  if (samples.size() > 1) {
    double ss = 0.0;
    for (double s : samples)
      ss += (s - e.mean) * (s - e.mean);
    e.std_error = std::sqrt(ss / (samples.size() - 1) / samples.size());
  }
  return e;
}

// ---------------------------------------------------------------------------

template <int Dim>
double auto_envelope(const ConvexBody<Dim>& body, const WeightFn<Dim>& phi)
{
  if (phi.is_constant())
    return *phi.constant;
  const auto [lo, hi] = body.bounding_box();
  const int n = Dim == 2 ? 129 : 33;
  double best = 0.0;
  const auto visit = [&](const Point<Dim>& x) {
    if (body.contains(x))
      best = std::max(best, phi(x));
  };
  if constexpr (Dim == 2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        visit(Point<2>(lo.x() + (hi.x() - lo.x()) * i / (n - 1), lo.y() + (hi.y() - lo.y()) * j / (n - 1)));
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          visit(Point<3>(lo.x() + (hi.x() - lo.x()) * i / (n - 1), lo.y() + (hi.y() - lo.y()) * j / (n - 1),
                         lo.z() + (hi.z() - lo.z()) * k / (n - 1)));
  }
  const Point<Dim> z = body.interior_point();
  best = std::max(best, phi(z));
  for (const auto& u : direction_grid<Dim>(Dim == 2 ? 256 : 1024, false)) {
    const double r = body.ray_exit(z, u);
    best = std::max(best, phi(Point<Dim>(z + r * u)));
  }
  return 1.01 * best;
}

template <int Dim>
PointSampler<Dim>::PointSampler(BodyPtr<Dim> body, WeightFn<Dim> phi, std::optional<double> envelope)
  : body_(std::move(body)), phi_(std::move(phi))
{
  std::tie(lo_, hi_) = body_->bounding_box();
  envelope_ = envelope ? *envelope : auto_envelope<Dim>(*body_, phi_);
  if (!(envelope_ > 0))
    throw InvalidArgument("stochastic", "sampling envelope must be positive");
}

template <int Dim>
Point<Dim> PointSampler<Dim>::operator()(CounterRng& rng) const
{
  for (;;) {
    Point<Dim> x;
    for (int i = 0; i < Dim; ++i)
      x[i] = rng.uniform(lo_[i], hi_[i]);
    if (!body_->contains(x, 0.0))
      continue;
    if (phi_.is_constant())
      return x;
    const double f = phi_(x);
    if (f > envelope_)
      throw EnvelopeExceeded("stochastic", "density " + std::to_string(f) + " above envelope " +
                                             std::to_string(envelope_));
    if (rng.uniform() * envelope_ < f)
      return x;
  }
}

template <int Dim>
Point<Dim> sample_point(const ConvexBody<Dim>& body, const WeightFn<Dim>& phi, CounterRng& rng, double envelope)
{
  const auto [lo, hi] = body.bounding_box();
  for (;;) {
    Point<Dim> x;
    for (int i = 0; i < Dim; ++i)
      x[i] = rng.uniform(lo[i], hi[i]);
    if (!body.contains(x, 0.0))
      continue;
    const double f = phi(x);
    if (f > envelope)
      throw EnvelopeExceeded("stochastic", "density above envelope");
    if (rng.uniform() * envelope < f)
      return x;
  }
}

// ---------------------------------------------------------------------------

template <int Dim>
double predicted_random_limit(const ConvexBody<Dim>& body, const WeightFn<Dim>& phi, const WeightFn<Dim>& psi)
{
  const double mass = measure<Dim>(body, phi).value;
  const double e = -2.0 / (Dim + 1);
  const double integral = boundary_power_integral<Dim>(
    body, 1.0 / (Dim + 1), [&](const Point<Dim>& x) { return std::pow(phi(x), e) * psi(x); });
  return random_constant(Dim) * std::pow(mass, 2.0 / (Dim + 1)) * integral;
}

template <int Dim>
double predicted_vertex_limit(const ConvexBody<Dim>& body, const WeightFn<Dim>& phi)
{
  const double mass = measure<Dim>(body, phi).value;
  const double e = (Dim - 1.0) / (Dim + 1);
  const double integral =
    boundary_power_integral<Dim>(body, 1.0 / (Dim + 1), [&](const Point<Dim>& x) { return std::pow(phi(x), e); });
  return random_constant(Dim) * std::pow(mass, -e) * integral;
}

template <int Dim>
std::vector<RandomPolytopeRow> random_polytope_study(const SamplerConfig<Dim>& cfg, const WeightFn<Dim>& psi,
                                                     const std::vector<int>& ms)
{
  if (ms.empty())
    return {};
  const int m_max = *std::max_element(ms.begin(), ms.end());
  check_config(cfg, *std::min_element(ms.begin(), ms.end()));
  const ConvexBody<Dim>& body = *cfg.body;
  const double psi_k = measure<Dim>(body, psi).value;
  const PointSampler<Dim> sampler(cfg.body, cfg.phi, cfg.envelope);

  const std::size_t R = cfg.replicates, M = ms.size();
  std::vector<double> deficits(R * M), vertices(R * M);
  parallel_for(R, [&](std::size_t r) {
    CounterRng rng(cfg.seed, r, purpose(cfg.stream, kPoints));
    std::vector<Point<Dim>> pts;
    pts.reserve(m_max);
    for (int i = 0; i < m_max; ++i)
      pts.push_back(sampler(rng));
    for (std::size_t k = 0; k < M; ++k) {
      const std::vector<Point<Dim>> prefix(pts.begin(), pts.begin() + ms[k]);
      const PolytopeApprox<Dim> hull = convex_hull<Dim>(prefix);
      deficits[r * M + k] = psi_k - measure<Dim>(hull, psi).value;
      vertices[r * M + k] = hull.vertex_count();
    }
  });

  const double predicted = predicted_random_limit<Dim>(body, cfg.phi, psi);
  const double predicted_vertices = predicted_vertex_limit<Dim>(body, cfg.phi);
  std::vector<RandomPolytopeRow> rows;
  for (std::size_t k = 0; k < M; ++k) {
    std::vector<double> d(R), v(R);
    for (std::size_t r = 0; r < R; ++r) {
      d[r] = deficits[r * M + k];
      v[r] = vertices[r * M + k];
    }
    RandomPolytopeRow row;
    row.m = ms[k];
    row.deficit = MCEstimate::from(d);
    row.normalized = row.deficit.scaled(std::pow(ms[k], 2.0 / (Dim + 1)));
    row.predicted = predicted;
    row.vertices = MCEstimate::from(v);
    row.vertices_normalized = row.vertices.scaled(std::pow(ms[k], -(Dim - 1.0) / (Dim + 1)));
    row.predicted_vertices = predicted_vertices;
    rows.push_back(row);
  }
  return rows;
}

template <int Dim>
RandomPolytopeRow random_polytope_deficit(const SamplerConfig<Dim>& cfg, const WeightFn<Dim>& psi)
{
  return random_polytope_study<Dim>(cfg, psi, {cfg.m}).front();
}

template <int Dim>
EfronRow efron_vertex_count(const SamplerConfig<Dim>& cfg)
{
  check_config(cfg, cfg.m);
  const ConvexBody<Dim>& body = *cfg.body;
  const double mass = measure<Dim>(body, cfg.phi).value;
  const PointSampler<Dim> sampler(cfg.body, cfg.phi, cfg.envelope);
  const std::size_t R = cfg.replicates;
  const int m = cfg.m;
  std::vector<double> direct(R), transformed(R);
  parallel_for(R, [&](std::size_t r) {
    CounterRng rng(cfg.seed, r, purpose(cfg.stream, kPoints));
    std::vector<Point<Dim>> pts;
    pts.reserve(m);
    for (int i = 0; i < m; ++i)
      pts.push_back(sampler(rng));
    direct[r] = convex_hull<Dim>(pts).vertex_count();
    pts.pop_back();
    const double inner = m > Dim + 1 ? measure<Dim>(convex_hull<Dim>(pts), cfg.phi).value : 0.0;
    transformed[r] = m * (1.0 - inner / mass);
  });
  EfronRow row;
  row.m = m;
  row.direct = MCEstimate::from(direct);
  row.transformed = MCEstimate::from(transformed);
  const double se = std::hypot(row.direct.std_error, row.transformed.std_error);
  const double gap = std::abs(row.direct.mean - row.transformed.mean);
  row.z_score = se > 0 ? gap / se : (gap == 0 ? 0.0 : std::numeric_limits<double>::infinity());
  row.normalized = row.direct.scaled(std::pow(m, -(Dim - 1.0) / (Dim + 1)));
  row.predicted = predicted_vertex_limit<Dim>(body, cfg.phi);
  return row;
}

// ---------------------------------------------------------------------------

template <int Dim>
Halfspace<Dim> sample_halfspace(const ConvexBody<Dim>& body, CounterRng& rng)
{
  Halfspace<Dim> h;
  h.normal = uniform_direction<Dim>(rng);
  h.offset = body.support(h.normal) + rng.uniform();
  return h;
}

template <int Dim>
double mean_width(const PolytopeApprox<Dim>& poly)
{
  if constexpr (Dim == 2) {
    double perimeter = 0.0;
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i)
      perimeter += (poly.vertices[(i + 1) % n] - poly.vertices[i]).norm();
    return perimeter / kPi;
  } else {
    return mean_width_quadrature<3>([&](const Point<3>& u) { return poly.support(u); }, 2048);
  }
}

template <int Dim>
double mean_width_quadrature(const std::function<double(const Point<Dim>&)>& support, int directions)
{
  const auto dirs = direction_grid<Dim>(directions, true);
  double sum = 0.0;
  for (const auto& u : dirs)
    sum += support(u);
  return 2.0 * sum / dirs.size();
}

template <int Dim>
std::vector<DualRow> dual_study(const DualSamplerConfig<Dim>& cfg, const std::vector<int>& ms)
{
  if (ms.empty())
    return {};
  if (!cfg.body)
    throw InvalidArgument("stochastic", "dual config has no body");
  if (cfg.replicates < 1 || *std::min_element(ms.begin(), ms.end()) < 1)
    throw InvalidArgument("stochastic", "dual config needs positive m and replicates");
  const ConvexBody<Dim>& body = *cfg.body;
  const int m_max = *std::max_element(ms.begin(), ms.end());
  const Point<Dim> z = body.interior_point();
  const int quad_dirs = Dim == 2 ? 512 : 2048;

  // K + B as the intersection of tangent halfspaces
  std::vector<Halfspace<Dim>> parallel;
  for (const auto& u : direction_grid<Dim>(quad_dirs, false))
    parallel.push_back({u, body.support(u) + 1.0});

  const double width_k = Dim == 2 ? surface_area<Dim>(body) / kPi
                                  : mean_width_quadrature<Dim>([&](const Point<Dim>& u) { return body.support(u); },
                                                               quad_dirs);

  const std::size_t R = cfg.replicates, M = ms.size();
  std::vector<double> width(R * M), facets(R * M), quad_gap(R * M);
  parallel_for(R, [&](std::size_t r) {
    CounterRng rng(cfg.seed, r, purpose(cfg.stream, kHalfspaces));
    std::vector<Halfspace<Dim>> hs;
    hs.reserve(m_max + parallel.size());
    for (int i = 0; i < m_max; ++i)
      hs.push_back(sample_halfspace<Dim>(body, rng));
    for (std::size_t k = 0; k < M; ++k) {
      std::vector<Halfspace<Dim>> prefix(hs.begin(), hs.begin() + ms[k]);
      facets[r * M + k] = irredundant_halfspaces<Dim>(prefix, z).size();
      prefix.insert(prefix.end(), parallel.begin(), parallel.end());
      const PolytopeApprox<Dim> clipped = halfspace_intersection<Dim>(prefix, z);
      const double w = mean_width<Dim>(clipped);
      width[r * M + k] = w - width_k;
      if constexpr (Dim == 2)
        quad_gap[r * M + k] = std::abs(
          w - mean_width_quadrature<2>([&](const Point<2>& u) { return clipped.support(u); }, quad_dirs));
    }
  });

  const double e = (Dim - 1.0) / (Dim + 1);
  const double integral = boundary_power_integral<Dim>(body, Dim / (Dim + 1.0), [](const Point<Dim>&) { return 1.0; });
  const double sphere = Dim * unit_ball_volume(Dim);
  const double pf = random_constant(Dim) * std::pow(sphere, -e) * integral;

  std::vector<DualRow> rows;
  for (std::size_t k = 0; k < M; ++k) {
    std::vector<double> w(R), f(R);
    double gap = 0.0;
    for (std::size_t r = 0; r < R; ++r) {
      w[r] = width[r * M + k];
      f[r] = facets[r * M + k];
      gap = std::max(gap, quad_gap[r * M + k]);
    }
    DualRow row;
    row.m = ms[k];
    row.width_excess = MCEstimate::from(w);
    row.width_normalized = row.width_excess.scaled(std::pow(ms[k], 2.0 / (Dim + 1)));
    row.facets = MCEstimate::from(f);
    row.facets_normalized = row.facets.scaled(std::pow(ms[k], -e));
    row.predicted_width = 2.0 * pf;
    row.predicted_facets = pf;
    row.width_body = width_k;
    row.width_quadrature_error = gap;
    rows.push_back(row);
  }
  return rows;
}

template <int Dim>
DualRow dual_random_polyhedron(const DualSamplerConfig<Dim>& cfg)
{
  return dual_study<Dim>(cfg, {cfg.m}).front();
}

template class PointSampler<2>;
template class PointSampler<3>;
template double auto_envelope<2>(const ConvexBody<2>&, const WeightFn<2>&);
template double auto_envelope<3>(const ConvexBody<3>&, const WeightFn<3>&);
template Point<2> sample_point<2>(const ConvexBody<2>&, const WeightFn<2>&, CounterRng&, double);
template Point<3> sample_point<3>(const ConvexBody<3>&, const WeightFn<3>&, CounterRng&, double);
template double predicted_random_limit<2>(const ConvexBody<2>&, const WeightFn<2>&, const WeightFn<2>&);
template double predicted_random_limit<3>(const ConvexBody<3>&, const WeightFn<3>&, const WeightFn<3>&);
template double predicted_vertex_limit<2>(const ConvexBody<2>&, const WeightFn<2>&);
template double predicted_vertex_limit<3>(const ConvexBody<3>&, const WeightFn<3>&);
template std::vector<RandomPolytopeRow> random_polytope_study<2>(const SamplerConfig<2>&, const WeightFn<2>&, const std::vector<int>&);
template std::vector<RandomPolytopeRow> random_polytope_study<3>(const SamplerConfig<3>&, const WeightFn<3>&, const std::vector<int>&);
template RandomPolytopeRow random_polytope_deficit<2>(const SamplerConfig<2>&, const WeightFn<2>&);
template RandomPolytopeRow random_polytope_deficit<3>(const SamplerConfig<3>&, const WeightFn<3>&);
template EfronRow efron_vertex_count<2>(const SamplerConfig<2>&);
template EfronRow efron_vertex_count<3>(const SamplerConfig<3>&);
template Halfspace<2> sample_halfspace<2>(const ConvexBody<2>&, CounterRng&);
template Halfspace<3> sample_halfspace<3>(const ConvexBody<3>&, CounterRng&);
template double mean_width<2>(const PolytopeApprox<2>&);
template double mean_width<3>(const PolytopeApprox<3>&);
template double mean_width_quadrature<2>(const std::function<double(const Point<2>&)>&, int);
template double mean_width_quadrature<3>(const std::function<double(const Point<3>&)>&, int);
template std::vector<DualRow> dual_study<2>(const DualSamplerConfig<2>&, const std::vector<int>&);
template std::vector<DualRow> dual_study<3>(const DualSamplerConfig<3>&, const std::vector<int>&);
template DualRow dual_random_polyhedron<2>(const DualSamplerConfig<2>&);
template DualRow dual_random_polyhedron<3>(const DualSamplerConfig<3>&);

}  // namespace floatlab
