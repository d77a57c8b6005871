#include <algorithm>

#include "floatlab/stochastic.hpp"

namespace floatlab {

namespace {

using Vec3 = Eigen::Vector3d;

// point of S^2 over x in the gnomonic chart about the south pole
Vec3 lift_south(const Point<2>& x)
{
  return Vec3(x.x(), x.y(), -1.0).normalized();
}

}  // namespace

double spherical_polygon_area(const std::vector<Vec3>& v)
{
  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const Vec3& a = v[0];
    const Vec3& b = v[i];
    const Vec3& c = v[i + 1];
    sum += 2.0 * std::atan2(a.dot(b.cross(c)), 1.0 + a.dot(b) + b.dot(c) + c.dot(a));
  }
  return std::abs(sum);
}

double spherical_polygon_perimeter(const std::vector<Vec3>& v)
{
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec3& a = v[i];
    const Vec3& b = v[(i + 1) % v.size()];
    sum += std::atan2(a.cross(b).norm(), a.dot(b));
  }
  return sum;
}

std::vector<SphericalDualRow> spherical_dual_study(BodyPtr<2> chart_body, const std::vector<int>& ms,
                                                   int replicates, std::uint64_t seed, std::uint64_t stream)
{
  if (!chart_body)
    throw InvalidArgument("stochastic", "spherical dual needs a body");
  if (ms.empty())
    return {};
  if (replicates < 1 || *std::min_element(ms.begin(), ms.end()) < 3)
    throw InvalidArgument("stochastic", "spherical dual needs m >= 3 and positive replicates");
  const ConvexBody<2>& body = *chart_body;
  if (!body.contains(Point<2>::Zero(), -1e-9))
    throw ImproperBody("stochastic", "chart image must contain the pole in its interior");

  const WeightFn<2> density = WeightFn<2>::radial(1.0, -1.5);
  // K° in the chart about the south pole is the Euclidean polar of the chart image
  const BodyPtr<2> polar = polar_body<2>(body);
  const double polar_volume = measure<2>(*polar, density).value;
  const double sphere = 4.0 * kPi;
  const double u1_body = 0.5 - polar_volume / sphere;

  const double integral = boundary_integral<2>(
                            body,
                            [](const BoundarySample<2>& b) {
                              const double xn = b.point.dot(b.normal);
                              return std::pow(b.curvature, 2.0 / 3.0) / std::sqrt(1.0 + xn * xn);
                            },
                            true)
                            .value;
  const double beta = random_constant(2);

  const PointSampler<2> sampler(polar, density, 1.0);
  const int m_max = *std::max_element(ms.begin(), ms.end());
  const std::size_t R = replicates, M = ms.size();
  std::vector<double> ea(R * M), eb(R * M), fa(R * M);
  std::vector<int> mismatch(R * M, 0);

  parallel_for(R, [&](std::size_t r) {
    CounterRng rng(seed, r, stream * 16 + 3);
    std::vector<Point<2>> w;
    w.reserve(m_max);
    for (int i = 0; i < m_max; ++i)
      w.push_back(sampler(rng));
    for (std::size_t k = 0; k < M; ++k) {
      const std::vector<Point<2>> prefix(w.begin(), w.begin() + ms[k]);

      // polar route: spherical hull of the normals
      const PolytopeApprox<2> hull = convex_hull<2>(prefix);
      std::vector<Vec3> hv;
      for (const auto& p : hull.vertices)
        hv.push_back(lift_south(p));
      eb[r * M + k] = 0.5 - spherical_polygon_area(hv) / sphere - u1_body;

      // hemisphere route, in the chart centred at the far side of the normals
      std::vector<Vec3> normals;
      Vec3 mean = Vec3::Zero();
      for (const auto& p : prefix) {
        normals.push_back(lift_south(p));
        mean += normals.back();
      }
      const Vec3 c = -mean.normalized();
      const Vec3 e1 = c.unitOrthogonal();
      const Vec3 e2 = c.cross(e1);
      std::vector<Halfspace<2>> hs;
      for (const Vec3& n : normals) {
        const Point<2> a(n.dot(e1), n.dot(e2));
        const double len = a.norm();
        hs.push_back({a / len, -n.dot(c) / len});
      }
      const Vec3 pole(0, 0, 1);
      const Point<2> inside = Point<2>(pole.dot(e1), pole.dot(e2)) / pole.dot(c);
      const PolytopeApprox<2> km = halfspace_intersection<2>(hs, inside);
      std::vector<Vec3> kv;
      for (const auto& p : km.vertices)
        kv.push_back((p.x() * e1 + p.y() * e2 + c).normalized());
      ea[r * M + k] = spherical_polygon_perimeter(kv) / sphere - u1_body;
      fa[r * M + k] = km.facet_count();
      mismatch[r * M + k] = km.facet_count() != hull.vertex_count();
    }
  });

  std::vector<SphericalDualRow> rows;
  for (std::size_t k = 0; k < M; ++k) {
    std::vector<double> a(R), b(R), f(R);
    SphericalDualRow row;
    for (std::size_t r = 0; r < R; ++r) {
      a[r] = ea[r * M + k];
      b[r] = eb[r * M + k];
      f[r] = fa[r * M + k];
      row.max_pair_gap = std::max(row.max_pair_gap, std::abs(a[r] - b[r]));
      row.facet_mismatches += mismatch[r * M + k];
    }
    row.m = ms[k];
    row.excess_hemispheres = MCEstimate::from(a);
    row.excess_polar = MCEstimate::from(b);
    row.normalized = row.excess_hemispheres.scaled(std::pow(ms[k], 2.0 / 3.0));
    row.facets = MCEstimate::from(f);
    row.facets_normalized = row.facets.scaled(std::pow(ms[k], -1.0 / 3.0));
    row.predicted = beta / sphere * std::pow(polar_volume, 2.0 / 3.0) * integral;
    row.predicted_facets = beta * std::pow(polar_volume, -1.0 / 3.0) * integral;
    row.u1_body = u1_body;
    row.polar_volume = polar_volume;
    rows.push_back(row);
  }
  return rows;
}

SphericalDualRow spherical_dual_transfer(BodyPtr<2> chart_body, int m, int replicates, std::uint64_t seed,
                                         std::uint64_t stream)
{
  return spherical_dual_study(std::move(chart_body), {m}, replicates, seed, stream).front();
}

}  // namespace floatlab
