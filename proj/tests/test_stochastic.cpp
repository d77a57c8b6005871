#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "floatlab/stochastic.hpp"

using namespace floatlab;

namespace {

BodyPtr<2> unit_disk()
{
  return make_ball<2>(1.0);
}

// Kolmogorov-Smirnov statistic of the sample against a continuous CDF
double ks_statistic(std::vector<double> x, const std::function<double(double)>& cdf)
{
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, f - i / n, (i + 1) / n - f});
  }
  return d;
}

// 1% critical value for large samples
double ks_critical(std::size_t n)
{
  return 1.63 / std::sqrt(static_cast<double>(n));
}

const WeightFn<2> kBump = WeightFn<2>::radial(1.0, -1.5);

}  // namespace

TEST(MCEstimate, MeanAndError)
{
  const std::vector<double> s{1.0, 2.0, 3.0, 4.0};
  const MCEstimate e = MCEstimate::from(s);
  EXPECT_DOUBLE_EQ(e.mean, 2.5);
  EXPECT_NEAR(e.std_error, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
  EXPECT_EQ(e.replicates, 4);
  EXPECT_NEAR(e.scaled(-2.0).std_error, 2.0 * e.std_error, 1e-15);
}

TEST(Sampler, SquareIsCentred)
{
  const auto sq = std::make_shared<Polytope<2>>(std::vector<Point<2>>{{-1, -1}, {3, -1}, {3, 1}, {-1, 1}});
  const PointSampler<2> sampler(sq, WeightFn<2>::uniform());
  CounterRng rng(1, 0, 1);
  const int n = 20000;
  Point<2> mean = Point<2>::Zero();
  for (int k = 0; k < n; ++k)
    mean += sampler(rng);
  mean /= n;
  // coordinate standard deviations 4 / sqrt(12) and 2 / sqrt(12)
  EXPECT_NEAR(mean.x(), 1.0, 3 * 4 / std::sqrt(12.0 * n));
  EXPECT_NEAR(mean.y(), 0.0, 3 * 2 / std::sqrt(12.0 * n));
}

TEST(Sampler, UniformDiskRadialLaw)
{
  const PointSampler<2> sampler(unit_disk(), WeightFn<2>::uniform());
  CounterRng rng(2, 0, 1);
  std::vector<double> r;
  for (int k = 0; k < 20000; ++k)
    r.push_back(sampler(rng).norm());
  EXPECT_LT(ks_statistic(r, [](double x) { return x * x; }), ks_critical(r.size()));
}

TEST(Sampler, WeightedDiskRadialLaw)
{
  const PointSampler<2> sampler(unit_disk(), kBump);
  CounterRng rng(3, 0, 1);
  std::vector<double> r;
  for (int k = 0; k < 20000; ++k)
    r.push_back(sampler(rng).norm());
  // mass within radius x is 2 pi (1 - (1 + x^2)^{-1/2})
  const double total = 1.0 - 1.0 / std::sqrt(2.0);
  EXPECT_LT(ks_statistic(r, [&](double x) { return (1.0 - 1.0 / std::sqrt(1.0 + x * x)) / total; }),
            ks_critical(r.size()));
  EXPECT_NEAR(sampler.envelope(), 1.01, 1e-12);
}

TEST(Sampler, EnvelopeExceeded)
{
  const PointSampler<2> sampler(unit_disk(), kBump, 0.5);
  CounterRng rng(4);
  EXPECT_THROW(
    {
      for (int k = 0; k < 1000; ++k)
        sampler(rng);
    },
    EnvelopeExceeded);
}

TEST(RandomPolytope, TriangleThreePoints)
{
  // E area of the hull of 3 uniform points in a triangle is a twelfth of its area
  SamplerConfig<2> cfg;
  cfg.body = std::make_shared<Polytope<2>>(std::vector<Point<2>>{{0, 0}, {1, 0}, {0, 1}});
  cfg.m = 3;
  cfg.replicates = 20000;
  cfg.seed = 5;
  const RandomPolytopeRow row = random_polytope_deficit<2>(cfg, WeightFn<2>::uniform());
  EXPECT_NEAR(row.deficit.mean, 0.5 * 11.0 / 12.0, 3.5 * row.deficit.std_error);
  EXPECT_DOUBLE_EQ(row.vertices.mean, 3.0);
}

TEST(RandomPolytope, LinearInPsiAndDeterministic)
{
  SamplerConfig<2> cfg;
  cfg.body = unit_disk();
  cfg.m = 50;
  cfg.replicates = 20;
  cfg.seed = 9;
  const RandomPolytopeRow a = random_polytope_deficit<2>(cfg, kBump);
  const RandomPolytopeRow b = random_polytope_deficit<2>(cfg, kBump.scaled(3.0));
  const RandomPolytopeRow c = random_polytope_deficit<2>(cfg, kBump);
  EXPECT_NEAR(b.deficit.mean, 3.0 * a.deficit.mean, 1e-12);
  EXPECT_EQ(a.deficit.mean, c.deficit.mean);
  EXPECT_EQ(a.vertices.mean, c.vertices.mean);
  cfg.stream = 1;
  EXPECT_NE(random_polytope_deficit<2>(cfg, kBump).deficit.mean, a.deficit.mean);
}

TEST(RandomPolytope, NestedPrefixesAreMonotone)
{
  SamplerConfig<2> cfg;
  cfg.body = std::make_shared<Ellipsoid<2>>(Point<2>(2.0, 1.0));
  cfg.replicates = 1;
  cfg.seed = 6;
  const auto rows = random_polytope_study<2>(cfg, WeightFn<2>::uniform(), {4, 8, 16, 32, 64, 128, 256});
  for (std::size_t k = 1; k < rows.size(); ++k)
    EXPECT_LE(rows[k].deficit.mean, rows[k - 1].deficit.mean);
  for (const auto& r : rows) {
    EXPECT_GE(r.deficit.mean, 0.0);
    EXPECT_GE(r.vertices.mean, 3.0);
  }
}

TEST(RandomPolytope, PredictedDiskLimit)
{
  const double beta = 2.0 / 3.0 * std::tgamma(5.0 / 3.0) * std::cbrt(2.25);
  const auto one = WeightFn<2>::uniform();
  EXPECT_NEAR(predicted_random_limit<2>(*unit_disk(), one, one), beta * std::cbrt(kPi * kPi) * 2 * kPi, 1e-7);
  EXPECT_NEAR(predicted_vertex_limit<2>(*unit_disk(), one), beta * std::pow(kPi, -1.0 / 3.0) * 2 * kPi, 1e-7);
}

TEST(RandomPolytope, TooFewPoints)
{
  SamplerConfig<2> cfg;
  cfg.body = unit_disk();
  cfg.m = 2;
  EXPECT_THROW(random_polytope_deficit<2>(cfg, WeightFn<2>::uniform()), InvalidArgument);
}

TEST(Efron, GeneralPositionAndAgreement)
{
  SamplerConfig<2> cfg;
  cfg.body = unit_disk();
  cfg.m = 3;
  cfg.replicates = 50;
  const EfronRow three = efron_vertex_count<2>(cfg);
  EXPECT_DOUBLE_EQ(three.direct.mean, 3.0);
  EXPECT_DOUBLE_EQ(three.transformed.mean, 3.0);

  cfg.m = 100;
  cfg.replicates = 300;
  cfg.phi = kBump;
  const EfronRow r = efron_vertex_count<2>(cfg);
  EXPECT_LT(r.z_score, 3.0);
  EXPECT_GT(r.direct.mean, 3.0);
}

TEST(Halfspaces, ContainBodyAndUniformOffsets)
{
  const auto e = std::make_shared<Ellipsoid<2>>(Point<2>(2.0, 1.0));
  CounterRng rng(7, 0, 2);
  std::vector<double> gaps;
  for (int k = 0; k < 5000; ++k) {
    const Halfspace<2> h = sample_halfspace<2>(*e, rng);
    for (int j = 0; j < 16; ++j)
      ASSERT_GE(h.slack(e->boundary(2 * kPi * j / 16).point), -1e-12);
    gaps.push_back(h.offset - e->support(h.normal));
  }
  EXPECT_LT(ks_statistic(gaps, [](double x) { return x; }), ks_critical(gaps.size()));
  std::vector<double> angles;
  CounterRng rng2(8, 0, 2);
  for (int k = 0; k < 5000; ++k) {
    const Halfspace<2> h = sample_halfspace<2>(*e, rng2);
    angles.push_back(std::atan2(h.normal.y(), h.normal.x()));
  }
  EXPECT_LT(ks_statistic(angles, [](double a) { return (a + kPi) / (2 * kPi); }), ks_critical(angles.size()));
}

TEST(MeanWidth, DiskAndSquare)
{
  std::vector<Point<2>> pts;
  for (int k = 0; k < 4096; ++k)
    pts.push_back(unit(2 * kPi * k / 4096));
  EXPECT_NEAR(mean_width<2>(convex_hull<2>(pts)), 2.0, 1e-6);
  const auto disk = unit_disk();
  EXPECT_NEAR(mean_width_quadrature<2>([&](const Point<2>& u) { return disk->support(u); }, 512), 2.0, 1e-12);
  const auto sq = convex_hull<2>({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  EXPECT_NEAR(mean_width<2>(sq), 4.0 / kPi, 1e-14);
  const auto ball = make_ball<3>(1.0);
  EXPECT_NEAR(mean_width_quadrature<3>([&](const Point<3>& u) { return ball->support(u); }, 2048), 2.0, 1e-12);
}

TEST(Dual, FacetsBoundedAndWidthExact)
{
  DualSamplerConfig<2> cfg;
  cfg.body = unit_disk();
  cfg.replicates = 20;
  const auto rows = dual_study<2>(cfg, {8, 32, 128});
  for (const DualRow& r : rows) {
    EXPECT_LE(r.facets.mean, r.m);
    EXPECT_GT(r.width_excess.mean, 0.0);
    EXPECT_NEAR(r.width_body, 2.0, 1e-12);
    EXPECT_LT(r.width_quadrature_error, 1e-3);
  }
  for (std::size_t k = 1; k < rows.size(); ++k)
    EXPECT_LT(rows[k].width_excess.mean, rows[k - 1].width_excess.mean);
  const double beta = 2.0 / 3.0 * std::tgamma(5.0 / 3.0) * std::cbrt(2.25);
  EXPECT_NEAR(rows[0].predicted_facets, beta * std::pow(2 * kPi, -1.0 / 3.0) * 2 * kPi, 1e-7);
}

TEST(SphericalDual, CapIdentities)
{
  const double rho = 0.8;
  const auto rows = spherical_dual_study(make_ball<2>(std::tan(rho)), {16, 64}, 100, 11);
  for (const SphericalDualRow& r : rows) {
    EXPECT_NEAR(r.u1_body, std::sin(rho) / 2, 1e-9);
    // the polar of the cap is the cap of radius pi/2 - rho about the antipode
    EXPECT_NEAR(r.polar_volume, 2 * kPi * (1 - std::cos(kPi / 2 - rho)), 1e-9);
    EXPECT_EQ(r.facet_mismatches, 0);
    EXPECT_LT(r.max_pair_gap, 1e-10);
    const double se = std::hypot(r.excess_hemispheres.std_error, r.excess_polar.std_error);
    EXPECT_LE(std::abs(r.excess_hemispheres.mean - r.excess_polar.mean), 3 * se + 1e-12);
    EXPECT_GT(r.excess_hemispheres.mean, 0.0);
  }
}

TEST(SphericalPolygon, OctantArea)
{
  const std::vector<Eigen::Vector3d> tri{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  EXPECT_NEAR(spherical_polygon_area(tri), kPi / 2, 1e-14);
  EXPECT_NEAR(spherical_polygon_perimeter(tri), 1.5 * kPi, 1e-14);
}
