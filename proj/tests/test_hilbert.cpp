#include <gtest/gtest.h>

#include <cmath>

#include "floatlab/hilbert.hpp"
#include "floatlab/spaces.hpp"

using namespace floatlab;

namespace {

BodyPtr<2> unit_disk()
{
  return make_ball<2>(1.0);
}

BodyPtr<2> square2()
{
  return std::make_shared<Polytope<2>>(std::vector<Point<2>>{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
}

// Klein-model distance: cosh d = (1 - x.y) / sqrt((1 - |x|^2)(1 - |y|^2))
double klein_distance(const Point<2>& x, const Point<2>& y)
{
  return std::acosh((1 - x.dot(y)) / std::sqrt((1 - x.squaredNorm()) * (1 - y.squaredNorm())));
}

Point<2> random_in_disk(CounterRng& rng, double r)
{
  const double a = rng.uniform(0, 2 * kPi), s = r * std::sqrt(rng.uniform());
  return s * unit(a);
}

}  // namespace

TEST(Chord, ClosedForms)
{
  const HilbertGeometry disk(unit_disk());
  Chord c = disk.chord(Point<2>::Zero(), Point<2>(0, 3));
  EXPECT_NEAR(c.forward, 1.0, 1e-14);
  EXPECT_NEAR(c.backward, 1.0, 1e-14);
  c = disk.chord(Point<2>(0.5, 0), Point<2>(1, 0));
  EXPECT_NEAR(c.forward, 0.5, 1e-14);
  EXPECT_NEAR(c.backward, 1.5, 1e-14);
  const HilbertGeometry sq(square2());
  c = sq.chord(Point<2>::Zero(), Point<2>(1, 1));
  EXPECT_NEAR(c.forward, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(c.backward, std::sqrt(2.0), 1e-12);
  EXPECT_THROW(disk.chord(Point<2>(2, 0), Point<2>(1, 0)), InvalidArgument);
  EXPECT_THROW(HilbertGeometry(make_ball<2>(1.0, Point<2>(3, 0))), InvalidArgument);
}

TEST(Distance, ClosedFormsAndKlein)
{
  const HilbertGeometry disk(unit_disk());
  EXPECT_NEAR(disk.distance(Point<2>::Zero(), Point<2>(0.5, 0)), 0.5 * std::log(3.0), 1e-14);
  CounterRng rng(1);
  for (int k = 0; k < 200; ++k) {
    const Point<2> x = random_in_disk(rng, 0.95), y = random_in_disk(rng, 0.95);
    EXPECT_NEAR(disk.distance(x, y), klein_distance(x, y), 1e-9);
    EXPECT_NEAR(disk.distance(x, y), disk.distance(y, x), 1e-12);
  }
  // an ellipse is an affine image of the disk, so it carries the Klein metric too
  Eigen::Matrix2d A;
  A << 2.0, 0.0, 0.0, 0.5;
  const HilbertGeometry ell(std::make_shared<Ellipsoid<2>>(Point<2>(2.0, 0.5)));
  for (int k = 0; k < 50; ++k) {
    const Point<2> x = random_in_disk(rng, 0.9), y = random_in_disk(rng, 0.9);
    EXPECT_NEAR(ell.distance(A * x, A * y), klein_distance(x, y), 1e-9);
  }
}

TEST(Distance, TriangleInequality)
{
  const HilbertGeometry ell(std::make_shared<Ellipsoid<2>>(Point<2>(1.5, 0.8)));
  const HilbertGeometry trig(std::make_shared<SupportBody>(std::vector<double>{1.0, 0.0, 0.0, 0.1},
                                                           std::vector<double>{}));
  CounterRng rng(2);
  for (const HilbertGeometry* g : {&ell, &trig})
    for (int k = 0; k < 10000; ++k) {
      Point<2> p[3];
      for (auto& q : p)
        q = random_in_disk(rng, 0.75);
      ASSERT_LE(g->distance(p[0], p[2]), g->distance(p[0], p[1]) + g->distance(p[1], p[2]) + 1e-10);
    }
}

TEST(Distance, AffineInvariance)
{
  const BodyPtr<2> base = std::make_shared<SupportBody>(std::vector<double>{1.0, 0.0, 0.0, 0.1},
                                                       std::vector<double>{0.0, 0.05});
  const HilbertGeometry g(base);
  CounterRng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::Matrix2d A;
    A << rng.uniform(0.5, 2), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(0.5, 2);
    const Point<2> b(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3));
    const HilbertGeometry h(std::make_shared<AffineImage<2>>(base, A, b));
    for (int k = 0; k < 20; ++k) {
      const Point<2> x = random_in_disk(rng, 0.6), y = random_in_disk(rng, 0.6);
      EXPECT_NEAR(h.distance(A * x + b, A * y + b), g.distance(x, y), 1e-10);
    }
  }
}

TEST(Norm, ClosedFormsAndNormAxioms)
{
  const HilbertGeometry disk(unit_disk());
  EXPECT_NEAR(disk.finsler_norm(Point<2>::Zero(), Point<2>(0.3, 0.4)), 0.5, 1e-14);
  EXPECT_NEAR(disk.finsler_norm(Point<2>(0.5, 0), Point<2>(1, 0)), 4.0 / 3.0, 1e-14);
  const HilbertGeometry trig(std::make_shared<SupportBody>(std::vector<double>{1.0, 0.0, 0.0, 0.1},
                                                           std::vector<double>{}));
  CounterRng rng(4);
  for (int k = 0; k < 200; ++k) {
    const Point<2> x = random_in_disk(rng, 0.7);
    const Point<2> v(rng.uniform(-1, 1), rng.uniform(-1, 1)), w(rng.uniform(-1, 1), rng.uniform(-1, 1));
    EXPECT_NEAR(trig.finsler_norm(x, 2.0 * v), 2.0 * trig.finsler_norm(x, v), 1e-14);
    EXPECT_NEAR(trig.finsler_norm(x, -v), trig.finsler_norm(x, v), 1e-14);
    EXPECT_LE(trig.finsler_norm(x, v + w), trig.finsler_norm(x, v) + trig.finsler_norm(x, w) + 1e-10);
  }
}

TEST(FinslerBall, DiskAndEllipseAtCentre)
{
  const HilbertGeometry disk(unit_disk());
  const FinslerBall b = disk.unit_ball(Point<2>::Zero());
  const HilbertGeometry ell(std::make_shared<Ellipsoid<2>>(Point<2>(2.0, 0.7)));
  const FinslerBall e = ell.unit_ball(Point<2>::Zero());
  CounterRng rng(5);
  for (int k = 0; k < 20; ++k) {
    const Point<2> u = uniform_direction<2>(rng);
    EXPECT_NEAR(b.support(u), 1.0, 1e-9);
    EXPECT_NEAR(e.support(u), ell.ambient().support(u), 1e-9);
    EXPECT_NEAR(e.support_radial(u), ell.ambient().support(u), 1e-9);
  }
}

TEST(FinslerBall, SymmetricAndTwoConstructionsAgree)
{
  const HilbertGeometry trig(std::make_shared<SupportBody>(std::vector<double>{1.0, 0.0, 0.0, 0.1},
                                                           std::vector<double>{}));
  CounterRng rng(6);
  for (int trial = 0; trial < 2; ++trial) {
    const FinslerBall ball = trig.unit_ball(random_in_disk(rng, 0.6));
    for (int k = 0; k < 10; ++k) {
      const Point<2> u = uniform_direction<2>(rng);
      EXPECT_NEAR(ball.support(u), ball.support(-u), 1e-9);
      EXPECT_NEAR(ball.support(u), ball.support_radial(u), 1e-9);
    }
  }
}

TEST(Density, KleinClosedForm)
{
  const HilbertGeometry disk(unit_disk());
  EXPECT_NEAR(disk.density(Point<2>::Zero()), 1.0, 1e-12);
  EXPECT_NEAR(disk.density(Point<2>::Zero(), VolumeFlavor::HolmesThompson), 1.0, 1e-9);
  CounterRng rng(7);
  for (int k = 0; k < 100; ++k) {
    const Point<2> x = random_in_disk(rng, 0.95);
    const double exact = std::pow(1 - x.squaredNorm(), -1.5);
    EXPECT_NEAR(disk.density(x), exact, 1e-6 * exact);
  }
  // the chart density of the hyperbolic plane
  const GeometryChart<2> hyper(Geometry::Hyperbolic);
  EXPECT_NEAR(disk.density(Point<2>(0.3, 0.5)), hyper.density(Point<2>(0.3, 0.5)), 1e-10);
}

TEST(Density, FlavorsAgreeOnEllipses)
{
  const HilbertGeometry ell(std::make_shared<Ellipsoid<2>>(Point<2>(1.7, 0.6)));
  CounterRng rng(8);
  for (int k = 0; k < 10; ++k) {
    const Point<2> x = random_in_disk(rng, 0.5);
    const double b = ell.density(x, VolumeFlavor::Busemann);
    EXPECT_NEAR(ell.density(x, VolumeFlavor::HolmesThompson), b, 1e-7 * b);
  }
  // on a square the two flavors differ
  const HilbertGeometry sq(square2());
  const Point<2> x(0.2, 0.1);
  EXPECT_GT(std::abs(sq.density(x, VolumeFlavor::Busemann) - sq.density(x, VolumeFlavor::HolmesThompson)), 1e-3);
}

TEST(Density, MonotoneBlowUpAndBounded)
{
  const HilbertGeometry disk(unit_disk());
  const HilbertGeometry ell(std::make_shared<Ellipsoid<2>>(Point<2>(2.0, 1.0)));
  const Point<2> x0(0.6, 0.8);
  double prev = 0.0;
  for (double lam = 0.5; lam <= 0.999; lam += 0.0499) {
    const double d = disk.density(lam * x0);
    EXPECT_GE(d, prev);
    prev = d;
  }
  for (const HilbertGeometry* g : {&disk, &ell})
    for (double lam : {0.5, 0.9, 0.99, 0.999}) {
      const Point<2> p = g->ambient().boundary(0.7).point;
      const double scaled = g->density(lam * p) * std::pow(1 - lam, 1.5);
      EXPECT_LT(scaled, 1.0);
      EXPECT_GT(scaled, 0.01);
    }
}

TEST(Flavor, Parsing)
{
  EXPECT_EQ(parse_flavor("busemann"), VolumeFlavor::Busemann);
  EXPECT_EQ(parse_flavor("holmes-thompson"), VolumeFlavor::HolmesThompson);
  EXPECT_THROW(parse_flavor("finsler"), ConfigError);
}

TEST(FloatingArea, SmallDiskAndHyperbolicCrossCheck)
{
  const HilbertGeometry disk(unit_disk());
  const double eps = 0.01;
  EXPECT_NEAR(hilbert_floating_area(disk, *make_ball<2>(eps)) / (2 * kPi * std::cbrt(eps * eps)), 1.0, 1e-3);
  // against the hyperbolic chart formula H^{1/3} (1 - |x|^2)^{-1/2}
  const auto k = std::make_shared<Ellipsoid<2>>(Point<2>(0.5, 0.3));
  const ModelBody<2> model(GeometryChart<2>(Geometry::Hyperbolic), k);
  EXPECT_NEAR(hilbert_floating_area(disk, *k), model_floating_area<2>(model), 1e-6);
}

TEST(CentroAffine, DiskEllipseAndInvariance)
{
  EXPECT_NEAR(centroaffine_surface_area<2>(*unit_disk()), 2 * kPi, 1e-8);
  EXPECT_NEAR(centroaffine_surface_area<2>(Ellipsoid<2>(Point<2>(2.0, 0.3))), 2 * kPi, 1e-7);
  const BodyPtr<2> base = std::make_shared<SupportBody>(std::vector<double>{1.0, 0.0, 0.0, 0.1},
                                                       std::vector<double>{});
  const double ref = centroaffine_surface_area<2>(*base);
  CounterRng rng(9);
  for (int k = 0; k < 3; ++k) {
    Eigen::Matrix2d A;
    A << rng.uniform(0.5, 2), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(0.5, 2);
    EXPECT_NEAR(centroaffine_surface_area<2>(AffineImage<2>(base, A)), ref, 1e-6);
  }
  EXPECT_NEAR(centroaffine_surface_area<3>(*make_ball<3>(2.0)), 4 * kPi, 1e-6);
}

TEST(Omega, GLInvarianceOfScaledFloatingArea)
{
  const BodyPtr<2> base = std::make_shared<Ellipsoid<2>>(Point<2>(1.0, 1.0));
  const OmegaReport ref = omegacp_limit(base, {0.9, 0.95});
  CounterRng rng(10);
  for (int k = 0; k < 2; ++k) {
    Eigen::Matrix2d A;
    A << rng.uniform(0.5, 2), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(0.5, 2);
    const OmegaReport img = omegacp_limit(std::make_shared<AffineImage<2>>(base, A), {0.9, 0.95});
    for (std::size_t j = 0; j < ref.rows.size(); ++j)
      EXPECT_NEAR(img.rows[j].floating_area, ref.rows[j].floating_area, 1e-6 * ref.rows[j].floating_area);
  }
}

TEST(Berck, DiskLimit)
{
  const HilbertGeometry disk(unit_disk());
  const BerckCheck c = berck_check(disk, 0.0, 0.995);
  EXPECT_NEAR(c.limit, std::pow(2.0, -1.5), 1e-12);
  EXPECT_LT(c.rel_dev, 0.01);
}
