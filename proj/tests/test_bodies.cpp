#include <gtest/gtest.h>

#include <cmath>

#include "floatlab/bodies.hpp"

using namespace floatlab;

namespace {

BodyPtr<2> unit_disk()
{
  return make_ball<2>(1.0);
}

BodyPtr<2> ellipse(double a, double b)
{
  return std::make_shared<Ellipsoid<2>>(Point<2>(a, b));
}

BodyPtr<2> unit_square()
{
  return std::make_shared<Polytope<2>>(std::vector<Point<2>>{{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}});
}

// closed-form curvature of the ellipse at angle theta of the parametrization (a cos, b sin)
double ellipse_curvature(double a, double b, double theta)
{
  const double s = std::sin(theta), c = std::cos(theta);
  return a * b / std::pow(b * b * c * c + a * a * s * s, 1.5);
}

}  // namespace

TEST(Support, ClosedForms)
{
  EXPECT_DOUBLE_EQ(unit_disk()->support(Point<2>(1, 0)), 1.0);
  EXPECT_NEAR(ellipse(2, 1)->support(Point<2>(1, 0)), 2.0, 1e-15);
  const Point<2> u = Point<2>(1, 1) / std::sqrt(2.0);
  EXPECT_NEAR(unit_square()->support(u), std::sqrt(2.0) / 2.0, 1e-15);

  CounterRng rng(1);
  for (int k = 0; k < 100; ++k) {
    const Point<2> v = uniform_direction<2>(rng);
    EXPECT_NEAR(ellipse(2, 1)->support(v), std::sqrt(4 * v.x() * v.x() + v.y() * v.y()), 1e-14);
    EXPECT_NEAR(ellipse(2, 1)->support(3.0 * v), 3.0 * ellipse(2, 1)->support(v), 1e-13);
  }
}

TEST(Support, TrigonometricBody)
{
  const SupportBody b({1.0, 0.0, 0.0, 0.1}, {});
  for (double t : {0.0, 0.4, 1.7, 3.0}) {
    EXPECT_NEAR(b.support(unit(t)), 1.0 + 0.1 * std::cos(3 * t), 1e-14);
    const BoundarySample<2> s = curvature(b, t);
    // radius of curvature h + h''
    EXPECT_NEAR(1.0 / s.curvature, 1.0 - 0.8 * std::cos(3 * t), 1e-12);
  }
}

TEST(Support, BoundaryConsistency)
{
  const std::vector<BodyPtr<2>> bodies{unit_disk(), ellipse(2, 1), ellipse(0.3, 1.7),
                                       std::make_shared<SupportBody>(std::vector<double>{1.0, 0.0, 0.05},
                                                                     std::vector<double>{0.0, 0.0, 0.03})};
  for (const auto& body : bodies)
    for (int k = 0; k < 64; ++k) {
      const BoundarySample<2> s = body->boundary(2 * kPi * k / 64.0);
      EXPECT_LT(std::abs(s.point.dot(s.normal) - body->support(s.normal)), 1e-9) << body->describe();
      EXPECT_NEAR(s.normal.norm(), 1.0, 1e-12);
    }
  const BodyPtr<3> e3 = std::make_shared<Ellipsoid<3>>(Point<3>(1.0, 2.0, 0.5));
  for (double th : {0.3, 1.2, 2.5})
    for (double ph : {0.0, 1.0, 4.0}) {
      const BoundarySample<3> s = e3->boundary(Param<3>(th, ph));
      EXPECT_LT(std::abs(s.point.dot(s.normal) - e3->support(s.normal)), 1e-9);
    }
}

TEST(Curvature, ClosedForms)
{
  for (double t : {0.0, 1.0, 2.0})
    EXPECT_NEAR(curvature(*unit_disk(), t).curvature, 1.0, 1e-14);
  EXPECT_NEAR(curvature(*ellipse(2, 1), 0.0).curvature, 2.0, 1e-13);
  for (double t : {0.3, 1.1, 2.9})
    EXPECT_NEAR(curvature(*ellipse(2, 1), t).curvature, ellipse_curvature(2, 1, t), 1e-12);
  // facet midpoint of the square is flat
  const BodyPtr<2> sq = unit_square();
  EXPECT_NEAR(curvature(*sq, 0.0).curvature, 0.0, 1e-12);
  EXPECT_THROW(curvature(*sq, sq->kinks().at(0)), CurvatureUnavailable);
}

TEST(Curvature, NumericFitMatchesExact)
{
  const BodyPtr<2> e = ellipse(2, 1);
  for (double t : {0.2, 0.9, 2.2})
    EXPECT_NEAR(numeric_curvature<2>(*e, Param<2>::Constant(t)), ellipse_curvature(2, 1, t), 1e-6);
  const SupportBody numeric({1.0, 0.0, 0.0, 0.1}, {}, true);
  const SupportBody exact({1.0, 0.0, 0.0, 0.1}, {});
  EXPECT_NEAR(curvature(numeric, 0.5).curvature, curvature(exact, 0.5).curvature, 1e-5);
  const BodyPtr<3> e3 = std::make_shared<Ellipsoid<3>>(Point<3>(1.0, 2.0, 3.0));
  const Param<3> s(0.7, 0.4);
  EXPECT_NEAR(numeric_curvature<3>(*e3, s), curvature<3>(*e3, s).curvature, 1e-5);
}

TEST(Hull, FromBody)
{
  const auto h = convex_hull<2>({{0, 0}, {1, 0}, {0, 1}, {0.2, 0.2}});
  const Polytope<2> tri({{0, 0}, {1, 0}, {0, 1}, {0.2, 0.2}});
  EXPECT_EQ(tri.polytope().vertex_count(), 3);
  EXPECT_NEAR(h.volume(), 0.5, 1e-15);
}

TEST(Measure, ClosedForms)
{
  EXPECT_NEAR(measure<2>(*unit_square(), WeightFn<2>::uniform()).value, 1.0, 1e-12);
  EXPECT_NEAR(measure<2>(*unit_disk(), WeightFn<2>::uniform()).value, kPi, 1e-8);
  // int over |x| <= 1/2 of (1 - |x|^2)^{-3/2} = 2 pi (1 / sqrt(3/4) - 1)
  const auto psi = WeightFn<2>::radial(-1.0, -1.5);
  EXPECT_NEAR(measure<2>(*make_ball<2>(0.5), psi).value, 2 * kPi * (1.0 / std::sqrt(0.75) - 1.0), 1e-9);
  EXPECT_NEAR(measure<3>(*make_ball<3>(1.0), WeightFn<3>::uniform()).value, 4 * kPi / 3, 1e-8);
  // int over the unit ball of |x|^2 dx = 4 pi / 5
  const auto r2 = WeightFn<3>::from([](const Point<3>& x) { return x.squaredNorm() + 1.0; });
  EXPECT_NEAR(measure<3>(*make_ball<3>(1.0), r2).value, 4 * kPi / 5 + 4 * kPi / 3, 1e-7);
}

TEST(Measure, Monotone)
{
  const auto psi = WeightFn<2>::radial(1.0, -1.5);
  double prev = 0.0;
  for (double r : {0.2, 0.5, 0.9, 1.0, 1.3}) {
    const double v = measure<2>(*make_ball<2>(r), psi).value;
    EXPECT_GT(v, prev);
    prev = v;
  }
  EXPECT_LT(measure<2>(*ellipse(0.9, 0.4), psi).value, measure<2>(*unit_disk(), psi).value);
}

TEST(Measure, PolytopeAgreesWithBody)
{
  const auto psi = WeightFn<2>::radial(1.0, -1.5);
  const auto sq = unit_square();
  const auto poly = convex_hull<2>({{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}});
  EXPECT_NEAR(measure<2>(*sq, psi).value, measure<2>(poly, psi).value, 1e-9);
}

TEST(RollingRadius, ClosedForms)
{
  for (double t : {0.0, 2.0})
    EXPECT_NEAR(rolling_radius(*unit_disk(), t), 1.0, 1e-9);
  EXPECT_NEAR(rolling_radius(*ellipse(2, 1), 0.0), 0.5, 1e-6);
  EXPECT_NEAR(rolling_radius(*unit_square(), 0.0), 0.5, 1e-6);
  // never exceeds the osculating radius
  for (double t : {0.3, 1.0, 1.5})
    EXPECT_LE(rolling_radius(*ellipse(2, 1), t), 1.0 / ellipse_curvature(2, 1, t) + 1e-9);
}

TEST(SurfaceAreas, ClosedForms)
{
  EXPECT_NEAR(surface_area<2>(*unit_disk()), 2 * kPi, 1e-8);
  EXPECT_NEAR(surface_area<3>(*make_ball<3>(1.0)), 4 * kPi, 1e-7);
  // affine surface area of an ellipse is 2 pi (ab)^{1/3}
  EXPECT_NEAR(affine_surface_area<2>(*ellipse(2, 1)), 2 * kPi * std::cbrt(2.0), 1e-7);
  EXPECT_NEAR(affine_surface_area<3>(*make_ball<3>(2.0)), 4 * kPi * 4.0 * std::pow(0.25, 0.25), 1e-6);
}

TEST(Affine, ImageOfDisk)
{
  Eigen::Matrix2d A;
  A << 2.0, 0.3, -0.1, 0.7;
  const AffineImage<2> img(unit_disk(), A, Point<2>(0.1, -0.2));
  EXPECT_NEAR(measure<2>(img, WeightFn<2>::uniform()).value, kPi * A.determinant(), 1e-8);
  // affine surface area scales by det^{1/3}
  const AffineImage<2> lin(unit_disk(), A);
  EXPECT_NEAR(affine_surface_area<2>(lin), 2 * kPi * std::cbrt(A.determinant()), 1e-7);
  EXPECT_TRUE(img.contains(Point<2>(0.1, -0.2)));
}

TEST(Polar, EllipseAndSquare)
{
  const BodyPtr<2> p = polar_body<2>(*ellipse(2, 0.5));
  EXPECT_NEAR(p->support(Point<2>(1, 0)), 0.5, 1e-14);
  EXPECT_NEAR(p->support(Point<2>(0, 1)), 2.0, 1e-14);
  const BodyPtr<2> q = polar_body<2>(*polar_body<2>(*unit_square()));
  CounterRng rng(5);
  for (int k = 0; k < 20; ++k) {
    const Point<2> u = uniform_direction<2>(rng);
    EXPECT_NEAR(q->support(u), unit_square()->support(u), 1e-12);
  }
}

TEST(RayExit, Consistency)
{
  const BodyPtr<2> e = ellipse(2, 1);
  CounterRng rng(3);
  for (int k = 0; k < 50; ++k) {
    const Point<2> p(rng.uniform(-0.5, 0.5), rng.uniform(-0.3, 0.3));
    const Point<2> d = uniform_direction<2>(rng);
    const double t = e->ray_exit(p, d);
    const Point<2> q = p + t * d;
    EXPECT_NEAR(q.x() * q.x() / 4 + q.y() * q.y(), 1.0, 1e-12);
  }
}

TEST(Errors, InvalidBodies)
{
  EXPECT_THROW(std::make_shared<Ellipsoid<2>>(Point<2>(1.0, -1.0)), InvalidArgument);
  EXPECT_THROW(WeightFn<2>::uniform(0.0), InvalidArgument);
}
