#include <gtest/gtest.h>

#include <cmath>

#include "floatlab/floating.hpp"

using namespace floatlab;

namespace {

BodyPtr<2> unit_disk()
{
  return make_ball<2>(1.0);
}

BodyPtr<2> unit_square()
{
  return std::make_shared<Polytope<2>>(std::vector<Point<2>>{{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}});
}

double disk_cap(double t)
{
  return std::acos(t) - t * std::sqrt(1 - t * t);
}

// inverse of the disk cap area by plain bisection
double disk_offset(double delta)
{
  double lo = -1.0, hi = 1.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (disk_cap(mid) > delta ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

const WeightFn<2> kBump = WeightFn<2>::radial(1.0, -1.5);
const WeightFn<2> kOne = WeightFn<2>::uniform();

}  // namespace

TEST(CapMeasure, ClosedForms)
{
  const auto one = WeightFn<2>::uniform();
  EXPECT_NEAR(cap_measure<2>(*unit_square(), one, Point<2>(1, 0), 0.25), 0.25, 1e-12);
  EXPECT_NEAR(cap_measure<2>(*unit_disk(), one, Point<2>(1, 0), 0.5), kPi / 3 - std::sqrt(3.0) / 4, 1e-11);
  EXPECT_NEAR(cap_measure<2>(*unit_disk(), WeightFn<2>::uniform(2.0), Point<2>(0, 1), 0.5),
              2 * (kPi / 3 - std::sqrt(3.0) / 4), 1e-11);
  // cap of the unit ball: pi (1 - t)^2 (2 + t) / 3
  const auto ball = make_ball<3>(1.0);
  EXPECT_NEAR(cap_measure<3>(*ball, WeightFn<3>::uniform(), Point<3>(0, 0, 1), 0.4), kPi * 0.36 * 2.4 / 3, 1e-9);
}

TEST(CapMeasure, StrictlyDecreasing)
{
  const Point<2> v = Point<2>(1, 2).normalized();
  double prev = 1e300;
  for (double t = -0.9; t < 1.0; t += 0.1) {
    const double c = cap_measure<2>(*unit_disk(), kBump, v, t);
    EXPECT_LT(c, prev);
    prev = c;
  }
}

TEST(FloatingOffset, ClosedForms)
{
  const auto one = WeightFn<2>::uniform();
  EXPECT_NEAR(floating_offset<2>(*unit_disk(), one, kPi / 2, Point<2>(0.6, 0.8)), 0.0, 1e-10);
  EXPECT_NEAR(floating_offset<2>(*unit_disk(), one, kPi / 3 - std::sqrt(3.0) / 4, Point<2>(1, 0)), 0.5, 1e-10);
  EXPECT_NEAR(floating_offset<2>(*unit_square(), one, 0.25, Point<2>(1, 0)), 0.25, 1e-10);
  EXPECT_THROW(floating_offset<2>(*unit_disk(), one, 4.0, Point<2>(1, 0)), RootNotBracketed);
}

TEST(FloatingOffset, InverseOfCapMeasure)
{
  CounterRng rng(4);
  const auto e = std::make_shared<Ellipsoid<2>>(Point<2>(2.0, 1.0));
  for (int k = 0; k < 10; ++k) {
    const Point<2> v = uniform_direction<2>(rng);
    const double delta = std::pow(10.0, -rng.uniform(1.0, 5.0));
    const double t = floating_offset<2>(*e, kBump, delta, v);
    EXPECT_NEAR(cap_measure<2>(*e, kBump, v, t), delta, 1e-9);
    EXPECT_LE(t, e->support(v));
  }
}

TEST(FloatingBody, DiskIsConcentricDisk)
{
  const double delta = 1e-3;
  const FloatingBodyResult<2> r = weighted_floating_body<2>({unit_disk(), kOne, kOne, delta, {}});
  const double t = disk_offset(delta);
  for (double off : r.offsets)
    EXPECT_NEAR(off, t, 1e-9);
  // inscribed polygon of the concentric disk: the deficit lies between
  // pi (1 - t^2) and the exact circumscribed-polygon value
  const int n = r.directions_used;
  const double area = n * t * t * std::tan(kPi / n);
  EXPECT_NEAR(r.deficit, kPi - area, 1e-8);
  EXPECT_TRUE(r.converged);
}

TEST(FloatingBody, SymmetricForSymmetricBodies)
{
  const auto e = std::make_shared<Ellipsoid<2>>(Point<2>(1.5, 0.7));
  const FloatingBodyResult<2> r = weighted_floating_body<2>({e, kBump, kOne, 1e-3, {}});
  for (const Point<2>& v : r.inner.vertices) {
    bool found = false;
    for (const Point<2>& w : r.inner.vertices)
      found = found || (v + w).norm() < 1e-9;
    EXPECT_TRUE(found);
  }
}

TEST(FloatingBody, SquareCornerOracle)
{
  // the floating body of the unit square is bounded by the hyperbolas
  // (1/2 - |x|)(1/2 - |y|) = delta / 2, so the deficit is 2 delta (1 - ln 2 delta)
  const double delta = 1e-3;
  const FloatingBodyResult<2> r = weighted_floating_body<2>({unit_square(), kOne, kOne, delta, {}});
  const double exact = 2 * delta * (1 - std::log(2 * delta));
  EXPECT_NEAR(r.deficit / exact, 1.0, 5e-3);
  EXPECT_NEAR(r.deficit_direct, r.deficit, 1e-8);
}

TEST(FloatingBody, MonotoneAndIncluded)
{
  const auto e = std::make_shared<Ellipsoid<2>>(Point<2>(2.0, 1.0));
  const auto dirs = direction_grid<2>(128);
  std::vector<double> prev(dirs.size(), 1e300);
  for (double delta : {1e-5, 1e-4, 1e-3, 1e-2}) {
    const FloatingBodyResult<2> r = weighted_floating_body<2>({e, kBump, kOne, delta, dirs});
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      EXPECT_LE(r.offsets[k], prev[k]);
      EXPECT_LE(r.offsets[k], e->support(dirs[k]));
      prev[k] = r.offsets[k];
    }
  }
}

TEST(FloatingBody, Sandwich)
{
  // phi = (1 + |x|^2)^{-3/2} decreases outward: alpha is its boundary value,
  // beta its value at the deepest point any of the caps reaches
  const auto disk = unit_disk();
  const auto one = WeightFn<2>::uniform();
  const double alpha = std::pow(2.0, -1.5) - 1e-12;
  for (double delta : {1e-4, 1e-3, 1e-2}) {
    const double deepest = disk_offset(delta / alpha);
    const double beta = std::pow(1 + deepest * deepest, -1.5) + 1e-12;
    for (const Point<2>& v : direction_grid<2>(16)) {
      const double t = floating_offset<2>(*disk, kBump, delta, v);
      EXPECT_LE(floating_offset<2>(*disk, one, delta / alpha, v), t + 1e-9);
      EXPECT_GE(floating_offset<2>(*disk, one, delta / beta, v), t - 1e-9);
    }
  }
  // a body without rotational symmetry
  const auto e = std::make_shared<Ellipsoid<2>>(Point<2>(1.2, 0.9));
  const double a = std::pow(1 + 1.44, -1.5) - 1e-12;
  for (const Point<2>& v : direction_grid<2>(16)) {
    const double t = floating_offset<2>(*e, kBump, 1e-4, v);
    EXPECT_LE(floating_offset<2>(*e, one, 1e-4 / a, v), t + 1e-9);
    EXPECT_GE(floating_offset<2>(*e, one, 1e-4, v), t - 1e-9);
  }
}

TEST(FloatingBody, EmptyFloatingBody)
{
  EXPECT_THROW(weighted_floating_body<2>({unit_disk(), kOne, kOne, 1.9, direction_grid<2>(64)}), EmptyFloatingBody);
}

TEST(ConeFormula, AgreesWithMeasureDifference)
{
  const auto disk = unit_disk();
  const auto half = make_ball<2>(0.5);
  std::vector<Point<2>> pts;
  for (int k = 0; k < 256; ++k)
    pts.push_back(0.5 * unit(2 * kPi * k / 256));
  const auto poly = convex_hull<2>(pts);
  const QuadResult q = deficit_via_cone_formula<2>(*disk, WeightFn<2>::uniform(), poly, Point<2>::Zero());
  EXPECT_NEAR(q.value, kPi - poly.volume(), 1e-8);
  EXPECT_NEAR(q.value, 0.75 * kPi, 2e-4);

  // weighted: psi = (1 + |x|^2)^{-3/2}, Psi(disk radius r) = 2 pi (1 - 1 / sqrt(1 + r^2))
  const auto psi = kBump;
  const double exact = 2 * kPi * (1 - 1 / std::sqrt(2.0)) - measure<2>(poly, psi).value;
  EXPECT_NEAR(deficit_via_cone_formula<2>(*disk, psi, poly, Point<2>::Zero()).value, exact, 1e-7);

  CounterRng rng(8);
  const auto e = std::make_shared<Ellipsoid<2>>(Point<2>(1.3, 0.8));
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Point<2>> inner;
    for (int k = 0; k < 30; ++k) {
      const Point<2> u = uniform_direction<2>(rng);
      inner.push_back(rng.uniform(0.3, 0.95) * e->ray_exit(Point<2>::Zero(), u) * u);
    }
    const auto p = convex_hull<2>(inner);
    const double direct = measure<2>(*e, psi).value - measure<2>(p, psi).value;
    EXPECT_NEAR(deficit_via_cone_formula<2>(*e, psi, p, Point<2>::Zero()).value, direct, 1e-6);
  }
}

TEST(Predicted, ScalingsAndEllipse)
{
  const double alpha = 0.5 * std::cbrt(2.25);
  const auto one = WeightFn<2>::uniform();
  EXPECT_NEAR(predicted_floating_limit<2>(*unit_disk(), one, one), alpha * 2 * kPi, 1e-8);
  const double c = 3.0;
  EXPECT_NEAR(predicted_floating_limit<2>(*unit_disk(), WeightFn<2>::uniform(c), one),
              std::pow(c, -2.0 / 3.0) * alpha * 2 * kPi, 1e-8);
  const auto e = std::make_shared<Ellipsoid<2>>(Point<2>(2.0, 1.0));
  EXPECT_NEAR(predicted_floating_limit<2>(*e, one, one), alpha * 2 * kPi * std::cbrt(2.0), 1e-7);
  // ball in R^3: alpha_3 times the affine surface area 4 pi
  EXPECT_NEAR(predicted_floating_limit<3>(*make_ball<3>(1.0), WeightFn<3>::uniform(), WeightFn<3>::uniform()),
              0.5 * std::sqrt(4 / kPi) * 4 * kPi, 1e-7);
}

TEST(Limit, DiskConvergence)
{
  const auto one = WeightFn<2>::uniform();
  const FloatingLimitReport r = check_floating_limit<2>(unit_disk(), one, one, {1e-3, 1e-4, 1e-5});
  EXPECT_NEAR(r.predicted, 4.116650955502671, 1e-9);
  EXPECT_LT(r.rel_dev, 0.01);
  ASSERT_EQ(r.rows.size(), 3u);
  for (const FloatingRow& row : r.rows)
    EXPECT_NEAR(row.deficit, row.deficit_direct, 1e-8);
}

TEST(FloatingBody, BallInSpace)
{
  // ball caps: pi (1 - t)^2 (2 + t) / 3 = delta
  const double delta = 1e-2;
  double lo = 0.0, hi = 1.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (kPi * (1 - mid) * (1 - mid) * (2 + mid) / 3 > delta ? lo : hi) = mid;
  }
  const auto one = WeightFn<3>::uniform();
  const FloatingBodyResult<3> r = weighted_floating_body<3>({make_ball<3>(1.0), one, one, delta, direction_grid<3>(200)});
  for (double t : r.offsets)
    EXPECT_NEAR(t, lo, 1e-9);
  // the polytope circumscribes the ball of radius t and lies in the unit ball
  const double vol = r.inner.volume();
  EXPECT_GT(vol, 4 * kPi / 3 * lo * lo * lo);
  EXPECT_LT(vol, 4 * kPi / 3);
  EXPECT_NEAR(r.deficit, r.deficit_direct, 2e-5 * r.deficit);
}
