#include <gtest/gtest.h>

#include <algorithm>

#include "floatlab/hull.hpp"

using namespace floatlab;

namespace {

Point<2> unit2(double a)
{
  return Point<2>(std::cos(a), std::sin(a));
}

template <int Dim>
std::vector<Point<Dim>> sorted(std::vector<Point<Dim>> v)
{
  std::sort(v.begin(), v.end(), [](const Point<Dim>& a, const Point<Dim>& b) {
    return std::lexicographical_compare(a.data(), a.data() + Dim, b.data(), b.data() + Dim);
  });
  return v;
}

std::vector<Point<2>> random_cloud2(int n, std::uint64_t seed)
{
  CounterRng rng(seed);
  std::vector<Point<2>> pts;
  for (int k = 0; k < n; ++k)
    pts.emplace_back(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return pts;
}

std::vector<Point<3>> random_cloud3(int n, std::uint64_t seed)
{
  CounterRng rng(seed);
  std::vector<Point<3>> pts;
  for (int k = 0; k < n; ++k)
    pts.emplace_back(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
  return pts;
}

}  // namespace

TEST(Hull2, InteriorPointDropped)
{
  const auto h = convex_hull<2>({{0, 0}, {1, 0}, {0, 1}, {0.2, 0.2}});
  EXPECT_EQ(h.vertex_count(), 3);
  EXPECT_NEAR(h.volume(), 0.5, 1e-15);
  EXPECT_FALSE(h.degenerate);
}

TEST(Hull2, CounterClockwise)
{
  const auto h = convex_hull<2>(random_cloud2(200, 1));
  const int n = h.vertex_count();
  for (int k = 0; k < n; ++k) {
    const Point<2> a = h.vertices[k], b = h.vertices[(k + 1) % n], c = h.vertices[(k + 2) % n];
    EXPECT_GT((b - a).x() * (c - b).y() - (b - a).y() * (c - b).x(), 0.0);
  }
}

TEST(Hull2, Collinear)
{
  const auto h = convex_hull<2>({{0, 0}, {1, 1}, {2, 2}, {0.5, 0.5}});
  EXPECT_TRUE(h.degenerate);
}

TEST(Hull3, Tetrahedron)
{
  const auto h = convex_hull<3>({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  EXPECT_EQ(h.facet_count(), 4);
  EXPECT_EQ(h.vertex_count(), 4);
  EXPECT_NEAR(h.volume(), 1.0 / 6.0, 1e-15);
}

TEST(Hull3, CubeCoplanarFacetsCountOnce)
{
  std::vector<Point<3>> pts;
  for (int i = 0; i < 8; ++i)
    pts.emplace_back(i & 1, (i >> 1) & 1, (i >> 2) & 1);
  pts.emplace_back(0.5, 0.5, 0.5);
  const auto h = convex_hull<3>(pts);
  EXPECT_EQ(h.vertex_count(), 8);
  EXPECT_EQ(h.facet_count(), 6);
  EXPECT_NEAR(h.volume(), 1.0, 1e-14);
}

TEST(Hull3, Coplanar)
{
  const auto h = convex_hull<3>({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}});
  EXPECT_TRUE(h.degenerate);
}

TEST(Hull, Idempotence)
{
  const auto h2 = convex_hull<2>(random_cloud2(500, 2));
  const auto g2 = convex_hull<2>(h2.vertices);
  EXPECT_EQ(sorted<2>(h2.vertices), sorted<2>(g2.vertices));

  const auto h3 = convex_hull<3>(random_cloud3(500, 3));
  const auto g3 = convex_hull<3>(h3.vertices);
  EXPECT_EQ(sorted<3>(h3.vertices), sorted<3>(g3.vertices));
  EXPECT_NEAR(h3.volume(), g3.volume(), 1e-13);
}

TEST(Hull, ContainsInputAndSupport)
{
  const auto pts = random_cloud3(300, 4);
  const auto h = convex_hull<3>(pts);
  for (const auto& p : pts)
    EXPECT_TRUE(h.contains(p, 1e-10));
  CounterRng rng(9);
  for (int k = 0; k < 50; ++k) {
    const Point<3> u = uniform_direction<3>(rng);
    double best = -1e300;
    for (const auto& p : pts)
      best = std::max(best, u.dot(p));
    EXPECT_NEAR(h.support(u), best, 1e-12);
  }
}

TEST(Halfspaces, AxisSquare)
{
  const std::vector<Halfspace<2>> hs{{{1, 0}, 1}, {{-1, 0}, 1}, {{0, 1}, 1}, {{0, -1}, 1}};
  const auto p = halfspace_intersection<2>(hs);
  EXPECT_EQ(p.vertex_count(), 4);
  for (const auto& v : p.vertices) {
    EXPECT_NEAR(std::abs(v.x()), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(v.y()), 1.0, 1e-12);
  }
  EXPECT_NEAR(p.volume(), 4.0, 1e-12);
}

TEST(Halfspaces, Unbounded)
{
  std::vector<Halfspace<2>> hs;
  for (double a : {0.0, 0.5, 1.0})
    hs.push_back({unit2(a), 1.0});
  EXPECT_THROW(halfspace_intersection<2>(hs, Point<2>::Zero()), Unbounded);
}

TEST(Halfspaces, Empty)
{
  const std::vector<Halfspace<2>> hs{{{1, 0}, -1}, {{-1, 0}, -1}, {{0, 1}, 1}, {{0, -1}, 1}};
  EXPECT_THROW(halfspace_intersection<2>(hs), EmptyIntersection);
}

TEST(Halfspaces, RegularPolygonArea)
{
  for (int k : {3, 5, 8, 64}) {
    std::vector<Halfspace<2>> hs;
    for (int j = 0; j < k; ++j)
      hs.push_back({unit2(2.0 * kPi * j / k), 1.0});
    const auto p = halfspace_intersection<2>(hs);
    EXPECT_EQ(p.facet_count(), k);
    EXPECT_NEAR(p.volume(), k * std::tan(kPi / k), 1e-11) << k;
  }
}

TEST(Halfspaces, RedundantOnesDropped)
{
  std::vector<Halfspace<2>> hs{{{1, 0}, 1}, {{-1, 0}, 1}, {{0, 1}, 1}, {{0, -1}, 1}, {{1, 0}, 3}};
  const auto idx = irredundant_halfspaces<2>(hs, Point<2>::Zero());
  EXPECT_EQ(idx.size(), 4u);
  EXPECT_EQ(std::count(idx.begin(), idx.end(), 4), 0);
}

TEST(Halfspaces, DualityRoundTrip)
{
  const auto h = convex_hull<3>(random_cloud3(80, 5));
  const auto back = halfspace_intersection<3>(h.halfspaces, h.centroid());
  ASSERT_EQ(back.vertex_count(), h.vertex_count());
  const auto a = sorted<3>(h.vertices), b = sorted<3>(back.vertices);
  for (std::size_t k = 0; k < a.size(); ++k)
    EXPECT_LT((a[k] - b[k]).norm(), 1e-9);

  const auto h2 = convex_hull<2>(random_cloud2(80, 6));
  const auto back2 = halfspace_intersection<2>(h2.halfspaces);
  EXPECT_NEAR(back2.volume(), h2.volume(), 1e-11);
}

TEST(Halfspaces, ChebyshevCentre)
{
  const std::vector<Halfspace<2>> hs{{{1, 0}, 3}, {{-1, 0}, -1}, {{0, 1}, 1}, {{0, -1}, 1}};
  const auto [c, r] = chebyshev_center<2>(hs);
  EXPECT_NEAR(r, 1.0, 1e-6);
  EXPECT_NEAR(c.x(), 2.0, 1e-5);
  EXPECT_NEAR(c.y(), 0.0, 1e-5);
}
