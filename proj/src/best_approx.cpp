#include <algorithm>
#include <limits>

#include "floatlab/lab.hpp"

namespace floatlab {

namespace {

double cross(const Point<2>& a, const Point<2>& b)
{
  return a.x() * b.y() - a.y() * b.x();
}

// signed psi-measure of the triangle (a, b, c): positive when counter-clockwise;
// the rule is finer along a-b since the triangles are thin fans from a
double weighted_triangle(const WeightFn<2>& psi, const Point<2>& a, const Point<2>& b, const Point<2>& c)
{
  const double a2 = cross(b - a, c - a);
  if (psi.is_constant())
    return 0.5 * *psi.constant * a2;
  const GaussRule& gu = gauss_legendre(12);
  const GaussRule& gv = gauss_legendre(4);
  double sum = 0.0;
  for (std::size_t i = 0; i < gu.nodes.size(); ++i) {
    const double u = 0.5 * (gu.nodes[i] + 1.0);
    for (std::size_t j = 0; j < gv.nodes.size(); ++j) {
      const double v = 0.5 * (gv.nodes[j] + 1.0);
      sum += gu.weights[i] * gv.weights[j] * u * psi(Point<2>(a + u * (b - a) + u * v * (c - b)));
    }
  }
  return 0.25 * sum * a2;
}

struct Nodes
{
  std::vector<double> params;
  std::vector<Point<2>> points, normals;
  std::vector<double> sector;  ///< cumulative weighted sector about z, size B + 1
  Point<2> z;
};

Nodes make_nodes(const ConvexBody<2>& body, const WeightFn<2>& psi, int count)
{
  Nodes nd;
  nd.z = body.interior_point();
  const int fine = std::max(4096, 8 * count);
  std::vector<double> w(fine + 1);
  for (int k = 0; k < fine; ++k) {
    const BoundarySample<2> b = curvature(body, 2.0 * kPi * k / fine);
    w[k] = std::cbrt(b.curvature * psi(b.point)) * b.jacobian;
  }
  w[fine] = w[0];
  const double wmax = *std::max_element(w.begin(), w.end());
  for (double& x : w)
    x = std::max(x, 1e-6 * wmax);
  std::vector<double> cum(fine + 1, 0.0);
  for (int k = 0; k < fine; ++k)
    cum[k + 1] = cum[k] + 0.5 * (w[k] + w[k + 1]);
  const double h = 2.0 * kPi / fine;
  for (int j = 0; j < count; ++j) {
    const double target = cum[fine] * j / count;
    const auto it = std::upper_bound(cum.begin(), cum.end(), target);
    const int k = std::clamp(static_cast<int>(it - cum.begin()) - 1, 0, fine - 1);
    const double frac = (target - cum[k]) / (cum[k + 1] - cum[k]);
    nd.params.push_back((k + frac) * h);
  }
  for (double s : nd.params) {
    const BoundarySample<2> b = body.boundary(s);
    nd.points.push_back(b.point);
    nd.normals.push_back(b.normal);
  }

  // weighted sector between consecutive nodes: int over s of
  // (p - z) x p'(s) int_0^1 psi(z + r (p - z)) r dr
  const GaussRule& gs = gauss_legendre(4);
  const GaussRule& gr = gauss_legendre(8);
  nd.sector.assign(count + 1, 0.0);
  for (int j = 0; j < count; ++j) {
    const double a = nd.params[j];
    const double b = j + 1 < count ? nd.params[j + 1] : nd.params[0] + 2.0 * kPi;
    double sum = 0.0;
    for (std::size_t i = 0; i < gs.nodes.size(); ++i) {
      const double s = 0.5 * (a + b) + 0.5 * (b - a) * gs.nodes[i];
      const BoundarySample<2> bs = body.boundary(s);
      const Point<2> d = bs.point - nd.z;
      const Point<2> tangent = bs.jacobian * Point<2>(-bs.normal.y(), bs.normal.x());
      double radial = 0.5;
      if (!psi.is_constant()) {
        radial = 0.0;
        for (std::size_t q = 0; q < gr.nodes.size(); ++q) {
          const double r = 0.5 * (gr.nodes[q] + 1.0);
          radial += 0.5 * gr.weights[q] * psi(Point<2>(nd.z + r * d)) * r;
        }
      } else {
        radial *= *psi.constant;
      }
      sum += gs.weights[i] * cross(d, tangent) * radial;
    }
    nd.sector[j + 1] = nd.sector[j] + 0.5 * (b - a) * sum;
  }
  return nd;
}

}  // namespace

double best_approx_functional(const ConvexBody<2>& body, const WeightFn<2>& psi)
{
  return boundary_integral<2>(
           body, [&](const BoundarySample<2>& b) { return std::cbrt(b.curvature * psi(b.point)); }, true)
    .value;
}

double inscribed_polygon_distance(const ConvexBody<2>& body, std::vector<double> params, const WeightFn<2>& psi)
{
  if (params.size() < 3)
    throw BudgetTooSmall("lab", "an inscribed polygon needs at least 3 vertices");
  std::vector<Point<2>> pts;
  for (double s : params)
    pts.push_back(body.boundary(s).point);
  return measure<2>(body, psi).value - measure<2>(convex_hull<2>(pts), psi).value;
}

BestPolygon best_polygon_area(const ConvexBody<2>& body, int m, const WeightFn<2>& psi, const BestApproxOptions& opts)
{
  if (m < 3)
    throw BudgetTooSmall("lab", "vertex budget must be at least 3, got " + std::to_string(m));
  const int step = std::max(2, opts.nodes_per_vertex);
  const int B = step * m;
  const Nodes nd = make_nodes(body, psi, B);
  const double total = nd.sector[B];

  const auto at = [&](int j) -> const Point<2>& { return nd.points[((j % B) + B) % B]; };
  const auto sector_to = [&](int j) {
    const int w = ((j % B) + B) % B;
    return nd.sector[w] + total * ((j - w) / B);
  };
  // psi-measure between the arc from node i to node j > i and its chord
  const auto cap = [&](int i, int j) {
    return sector_to(j) - sector_to(i) - weighted_triangle(psi, nd.z, at(i), at(j));
  };
  const auto tangent_corner = [&](int i, int j, Point<2>& x) {
    const Point<2>& ni = nd.normals[((i % B) + B) % B];
    const Point<2>& nj = nd.normals[((j % B) + B) % B];
    const double det = cross(ni, nj);
    if (!(det > 1e-14))
      return false;
    const double ci = ni.dot(at(i)), cj = nj.dot(at(j));
    x = Point<2>((ci * nj.y() - cj * ni.y()) / det, (ni.x() * cj - nj.x() * ci) / det);
    return true;
  };
  const double inf = std::numeric_limits<double>::infinity();
  const auto cost = [&](int i, int j) {
    if (j <= i)
      return inf;
    if (!opts.circumscribed)
      return cap(i, j);
    Point<2> x;
    if (!tangent_corner(i, j, x))
      return inf;
    return weighted_triangle(psi, at(i), x, at(j)) - cap(i, j);
  };

  BestPolygon best;
  best.distance = inf;
  best.nodes = B;
  best.circumscribed = opts.circumscribed;
  const int starts = std::clamp(opts.starts, 1, step);
  const int half = step / 2;
  const int width = 2 * half + 1;
  for (int t = 0; t < starts; ++t) {
    const int s0 = t * step / starts;
    // dp[k][o]: vertex k at node s0 + k step + o - half
    std::vector<double> dp(static_cast<std::size_t>(m) * width, inf);
    std::vector<int> from(dp.size(), -1);
    const auto node = [&](int k, int o) { return s0 + k * step + o - half; };
    for (int o = 0; o < width; ++o)
      dp[width + o] = cost(s0, node(1, o));
    for (int k = 2; k < m; ++k)
      for (int o = 0; o < width; ++o) {
        const int j = node(k, o);
        double bestv = inf;
        int arg = -1;
        for (int p = 0; p < width; ++p) {
          const double prev = dp[(k - 1) * width + p];
          if (prev == inf)
            continue;
          const double v = prev + cost(node(k - 1, p), j);
          if (v < bestv) {
            bestv = v;
            arg = p;
          }
        }
        dp[k * width + o] = bestv;
        from[k * width + o] = arg;
      }
    double closing = inf;
    int last = -1;
    for (int o = 0; o < width; ++o) {
      const double prev = dp[(m - 1) * width + o];
      if (prev == inf)
        continue;
      const double v = prev + cost(node(m - 1, o), s0 + B);
      if (v < closing) {
        closing = v;
        last = o;
      }
    }
    if (closing < best.distance) {
      std::vector<int> idx(m);
      idx[0] = s0;
      for (int k = m - 1, o = last; k >= 1; --k) {
        idx[k] = node(k, o);
        o = from[k * width + o];
      }
      best.distance = closing;
      best.vertices.clear();
      best.params.clear();
      for (int k = 0; k < m; ++k) {
        best.params.push_back(nd.params[idx[k] % B]);
        if (!opts.circumscribed) {
          best.vertices.push_back(at(idx[k]));
        } else {
          Point<2> x;
          tangent_corner(idx[k], k + 1 < m ? idx[k + 1] : idx[0] + B, x);
          best.vertices.push_back(x);
        }
      }
    }
  }
  if (best.distance == inf)
    throw ToleranceNotMet("lab", "no admissible polygon in the node bands");
  return best;
}

}  // namespace floatlab
