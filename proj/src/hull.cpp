#include "floatlab/hull.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace floatlab {

namespace {

constexpr double kHullEps = 1e-12;

double cross2(const Point<2>& o, const Point<2>& a, const Point<2>& b)
{
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

// Andrew's monotone chain; counter-clockwise indices without collinear points.
std::vector<int> hull2_indices(const std::vector<Point<2>>& pts)
{
  const int n = static_cast<int>(pts.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return pts[a].x() < pts[b].x() || (pts[a].x() == pts[b].x() && pts[a].y() < pts[b].y());
  });
  idx.erase(std::unique(idx.begin(), idx.end(), [&](int a, int b) { return pts[a] == pts[b]; }),
            idx.end());
  if (idx.size() < 3)
    return idx;
  double scale = 0.0;
  for (const auto& p : pts)
    scale = std::max(scale, p.cwiseAbs().maxCoeff());
  const double eps = kHullEps * scale * scale;
  std::vector<int> h(2 * idx.size());
  int k = 0;
  for (int i : idx) {
    while (k >= 2 && cross2(pts[h[k - 2]], pts[h[k - 1]], pts[i]) <= eps)
      --k;
    h[k++] = i;
  }
  for (int j = static_cast<int>(idx.size()) - 2, t = k + 1; j >= 0; --j) {
    const int i = idx[j];
    while (k >= t && cross2(pts[h[k - 2]], pts[h[k - 1]], pts[i]) <= eps)
      --k;
    h[k++] = i;
  }
  h.resize(k - 1);
  return h;
}

struct Face3
{
  int v[3];
  Eigen::Vector3d n;
  double d;
  bool alive;
};

struct Hull3
{
  std::vector<Face3> faces;
  bool degenerate = false;
};

Face3 make_face(const std::vector<Eigen::Vector3d>& p, int a, int b, int c)
{
  Face3 f{{a, b, c}, Eigen::Vector3d::Zero(), 0.0, true};
  Eigen::Vector3d n = (p[b] - p[a]).cross(p[c] - p[a]);
  const double len = n.norm();
  f.n = len > 0 ? Eigen::Vector3d(n / len) : n;
  f.d = f.n.dot(p[a]);
  return f;
}

// Incremental 3D hull on normalized coordinates.
Hull3 hull3_faces(const std::vector<Eigen::Vector3d>& raw)
{
  Hull3 out;
  const int n = static_cast<int>(raw.size());
  if (n < 4) {
    out.degenerate = true;
    return out;
  }
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  for (const auto& q : raw)
    center += q;
  center /= n;
  double scale = 0.0;
  for (const auto& q : raw)
    scale = std::max(scale, (q - center).cwiseAbs().maxCoeff());
  if (scale == 0.0) {
    out.degenerate = true;
    return out;
  }
  std::vector<Eigen::Vector3d> p(n);
  for (int i = 0; i < n; ++i)
    p[i] = (raw[i] - center) / scale;

  int i0 = 0;
  for (int i = 1; i < n; ++i)
    if (p[i].x() < p[i0].x())
      i0 = i;
  int i1 = -1;
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = (p[i] - p[i0]).norm();
    if (d > best) {
      best = d;
      i1 = i;
    }
  }
  if (i1 < 0 || best < kHullEps) {
    out.degenerate = true;
    return out;
  }
  const Eigen::Vector3d dir = (p[i1] - p[i0]).normalized();
  int i2 = -1;
  best = 0.0;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d w = p[i] - p[i0];
    const double d = (w - w.dot(dir) * dir).norm();
    if (d > best) {
      best = d;
      i2 = i;
    }
  }
  if (i2 < 0 || best < kHullEps) {
    out.degenerate = true;
    return out;
  }
  const Eigen::Vector3d nrm = (p[i1] - p[i0]).cross(p[i2] - p[i0]).normalized();
  int i3 = -1;
  best = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = std::abs(nrm.dot(p[i] - p[i0]));
    if (d > best) {
      best = d;
      i3 = i;
    }
  }
  if (i3 < 0 || best < kHullEps) {
    out.degenerate = true;
    return out;
  }

  auto& faces = out.faces;
  const Eigen::Vector3d inner = 0.25 * (p[i0] + p[i1] + p[i2] + p[i3]);
  const int tet[4][3] = {{i0, i1, i2}, {i0, i1, i3}, {i0, i2, i3}, {i1, i2, i3}};
  for (const auto& t : tet) {
    Face3 f = make_face(p, t[0], t[1], t[2]);
    if (f.n.dot(inner) - f.d > 0)
      f = make_face(p, t[0], t[2], t[1]);
    faces.push_back(f);
  }

  std::vector<int> visible;
  std::unordered_set<std::uint64_t> edges;
  std::vector<std::pair<int, int>> horizon;
  const auto key = [](int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
  };
  int dead = 0;
  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1 || i == i2 || i == i3)
      continue;
    visible.clear();
    for (int f = 0; f < static_cast<int>(faces.size()); ++f)
      if (faces[f].alive && faces[f].n.dot(p[i]) - faces[f].d > kHullEps)
        visible.push_back(f);
    if (visible.empty())
      continue;
    edges.clear();
    for (int f : visible)
      for (int e = 0; e < 3; ++e)
        edges.insert(key(faces[f].v[e], faces[f].v[(e + 1) % 3]));
    horizon.clear();
    for (int f : visible) {
      for (int e = 0; e < 3; ++e) {
        const int a = faces[f].v[e], b = faces[f].v[(e + 1) % 3];
        if (!edges.count(key(b, a)))
          horizon.emplace_back(a, b);
      }
      faces[f].alive = false;
      ++dead;
    }
    for (const auto& [a, b] : horizon)
      faces.push_back(make_face(p, a, b, i));
    if (dead > 64 && dead > static_cast<int>(faces.size()) / 2) {
      faces.erase(std::remove_if(faces.begin(), faces.end(), [](const Face3& f) { return !f.alive; }),
                  faces.end());
      dead = 0;
    }
  }
  faces.erase(std::remove_if(faces.begin(), faces.end(), [](const Face3& f) { return !f.alive; }),
              faces.end());
  // planes back in input coordinates
  for (auto& f : faces)
    f.d = f.d * scale + f.n.dot(center);
  return out;
}

template <int Dim>
Point<Dim> solve_vertex(const std::vector<Halfspace<Dim>>& hs, const std::array<int, Dim>& ids)
{
  Eigen::Matrix<double, Dim, Dim> A;
  Point<Dim> b;
  for (int r = 0; r < Dim; ++r) {
    A.row(r) = hs[ids[r]].normal.transpose();
    b(r) = hs[ids[r]].offset;
  }
  return A.fullPivLu().solve(b);
}

}  // namespace

// ---------------------------------------------------------------------------

template <int Dim>
double PolytopeApprox<Dim>::volume() const
{
  if (degenerate || vertices.size() < Dim + 1)
    return 0.0;
  if constexpr (Dim == 2) {
    double a = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      const auto& p = vertices[i];
      const auto& q = vertices[(i + 1) % vertices.size()];
      a += p.x() * q.y() - p.y() * q.x();
    }
    return 0.5 * a;
  } else {
    Point<3> c = Point<3>::Zero();
    for (const auto& v : vertices)
      c += v;
    c /= static_cast<double>(vertices.size());
    double vol = 0.0;
    for (const auto& f : facets)
      vol += (vertices[f[0]] - c).dot((vertices[f[1]] - c).cross(vertices[f[2]] - c));
    return vol / 6.0;
  }
}

template <int Dim>
Point<Dim> PolytopeApprox<Dim>::centroid() const
{
  Point<Dim> mean = Point<Dim>::Zero();
  for (const auto& v : vertices)
    mean += v;
  if (vertices.empty())
    return mean;
  mean /= static_cast<double>(vertices.size());
  if (degenerate)
    return mean;
  Point<Dim> acc = Point<Dim>::Zero();
  double total = 0.0;
  if constexpr (Dim == 2) {
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      const auto& p = vertices[i];
      const auto& q = vertices[(i + 1) % vertices.size()];
      const double w = cross2(mean, p, q);
      acc += w * (mean + p + q) / 3.0;
      total += w;
    }
  } else {
    for (const auto& f : facets) {
      const auto &a = vertices[f[0]], &b = vertices[f[1]], &c = vertices[f[2]];
      const double w = (a - mean).dot((b - mean).cross(c - mean));
      acc += w * (mean + a + b + c) / 4.0;
      total += w;
    }
  }
  return total > 0 ? Point<Dim>(acc / total) : mean;
}

template <int Dim>
double PolytopeApprox<Dim>::support(const Point<Dim>& u) const
{
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : vertices)
    best = std::max(best, u.dot(v));
  return best;
}

template <int Dim>
bool PolytopeApprox<Dim>::contains(const Point<Dim>& x, double tol) const
{
  for (const auto& h : halfspaces)
    if (h.normal.dot(x) > h.offset + tol)
      return false;
  return true;
}

// ---------------------------------------------------------------------------

template <int Dim>
PolytopeApprox<Dim> convex_hull(const std::vector<Point<Dim>>& points)
{
  if (points.size() < Dim + 1)
    throw InvalidArgument("bodies", "convex_hull: need at least dim+1 points");
  PolytopeApprox<Dim> out;
  if constexpr (Dim == 2) {
    const std::vector<int> h = hull2_indices(points);
    for (int i : h)
      out.vertices.push_back(points[i]);
    if (h.size() < 3) {
      out.degenerate = true;
      return out;
    }
    const int k = static_cast<int>(h.size());
    for (int i = 0; i < k; ++i) {
      const Point<2> e = out.vertices[(i + 1) % k] - out.vertices[i];
      Halfspace<2> hs;
      hs.normal = Point<2>(e.y(), -e.x()).normalized();
      hs.offset = hs.normal.dot(out.vertices[i]);
      out.halfspaces.push_back(hs);
      out.facets.push_back({i, (i + 1) % k});
    }
    if (out.volume() <= kHullEps) {
      double scale = 0.0;
      for (const auto& v : out.vertices)
        scale = std::max(scale, v.cwiseAbs().maxCoeff());
      if (out.volume() <= kHullEps * scale * scale)
        out.degenerate = true;
    }
  } else {
    std::vector<Eigen::Vector3d> p(points.begin(), points.end());
    Hull3 h = hull3_faces(p);
    if (h.degenerate) {
      out.degenerate = true;
      out.vertices = points;
      return out;
    }
    std::vector<int> remap(points.size(), -1);
    for (const auto& f : h.faces) {
      std::array<int, 3> tri;
      for (int e = 0; e < 3; ++e) {
        int& r = remap[f.v[e]];
        if (r < 0) {
          r = static_cast<int>(out.vertices.size());
          out.vertices.push_back(points[f.v[e]]);
        }
        tri[e] = r;
      }
      out.facets.push_back(tri);
      bool merged = false;
      for (const auto& hs : out.halfspaces) {
        if ((hs.normal - f.n).norm() < 1e-9 && std::abs(hs.offset - f.d) < 1e-9 * (1.0 + std::abs(f.d))) {
          merged = true;
          break;
        }
      }
      if (!merged)
        out.halfspaces.push_back({f.n, f.d});
    }
  }
  return out;
}

template <int Dim>
std::pair<Point<Dim>, double> chebyshev_center(const std::vector<Halfspace<Dim>>& hs)
{
  if (hs.empty())
    throw InvalidArgument("bodies", "chebyshev_center: no halfspaces");
  double scale = 1.0;
  for (const auto& h : hs)
    scale = std::max(scale, std::abs(h.offset));
  const auto min_slack = [&](const Point<Dim>& z, int& arg) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(hs.size()); ++i) {
      const double s = hs[i].slack(z) / hs[i].normal.norm();
      if (s < best) {
        best = s;
        arg = i;
      }
    }
    return best;
  };
  const double R = 1e3 * scale;
  Point<Dim> c = Point<Dim>::Zero();
  Eigen::Matrix<double, Dim, Dim> P = Eigen::Matrix<double, Dim, Dim>::Identity() * R * R;
  Point<Dim> best_z = c;
  int arg = 0;
  double best_f = min_slack(c, arg);
  const double n = Dim;
  for (int it = 0; it < 400 * Dim * Dim; ++it) {
    const double f = min_slack(c, arg);
    if (f > best_f) {
      best_f = f;
      best_z = c;
    }
    const Point<Dim> a = hs[arg].normal;
    const Point<Dim> Pa = P * a;
    const double aPa = a.dot(Pa);
    if (!(aPa > 1e-30 * R * R))
      break;
    const Point<Dim> step = Pa / std::sqrt(aPa);
    c -= step / (n + 1.0);
    P = (n * n / (n * n - 1.0)) * (P - (2.0 / (n + 1.0)) * step * step.transpose());
    if (std::sqrt(P.trace()) < 1e-13 * scale)
      break;
  }
  return {best_z, best_f};
}

template <int Dim>
PolytopeApprox<Dim> halfspace_intersection(const std::vector<Halfspace<Dim>>& hs,
                                           std::optional<Point<Dim>> interior)
{
  if (hs.size() < Dim + 1)
    throw Unbounded("bodies", "halfspace_intersection: fewer than dim+1 halfspaces");
  Point<Dim> z;
  bool ok = false;
  if (interior) {
    z = *interior;
    ok = true;
    for (const auto& h : hs)
      if (!(h.slack(z) > 0.0)) {
        ok = false;
        break;
      }
  }
  if (!ok) {
    auto [c, r] = chebyshev_center(hs);
    double scale = 1.0;
    for (const auto& h : hs)
      scale = std::max(scale, std::abs(h.offset));
    if (!(r > 1e-12 * scale))
      throw EmptyIntersection("bodies", "halfspace_intersection: empty interior");
    z = c;
  }

  std::vector<Point<Dim>> q(hs.size());
  double qmax = 0.0;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    q[i] = hs[i].normal / hs[i].slack(z);
    qmax = std::max(qmax, q[i].norm());
  }

  PolytopeApprox<Dim> out;
  if constexpr (Dim == 2) {
    const std::vector<int> h = hull2_indices(q);
    if (h.size() < 3)
      throw Unbounded("bodies", "halfspace_intersection: normals do not surround the origin");
    const int k = static_cast<int>(h.size());
    for (int i = 0; i < k; ++i) {
      const Point<2>& a = q[h[i]];
      const Point<2>& b = q[h[(i + 1) % k]];
      // the origin must lie strictly left of every dual edge
      const double side = a.x() * b.y() - a.y() * b.x();
      if (side <= kHullEps * qmax * qmax)
        throw Unbounded("bodies", "halfspace_intersection: unbounded intersection");
    }
    for (int i = 0; i < k; ++i) {
      const int a = h[i], b = h[(i + 1) % k];
      out.vertices.push_back(solve_vertex<2>(hs, {a, b}));
    }
    for (int i = 0; i < k; ++i) {
      const int id = h[(i + 1) % k];
      out.irredundant.push_back(id);
      out.halfspaces.push_back(hs[id]);
      out.facets.push_back({i, (i + 1) % k});
    }
  } else {
    std::vector<Eigen::Vector3d> qq(q.begin(), q.end());
    Hull3 h = hull3_faces(qq);
    if (h.degenerate)
      throw Unbounded("bodies", "halfspace_intersection: normals do not surround the origin");
    std::vector<char> used(hs.size(), 0);
    std::vector<Point<3>> verts;
    for (const auto& f : h.faces) {
      if (f.d <= kHullEps * qmax)
        throw Unbounded("bodies", "halfspace_intersection: unbounded intersection");
      Point<3> v = z + f.n / f.d;
      // refine through the three defining planes when they are well conditioned
      Eigen::Matrix3d A;
      Eigen::Vector3d b;
      for (int r = 0; r < 3; ++r) {
        A.row(r) = hs[f.v[r]].normal.transpose();
        b(r) = hs[f.v[r]].offset;
        used[f.v[r]] = 1;
      }
      Eigen::FullPivLU<Eigen::Matrix3d> lu(A);
      if (lu.rcond() > 1e-10)
        v = lu.solve(b);
      bool dup = false;
      for (const auto& w : verts)
        if ((w - v).norm() < 1e-9 * (1.0 + v.norm())) {
          dup = true;
          break;
        }
      if (!dup)
        verts.push_back(v);
    }
    for (std::size_t i = 0; i < hs.size(); ++i)
      if (used[i]) {
        out.irredundant.push_back(static_cast<int>(i));
        out.halfspaces.push_back(hs[i]);
      }
    PolytopeApprox<3> shape = convex_hull<3>(verts);
    out.vertices = std::move(shape.vertices);
    out.facets = std::move(shape.facets);
    out.degenerate = shape.degenerate;
  }
  return out;
}

template <int Dim>
std::vector<int> irredundant_halfspaces(const std::vector<Halfspace<Dim>>& hs, const Point<Dim>& z)
{
  std::vector<Point<Dim>> q;
  q.reserve(hs.size() + 1);
  for (const auto& h : hs) {
    const double s = h.slack(z);
    if (!(s > 0.0))
      throw InvalidArgument("bodies", "irredundant_halfspaces: point not interior");
    q.push_back(h.normal / s);
  }
  const int origin = static_cast<int>(q.size());
  q.push_back(Point<Dim>::Zero());
  std::vector<int> out;
  if constexpr (Dim == 2) {
    for (int i : hull2_indices(q))
      if (i != origin)
        out.push_back(i);
  } else {
    std::vector<Eigen::Vector3d> qq(q.begin(), q.end());
    Hull3 h = hull3_faces(qq);
    std::vector<char> used(q.size(), 0);
    for (const auto& f : h.faces)
      for (int e = 0; e < 3; ++e)
        used[f.v[e]] = 1;
    for (int i = 0; i < origin; ++i)
      if (used[i])
        out.push_back(i);
  }
  std::sort(out.begin(), out.end());
  return out;
}

template struct PolytopeApprox<2>;
template struct PolytopeApprox<3>;
template PolytopeApprox<2> convex_hull<2>(const std::vector<Point<2>>&);
template PolytopeApprox<3> convex_hull<3>(const std::vector<Point<3>>&);
template PolytopeApprox<2> halfspace_intersection<2>(const std::vector<Halfspace<2>>&, std::optional<Point<2>>);
template PolytopeApprox<3> halfspace_intersection<3>(const std::vector<Halfspace<3>>&, std::optional<Point<3>>);
template std::vector<int> irredundant_halfspaces<2>(const std::vector<Halfspace<2>>&, const Point<2>&);
template std::vector<int> irredundant_halfspaces<3>(const std::vector<Halfspace<3>>&, const Point<3>&);
template std::pair<Point<2>, double> chebyshev_center<2>(const std::vector<Halfspace<2>>&);
template std::pair<Point<3>, double> chebyshev_center<3>(const std::vector<Halfspace<3>>&);

}  // namespace floatlab
