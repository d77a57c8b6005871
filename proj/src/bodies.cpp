#include "floatlab/bodies.hpp"

#include <algorithm>
#include <sstream>

namespace floatlab {

const char* to_string(BodyKind k)
{
  switch (k) {
  case BodyKind::Ball: return "ball";
  case BodyKind::Ellipsoid: return "ellipsoid";
  case BodyKind::Polytope: return "polytope";
  case BodyKind::CapProduct: return "cap-product";
  case BodyKind::CustomSmooth: return "custom-smooth";
  case BodyKind::Affine: return "affine";
  }
  return "unknown";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double wrap_angle(double a)
{
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0)
    a += 2.0 * kPi;
  return a;
}

template <int Dim>
Point<Dim> spherical_unit(const Param<Dim>& s)
{
  if constexpr (Dim == 2) {
    return unit(s(0));
  } else {
    const double st = std::sin(s(0));
    return Point<3>(st * std::cos(s(1)), st * std::sin(s(1)), std::cos(s(0)));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ConvexBody defaults
// ---------------------------------------------------------------------------

template <int Dim>
double ConvexBody<Dim>::ray_exit(const Vec& p, const Vec& d) const
{
  if constexpr (Dim == 2) {
    // winding bisection: the polar angle of x(s) - p is monotone in s
    constexpr int N = 64;
    double ang[N + 1];
    double area = 0.0;
    Vec prev = boundary(0.0).point;
    for (int i = 0; i <= N; ++i) {
      const Vec x = i == 0 ? prev : boundary(2.0 * kPi * i / N).point;
      const Vec r = x - p;
      ang[i] = std::atan2(r.y(), r.x());
      area += prev.x() * x.y() - prev.y() * x.x();
      prev = x;
    }
    const double orient = area >= 0 ? 1.0 : -1.0;
    const double target = std::atan2(d.y(), d.x());
    // cumulative turning from sample 0; each step is in [0, 2pi) up to rounding
    double steps[N];
    for (int i = 0; i < N; ++i)
      steps[i] = wrap_angle(orient * (ang[i + 1] - ang[i]) + 1e-12) - 1e-12;
    const double need = wrap_angle(orient * (target - ang[0]));
    int seg = N - 1;
    double seg_start = 0.0;
    double cum = 0.0;
    for (int i = 0; i < N; ++i) {
      if (cum + steps[i] >= need || i == N - 1) {
        seg = i;
        seg_start = cum;
        break;
      }
      cum += steps[i];
    }
    double lo = 2.0 * kPi * seg / N, hi = 2.0 * kPi * (seg + 1) / N;
    const double a_lo = ang[seg];
    const double rem = need - seg_start;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      const Vec r = boundary(mid).point - p;
      const double turned = wrap_angle(orient * (std::atan2(r.y(), r.x()) - a_lo) + 1e-12) - 1e-12;
      if (turned < rem)
        lo = mid;
      else
        hi = mid;
    }
    const BoundarySample<2> b = boundary(0.5 * (lo + hi));
    const double nd = b.normal.dot(d);
    if (nd > 1e-8)
      return b.normal.dot(b.point - p) / nd;
    return (b.point - p).norm();
  } else {
    auto box = bounding_box();
    double hi = 2.0 * (box.second - box.first).norm() + 1.0;
    double lo = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (contains(Vec(p + mid * d), 0.0))
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  }
}

template <int Dim>
bool ConvexBody<Dim>::contains(const Vec& x, double tol) const
{
  if constexpr (Dim == 2) {
    const Vec z = interior_point();
    const Vec r = x - z;
    const double len = r.norm();
    if (len == 0.0)
      return true;
    return len <= ray_exit(z, Vec(r / len)) + tol;
  } else {
    static const std::vector<Point<3>> dirs = direction_grid<3>(2048, true);
    for (const auto& u : dirs)
      if (u.dot(x) > support(u) + tol)
        return false;
    return true;
  }
}

template <int Dim>
std::pair<Point<Dim>, Point<Dim>> ConvexBody<Dim>::bounding_box() const
{
  Vec lo, hi;
  for (int i = 0; i < Dim; ++i) {
    const Vec e = Vec::Unit(i);
    hi(i) = support(e);
    lo(i) = -support(Vec(-e));
  }
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// Ellipsoid
// ---------------------------------------------------------------------------

template <int Dim>
Ellipsoid<Dim>::Ellipsoid(const Vec& semiaxes, const Vec& center) : axes_(semiaxes), center_(center)
{
  if ((axes_.array() <= 0.0).any())
    throw InvalidArgument("bodies", "ellipsoid semiaxes must be positive");
}

template <int Dim>
BodyKind Ellipsoid<Dim>::kind() const
{
  return (axes_.array() == axes_(0)).all() ? BodyKind::Ball : BodyKind::Ellipsoid;
}

template <int Dim>
std::string Ellipsoid<Dim>::describe() const
{
  std::ostringstream os;
  os << (kind() == BodyKind::Ball ? "ball" : "ellipsoid") << "(axes=" << axes_.transpose()
     << ", center=" << center_.transpose() << ")";
  return os.str();
}

template <int Dim>
double Ellipsoid<Dim>::support(const Vec& u) const
{
  return center_.dot(u) + axes_.cwiseProduct(u).norm();
}

template <int Dim>
Point<Dim> Ellipsoid<Dim>::support_point(const Vec& u) const
{
  const Vec au = axes_.cwiseProduct(u);
  const double n = au.norm();
  if (n == 0.0)
    return center_;
  return center_ + axes_.cwiseProduct(au) / n;
}

template <int Dim>
BoundarySample<Dim> Ellipsoid<Dim>::boundary(const Param<Dim>& s) const
{
  BoundarySample<Dim> b;
  const Vec w = spherical_unit<Dim>(s);
  const Vec x = axes_.cwiseProduct(w);
  b.point = center_ + x;
  const Vec g = w.cwiseQuotient(axes_);
  b.normal = g.normalized();
  if constexpr (Dim == 2) {
    const double a = axes_(0), bb = axes_(1);
    const double q = a * a * std::sin(s(0)) * std::sin(s(0)) + bb * bb * std::cos(s(0)) * std::cos(s(0));
    b.jacobian = std::sqrt(q);
    b.curvature = a * bb / (q * std::sqrt(q));
  } else {
    const double th = s(0), ph = s(1);
    const Vec xt(axes_(0) * std::cos(th) * std::cos(ph), axes_(1) * std::cos(th) * std::sin(ph),
                 -axes_(2) * std::sin(th));
    const Vec xp(-axes_(0) * std::sin(th) * std::sin(ph), axes_(1) * std::sin(th) * std::cos(ph), 0.0);
    b.jacobian = xt.cross(xp).norm();
    const double prod = axes_.prod();
    const double q = x.cwiseQuotient(axes_.cwiseProduct(axes_)).squaredNorm();
    b.curvature = 1.0 / (prod * prod * q * q);
  }
  return b;
}

template <int Dim>
double Ellipsoid<Dim>::ray_exit(const Vec& p, const Vec& d) const
{
  const Vec y = (p - center_).cwiseQuotient(axes_);
  const Vec e = d.cwiseQuotient(axes_);
  const double ee = e.squaredNorm();
  const double ye = y.dot(e);
  // p on or marginally outside the boundary counts as boundary
  const double c = std::min(0.0, y.squaredNorm() - 1.0);
  const double disc = std::max(0.0, ye * ye - ee * c);
  // numerically stable root of ee t^2 + 2 ye t + c = 0 with t >= 0
  const double sq = std::sqrt(disc);
  if (ye <= 0)
    return (-ye + sq) / ee;
  return -c / (ye + sq);
}

template <int Dim>
bool Ellipsoid<Dim>::contains(const Vec& x, double tol) const
{
  return (x - center_).cwiseQuotient(axes_).norm() <= 1.0 + tol;
}

// ---------------------------------------------------------------------------
// Polytope
// ---------------------------------------------------------------------------

template <int Dim>
Polytope<Dim>::Polytope(const std::vector<Vec>& points) : poly_(convex_hull<Dim>(points))
{
  if (poly_.degenerate)
    throw InvalidArgument("bodies", "polytope: points are affinely dependent");
  center_ = poly_.centroid();
}

template <int Dim>
std::string Polytope<Dim>::describe() const
{
  std::ostringstream os;
  os << "polytope(" << poly_.vertices.size() << " vertices, " << poly_.halfspaces.size() << " facets)";
  return os.str();
}

template <int Dim>
double Polytope<Dim>::support(const Vec& u) const
{
  return poly_.support(u);
}

template <int Dim>
Point<Dim> Polytope<Dim>::support_point(const Vec& u) const
{
  int best = 0;
  for (int i = 1; i < static_cast<int>(poly_.vertices.size()); ++i)
    if (u.dot(poly_.vertices[i]) > u.dot(poly_.vertices[best]))
      best = i;
  return poly_.vertices[best];
}

template <int Dim>
BoundarySample<Dim> Polytope<Dim>::boundary(const Param<Dim>& s) const
{
  const Vec u = spherical_unit<Dim>(s);
  double r1 = std::numeric_limits<double>::infinity(), r2 = r1;
  int arg = -1;
  for (int i = 0; i < static_cast<int>(poly_.halfspaces.size()); ++i) {
    const auto& h = poly_.halfspaces[i];
    const double nu = h.normal.dot(u);
    if (nu <= 1e-15)
      continue;
    const double r = h.slack(center_) / nu;
    if (r < r1) {
      r2 = r1;
      r1 = r;
      arg = i;
    } else if (r < r2) {
      r2 = r;
    }
  }
  BoundarySample<Dim> b;
  const auto& h = poly_.halfspaces[arg];
  b.point = center_ + r1 * u;
  b.normal = h.normal;
  b.curvature = (r2 - r1) <= 1e-12 * r1 ? kNaN : 0.0;
  const double nu = h.normal.dot(u);
  if constexpr (Dim == 2)
    b.jacobian = r1 / nu;
  else
    b.jacobian = r1 * r1 * std::sin(s(0)) / nu;
  return b;
}

template <int Dim>
std::vector<double> Polytope<Dim>::kinks() const
{
  std::vector<double> out;
  if constexpr (Dim == 2) {
    for (const auto& v : poly_.vertices) {
      const Vec r = v - center_;
      out.push_back(wrap_angle(std::atan2(r.y(), r.x())));
    }
    std::sort(out.begin(), out.end());
  }
  return out;
}

template <int Dim>
double Polytope<Dim>::ray_exit(const Vec& p, const Vec& d) const
{
  double best = std::numeric_limits<double>::infinity();
  for (const auto& h : poly_.halfspaces) {
    const double nd = h.normal.dot(d);
    if (nd > 1e-300)
      best = std::min(best, std::max(0.0, h.slack(p)) / nd);
  }
  return best;
}

template <int Dim>
bool Polytope<Dim>::contains(const Vec& x, double tol) const
{
  return poly_.contains(x, tol);
}

// ---------------------------------------------------------------------------
// SupportBody
// ---------------------------------------------------------------------------

SupportBody::SupportBody(std::vector<double> a, std::vector<double> b, bool numeric_curvature)
  : a_(std::move(a)), b_(std::move(b)), numeric_(numeric_curvature)
{
  if (a_.empty() || !(a_[0] > 0))
    throw InvalidArgument("bodies", "support body needs a positive constant term");
  b_.resize(a_.size(), 0.0);
  a_.resize(b_.size(), 0.0);
  for (int i = 0; i < 1024; ++i) {
    const Eigen::Vector3d hv = h(2.0 * kPi * i / 1024);
    if (!(hv(0) + hv(2) > 0))
      throw InvalidArgument("bodies", "support body: h + h'' must stay positive (not strictly convex)");
  }
}

std::string SupportBody::describe() const
{
  std::ostringstream os;
  os << "support(a=[";
  for (std::size_t i = 0; i < a_.size(); ++i)
    os << (i ? "," : "") << a_[i];
  os << "], b=[";
  for (std::size_t i = 0; i < b_.size(); ++i)
    os << (i ? "," : "") << b_[i];
  os << "])";
  return os.str();
}

Eigen::Vector3d SupportBody::h(double t) const
{
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  for (std::size_t k = 0; k < a_.size(); ++k) {
    const double c = std::cos(k * t), s = std::sin(k * t);
    const double kk = static_cast<double>(k);
    out(0) += a_[k] * c + b_[k] * s;
    out(1) += kk * (-a_[k] * s + b_[k] * c);
    out(2) += -kk * kk * (a_[k] * c + b_[k] * s);
  }
  return out;
}

double SupportBody::support(const Vec& u) const
{
  const double n = u.norm();
  if (n == 0.0)
    return 0.0;
  return n * h(std::atan2(u.y(), u.x()))(0);
}

Point<2> SupportBody::support_point(const Vec& u) const
{
  return boundary(std::atan2(u.y(), u.x())).point;
}

Point<2> SupportBody::interior_point() const
{
  // Steiner point
  return a_.size() > 1 ? Vec(a_[1], b_[1]) : Vec(0.0, 0.0);
}

BoundarySample<2> SupportBody::boundary(const Param<2>& s) const
{
  const double t = s(0);
  const Eigen::Vector3d hv = h(t);
  const Vec u = unit(t);
  const Vec up(-u.y(), u.x());
  BoundarySample<2> b;
  b.point = hv(0) * u + hv(1) * up;
  b.normal = u;
  b.jacobian = hv(0) + hv(2);
  b.curvature = numeric_ ? kNaN : 1.0 / (hv(0) + hv(2));
  return b;
}

// ---------------------------------------------------------------------------
// AffineImage
// ---------------------------------------------------------------------------

template <int Dim>
AffineImage<Dim>::AffineImage(BodyPtr<Dim> base, const Mat& A, const Vec& b)
  : base_(std::move(base)), A_(A), b_(b)
{
  det_ = A_.determinant();
  if (!(std::abs(det_) > 1e-14))
    throw InvalidArgument("bodies", "affine image: singular matrix");
  Ainv_ = A_.inverse();
}

template <int Dim>
std::string AffineImage<Dim>::describe() const
{
  std::ostringstream os;
  os << "affine(det=" << det_ << ", " << base_->describe() << ")";
  return os.str();
}

template <int Dim>
double AffineImage<Dim>::support(const Vec& u) const
{
  return base_->support(Vec(A_.transpose() * u)) + b_.dot(u);
}

template <int Dim>
Point<Dim> AffineImage<Dim>::support_point(const Vec& u) const
{
  return A_ * base_->support_point(Vec(A_.transpose() * u)) + b_;
}

template <int Dim>
Point<Dim> AffineImage<Dim>::interior_point() const
{
  return A_ * base_->interior_point() + b_;
}

template <int Dim>
BoundarySample<Dim> AffineImage<Dim>::boundary(const Param<Dim>& s) const
{
  const BoundarySample<Dim> bs = base_->boundary(s);
  BoundarySample<Dim> out;
  out.point = A_ * bs.point + b_;
  const Vec m = Ainv_.transpose() * bs.normal;
  const double mn = m.norm();
  out.normal = m / mn;
  const double ad = std::abs(det_);
  out.curvature = bs.curvature / (ad * ad) * std::pow(mn, -(Dim + 1));
  out.jacobian = ad * mn * bs.jacobian;
  return out;
}

template <int Dim>
double AffineImage<Dim>::ray_exit(const Vec& p, const Vec& d) const
{
  return base_->ray_exit(Vec(Ainv_ * (p - b_)), Vec(Ainv_ * d));
}

template <int Dim>
bool AffineImage<Dim>::contains(const Vec& x, double tol) const
{
  return base_->contains(Vec(Ainv_ * (x - b_)), tol);
}

// ---------------------------------------------------------------------------
// Curvature and rolling radius
// ---------------------------------------------------------------------------

template <int Dim>
double numeric_curvature(const ConvexBody<Dim>& body, const Param<Dim>& s, double h)
{
  const BoundarySample<Dim> b0 = body.boundary(s);
  const Point<Dim> n = b0.normal;
  double est[3];
  if constexpr (Dim == 2) {
    const Point<2> t(-n.y(), n.x());
    for (int level = 0; level < 3; ++level) {
      const double hh = h / (1 << level);
      const double eta = hh / b0.jacobian;
      constexpr int J = 4;
      Eigen::Matrix<double, 2 * J + 1, 3> A;
      Eigen::Matrix<double, 2 * J + 1, 1> y;
      for (int j = -J; j <= J; ++j) {
        const Point<2> x = body.boundary(Param<2>::Constant(s(0) + eta * j / J)).point - b0.point;
        const double xi = x.dot(t) / hh;
        A.row(j + J) << xi * xi, xi * xi * xi, xi * xi * xi * xi;
        y(j + J) = -x.dot(n) / hh;
      }
      const Eigen::Vector3d c = A.colPivHouseholderQr().solve(y);
      est[level] = 2.0 * c(0) / hh;
    }
  } else {
    Point<3> t1 = n.unitOrthogonal();
    Point<3> t2 = n.cross(t1);
    // parameter speeds by central differences
    const double eps = 1e-6;
    const Param<3> et(eps, 0.0), ep(0.0, eps);
    const double vt = (body.boundary(Param<3>(s + et)).point - body.boundary(Param<3>(s - et)).point).norm() / (2 * eps);
    const double vp = (body.boundary(Param<3>(s + ep)).point - body.boundary(Param<3>(s - ep)).point).norm() / (2 * eps);
    for (int level = 0; level < 3; ++level) {
      const double hh = h / (1 << level);
      constexpr int J = 2;
      constexpr int M = (2 * J + 1) * (2 * J + 1);
      Eigen::Matrix<double, M, 12> A;
      Eigen::Matrix<double, M, 1> y;
      int row = 0;
      for (int i = -J; i <= J; ++i)
        for (int j = -J; j <= J; ++j) {
          const Param<3> q(s(0) + hh * i / (J * vt), s(1) + hh * j / (J * std::max(vp, 1e-12)));
          const Point<3> x = body.boundary(q).point - b0.point;
          const double a = x.dot(t1) / hh, c = x.dot(t2) / hh;
          A.row(row) << 0.5 * a * a, a * c, 0.5 * c * c, a * a * a, a * a * c, a * c * c, c * c * c,
            a * a * a * a, a * a * a * c, a * a * c * c, a * c * c * c, c * c * c * c;
          y(row) = -x.dot(n) / hh;
          ++row;
        }
      const Eigen::Matrix<double, 12, 1> c = A.colPivHouseholderQr().solve(y);
      est[level] = (c(0) * c(2) - c(1) * c(1)) / (hh * hh);
    }
  }
  const double r1 = (16.0 * est[1] - est[0]) / 15.0;
  const double r2 = (16.0 * est[2] - est[1]) / 15.0;
  return (64.0 * r2 - r1) / 63.0;
}

template <int Dim>
BoundarySample<Dim> curvature(const ConvexBody<Dim>& body, const Param<Dim>& s)
{
  BoundarySample<Dim> b = body.boundary(s);
  if (body.exact_curvature()) {
    if (std::isnan(b.curvature))
      throw CurvatureUnavailable("bodies", "curvature: boundary point is not a normal point");
    return b;
  }
  b.curvature = numeric_curvature(body, s);
  return b;
}

template <int Dim>
double rolling_radius(const ConvexBody<Dim>& body, const Param<Dim>& s)
{
  const BoundarySample<Dim> b = body.boundary(s);
  const auto box = body.bounding_box();
  double hi = (box.second - box.first).norm();
  double lo = 0.0;

  std::function<bool(const Point<Dim>&, double)> fits;
  const auto* poly = dynamic_cast<const Polytope<Dim>*>(&body);
  std::vector<Point<Dim>> samples;
  double kappa = 0.0;
  if (poly) {
    fits = [poly](const Point<Dim>& c, double r) {
      for (const auto& h : poly->polytope().halfspaces)
        if (h.slack(c) < r * (1.0 - 1e-12))
          return false;
      return true;
    };
  } else {
    if constexpr (Dim == 2) {
      const int N = 4096;
      for (int i = 0; i < N; ++i)
        samples.push_back(body.boundary(2.0 * kPi * i / N).point);
      for (double k : body.kinks())
        samples.push_back(body.boundary(k).point);
    } else {
      const int N = 96;
      const GaussRule& g = gauss_legendre(N);
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < 2 * N; ++j)
          samples.push_back(body.boundary(Param<3>(0.5 * kPi * (g.nodes[i] + 1.0), kPi * j / N)).point);
    }
    if (Dim == 2 && body.smooth())
      kappa = curvature(body, s).curvature;
    fits = [&samples, kappa](const Point<Dim>& c, double r) {
      // principal curvatures are not tracked in 3D; the samples decide there
      if (Dim == 2 && r * kappa > 1.0 + 1e-12)
        return false;
      for (const auto& y : samples)
        if ((y - c).norm() < r * (1.0 - 1e-9))
          return false;
      return true;
    };
  }
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (fits(Point<Dim>(b.point - mid * b.normal), mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

template <int Dim>
BodyPtr<Dim> polar_body(const ConvexBody<Dim>& body)
{
  if (const auto* e = dynamic_cast<const Ellipsoid<Dim>*>(&body)) {
    if (e->center().norm() > 0)
      throw InvalidArgument("bodies", "polar_body: ellipsoid must be centred at the origin");
    return std::make_shared<Ellipsoid<Dim>>(e->semiaxes().cwiseInverse());
  }
  if (const auto* p = dynamic_cast<const Polytope<Dim>*>(&body)) {
    std::vector<Point<Dim>> verts;
    for (const auto& h : p->polytope().halfspaces) {
      if (!(h.offset > 0))
        throw InvalidArgument("bodies", "polar_body: origin must be interior");
      verts.push_back(h.normal / h.offset);
    }
    return std::make_shared<Polytope<Dim>>(verts);
  }
  throw InvalidArgument("bodies", "polar_body: not available for " + body.describe());
}

template class ConvexBody<2>;
template class ConvexBody<3>;
template class Ellipsoid<2>;
template class Ellipsoid<3>;
template class Polytope<2>;
template class Polytope<3>;
template class AffineImage<2>;
template class AffineImage<3>;
template double numeric_curvature<2>(const ConvexBody<2>&, const Param<2>&, double);
template double numeric_curvature<3>(const ConvexBody<3>&, const Param<3>&, double);
template BoundarySample<2> curvature<2>(const ConvexBody<2>&, const Param<2>&);
template BoundarySample<3> curvature<3>(const ConvexBody<3>&, const Param<3>&);
template double rolling_radius<2>(const ConvexBody<2>&, const Param<2>&);
template double rolling_radius<3>(const ConvexBody<3>&, const Param<3>&);
template BodyPtr<2> polar_body<2>(const ConvexBody<2>&);
template BodyPtr<3> polar_body<3>(const ConvexBody<3>&);

}  // namespace floatlab
