#include "floatlab/numerics.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <queue>
#include <thread>

namespace floatlab {

double unit_ball_volume(int n)
{
  if (n < 0)
    throw InvalidArgument("numerics", "unit_ball_volume: negative dimension");
  return std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double sphere_volume(int n)
{
  return (n + 1) * unit_ball_volume(n + 1);
}

double floating_constant(int n)
{
  return 0.5 * std::pow((n + 1) / unit_ball_volume(n - 1), 2.0 / (n + 1));
}

double random_constant(int n)
{
  const double nn = n;
  const double num = (nn * nn + nn + 2.0) * (nn * nn + 1.0);
  const double den = 2.0 * (nn + 3.0) * std::tgamma(nn + 2.0);
  return num / den * std::tgamma((nn * nn + 1.0) / (nn + 1.0)) *
         std::pow((nn + 1.0) / unit_ball_volume(n - 1), 2.0 / (nn + 1.0));
}

// ---------------------------------------------------------------------------

const GaussRule& gauss_legendre(int order)
{
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it != cache.end())
    return it->second;
  if (order < 1)
    throw InvalidArgument("numerics", "gauss_legendre: order must be positive");

  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    // Newton on P_n from the Chebyshev-like initial guess
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1)
    rule.nodes[order / 2] = 0.0;
  return cache.emplace(order, std::move(rule)).first->second;
}

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment
{
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b)
{
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    kron += kWgk[j] * (f1 + f2);
    if (j % 2 == 1)
      gauss += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              const QuadOptions& opts)
{
  QuadResult out;
  if (a == b)
    return out;
  std::priority_queue<Segment> heap;
  Segment first = gk15(f, a, b);
  out.evaluations = 15;
  double value = first.value;
  double error = first.error;
  heap.push(first);
  int intervals = 1;
  while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(value))) {
    if (intervals >= opts.max_intervals) {
      if (opts.throw_on_failure)
        throw ToleranceNotMet("numerics", "integrate_adaptive: interval budget exhausted (error " +
                                               std::to_string(error) + ")");
      break;
    }
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // interval collapsed to machine resolution; accept what we have
      heap.push(worst);
      break;
    }
    Segment left = gk15(f, worst.a, mid);
    Segment right = gk15(f, mid, worst.b);
    out.evaluations += 30;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }
  // re-sum to shed accumulated cancellation in the running totals
  value = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  out.value = value;
  out.error = error;
  return out;
}

QuadResult integrate_periodic(const std::function<double(double)>& f, double a, double period,
                              double rel_tol, int min_nodes, int max_nodes, bool throw_on_failure)
{
  int n = std::max(min_nodes, 4);
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    sum += f(a + period * i / n);
  double prev = sum * period / n;
  QuadResult out;
  out.evaluations = n;
  while (true) {
    // new nodes are the midpoints of the current ones
    double extra = 0.0;
    for (int i = 0; i < n; ++i)
      extra += f(a + period * (i + 0.5) / n);
    out.evaluations += n;
    sum += extra;
    n *= 2;
    const double cur = sum * period / n;
    const double err = std::abs(cur - prev);
    if (err <= rel_tol * std::abs(cur) || err < 1e-300) {
      out.value = cur;
      out.error = err;
      return out;
    }
    if (n >= max_nodes) {
      if (throw_on_failure)
        throw ToleranceNotMet("numerics", "integrate_periodic: node budget exhausted");
      out.value = cur;
      out.error = err;
      return out;
    }
    prev = cur;
  }
}

// ---------------------------------------------------------------------------

double bisect(const std::function<double(double)>& f, double lo, double hi, double abs_tol,
              int max_iter)
{
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0)
    return lo;
  if (fhi == 0.0)
    return hi;
  if ((flo > 0) == (fhi > 0))
    throw RootNotBracketed("numerics", "bisect: no sign change on bracket");
  for (int it = 0; it < max_iter && hi - lo > abs_tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0)
      return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double brent(const std::function<double(double)>& f, double lo, double hi, double abs_tol,
             int max_iter)
{
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0)
    return a;
  if (fb == 0.0)
    return b;
  if ((fa > 0) == (fb > 0))
    throw RootNotBracketed("numerics", "brent: no sign change on bracket");
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * 2.2e-16 * std::abs(b) + 0.5 * abs_tol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0)
      return b;
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0)
        q = -q;
      else
        p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol) ? d : (m > 0 ? tol : -tol);
    fb = f(b);
  }
  return b;
}

double golden_maximize(const std::function<double(double)>& f, double lo, double hi, double abs_tol)
{
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > abs_tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    }
  }
  return 0.5 * (lo + hi);
}

LimitFit fit_limit(std::span<const double> x, std::span<const double> y, double p)
{
  if (x.size() != y.size() || x.size() < 2)
    throw InvalidArgument("numerics", "fit_limit: need at least two matching samples");
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = std::pow(x[i], p);
    b(i) = y[i];
  }
  const Eigen::Vector2d c = A.colPivHouseholderQr().solve(b);
  LimitFit out;
  out.limit = c(0);
  out.slope = c(1);
  out.residual = (A * c - b).norm();
  return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y)
{
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return fit_limit(lx, ly, 1.0).slope;
}

// ---------------------------------------------------------------------------

std::uint64_t mix64(std::uint64_t x)
{
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t replicate, std::uint64_t purpose)
  : key_(mix64(mix64(mix64(seed) ^ (replicate + 0x632be59bd9b4e019ULL)) ^
               (purpose * 0x9e3779b97f4a7c15ULL + 0x1d8e4e27c47d124fULL)))
{}

CounterRng::result_type CounterRng::operator()()
{
  return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_);
}

template <int Dim>
Point<Dim> uniform_direction(CounterRng& rng)
{
  if constexpr (Dim == 2) {
    const double a = rng.uniform(0.0, 2.0 * kPi);
    return Point<Dim>(std::cos(a), std::sin(a));
  } else {
    const double z = rng.uniform(-1.0, 1.0);
    const double a = rng.uniform(0.0, 2.0 * kPi);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return Point<Dim>(r * std::cos(a), r * std::sin(a), z);
  }
}

template <int Dim>
std::vector<Point<Dim>> direction_grid(int count, bool symmetric)
{
  if (count < 1)
    throw InvalidArgument("numerics", "direction_grid: count must be positive");
  std::vector<Point<Dim>> out;
  if constexpr (Dim == 2) {
    if (symmetric && count % 2)
      ++count;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
      const double a = 2.0 * kPi * i / count;
      out.emplace_back(std::cos(a), std::sin(a));
    }
  } else {
    const int half = symmetric ? (count + 1) / 2 : count;
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    out.reserve(symmetric ? 2 * half : half);
    for (int i = 0; i < half; ++i) {
      // symmetric grids use the upper half of a Fibonacci lattice and its antipodes
      const double z = symmetric ? 1.0 - (i + 0.5) / half : 1.0 - 2.0 * (i + 0.5) / half;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = golden * i;
      out.emplace_back(r * std::cos(a), r * std::sin(a), z);
    }
    if (symmetric) {
      for (int i = 0; i < half; ++i)
        out.push_back(-out[i]);
    }
  }
  return out;
}

template Point<2> uniform_direction<2>(CounterRng&);
template Point<3> uniform_direction<3>(CounterRng&);
template std::vector<Point<2>> direction_grid<2>(int, bool);
template std::vector<Point<3>> direction_grid<3>(int, bool);

// ---------------------------------------------------------------------------

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body)
{
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hw, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers)
          body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool)
    t.join();
  for (auto& e : errors)
    if (e)
      std::rethrow_exception(e);
}

}  // namespace floatlab
