#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "floatlab/errors.hpp"

namespace floatlab {

template <int Dim>
using Point = Eigen::Matrix<double, Dim, 1>;

inline constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Dimensional constants
// ---------------------------------------------------------------------------

/// Volume of the n-dimensional Euclidean unit ball.
double unit_ball_volume(int n);

/// n-dimensional volume of the unit sphere S^n in R^{n+1}.
double sphere_volume(int n);

/// Constant of the floating-body limit: 1/2 ((n+1)/v_{n-1})^{2/(n+1)}.
double floating_constant(int n);

/// Constant of the random-polytope limit.
double random_constant(int n);

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

struct QuadResult
{
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
};

struct QuadOptions
{
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
  int max_intervals = 2000;
  /// When false, exceeding the interval budget returns the best estimate
  /// instead of throwing ToleranceNotMet.
  bool throw_on_failure = true;
};

/// Gauss-Legendre nodes and weights on [-1, 1]; cached per order.
struct GaussRule
{
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

template <class F>
double integrate_gauss(F&& f, double a, double b, int order)
{
  const GaussRule& rule = gauss_legendre(order);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

/// Adaptive Gauss-Kronrod (7/15) quadrature with global error control.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              const QuadOptions& opts = {});

/// Trapezoid rule on a periodic interval [a, a + period), doubling the node
/// count until successive estimates agree to rel_tol. Spectrally accurate for
/// smooth periodic integrands.
QuadResult integrate_periodic(const std::function<double(double)>& f, double a, double period,
                              double rel_tol = 1e-12, int min_nodes = 32, int max_nodes = 1 << 16,
                              bool throw_on_failure = true);

// ---------------------------------------------------------------------------
// Root finding and fitting
// ---------------------------------------------------------------------------

/// Bisection for a sign change of f on [lo, hi]; stops when the bracket is
/// narrower than abs_tol. Throws RootNotBracketed if f(lo), f(hi) agree in sign.
double bisect(const std::function<double(double)>& f, double lo, double hi, double abs_tol,
              int max_iter = 200);

/// Brent's bracketing root finder; keeps a sign-changing bracket at every
/// step, so it is as safe as bisection but converges superlinearly.
double brent(const std::function<double(double)>& f, double lo, double hi, double abs_tol,
             int max_iter = 200);

/// Golden-section maximization of a unimodal f on [lo, hi]; returns the argmax.
double golden_maximize(const std::function<double(double)>& f, double lo, double hi,
                       double abs_tol = 1e-12);

struct LimitFit
{
  double limit = 0.0;   ///< intercept a
  double slope = 0.0;   ///< coefficient b
  double residual = 0.0;
};

/// Least-squares fit y ~ a + b x^p; the intercept is the extrapolated limit x -> 0.
LimitFit fit_limit(std::span<const double> x, std::span<const double> y, double p);

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------------------
// Random numbers
// ---------------------------------------------------------------------------

/// Counter-based generator: output k of stream `key` is a bijective mix of
/// key + k * golden. Streams keyed by (seed, replicate, purpose) are
/// independent of evaluation order, so parallel replication is reproducible.
class CounterRng
{
public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t replicate, std::uint64_t purpose);
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

/// Uniform point on S^{Dim-1}.
template <int Dim>
Point<Dim> uniform_direction(CounterRng& rng);

/// Evenly spread unit directions: uniform angles (2D), Fibonacci sphere (3D).
/// With `symmetric`, the set is closed under u -> -u (count rounded up to even).
template <int Dim>
std::vector<Point<Dim>> direction_grid(int count, bool symmetric = true);

// ---------------------------------------------------------------------------
// Parallel loops
// ---------------------------------------------------------------------------

/// Runs body(i) for i in [0, count) on the available hardware threads. Each
/// index must write only to its own output slot.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace floatlab
