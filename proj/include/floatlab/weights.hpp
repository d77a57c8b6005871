#pragma once

#include <functional>
#include <optional>
#include <string>

#include "floatlab/numerics.hpp"

namespace floatlab {

/// Positive density on a body. Constant densities are flagged so that
/// integrals over slices and cones can skip quadrature.
template <int Dim>
struct WeightFn
{
  std::function<double(const Point<Dim>&)> eval;
  std::optional<double> constant;
  std::string name = "custom";

  double operator()(const Point<Dim>& x) const { return constant ? *constant : eval(x); }
  bool is_constant() const { return constant.has_value(); }

  static WeightFn uniform(double c = 1.0)
  {
    if (!(c > 0.0))
      throw InvalidArgument("bodies", "uniform weight must be positive");
    WeightFn w;
    w.constant = c;
    w.eval = [c](const Point<Dim>&) { return c; };
    w.name = c == 1.0 ? "const" : "const(" + std::to_string(c) + ")";
    return w;
  }

  /// c (1 + a |x|^2)^p; a = 1, p = -(n+1)/2 is the spherical chart density and
  /// a = -1 the hyperbolic one.
  static WeightFn radial(double a, double p, double c = 1.0)
  {
    WeightFn w;
    w.eval = [a, p, c](const Point<Dim>& x) {
      const double q = 1.0 + a * x.squaredNorm();
      if (q <= 0.0)
        throw OutOfChart("bodies", "radial weight evaluated outside its domain");
      return c * std::pow(q, p);
    };
    w.name = "radial(" + std::to_string(a) + "," + std::to_string(p) + ")";
    return w;
  }

  static WeightFn from(std::function<double(const Point<Dim>&)> f, std::string name = "custom")
  {
    WeightFn w;
    w.eval = std::move(f);
    w.name = std::move(name);
    return w;
  }

  WeightFn scaled(double c) const
  {
    WeightFn w;
    if (constant)
      w.constant = c * *constant;
    auto base = eval;
    w.eval = [base, c](const Point<Dim>& x) { return c * base(x); };
    w.name = std::to_string(c) + "*" + name;
    return w;
  }

  /// x -> phi(x)^p, pointwise
  WeightFn pow(double p) const
  {
    WeightFn w;
    if (constant)
      w.constant = std::pow(*constant, p);
    auto base = eval;
    w.eval = [base, p](const Point<Dim>& x) { return std::pow(base(x), p); };
    w.name = name + "^" + std::to_string(p);
    return w;
  }
};

}  // namespace floatlab
