#pragma once

#include <vector>

#include "floatlab/bodies.hpp"

namespace floatlab {

struct FloatingOptions
{
  double offset_tol = 1e-10;     ///< absolute tolerance on t_delta(v)
  double cap_rel_tol = 1e-11;    ///< relative tolerance of the cap integral
  int chord_order = 20;          ///< Gauss order along chords for non-constant phi
  int initial_directions = 64;
  int max_directions_2d = 1 << 15;
  int max_directions_3d = 4096;
  double refine_tol = 1e-3;      ///< relative change of the deficit that stops refinement
};

template <int Dim>
struct FloatingSpec
{
  BodyPtr<Dim> body;
  WeightFn<Dim> phi = WeightFn<Dim>::uniform();
  WeightFn<Dim> psi = WeightFn<Dim>::uniform();
  double delta = 0.0;
  /// Fixed direction set; empty means the refined default grid.
  std::vector<Point<Dim>> directions;
};

template <int Dim>
struct FloatingBodyResult
{
  std::vector<Point<Dim>> directions;
  std::vector<double> offsets;
  PolytopeApprox<Dim> inner;
  double deficit = 0.0;         ///< cone-formula value of Psi(K) - Psi(K cap P_in)
  double deficit_direct = 0.0;  ///< Psi(K) - Psi(P_in) by two separate quadratures
  double deficit_error = 0.0;   ///< quadrature plus grid-refinement error estimate
  double normalized = 0.0;      ///< deficit / delta^{2/(n+1)}
  int directions_used = 0;
  bool converged = false;
};

/// Phi-measure of the cap K cap {x : v.x >= t}.
template <int Dim>
double cap_measure(const ConvexBody<Dim>& body, const WeightFn<Dim>& phi, const Point<Dim>& v, double t,
                   const FloatingOptions& opts = {});

/// The offset t with cap_measure(v, t) = delta. Throws RootNotBracketed when
/// delta >= Phi(K).
template <int Dim>
double floating_offset(const ConvexBody<Dim>& body, const WeightFn<Dim>& phi, double delta,
                       const Point<Dim>& v, const FloatingOptions& opts = {});

/// Halfspace approximation P_in of K_delta^phi with the weighted deficit.
/// Throws EmptyFloatingBody when the halfspaces have empty intersection.
template <int Dim>
FloatingBodyResult<Dim> weighted_floating_body(const FloatingSpec<Dim>& spec, const FloatingOptions& opts = {});

/// Psi(K) - Psi(K cap L) through the cone formula centred at z; radial
/// segments are clipped against L.
template <int Dim>
QuadResult deficit_via_cone_formula(const ConvexBody<Dim>& body, const WeightFn<Dim>& psi,
                                    const PolytopeApprox<Dim>& inner, const Point<Dim>& z);

/// alpha_n times the integral of H^{1/(n+1)} phi^{-2/(n+1)} psi over the boundary.
template <int Dim>
double predicted_floating_limit(const ConvexBody<Dim>& body, const WeightFn<Dim>& phi,
                                const WeightFn<Dim>& psi, const BodyQuadOptions& opts = {});

struct FloatingRow
{
  double delta = 0.0;
  double deficit = 0.0;
  double normalized = 0.0;
  double predicted_limit = 0.0;
  int directions_used = 0;
  double quadrature_err = 0.0;
  double deficit_direct = 0.0;
  bool converged = false;
};

struct FloatingLimitReport
{
  std::vector<FloatingRow> rows;
  double extrapolated = 0.0;  ///< intercept of a + b delta^{1/(n+1)}
  double predicted = 0.0;
  double rel_dev = 0.0;
};

template <int Dim>
FloatingLimitReport check_floating_limit(BodyPtr<Dim> body, const WeightFn<Dim>& phi, const WeightFn<Dim>& psi,
                                         const std::vector<double>& deltas, const FloatingOptions& opts = {});

}  // namespace floatlab
