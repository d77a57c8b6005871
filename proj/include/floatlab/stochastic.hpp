#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "floatlab/bodies.hpp"

namespace floatlab {

/// Sample mean with standard error stddev / sqrt(R).
struct MCEstimate
{
  double mean = 0.0;
  double std_error = 0.0;
  int replicates = 0;

  static MCEstimate from(std::span<const double> samples);
  MCEstimate scaled(double c) const { return {c * mean, std::abs(c) * std_error, replicates}; }
};

template <int Dim>
struct SamplerConfig
{
  BodyPtr<Dim> body;
  /// Density of the sampled points; normalized by Phi(K) internally.
  WeightFn<Dim> phi = WeightFn<Dim>::uniform();
  int m = 100;
  int replicates = 100;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  /// Upper bound of phi on K; computed from a grid when absent.
  std::optional<double> envelope;
};

template <int Dim>
struct DualSamplerConfig
{
  BodyPtr<Dim> body;
  int m = 100;
  int replicates = 100;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
};

/// Rejection sampler for the probability measure Phi / Phi(K): uniform
/// proposals in the bounding box, accepted with probability phi(x) / M.
template <int Dim>
class PointSampler
{
public:
  PointSampler(BodyPtr<Dim> body, WeightFn<Dim> phi, std::optional<double> envelope = std::nullopt);

  /// Throws EnvelopeExceeded when phi(x) > M is observed.
  Point<Dim> operator()(CounterRng& rng) const;
  double envelope() const { return envelope_; }

private:
  BodyPtr<Dim> body_;
  WeightFn<Dim> phi_;
  Point<Dim> lo_, hi_;
  double envelope_;
};

/// max phi over a grid of K and its boundary, times 1.01
template <int Dim>
double auto_envelope(const ConvexBody<Dim>& body, const WeightFn<Dim>& phi);

template <int Dim>
Point<Dim> sample_point(const ConvexBody<Dim>& body, const WeightFn<Dim>& phi, CounterRng& rng, double envelope);

struct RandomPolytopeRow
{
  int m = 0;
  MCEstimate deficit;     ///< Psi(K) - Psi(K_m)
  MCEstimate normalized;  ///< deficit * m^{2/(n+1)}
  double predicted = 0.0;
  MCEstimate vertices;
  MCEstimate vertices_normalized;  ///< vertices * m^{-(n-1)/(n+1)}
  double predicted_vertices = 0.0;
};

/// Deficit of the hull of cfg.m random points.
template <int Dim>
RandomPolytopeRow random_polytope_deficit(const SamplerConfig<Dim>& cfg, const WeightFn<Dim>& psi);

/// Deficits for every m in `ms` from nested prefixes of one sample per
/// replicate; cfg.m is ignored.
template <int Dim>
std::vector<RandomPolytopeRow> random_polytope_study(const SamplerConfig<Dim>& cfg, const WeightFn<Dim>& psi,
                                                     const std::vector<int>& ms);

/// beta_n Phi(K)^{2/(n+1)} times the integral of H^{1/(n+1)} phi^{-2/(n+1)} psi.
template <int Dim>
double predicted_random_limit(const ConvexBody<Dim>& body, const WeightFn<Dim>& phi, const WeightFn<Dim>& psi);

/// beta_n Phi(K)^{-(n-1)/(n+1)} times the integral of H^{1/(n+1)} phi^{(n-1)/(n+1)}.
template <int Dim>
double predicted_vertex_limit(const ConvexBody<Dim>& body, const WeightFn<Dim>& phi);

struct EfronRow
{
  int m = 0;
  MCEstimate direct;       ///< E f_0(K_m)
  MCEstimate transformed;  ///< m (1 - E Phi(K_{m-1}) / Phi(K))
  /// |direct - transformed| over the combined standard error
  double z_score = 0.0;
  MCEstimate normalized;  ///< direct * m^{-(n-1)/(n+1)}
  double predicted = 0.0;
};

/// Both vertex-count estimators from the same point sample per replicate.
template <int Dim>
EfronRow efron_vertex_count(const SamplerConfig<Dim>& cfg);

/// Halfspace {x : u.x <= t} with u uniform and t uniform on [h_K(u), h_K(u) + 1].
template <int Dim>
Halfspace<Dim> sample_halfspace(const ConvexBody<Dim>& body, CounterRng& rng);

struct DualRow
{
  int m = 0;
  MCEstimate width_excess;  ///< W(K^m cap (K + B)) - W(K)
  MCEstimate width_normalized;
  MCEstimate facets;
  MCEstimate facets_normalized;
  double predicted_width = 0.0;
  double predicted_facets = 0.0;
  double width_body = 0.0;
  /// largest gap between the exact and the direction-quadrature mean width
  double width_quadrature_error = 0.0;
};

template <int Dim>
DualRow dual_random_polyhedron(const DualSamplerConfig<Dim>& cfg);

/// Nested prefixes of one halfspace sample per replicate; cfg.m is ignored.
template <int Dim>
std::vector<DualRow> dual_study(const DualSamplerConfig<Dim>& cfg, const std::vector<int>& ms);

/// Mean width 2/(n v_n) times the integral of h over the sphere: exact
/// perimeter / pi for polygons in the plane, Fibonacci quadrature in space.
template <int Dim>
double mean_width(const PolytopeApprox<Dim>& poly);

/// Mean width from `directions` evenly spread support evaluations.
template <int Dim>
double mean_width_quadrature(const std::function<double(const Point<Dim>&)>& support, int directions);

// ---------------------------------------------------------------------------
// Random hemispheres on S^2
// ---------------------------------------------------------------------------

struct SphericalDualRow
{
  int m = 0;
  /// U_1(K^m) - U_1(K) from the intersection of the sampled hemispheres
  MCEstimate excess_hemispheres;
  /// the same from 1/2 - vol(K_m polar) / vol(S^2), K_m polar the hull of the normals
  MCEstimate excess_polar;
  MCEstimate normalized;  ///< hemisphere excess * m^{2/3}
  MCEstimate facets;
  MCEstimate facets_normalized;
  double predicted = 0.0;
  double predicted_facets = 0.0;
  double u1_body = 0.0;
  double polar_volume = 0.0;
  double max_pair_gap = 0.0;   ///< largest per-replicate gap of the two excesses
  int facet_mismatches = 0;    ///< replicates with f_1(K^m) != f_0(K_m polar)
};

/// Spherical K given by its gnomonic image about the north pole, which must
/// contain the origin in its interior and admit polar_body. Random
/// hemispheres {x : x.w <= 0} are drawn with w uniform in the polar K°.
SphericalDualRow spherical_dual_transfer(BodyPtr<2> chart_body, int m, int replicates, std::uint64_t seed,
                                         std::uint64_t stream = 0);

std::vector<SphericalDualRow> spherical_dual_study(BodyPtr<2> chart_body, const std::vector<int>& ms,
                                                   int replicates, std::uint64_t seed, std::uint64_t stream = 0);

/// Area of the spherical polygon with the given vertices in cyclic order.
double spherical_polygon_area(const std::vector<Eigen::Vector3d>& vertices);

/// Perimeter of the spherical polygon with the given vertices in cyclic order.
double spherical_polygon_perimeter(const std::vector<Eigen::Vector3d>& vertices);

}  // namespace floatlab
