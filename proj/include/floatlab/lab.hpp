#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "floatlab/bodies.hpp"
#include "floatlab/hilbert.hpp"

namespace floatlab {

// ---------------------------------------------------------------------------
// Best approximation by polygons
// ---------------------------------------------------------------------------

struct BestPolygon
{
  std::vector<Point<2>> vertices;
  /// boundary parameters of the vertices (inscribed) or tangency points
  std::vector<double> params;
  double distance = 0.0;  ///< Psi of the symmetric difference
  int nodes = 0;          ///< boundary discretization size
  bool circumscribed = false;
};

struct BestApproxOptions
{
  int nodes_per_vertex = 64;
  int starts = 8;
  /// circumscribed polygon with at most m facets instead of inscribed m-gon
  bool circumscribed = false;
};

/// Near-optimal polygon with m vertices (or m facets) minimizing the
/// psi-measure of the symmetric difference; dynamic programming over
/// boundary nodes equidistributed in the integral of (kappa psi)^{1/3}.
/// Throws BudgetTooSmall for m < 3.
BestPolygon best_polygon_area(const ConvexBody<2>& body, int m, const WeightFn<2>& psi = WeightFn<2>::uniform(),
                              const BestApproxOptions& opts = {});

/// Psi(K minus P) for the polygon inscribed at the given boundary parameters.
double inscribed_polygon_distance(const ConvexBody<2>& body, std::vector<double> params,
                                  const WeightFn<2>& psi = WeightFn<2>::uniform());

/// Integral of kappa^{1/3} psi^{1/3} over the boundary.
double best_approx_functional(const ConvexBody<2>& body, const WeightFn<2>& psi = WeightFn<2>::uniform());

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

enum class ExperimentKind { Floating, Random, Dual, Spherical, Hyperbolic, Hilbert, Omegacp, BestApprox };

const char* to_string(ExperimentKind k);
ExperimentKind parse_experiment_kind(const std::string& s);

struct ExperimentConfig
{
  ExperimentKind kind = ExperimentKind::Floating;
  std::string name = "experiment";
  std::string body = "disk(1)";
  /// ambient body of Hilbert experiments
  std::string ambient = "disk(1)";
  std::string phi = "const";
  std::string psi = "const";
  /// which quantity of a kind: deficit, vertices, efron, facets, width,
  /// floating, random, dual, area, inscribed, circumscribed
  std::string quantity;
  std::vector<double> grid;
  int replicates = 100;
  std::uint64_t seed = 1;
  std::string output;
  std::string format = "csv";
  VolumeFlavor flavor = VolumeFlavor::Busemann;
  double tolerance = 0.0;  ///< reported pass threshold on rel_dev, 0 = none
};

/// Flat "key = value" text with an optional [experiment] section header;
/// '#' starts a comment. Throws ConfigError naming the offending field.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Body grammar: disk(r), ellipse(a,b), ball(r), ellipsoid(a,b,c),
/// square(s), polygon(x y; x y; ...), trig(a0 a1 ...; b0 b1 ...),
/// cap(rho), hdisk(r).
BodyPtr<2> parse_body2(const std::string& spec);
BodyPtr<3> parse_body3(const std::string& spec);
/// Dimension named by a body spec (3 for ball and ellipsoid).
int body_dimension(const std::string& spec);

/// Weight grammar: const, const(c), radial(a, p), spherical, hyperbolic.
template <int Dim>
WeightFn<Dim> parse_weight(const std::string& spec);

/// Line of `floatlab list-bodies`.
std::vector<std::string> body_catalogue();

struct ReportRow
{
  double param = 0.0;
  double estimate = 0.0;
  double stderr_value = 0.0;
  double normalized = 0.0;
  double predicted = 0.0;
  double rel_dev = 0.0;
};

struct ExperimentReport
{
  std::string kind;
  std::string quantity;
  std::vector<ReportRow> rows;
  double extrapolated = 0.0;
  std::optional<double> predicted;
  double rel_dev = 0.0;
  std::uint64_t seed = 0;
  /// exponent e with estimate ~ param^e, drawn as a reference line
  double exponent = 0.0;
  double wall_time = 0.0;
  std::string version;
  std::map<std::string, std::string> metadata;
};

/// Runs the experiment and writes the configured outputs. Throws
/// ConfigError or the computation's own errors.
ExperimentReport run(const ExperimentConfig& cfg);

/// CSV with header param,estimate,stderr,normalized,predicted,rel_dev,seed.
std::string format_csv(const ExperimentReport& report);
void emit_csv(const ExperimentReport& report, const std::string& path);
std::vector<ReportRow> parse_csv(const std::string& text);

/// Log-log plot of estimate and normalized value against the parameter,
/// with the asymptote and a reference slope line.
std::string format_svg(const ExperimentReport& report);
void emit_svg(const ExperimentReport& report, const std::string& path);

/// Human-readable summary of a report.
std::string summarize(const ExperimentReport& report);

const char* version();

}  // namespace floatlab
