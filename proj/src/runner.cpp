#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include "floatlab/lab.hpp"
#include "floatlab/spaces.hpp"

namespace floatlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> grid_or(const ExperimentConfig& cfg, std::vector<double> fallback)
{
  return cfg.grid.empty() ? std::move(fallback) : cfg.grid;
}

std::vector<int> int_grid(const ExperimentConfig& cfg, std::vector<double> fallback)
{
  std::vector<int> ms;
  for (double v : grid_or(cfg, std::move(fallback))) {
    if (v < 1 || v != std::floor(v))
      throw ConfigError("lab", "grid: sample sizes must be positive integers");
    ms.push_back(static_cast<int>(v));
  }
  return ms;
}

double rel(double value, double predicted)
{
  return std::abs(value - predicted) / std::abs(predicted);
}

void finish(ExperimentReport& rep)
{
  if (rep.predicted)
    rep.rel_dev = rel(rep.extrapolated, *rep.predicted);
  else
    rep.rel_dev = kNaN;
}

void from_floating(ExperimentReport& rep, const FloatingLimitReport& f, int dim)
{
  for (const FloatingRow& r : f.rows)
    rep.rows.push_back({r.delta, r.deficit, r.quadrature_err, r.normalized, f.predicted, rel(r.normalized, f.predicted)});
  rep.extrapolated = f.extrapolated;
  rep.predicted = f.predicted;
  rep.exponent = 2.0 / (dim + 1);
  bool converged = true;
  for (const FloatingRow& r : f.rows)
    converged = converged && r.converged;
  rep.metadata["converged"] = converged ? "yes" : "no";
}

// largest sample size carries the limit estimate of a Monte Carlo table
void from_random(ExperimentReport& rep, const std::vector<RandomPolytopeRow>& rows, bool vertices, int dim)
{
  for (const RandomPolytopeRow& r : rows) {
    const MCEstimate& est = vertices ? r.vertices : r.deficit;
    const MCEstimate& nor = vertices ? r.vertices_normalized : r.normalized;
    const double pred = vertices ? r.predicted_vertices : r.predicted;
    rep.rows.push_back({static_cast<double>(r.m), est.mean, est.std_error, nor.mean, pred, rel(nor.mean, pred)});
  }
  if (!rows.empty()) {
    rep.extrapolated = rep.rows.back().normalized;
    rep.predicted = rep.rows.back().predicted;
    rep.metadata["normalized_stderr"] =
      std::to_string((vertices ? rows.back().vertices_normalized : rows.back().normalized).std_error);
  }
  rep.exponent = vertices ? (dim - 1.0) / (dim + 1) : -2.0 / (dim + 1);
}

template <int Dim>
BodyPtr<Dim> body_of(const std::string& spec)
{
  if constexpr (Dim == 2)
    return parse_body2(spec);
  else
    return parse_body3(spec);
}

template <int Dim>
void run_floating(const ExperimentConfig& cfg, ExperimentReport& rep)
{
  const FloatingLimitReport f = check_floating_limit<Dim>(body_of<Dim>(cfg.body), parse_weight<Dim>(cfg.phi),
                                                          parse_weight<Dim>(cfg.psi),
                                                          grid_or(cfg, {1e-3, 1e-4, 1e-5, 1e-6}));
  rep.quantity = "deficit";
  from_floating(rep, f, Dim);
}

template <int Dim>
void run_random(const ExperimentConfig& cfg, ExperimentReport& rep)
{
  SamplerConfig<Dim> sc;
  sc.body = body_of<Dim>(cfg.body);
  sc.phi = parse_weight<Dim>(cfg.phi);
  sc.replicates = cfg.replicates;
  sc.seed = cfg.seed;
  const std::vector<int> ms = int_grid(cfg, {64, 256, 1024});
  const std::string q = cfg.quantity.empty() ? "deficit" : cfg.quantity;
  rep.quantity = q;
  if (q == "deficit" || q == "vertices") {
    from_random(rep, random_polytope_study<Dim>(sc, parse_weight<Dim>(cfg.psi), ms), q == "vertices", Dim);
  } else if (q == "efron") {
    double worst = 0.0;
    for (int m : ms) {
      sc.m = m;
      const EfronRow r = efron_vertex_count<Dim>(sc);
      rep.rows.push_back({static_cast<double>(m), r.direct.mean, r.direct.std_error, r.normalized.mean, r.predicted,
                          rel(r.normalized.mean, r.predicted)});
      rep.metadata["transformed_m" + std::to_string(m)] = std::to_string(r.transformed.mean);
      worst = std::max(worst, r.z_score);
    }
    rep.metadata["max_z_score"] = std::to_string(worst);
    if (!rep.rows.empty()) {
      rep.extrapolated = rep.rows.back().normalized;
      rep.predicted = rep.rows.back().predicted;
    }
    rep.exponent = (Dim - 1.0) / (Dim + 1);
  } else {
    throw ConfigError("lab", "quantity: random experiments take deficit, vertices or efron");
  }
}

template <int Dim>
void run_dual(const ExperimentConfig& cfg, ExperimentReport& rep)
{
  DualSamplerConfig<Dim> dc;
  dc.body = body_of<Dim>(cfg.body);
  dc.replicates = cfg.replicates;
  dc.seed = cfg.seed;
  const std::string q = cfg.quantity.empty() ? "facets" : cfg.quantity;
  if (q != "facets" && q != "width")
    throw ConfigError("lab", "quantity: dual experiments take facets or width");
  rep.quantity = q;
  const bool facets = q == "facets";
  const std::vector<DualRow> rows = dual_study<Dim>(dc, int_grid(cfg, {64, 256, 1024}));
  for (const DualRow& r : rows) {
    const MCEstimate& est = facets ? r.facets : r.width_excess;
    const MCEstimate& nor = facets ? r.facets_normalized : r.width_normalized;
    const double pred = facets ? r.predicted_facets : r.predicted_width;
    rep.rows.push_back({static_cast<double>(r.m), est.mean, est.std_error, nor.mean, pred, rel(nor.mean, pred)});
  }
  if (!rows.empty()) {
    rep.extrapolated = rep.rows.back().normalized;
    rep.predicted = rep.rows.back().predicted;
    rep.metadata["mean_width_body"] = std::to_string(rows.back().width_body);
  }
  rep.exponent = facets ? (Dim - 1.0) / (Dim + 1) : -2.0 / (Dim + 1);
}

template <int Dim>
void run_model(const ExperimentConfig& cfg, ExperimentReport& rep, Geometry g)
{
  const ModelBody<Dim> body(GeometryChart<Dim>(g), body_of<Dim>(cfg.body));
  const std::string q = cfg.quantity.empty() ? "floating" : cfg.quantity;
  rep.quantity = q;
  if (q == "floating") {
    from_floating(rep, model_floating_body_limit<Dim>(body, grid_or(cfg, {1e-3, 1e-4, 1e-5, 1e-6})), Dim);
  } else if (q == "random") {
    from_random(rep, model_random_polytope<Dim>(body, int_grid(cfg, {64, 256, 1024}), cfg.replicates, cfg.seed),
                false, Dim);
  } else if (q == "dual" && g == Geometry::Spherical && Dim == 2) {
    const std::vector<SphericalDualRow> rows =
      spherical_dual_study(parse_body2(cfg.body), int_grid(cfg, {64, 256, 1024}), cfg.replicates, cfg.seed);
    int mismatches = 0;
    double gap = 0.0, worst_z = 0.0;
    for (const SphericalDualRow& r : rows) {
      rep.rows.push_back({static_cast<double>(r.m), r.excess_hemispheres.mean, r.excess_hemispheres.std_error,
                          r.normalized.mean, r.predicted, rel(r.normalized.mean, r.predicted)});
      mismatches += r.facet_mismatches;
      gap = std::max(gap, r.max_pair_gap);
      const double se = std::hypot(r.excess_hemispheres.std_error, r.excess_polar.std_error);
      if (se > 0)
        worst_z = std::max(worst_z, std::abs(r.excess_hemispheres.mean - r.excess_polar.mean) / se);
    }
    if (!rows.empty()) {
      rep.extrapolated = rep.rows.back().normalized;
      rep.predicted = rep.rows.back().predicted;
    }
    rep.metadata["facet_mismatches"] = std::to_string(mismatches);
    rep.metadata["max_pair_gap"] = std::to_string(gap);
    rep.metadata["max_z_score"] = std::to_string(worst_z);
    rep.exponent = -2.0 / 3.0;
  } else {
    throw ConfigError("lab", std::string("quantity: ") + to_string(g) + " experiments take floating, random" +
                               (g == Geometry::Spherical ? " or dual" : ""));
  }
}

void run_hilbert(const ExperimentConfig& cfg, ExperimentReport& rep)
{
  const HilbertGeometry geom(parse_body2(cfg.ambient), cfg.flavor);
  const BodyPtr<2> body = parse_body2(cfg.body);
  const WeightFn<2> sigma = geom.density_weight();
  const std::string q = cfg.quantity.empty() ? "floating" : cfg.quantity;
  rep.quantity = q;
  rep.metadata["flavor"] = to_string(cfg.flavor);
  if (q == "floating") {
    from_floating(rep, check_floating_limit<2>(body, sigma, sigma, grid_or(cfg, {1e-3, 1e-4, 1e-5, 1e-6})), 2);
  } else if (q == "random") {
    SamplerConfig<2> sc;
    sc.body = body;
    sc.phi = sigma;
    sc.replicates = cfg.replicates;
    sc.seed = cfg.seed;
    from_random(rep, random_polytope_study<2>(sc, sigma, int_grid(cfg, {64, 256, 1024})), false, 2);
  } else if (q == "area") {
    const double a = hilbert_floating_area(geom, *body);
    rep.rows.push_back({0.0, a, 0.0, a, kNaN, kNaN});
    rep.extrapolated = a;
  } else {
    throw ConfigError("lab", "quantity: hilbert experiments take floating, random or area");
  }
}

void run_omegacp(const ExperimentConfig& cfg, ExperimentReport& rep)
{
  const OmegaReport o = omegacp_limit(parse_body2(cfg.body), grid_or(cfg, {0.9, 0.92, 0.94, 0.96, 0.98, 0.99}));
  rep.quantity = "omega";
  for (const OmegaRow& r : o.rows)
    rep.rows.push_back({r.lambda, r.floating_area, 0.0, r.normalized, o.predicted, rel(r.normalized, o.predicted)});
  rep.extrapolated = o.extrapolated;
  rep.predicted = o.predicted;
  rep.metadata["degraded"] = o.degraded ? "yes" : "no";
}

void run_bestapprox(const ExperimentConfig& cfg, ExperimentReport& rep)
{
  const BodyPtr<2> body = parse_body2(cfg.body);
  const WeightFn<2> psi = parse_weight<2>(cfg.psi);
  const std::string q = cfg.quantity.empty() ? "inscribed" : cfg.quantity;
  if (q != "inscribed" && q != "circumscribed")
    throw ConfigError("lab", "quantity: bestapprox experiments take inscribed or circumscribed");
  rep.quantity = q;
  BestApproxOptions opts;
  opts.circumscribed = q == "circumscribed";
  std::vector<double> ms_d, dist;
  for (int m : int_grid(cfg, {32, 64, 128})) {
    const BestPolygon p = best_polygon_area(*body, m, psi, opts);
    rep.rows.push_back({static_cast<double>(m), p.distance, 0.0, p.distance * m * m, kNaN, kNaN});
    ms_d.push_back(m);
    dist.push_back(p.distance);
  }
  if (!rep.rows.empty())
    rep.extrapolated = rep.rows.back().normalized;
  if (ms_d.size() >= 2)
    rep.metadata["loglog_slope"] = std::to_string(loglog_slope(ms_d, dist));
  rep.metadata["functional"] = std::to_string(best_approx_functional(*body, psi));
  rep.exponent = -2.0;
}

}  // namespace

ExperimentReport run(const ExperimentConfig& cfg)
{
  if (cfg.replicates < 1)
    throw ConfigError("lab", "replicates: must be at least 1");
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport rep;
  rep.kind = to_string(cfg.kind);
  rep.seed = cfg.seed;
  rep.version = version();
  rep.metadata["name"] = cfg.name;
  rep.metadata["body"] = cfg.body;
  const bool three = body_dimension(cfg.body) == 3;
  switch (cfg.kind) {
  case ExperimentKind::Floating:
    three ? run_floating<3>(cfg, rep) : run_floating<2>(cfg, rep);
    break;
  case ExperimentKind::Random:
    three ? run_random<3>(cfg, rep) : run_random<2>(cfg, rep);
    break;
  case ExperimentKind::Dual:
    three ? run_dual<3>(cfg, rep) : run_dual<2>(cfg, rep);
    break;
  case ExperimentKind::Spherical:
  case ExperimentKind::Hyperbolic: {
    const Geometry g = cfg.kind == ExperimentKind::Spherical ? Geometry::Spherical : Geometry::Hyperbolic;
    three ? run_model<3>(cfg, rep, g) : run_model<2>(cfg, rep, g);
    break;
  }
  case ExperimentKind::Hilbert:
  case ExperimentKind::Omegacp:
  case ExperimentKind::BestApprox:
    if (three)
      throw ConfigError("lab", std::string("body: ") + to_string(cfg.kind) + " experiments are planar");
    if (cfg.kind == ExperimentKind::Hilbert)
      run_hilbert(cfg, rep);
    else if (cfg.kind == ExperimentKind::Omegacp)
      run_omegacp(cfg, rep);
    else
      run_bestapprox(cfg, rep);
    break;
  }
  finish(rep);
  if (cfg.tolerance > 0 && rep.predicted)
    rep.metadata["within_tolerance"] = rep.rel_dev <= cfg.tolerance ? "yes" : "no";
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!cfg.output.empty()) {
    std::string base = cfg.output;
    if (base.size() > 4 && base.substr(base.size() - 4) == ".csv")
      base.resize(base.size() - 4);
    if (cfg.format == "csv" || cfg.format == "both")
      emit_csv(rep, base + ".csv");
    if (cfg.format == "svg" || cfg.format == "both")
      emit_svg(rep, base + ".svg");
    // metadata and wall time stay out of the CSV so that it is reproducible
    std::ofstream meta(base + ".meta.txt");
    if (!meta)
      throw IoError("lab", "cannot write '" + base + ".meta.txt'");
    meta << summarize(rep);
  }
  return rep;
}

}  // namespace floatlab
