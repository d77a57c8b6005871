#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "floatlab/floating.hpp"
#include "floatlab/lab.hpp"

using namespace floatlab;

namespace {

struct Check
{
  const char* name;
  double value;
  double expected;
  double tol;  ///< relative
};

int selftest()
{
  std::vector<Check> checks;

  const BodyPtr<2> disk = make_ball<2>(1.0);
  const BestPolygon hex = best_polygon_area(*disk, 6);
  checks.push_back({"hexagon in the disk", hex.distance, kPi - 1.5 * std::sqrt(3.0), 1e-9});

  const HilbertGeometry klein(disk);
  const Point<2> x(0.3, -0.2);
  checks.push_back({"Klein density", klein.density(x), std::pow(1.0 - x.squaredNorm(), -1.5), 1e-6});
  checks.push_back({"Klein distance", klein.distance(Point<2>::Zero(), Point<2>(0.5, 0.0)), std::atanh(0.5), 1e-12});

  const FloatingBodyResult<2> fb = weighted_floating_body<2>({disk, WeightFn<2>::uniform(), WeightFn<2>::uniform(), 1e-4, {}});
  checks.push_back({"disk floating deficit", fb.normalized, floating_constant(2) * 2.0 * kPi, 0.02});

  ExperimentReport rep;
  rep.rows.push_back({0.1, 1.0 / 3.0, 1e-17, kPi, std::exp(1.0), 0.0});
  const std::vector<ReportRow> back = parse_csv(format_csv(rep));
  checks.push_back({"csv round trip", back.at(0).estimate, 1.0 / 3.0, 0.0});

  int failed = 0;
  for (const Check& c : checks) {
    const double dev = std::abs(c.value - c.expected) / std::abs(c.expected);
    const bool ok = dev <= c.tol;
    failed += !ok;
    std::printf("%-24s %s  value %.12g expected %.12g\n", c.name, ok ? "PASS" : "FAIL", c.value, c.expected);
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"floatlab: floating bodies, random polytopes and their limits"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> replicates;
  std::string out, format, flavor;
  CLI::App* run_cmd = app.add_subcommand("run", "run the experiment described by a config file");
  run_cmd->add_option("config", config_path, "config file")->required();
  run_cmd->add_option("--seed", seed, "override the seed");
  run_cmd->add_option("--replicates", replicates, "override the replicate count")->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", out, "output path (CSV; SVG and summary sidecars share the stem)");
  run_cmd->add_option("--format", format, "csv, svg or both")->check(CLI::IsMember({"csv", "svg", "both"}));
  run_cmd->add_option("--flavor", flavor, "Hilbert volume flavor")
    ->check(CLI::IsMember({"busemann", "holmes-thompson"}));

  app.add_subcommand("list-bodies", "print the body grammar");
  app.add_subcommand("selftest", "quick closed-form checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("list-bodies")) {
      for (const std::string& line : body_catalogue())
        std::cout << line << '\n';
      return 0;
    }
    if (app.got_subcommand("selftest"))
      return selftest();

    ExperimentConfig cfg = load_config(config_path);
    if (seed)
      cfg.seed = *seed;
    if (replicates)
      cfg.replicates = *replicates;
    if (!out.empty())
      cfg.output = out;
    if (!format.empty())
      cfg.format = format;
    if (!flavor.empty())
      cfg.flavor = parse_flavor(flavor);
    const ExperimentReport rep = run(cfg);
    std::cout << summarize(rep);
    if (cfg.output.empty())
      std::cout << format_csv(rep);
    return 0;
  } catch (const Error& e) {
    std::cerr << "floatlab: " << e.code() << " in " << e.module() << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "floatlab: " << e.what() << '\n';
    return 2;
  }
}
