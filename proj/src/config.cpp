#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "floatlab/lab.hpp"

namespace floatlab {

namespace {

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

// "name(args)" or "name"
struct Call
{
  std::string name;
  std::string args;
  bool has_args = false;
};

Call split_call(const std::string& field, const std::string& spec)
{
  const std::string s = trim(spec);
  Call c;
  const auto open = s.find('(');
  if (open == std::string::npos) {
    c.name = lower(s);
    return c;
  }
  if (s.back() != ')')
    throw ConfigError("lab", field + ": missing ')' in '" + s + "'");
  c.name = lower(trim(s.substr(0, open)));
  c.args = s.substr(open + 1, s.size() - open - 2);
  c.has_args = true;
  return c;
}

double to_number(const std::string& field, const std::string& tok)
{
  const std::string t = trim(tok);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size())
    throw ConfigError("lab", field + ": '" + t + "' is not a number");
  return v;
}

// numbers separated by commas or blanks
std::vector<double> numbers(const std::string& field, const std::string& text)
{
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok)
    out.push_back(to_number(field, tok));
  return out;
}

// groups separated by ';', each a list of numbers
std::vector<std::vector<double>> groups(const std::string& field, const std::string& text)
{
  std::vector<std::vector<double>> out;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ';'))
    out.push_back(numbers(field, part));
  return out;
}

std::vector<double> expect_args(const Call& c, const std::string& field, std::size_t count)
{
  const std::vector<double> v = numbers(field, c.args);
  if (v.size() != count)
    throw ConfigError("lab", field + ": " + c.name + " takes " + std::to_string(count) + " argument(s), got " +
                               std::to_string(v.size()));
  return v;
}

void positive(const std::string& field, double v)
{
  if (!(v > 0))
    throw ConfigError("lab", field + ": parameters must be positive");
}

std::vector<double> parse_grid(const std::string& text)
{
  const Call c = split_call("grid", text);
  std::vector<double> g;
  if (c.has_args && (c.name == "logspace" || c.name == "geomspace")) {
    const std::vector<double> v = expect_args(c, "grid", 3);
    const int n = static_cast<int>(v[2]);
    if (n < 1 || n != v[2] || !(v[0] > 0) || !(v[1] > 0))
      throw ConfigError("lab", "grid: logspace(a, b, n) needs a, b > 0 and an integer n >= 1");
    for (int k = 0; k < n; ++k)
      g.push_back(n == 1 ? v[0] : v[0] * std::pow(v[1] / v[0], static_cast<double>(k) / (n - 1)));
  } else if (c.has_args) {
    throw ConfigError("lab", "grid: unknown generator '" + c.name + "'");
  } else {
    g = numbers("grid", text);
  }
  const bool up = std::adjacent_find(g.begin(), g.end(), std::greater_equal<>()) == g.end();
  const bool down = std::adjacent_find(g.begin(), g.end(), std::less_equal<>()) == g.end();
  if (!up && !down)
    throw ConfigError("lab", "grid: values must be strictly monotone");
  return g;
}

}  // namespace

const char* to_string(ExperimentKind k)
{
  switch (k) {
  case ExperimentKind::Floating: return "floating";
  case ExperimentKind::Random: return "random";
  case ExperimentKind::Dual: return "dual";
  case ExperimentKind::Spherical: return "spherical";
  case ExperimentKind::Hyperbolic: return "hyperbolic";
  case ExperimentKind::Hilbert: return "hilbert";
  case ExperimentKind::Omegacp: return "omegacp";
  case ExperimentKind::BestApprox: return "bestapprox";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& s)
{
  const std::string k = lower(trim(s));
  for (ExperimentKind e : {ExperimentKind::Floating, ExperimentKind::Random, ExperimentKind::Dual,
                           ExperimentKind::Spherical, ExperimentKind::Hyperbolic, ExperimentKind::Hilbert,
                           ExperimentKind::Omegacp, ExperimentKind::BestApprox})
    if (k == to_string(e))
      return e;
  throw ConfigError("lab", "kind: unknown experiment kind '" + s + "'");
}

int body_dimension(const std::string& spec)
{
  const Call c = split_call("body", spec);
  return c.name == "ball" || c.name == "ellipsoid" ? 3 : 2;
}

BodyPtr<2> parse_body2(const std::string& spec)
{
  const std::string field = "body";
  const Call c = split_call(field, spec);
  if (c.name == "disk" || c.name == "cap" || c.name == "hdisk") {
    const double r = c.has_args ? expect_args(c, field, 1)[0] : 1.0;
    positive(field, r);
    if (c.name == "cap") {
      if (!(r < kPi / 2))
        throw ConfigError("lab", "body: cap radius must be below pi/2");
      return make_ball<2>(std::tan(r));
    }
    return make_ball<2>(c.name == "hdisk" ? std::tanh(r) : r);
  }
  if (c.name == "ellipse") {
    const std::vector<double> v = expect_args(c, field, 2);
    positive(field, v[0]);
    positive(field, v[1]);
    return std::make_shared<Ellipsoid<2>>(Point<2>(v[0], v[1]));
  }
  if (c.name == "square") {
    const double s = c.has_args ? expect_args(c, field, 1)[0] : 1.0;
    positive(field, s);
    const double h = 0.5 * s;
    return std::make_shared<Polytope<2>>(
      std::vector<Point<2>>{{-h, -h}, {h, -h}, {h, h}, {-h, h}});
  }
  if (c.name == "polygon") {
    std::vector<Point<2>> pts;
    for (const std::vector<double>& g : groups(field, c.args)) {
      if (g.size() != 2)
        throw ConfigError("lab", "body: polygon vertices are 'x y' pairs separated by ';'");
      pts.emplace_back(g[0], g[1]);
    }
    if (pts.size() < 3)
      throw ConfigError("lab", "body: polygon needs at least 3 vertices");
    try {
      return std::make_shared<Polytope<2>>(pts);
    } catch (const Error& e) {
      throw ConfigError("lab", std::string("body: ") + e.what());
    }
  }
  if (c.name == "trig") {
    const auto g = groups(field, c.args);
    if (g.empty() || g.size() > 2 || g[0].empty())
      throw ConfigError("lab", "body: trig takes 'a0 a1 ...; b0 b1 ...'");
    try {
      return std::make_shared<SupportBody>(g[0], g.size() == 2 ? g[1] : std::vector<double>{});
    } catch (const Error& e) {
      throw ConfigError("lab", std::string("body: ") + e.what());
    }
  }
  if (c.name == "ball" || c.name == "ellipsoid")
    throw ConfigError("lab", "body: '" + c.name + "' is a 3-dimensional body");
  throw ConfigError("lab", "body: unknown body kind '" + c.name + "'");
}

BodyPtr<3> parse_body3(const std::string& spec)
{
  const std::string field = "body";
  const Call c = split_call(field, spec);
  if (c.name == "ball") {
    const double r = c.has_args ? expect_args(c, field, 1)[0] : 1.0;
    positive(field, r);
    return make_ball<3>(r);
  }
  if (c.name == "ellipsoid") {
    const std::vector<double> v = expect_args(c, field, 3);
    for (double x : v)
      positive(field, x);
    return std::make_shared<Ellipsoid<3>>(Point<3>(v[0], v[1], v[2]));
  }
  throw ConfigError("lab", "body: unknown 3-dimensional body kind '" + c.name + "'");
}

template <int Dim>
WeightFn<Dim> parse_weight(const std::string& spec)
{
  const std::string field = "weight";
  const Call c = split_call(field, spec);
  if (c.name == "const" || c.name == "uniform") {
    const double v = c.has_args ? expect_args(c, field, 1)[0] : 1.0;
    positive(field, v);
    return WeightFn<Dim>::uniform(v);
  }
  if (c.name == "radial") {
    const std::vector<double> v = expect_args(c, field, 2);
    return WeightFn<Dim>::radial(v[0], v[1]);
  }
  if (c.name == "spherical" || c.name == "hyperbolic") {
    WeightFn<Dim> w = WeightFn<Dim>::radial(c.name == "spherical" ? 1.0 : -1.0, -(Dim + 1) / 2.0);
    w.name = c.name;
    return w;
  }
  throw ConfigError("lab", "weight: unknown weight '" + c.name + "'");
}

std::vector<std::string> body_catalogue()
{
  return {
    "disk(r)                 planar disk of radius r (default 1)",
    "ellipse(a,b)            axis-parallel ellipse with semiaxes a, b",
    "square(s)               axis-parallel square of side s (default 1)",
    "polygon(x y; x y; ...)  convex hull of the listed vertices",
    "trig(a0 a1 ...; b0 ...) support function sum a_k cos k t + b_k sin k t",
    "cap(rho)                spherical cap of geodesic radius rho, in the gnomonic chart",
    "hdisk(r)                hyperbolic disk of radius r, in the Klein chart",
    "ball(r)                 3-ball of radius r (default 1)",
    "ellipsoid(a,b,c)        axis-parallel ellipsoid",
  };
}

ExperimentConfig parse_config(const std::string& text)
{
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_kind = false;
  bool sectioned = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("lab", "line " + std::to_string(lineno) + ": malformed section header");
      if (sectioned)
        throw ConfigError("lab", "line " + std::to_string(lineno) + ": one experiment per file");
      sectioned = true;
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.rfind("experiment", 0) != 0)
        throw ConfigError("lab", "section: expected [experiment], got [" + name + "]");
      const std::string rest = trim(name.substr(10));
      if (!rest.empty())
        cfg.name = rest;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("lab", "line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "kind") {
      cfg.kind = parse_experiment_kind(value);
      have_kind = true;
    } else if (key == "name") {
      cfg.name = value;
    } else if (key == "body") {
      cfg.body = value;
    } else if (key == "ambient") {
      cfg.ambient = value;
    } else if (key == "phi") {
      cfg.phi = value;
    } else if (key == "psi") {
      cfg.psi = value;
    } else if (key == "quantity") {
      cfg.quantity = lower(value);
    } else if (key == "grid") {
      cfg.grid = parse_grid(value);
    } else if (key == "replicates") {
      const double r = to_number("replicates", value);
      if (r < 1 || r != std::floor(r))
        throw ConfigError("lab", "replicates: must be an integer >= 1");
      cfg.replicates = static_cast<int>(r);
    } else if (key == "seed") {
      try {
        std::size_t used = 0;
        cfg.seed = std::stoull(value, &used);
        if (used != value.size())
          throw std::invalid_argument("seed");
      } catch (const std::exception&) {
        throw ConfigError("lab", "seed: '" + value + "' is not an unsigned integer");
      }
    } else if (key == "output") {
      cfg.output = value;
    } else if (key == "format") {
      cfg.format = lower(value);
      if (cfg.format != "csv" && cfg.format != "svg" && cfg.format != "both")
        throw ConfigError("lab", "format: expected csv, svg or both");
    } else if (key == "flavor") {
      try {
        cfg.flavor = parse_flavor(lower(value));
      } catch (const ConfigError&) {
        throw ConfigError("lab", "flavor: expected busemann or holmes-thompson");
      }
    } else if (key == "tolerance") {
      cfg.tolerance = to_number("tolerance", value);
      if (cfg.tolerance < 0)
        throw ConfigError("lab", "tolerance: must be nonnegative");
    } else {
      throw ConfigError("lab", "unknown field '" + key + "'");
    }
  }
  if (!have_kind)
    throw ConfigError("lab", "kind: missing experiment kind");

  // validate the specs now so that errors name the field
  const auto check_body = [](const std::string& field, const std::string& spec) {
    try {
      if (body_dimension(spec) == 3)
        parse_body3(spec);
      else
        parse_body2(spec);
    } catch (const ConfigError& e) {
      std::string msg = e.what();
      if (msg.rfind("body", 0) == 0)
        msg = field + msg.substr(4);
      throw ConfigError("lab", msg);
    }
  };
  check_body("body", cfg.body);
  check_body("ambient", cfg.ambient);
  for (const auto& [field, spec] : {std::pair{"phi", cfg.phi}, std::pair{"psi", cfg.psi}}) {
    try {
      parse_weight<2>(spec);
    } catch (const Error& e) {
      std::string msg = e.what();
      if (msg.rfind("weight", 0) == 0)
        msg = std::string(field) + msg.substr(6);
      throw ConfigError("lab", msg);
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw IoError("lab", "cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

template WeightFn<2> parse_weight<2>(const std::string&);
template WeightFn<3> parse_weight<3>(const std::string&);

}  // namespace floatlab
