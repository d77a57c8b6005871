#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "floatlab/lab.hpp"

namespace floatlab {

namespace {

constexpr const char* kHeader = "param,estimate,stderr,normalized,predicted,rel_dev,seed";

std::string num(double v)
{
  if (std::isnan(v))
    return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("lab", "cannot write '" + path + "'");
  out << text;
  if (!out)
    throw IoError("lab", "write to '" + path + "' failed");
}

double parse_field(const std::string& tok, int line)
{
  if (tok == "nan")
    return std::numeric_limits<double>::quiet_NaN();
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (tok.empty() || *end != '\0')
    throw IoError("lab", "csv line " + std::to_string(line) + ": bad number '" + tok + "'");
  return v;
}

}  // namespace

const char* version()
{
  return "0.1.0";
}

std::string format_csv(const ExperimentReport& report)
{
  std::string out = kHeader;
  out += '\n';
  for (const ReportRow& r : report.rows) {
    out += num(r.param) + ',' + num(r.estimate) + ',' + num(r.stderr_value) + ',' + num(r.normalized) + ',' +
           num(r.predicted) + ',' + num(r.rel_dev) + ',' + std::to_string(report.seed) + '\n';
  }
  return out;
}

void emit_csv(const ExperimentReport& report, const std::string& path)
{
  write_file(path, format_csv(report));
}

std::vector<ReportRow> parse_csv(const std::string& text)
{
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kHeader)
    throw IoError("lab", "csv: unexpected header");
  std::vector<ReportRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty())
      continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ','))
      f.push_back(tok);
    if (f.size() != 7)
      throw IoError("lab", "csv line " + std::to_string(lineno) + ": expected 7 fields");
    ReportRow r;
    r.param = parse_field(f[0], lineno);
    r.estimate = parse_field(f[1], lineno);
    r.stderr_value = parse_field(f[2], lineno);
    r.normalized = parse_field(f[3], lineno);
    r.predicted = parse_field(f[4], lineno);
    r.rel_dev = parse_field(f[5], lineno);
    rows.push_back(r);
  }
  return rows;
}

std::string format_svg(const ExperimentReport& report)
{
  const double W = 640, H = 420, left = 70, right = 20, top = 30, bottom = 50;
  std::vector<std::pair<double, double>> est, nor;
  for (const ReportRow& r : report.rows) {
    if (!(r.param > 0))
      continue;
    if (r.estimate > 0)
      est.emplace_back(r.param, r.estimate);
    if (r.normalized > 0)
      nor.emplace_back(r.param, r.normalized);
  }
  double xlo = 1, xhi = 10, ylo = 1, yhi = 10;
  bool any = false;
  const auto grow = [&](double x, double y) {
    if (!any) {
      xlo = xhi = x;
      ylo = yhi = y;
      any = true;
    }
    xlo = std::min(xlo, x);
    xhi = std::max(xhi, x);
    ylo = std::min(ylo, y);
    yhi = std::max(yhi, y);
  };
  for (const auto& p : est)
    grow(p.first, p.second);
  for (const auto& p : nor)
    grow(p.first, p.second);
  const bool asymptote = report.predicted && *report.predicted > 0;
  if (asymptote && any)
    grow(xlo, *report.predicted);
  if (xhi <= xlo)
    xhi = xlo * 10, xlo /= 10;
  if (yhi <= ylo)
    yhi = ylo * 10, ylo /= 10;
  const double lx0 = std::log10(xlo), lx1 = std::log10(xhi);
  const double ly0 = std::log10(ylo) - 0.1, ly1 = std::log10(yhi) + 0.1;
  const auto X = [&](double x) { return left + (std::log10(x) - lx0) / (lx1 - lx0) * (W - left - right); };
  const auto Y = [&](double y) { return H - bottom - (std::log10(y) - ly0) / (ly1 - ly0) * (H - top - bottom); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  s << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  s << "<text x=\"" << left << "\" y=\"18\" font-size=\"13\">" << report.kind << ' ' << report.quantity
    << " (log-log)</text>\n";
  s << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << W - left - right << "\" height=\""
    << H - top - bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = static_cast<int>(std::ceil(lx0)); k <= static_cast<int>(std::floor(lx1)); ++k)
    s << "<text x=\"" << X(std::pow(10.0, k)) << "\" y=\"" << H - bottom + 16
      << "\" font-size=\"11\" text-anchor=\"middle\">1e" << k << "</text>\n";
  for (int k = static_cast<int>(std::ceil(ly0)); k <= static_cast<int>(std::floor(ly1)); ++k)
    s << "<text x=\"" << left - 6 << "\" y=\"" << Y(std::pow(10.0, k)) + 4
      << "\" font-size=\"11\" text-anchor=\"end\">1e" << k << "</text>\n";

  const auto polyline = [&](const std::vector<std::pair<double, double>>& pts, const char* colour) {
    if (pts.empty())
      return;
    s << "<polyline class=\"series\" fill=\"none\" stroke=\"" << colour << "\" points=\"";
    for (const auto& p : pts)
      s << X(p.first) << ',' << Y(p.second) << ' ';
    s << "\"/>\n";
    for (const auto& p : pts)
      s << "<circle cx=\"" << X(p.first) << "\" cy=\"" << Y(p.second) << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
  };
  polyline(est, "steelblue");
  polyline(nor, "darkorange");
  if (asymptote) {
    const double y = Y(*report.predicted);
    s << "<line class=\"asymptote\" x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << W - right << "\" y2=\"" << y
      << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
    s << "<text x=\"" << W - right - 4 << "\" y=\"" << y - 4 << "\" font-size=\"11\" text-anchor=\"end\">predicted "
      << short_num(*report.predicted) << "</text>\n";
  }
  if (!est.empty() && report.exponent != 0) {
    // reference slope through the first estimate, clipped to the y range
    const double x0 = est.front().first, y0 = est.front().second;
    const auto ref = [&](double x) { return y0 * std::pow(x / x0, report.exponent); };
    double xa = xlo, xb = xhi;
    const double ya = std::clamp(ref(xa), std::pow(10.0, ly0), std::pow(10.0, ly1));
    const double yb = std::clamp(ref(xb), std::pow(10.0, ly0), std::pow(10.0, ly1));
    xa = x0 * std::pow(ya / y0, 1.0 / report.exponent);
    xb = x0 * std::pow(yb / y0, 1.0 / report.exponent);
    s << "<line class=\"reference\" x1=\"" << X(xa) << "\" y1=\"" << Y(ya) << "\" x2=\"" << X(xb) << "\" y2=\""
      << Y(yb) << "\" stroke=\"green\" stroke-dasharray=\"2,3\"/>\n";
    s << "<text x=\"" << left + 6 << "\" y=\"" << H - bottom - 6 << "\" font-size=\"11\">reference slope "
      << short_num(report.exponent) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

void emit_svg(const ExperimentReport& report, const std::string& path)
{
  write_file(path, format_svg(report));
}

std::string summarize(const ExperimentReport& report)
{
  std::ostringstream s;
  s << report.kind << " / " << report.quantity << "  (seed " << report.seed << ", floatlab " << report.version
    << ")\n";
  char buf[160];
  std::snprintf(buf, sizeof buf, "%14s %16s %12s %14s %14s\n", "param", "estimate", "stderr", "normalized",
                "rel_dev");
  s << buf;
  for (const ReportRow& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%14.6g %16.9g %12.3g %14.9g %14.3g\n", r.param, r.estimate, r.stderr_value,
                  r.normalized, r.rel_dev);
    s << buf;
  }
  s << "extrapolated " << num(report.extrapolated) << '\n';
  if (report.predicted)
    s << "predicted    " << num(*report.predicted) << "\nrel_dev      " << num(report.rel_dev) << '\n';
  for (const auto& [k, v] : report.metadata)
    s << k << ": " << v << '\n';
  s << "wall time " << short_num(report.wall_time) << " s\n";
  return s.str();
}

}  // namespace floatlab
