// swallowtail: singularities of band spectra of periodic Hamiltonian families.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "swallowtail/classifier.hpp"
#include "swallowtail/errors.hpp"
#include "swallowtail/report.hpp"

namespace st = swallowtail;

namespace {

// Writes to the named file, or stdout for "-" / empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw st::IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw st::IoError("write to '" + path + "' failed");
}

// "1.5", "-pi", "2pi/3", "-2*pi/3", "pi/2"
double parse_angle(const std::string& token) {
  static const std::regex pattern(R"(^\s*([+-]?)\s*(\d*\.?\d*(?:[eE][+-]?\d+)?)\s*\*?\s*(pi)?\s*(?:/\s*(\d+\.?\d*))?\s*$)");
  std::smatch m;
  if (!std::regex_match(token, m, pattern) || (m[2].str().empty() && !m[3].matched)) {
    throw st::UsageError("cannot parse coordinate '" + token + "'");
  }
  double value = m[2].str().empty() ? 1.0 : std::stod(m[2].str());
  if (m[3].matched) value *= std::numbers::pi;
  if (m[4].matched) value /= std::stod(m[4].str());
  return m[1].str() == "-" ? -value : value;
}

// "0,0;2pi/3,-2pi/3" -> waypoints
std::vector<std::vector<double>> parse_path(const std::string& spec, std::size_t n) {
  std::vector<std::vector<double>> points;
  std::stringstream all(spec);
  std::string point;
  while (std::getline(all, point, ';')) {
    std::vector<double> coords;
    std::stringstream ps(point);
    std::string c;
    while (std::getline(ps, c, ',')) coords.push_back(parse_angle(c));
    if (coords.size() != n) {
      throw st::UsageError("waypoint '" + point + "' has " + std::to_string(coords.size()) + " coordinates, expected " +
                           std::to_string(n));
    }
    points.push_back(std::move(coords));
  }
  if (points.size() < 2) throw st::UsageError("a path needs at least two waypoints separated by ';'");
  return points;
}

// Samples evenly spaced in arc length along the polyline, both ends included.
std::vector<std::pair<double, std::vector<double>>> sample_path(const std::vector<std::vector<double>>& way, int samples) {
  std::vector<double> cum{0.0};
  for (std::size_t i = 1; i < way.size(); ++i) {
    double d = 0.0;
    for (std::size_t j = 0; j < way[i].size(); ++j) d += (way[i][j] - way[i - 1][j]) * (way[i][j] - way[i - 1][j]);
    cum.push_back(cum.back() + std::sqrt(d));
  }
  const double total = cum.back();
  std::vector<std::pair<double, std::vector<double>>> out;
  for (int s = 0; s < samples; ++s) {
    const double t = samples == 1 ? 0.0 : total * s / (samples - 1);
    std::size_t seg = 1;
    while (seg + 1 < cum.size() && cum[seg] < t) ++seg;
    const double len = cum[seg] - cum[seg - 1];
    const double u = len > 0 ? std::clamp((t - cum[seg - 1]) / len, 0.0, 1.0) : 0.0;
    std::vector<double> b(way[0].size());
    for (std::size_t j = 0; j < b.size(); ++j) b[j] = way[seg - 1][j] + u * (way[seg][j] - way[seg - 1][j]);
    out.emplace_back(t, std::move(b));
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

int cmd_models(const std::string& dump, const std::string& out) {
  if (!dump.empty()) {
    emit(out, st::dump_model(st::resolve_model(dump)).dump(2) + "\n");
    return 0;
  }
  std::ostringstream text;
  for (const auto& name : st::builtin_model_names()) {
    const auto m = st::builtin_model(name);
    text << name << "  k=" << m.k() << " n=" << m.n() << " " << st::to_string(m.backend()) << "\n";
  }
  emit(out, text.str());
  return 0;
}

int cmd_analyze(const std::string& model, const st::AnalyzeOptions& opts, const std::string& json_out, bool quiet) {
  const auto report = st::analyze(st::resolve_model(model), opts);
  if (!json_out.empty()) emit(json_out, report.to_json().dump(2) + "\n");
  if (!quiet && json_out != "-") std::cout << report.to_text();
  return 0;
}

int cmd_region(const std::string& model, int grid, const std::string& format, const std::string& out) {
  const st::Family family(st::resolve_model(model));
  st::RegionOptions opts;
  opts.grid = grid;
  const auto region = st::analyze_region(family, opts);
  const auto curves = st::boundary_curves(family);
  std::ostringstream text;
  if (format == "csv") {
    st::write_csv(text, family, region.samples);
  } else if (format == "svg") {
    st::write_svg(text, family, region, curves);
  } else {
    text << st::region_to_json(family, region, curves).dump(2) << "\n";
  }
  emit(out, text.str());
  return 0;
}

int cmd_spectrum(const std::string& model, const std::string& path, int samples, const std::string& out) {
  if (samples < 1) throw st::UsageError("--samples must be at least 1");
  const auto spec = st::resolve_model(model);
  const st::Family family(spec);
  const std::size_t n = family.n();
  std::vector<std::vector<double>> way;
  const bool diag = path == "diag";
  if (diag) {
    const auto [lo, hi] = family.domain();
    way = {std::vector<double>(n, lo), std::vector<double>(n, hi)};
  } else {
    way = parse_path(path, n);
  }
  const bool closed = diag && spec.name == "gyroid" && family.k() == 4 && n == 3;

  std::ostringstream text;
  text << "s";
  for (const auto& v : family.variables()) text << "," << v;
  for (std::size_t i = 0; i < family.k(); ++i) text << ",band" << i;
  if (closed) text << ",closed0,closed1,closed2,closed3,max_deviation";
  text << "\r\n";
  for (const auto& [s, b] : sample_path(way, samples)) {
    text << num(s);
    for (double v : b) text << "," << num(v);
    const auto bands = family.spectrum(b);
    for (double v : bands) text << "," << num(v);
    if (closed) {
      const auto cf = st::diagonal_closed_form(b[0]);
      double dev = 0.0;
      for (std::size_t i = 0; i < 4; ++i) {
        text << "," << num(cf[i]);
        dev = std::max(dev, std::abs(cf[i] - bands[i]));
      }
      text << "," << num(dev);
    }
    text << "\r\n";
  }
  emit(out, text.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Singularities of band spectra: critical points, strata and characteristic regions"};
  app.set_version_flag("--version", std::string(st::kToolVersion));
  app.require_subcommand(1);

  std::string dump_name;
  std::string models_out;
  auto* models = app.add_subcommand("models", "List built-in models or dump one as a model file");
  models->add_option("--dump", dump_name, "Model to write as JSON");
  models->add_option("-o,--out", models_out, "Output file (default stdout)");

  st::AnalyzeOptions aopts;
  std::string model;
  std::string json_out;
  bool quiet = false;
  bool no_region = false;
  auto* analyze = app.add_subcommand("analyze", "Find and classify the singular locus of a model");
  analyze->add_option("model", model, "Built-in model name or model file")->required();
  analyze->add_option("--grid", aopts.finder.grid, "Seed grid points per axis")->capture_default_str()->check(CLI::PositiveNumber);
  analyze->add_option("--grad-tol", aopts.finder.grad_tol, "Gradient tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  analyze->add_option("--val-tol", aopts.finder.val_tol, "|P| tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  analyze->add_option("--dedup-radius", aopts.finder.dedup_radius, "Merge radius for critical points")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  analyze->add_option("--null-tol", aopts.finder.null_rel_tol, "Relative Hessian null threshold")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  analyze->add_option("--signature-tol", aopts.finder.classifier.signature_rel_tol, "Relative zero-eigenvalue threshold")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  analyze->add_option("--tilt-tol", aopts.finder.classifier.tilt_tol, "Tilt threshold")->capture_default_str()->check(CLI::PositiveNumber);
  analyze->add_option("--region-grid", aopts.region_options.grid, "Region sampling grid")
      ->capture_default_str()
      ->check(CLI::Range(2, 100000));
  analyze->add_flag("--no-region", no_region, "Skip region sampling");
  analyze->add_flag("--no-timestamp", [&](std::int64_t) { aopts.timestamp = false; }, "Omit the timestamp field");
  analyze->add_option("--json", json_out, "Write the JSON report here ('-' for stdout)");
  analyze->add_flag("-q,--quiet", quiet, "No text report");

  int region_grid = 40;
  std::string format = "svg";
  std::string region_out;
  auto* region = app.add_subcommand("region", "Sample the characteristic region and export it");
  region->add_option("model", model, "Built-in model name or model file")->required();
  region->add_option("--grid", region_grid, "Grid points per axis")->capture_default_str()->check(CLI::Range(2, 100000));
  region->add_option("--format", format, "csv, svg or json")->capture_default_str()->check(CLI::IsMember({"csv", "svg", "json"}));
  region->add_option("-o,--out", region_out, "Output file (default stdout)");

  std::string path = "diag";
  int samples = 100;
  std::string spectrum_out;
  auto* spectrum = app.add_subcommand("spectrum", "Bands along a path in the base");
  spectrum->add_option("model", model, "Built-in model name or model file")->required();
  spectrum->add_option("--path", path, "'diag' or waypoints 'x,y;x,y;...' (pi allowed, e.g. 2pi/3)")->capture_default_str();
  spectrum->add_option("--samples", samples, "Number of samples")->capture_default_str();
  spectrum->add_option("-o,--out", spectrum_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*models) return cmd_models(dump_name, models_out);
    if (*analyze) {
      aopts.region = !no_region;
      return cmd_analyze(model, aopts, json_out, quiet);
    }
    if (*region) return cmd_region(model, region_grid, format, region_out);
    if (*spectrum) return cmd_spectrum(model, path, samples, spectrum_out);
  } catch (const st::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
