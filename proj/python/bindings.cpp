#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "swallowtail/classifier.hpp"
#include "swallowtail/errors.hpp"
#include "swallowtail/report.hpp"

namespace py = pybind11;
namespace st = swallowtail;
using namespace pybind11::literals;

namespace {

// JSON crosses the boundary as text; the package decodes it.
std::string analyze_json(const std::string& model, int grid, bool region, int region_grid) {
  st::AnalyzeOptions opts;
  opts.finder.grid = grid;
  opts.region = region;
  opts.region_options.grid = region_grid;
  opts.timestamp = false;
  py::gil_scoped_release release;
  return st::analyze(st::resolve_model(model), opts).to_json().dump();
}

std::string region_text(const std::string& model, int grid, const std::string& format) {
  const st::Family family(st::resolve_model(model));
  st::RegionOptions opts;
  opts.grid = grid;
  std::ostringstream out;
  py::gil_scoped_release release;
  const auto region = st::analyze_region(family, opts);
  const auto curves = st::boundary_curves(family);
  if (format == "csv") {
    st::write_csv(out, family, region.samples);
  } else if (format == "svg") {
    st::write_svg(out, family, region, curves);
  } else if (format == "json") {
    out << st::region_to_json(family, region, curves).dump();
  } else {
    throw st::UsageError("unknown region format '" + format + "'");
  }
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Singularities of band spectra of periodic Hamiltonian families";
  m.attr("__version__") = st::kToolVersion;
  m.attr("REPORT_SCHEMA") = st::kReportSchema;

  py::register_exception<st::ModelError>(m, "ModelError", PyExc_ValueError);
  py::register_exception<st::UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<st::IoError>(m, "IoError", PyExc_OSError);

  m.def("models", [] { return st::builtin_model_names(); }, "Names of the built-in models.");

  m.def(
      "dump_model", [](const std::string& model) { return st::dump_model(st::resolve_model(model)).dump(2); },
      "model"_a, "Model file text for a built-in name or a model file path.");

  m.def(
      "char_poly",
      [](const std::string& model, bool shifted) {
        const st::Family family(st::resolve_model(model));
        return st::render(family.char_poly(), family.variables(), shifted);
      },
      "model"_a, "shifted"_a = false, "P(b, z) rendered as text; the traceless form when shifted.");

  m.def(
      "spectrum",
      [](const std::string& model, const std::vector<double>& b) {
        const st::Family family(st::resolve_model(model));
        if (b.size() != family.n()) throw st::UsageError("point has the wrong dimension");
        return family.spectrum(b);
      },
      "model"_a, "b"_a, "Sorted bands at one base point.");

  m.def(
      "discriminant",
      [](const std::vector<double>& lambda) { return st::discriminant(lambda, lambda.size() + 1); }, "lam"_a,
      "Discriminant of z^k + l_{k-2} z^{k-2} + ... + l_0 with lam = (l_0, ..., l_{k-2}).");

  m.def(
      "stratum",
      [](const std::vector<double>& lambda, double tol) {
        return st::stratum_of(lambda, lambda.size() + 1, tol).stratum.parts;
      },
      "lam"_a, "tol"_a = 1e-6, "Root multiplicities minus one, ascending; empty for a simple fiber.");

  m.def("analyze_json", &analyze_json, "model"_a, "grid"_a = 8, "region"_a = false, "region_grid"_a = 24);
  m.def("region_text", &region_text, "model"_a, "grid"_a = 40, "format"_a = "json");
}
