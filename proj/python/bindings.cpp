#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "lightfol/checks.hpp"
#include "lightfol/report.hpp"

namespace py = pybind11;
using namespace lightfol;

namespace {

std::string kind_label(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Foliation: return "foliation";
    case ScenarioKind::Flow: return "flow";
    case ScenarioKind::Warped: return "warped";
  }
  return "unknown";
}

std::string emit(const Report& r, ReportFormat f) {
  std::ostringstream out;
  emit_report(r, f, out);
  return out.str();
}

py::tuple evaluate_expression(const std::string& text, const std::vector<double>& point) {
  const int n = static_cast<int>(point.size());
  const Jet j = eval_jet(parse_expression(text, n), point);
  std::vector<double> grad(static_cast<std::size_t>(n));
  std::vector<std::vector<double>> hess(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    grad[i] = j.grad(i);
    for (int k = 0; k < n; ++k) hess[i][k] = j.hess(i, k);
  }
  return py::make_tuple(j.value(), grad, hess);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Numerical checks for tangentially lightlike foliations";

  // Every engine failure surfaces as LightfolError; the message starts with the
  // error kind. Scenario syntax problems get their own subclass with a line.
  static py::exception<Error> base(m, "LightfolError");
  static py::exception<ParseError> parse_error(m, "ScenarioParseError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      py::set_error(parse_error, e.what());
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });

  m.def("evaluate", &evaluate_expression, py::arg("expression"), py::arg("point"),
        "Value, gradient and Hessian of an expression in x1..xn at a point.");

  py::class_<ScenarioFile>(m, "Scenario")
      .def_static("load", &load_scenario, py::arg("path"))
      .def_static("parse", &parse_scenario, py::arg("text"), py::arg("name") = "scenario")
      .def_readonly("name", &ScenarioFile::name)
      .def_readonly("dim", &ScenarioFile::dim)
      .def_readonly("index", &ScenarioFile::index)
      .def_property_readonly("kind", [](const ScenarioFile& s) { return kind_label(s.kind); })
      .def_property_readonly("available_checks", &available_checks)
      .def_property_readonly("registered_checks", &registered_checks)
      .def(
          "samples",
          [](const ScenarioFile& s, std::optional<std::uint64_t> seed, std::optional<int> count) {
            return scenario_samples(s, seed, count);
          },
          py::arg("seed") = py::none(), py::arg("count") = py::none());

  py::class_<SampleOutcome>(m, "SampleOutcome")
      .def_readonly("index", &SampleOutcome::sample_index)
      .def_readonly("point", &SampleOutcome::point)
      .def_readonly("residual", &SampleOutcome::residual)
      .def_readonly("passed", &SampleOutcome::pass)
      .def_readonly("error", &SampleOutcome::error);

  py::class_<CheckReport>(m, "CheckReport")
      .def_readonly("name", &CheckReport::name)
      .def_readonly("tolerance", &CheckReport::tolerance)
      .def_readonly("max_residual", &CheckReport::max_residual)
      .def_readonly("passed", &CheckReport::pass)
      .def_readonly("samples", &CheckReport::samples);

  py::class_<Report>(m, "Report")
      .def_readonly("scenario", &Report::scenario)
      .def_readonly("seed", &Report::seed)
      .def_readonly("points", &Report::points)
      .def_readonly("checks", &Report::checks)
      .def_property_readonly("passed", &Report::pass)
      .def("to_jsonl", [](const Report& r) { return emit(r, ReportFormat::JsonLines); })
      .def("to_text", [](const Report& r) { return emit(r, ReportFormat::Text); });

  m.def("run_checks", &run_checks, py::arg("scenario"), py::arg("only") = py::none(), py::arg("seed") = py::none(),
        py::arg("samples") = py::none());
  m.def("fol45_scenario_text", &fol45_scenario_text, py::arg("n"), py::arg("s"));
}
