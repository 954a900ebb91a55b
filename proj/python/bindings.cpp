#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "solspace/cli.hpp"
#include "solspace/errors.hpp"
#include "solspace/sections.hpp"
#include "solspace/workflow.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

using solspace::Problem;

json parse(const std::string& text) { return json::parse(text); }

solspace::DesignPoint point(const std::vector<double>& x) { return solspace::DesignPoint(x); }

solspace::SolverParams params_for(std::uint64_t seed, std::size_t n_samples) {
  solspace::SolverParams p;
  p.seed = seed;
  p.n_samples = n_samples;
  p.check();
  return p;
}

std::string solve_json(const solspace::SolveResult& r) {
  return json{{"box", solspace::to_json(r.box)}, {"trace", solspace::to_json(r.trace)}}.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Solution-space co-design core";
  m.attr("__version__") = SOLSPACE_VERSION;

  auto base = py::register_exception<solspace::Error>(m, "SolspaceError", PyExc_RuntimeError);
  py::register_exception<solspace::ProblemError>(m, "ProblemError", base);
  auto domain = py::register_exception<solspace::DomainFailure>(m, "DomainFailure", base);
  py::register_exception<solspace::RunLoadError>(m, "RunLoadError", base);
  py::register_exception<solspace::InfeasibleSeedError>(m, "InfeasibleSeedError", domain);
  py::register_exception<solspace::TradeoffError>(m, "TradeoffError", domain);

  py::class_<Problem>(m, "Problem")
      .def_static("load", [](const std::string& path) { return Problem::load(path); })
      .def_static("from_json", [](const std::string& text) { return Problem::from_json(parse(text)); })
      .def_property_readonly("dimension", &Problem::dimension)
      .def_property_readonly("variable_names",
                             [](const Problem& p) {
                               std::vector<std::string> names;
                               for (const auto& v : p.variables()) names.push_back(v.name);
                               return names;
                             })
      .def_property_readonly("qoi_names", &Problem::qoi_order)
      .def("document_json", [](const Problem& p) { return p.document().dump(); })
      .def("requirements_json",
           [](const Problem& p) {
             json reqs = json::array();
             for (const auto& r : p.requirements()) reqs.push_back(solspace::to_json(r));
             return reqs.dump();
           })
      .def("evaluate",
           [](const Problem& p, const std::vector<double>& x) {
             const auto e = p.evaluate(point(x));
             py::dict qois;
             for (const auto& [k, v] : e.qois) {
               if (v) {
                 qois[py::str(k)] = *v;
               } else {
                 qois[py::str(k)] = py::none();
               }
             }
             py::dict out;
             out["qois"] = qois;
             out["timed_out"] = e.timed_out;
             out["infeasible_reason"] =
                 e.infeasible_reason ? py::object(py::str(std::string(solspace::to_string(*e.infeasible_reason)))) : py::none();
             return out;
           })
      .def("classify",
           [](const Problem& p, const std::vector<double>& x) {
             const auto c = p.classify(point(x));
             return std::vector<std::string>(c.violated.begin(), c.violated.end());
           })
      .def("bind_requirements", [](const Problem& p, const std::string& baseline_json) {
        return solspace::bind_requirements(p, solspace::baseline_from_json(parse(baseline_json)));
      });

  m.def(
      "compute_baseline",
      [](const Problem& p, std::uint64_t seed, std::optional<std::size_t> budget) {
        py::gil_scoped_release release;
        return solspace::to_json(solspace::compute_baseline(p, seed, budget)).dump();
      },
      py::arg("problem"), py::arg("seed") = 0, py::arg("budget") = py::none());

  m.def(
      "solve_box",
      [](const Problem& p, const std::vector<double>& seed_point, std::uint64_t seed, std::size_t n_samples) {
        py::gil_scoped_release release;
        return solve_json(solspace::solve_box(p, point(seed_point), params_for(seed, n_samples)));
      },
      py::arg("problem"), py::arg("seed_point"), py::arg("seed") = 0, py::arg("n_samples") = 100);

  m.def(
      "validate_box",
      [](const Problem& p, const std::string& box_json, std::size_t n, std::uint64_t seed) {
        const auto box = solspace::box_from_json(parse(box_json));
        py::gil_scoped_release release;
        const auto v = solspace::validate_box(p, box, n, seed);
        return json{{"purity", v.purity}, {"n", v.n}, {"good", v.good}, {"no_samples", v.no_samples}}.dump();
      },
      py::arg("problem"), py::arg("box"), py::arg("n"), py::arg("seed") = 0);

  m.def(
      "restrict_and_resolve",
      [](const Problem& p, const std::string& box_json, const std::string& dv, double lower, double upper,
         std::uint64_t seed, std::size_t n_samples) {
        const auto box = solspace::box_from_json(parse(box_json));
        py::gil_scoped_release release;
        return solve_json(
            solspace::restrict_and_resolve(p, box, dv, {lower, upper}, params_for(seed, n_samples)));
      },
      py::arg("problem"), py::arg("box"), py::arg("dv"), py::arg("lower"), py::arg("upper"), py::arg("seed") = 0,
      py::arg("n_samples") = 100);

  m.def(
      "make_section",
      [](const Problem& p, const std::string& box_json, std::size_t i, std::size_t j, std::size_t n,
         std::uint64_t seed, const std::string& span) {
        const auto box = solspace::box_from_json(parse(box_json));
        const auto s = solspace::parse_span(span);
        py::gil_scoped_release release;
        return solspace::to_json(solspace::make_section(p, box, i, j, n, seed, s)).dump();
      },
      py::arg("problem"), py::arg("box"), py::arg("i"), py::arg("j"), py::arg("n") = 1000, py::arg("seed") = 0,
      py::arg("span") = "design_space");

  m.def(
      "export_section",
      [](const std::string& section_json, const std::string& format) {
        const auto s = solspace::section_from_json(parse(section_json));
        if (format == "json") return solspace::export_section(s, solspace::SectionFormat::json);
        if (format == "csv") return solspace::export_section(s, solspace::SectionFormat::csv);
        if (format == "svg") return solspace::export_section(s, solspace::SectionFormat::svg);
        throw py::value_error("format must be json, csv or svg");
      },
      py::arg("section"), py::arg("format"));

  m.def(
      "run_command",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"solspace"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = solspace::run_command(static_cast<int>(argv.size()), argv.data(), out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
