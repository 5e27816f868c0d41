#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mflab/commands.hpp"
#include "mflab/errors.hpp"
#include "mflab/lil.hpp"
#include "mflab/qb.hpp"
#include "mflab/report.hpp"
#include "mflab/spectrum.hpp"

namespace py = pybind11;
using namespace mflab;

namespace {

MeasureModel load(const std::string& spec) { return parse_model_spec(spec, "<python>"); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "mflab core bindings";
  m.attr("__version__") = MFLAB_VERSION;

  static py::exception<Error> base_exc(m, "MflabError");
  static py::exception<ValidationError> validation_exc(m, "ValidationError", base_exc.ptr());
  static py::exception<NumericalError> numerical_exc(m, "NumericalError", base_exc.ptr());
  static py::exception<BudgetError> budget_exc(m, "BudgetError", base_exc.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      validation_exc(e.what());
    } catch (const NumericalError& e) {
      numerical_exc(e.what());
    } catch (const BudgetError& e) {
      budget_exc(e.what());
    }
  });

  m.def("canonical_spec", [](const std::string& spec) { return canonical_spec(load(spec)); },
        py::arg("spec"));
  m.def("zoo", [] { return zoo_specs(); }, "Bundled example models as (name, spec text).");

  m.def("tau", [](const std::string& spec, double q, const std::string& base) {
        return tau_in_base(load(spec), q, parse_log_base(base));
      }, py::arg("spec"), py::arg("q"), py::arg("base") = "ell");
  m.def("tau_empirical", [](const std::string& spec, double q, int n, const std::string& base) {
        return tau_empirical(load(spec), q, n, parse_log_base(base));
      }, py::arg("spec"), py::arg("q"), py::arg("n"), py::arg("base") = "ell");
  m.def("dimension", [](const std::string& spec) {
        const auto r = dimension(load(spec));
        return py::dict(py::arg("d") = r.d, py::arg("d_numeric") = r.d_numeric,
                        py::arg("method") = r.method);
      }, py::arg("spec"));
  m.def("sigma2", [](const std::string& spec, const std::string& base) {
        return sigma2(load(spec), parse_log_base(base)).value;
      }, py::arg("spec"), py::arg("base") = "natural");
  m.def("chi", [](const std::string& spec, double q) { return chi(load(spec), q); },
        py::arg("spec"), py::arg("q"));
  m.def("support_dimension", [](const std::string& spec) { return support_dimension(load(spec)); },
        py::arg("spec"));

  m.def("exact_distribution", [](const std::string& spec, int n, const std::string& base) {
        std::vector<std::pair<double, double>> out;
        for (const auto& a : exact_distribution(load(spec), n, parse_log_base(base)))
          out.emplace_back(a.value, a.prob);
        return out;
      }, py::arg("spec"), py::arg("n"), py::arg("base") = "ell");
  m.def("sample_path", [](const std::string& spec, int n, std::uint64_t seed, std::uint64_t path) {
        const auto w = sample_path(load(spec), n, seed, path);
        return std::vector<std::uint32_t>(w.symbols().begin(), w.symbols().end());
      }, py::arg("spec"), py::arg("n"), py::arg("seed") = 0, py::arg("path") = 0);

  m.def("qb_constant", [](const std::string& spec, int max_level) {
        return qb_constant(load(spec), max_level).C_hat;
      }, py::arg("spec"), py::arg("max_level") = 8);
  m.def("classify", [](const std::string& spec) {
        const auto r = dichotomy_classify(load(spec));
        return py::dict(py::arg("case") = std::string(to_string(r.verdict)), py::arg("d") = r.d,
                        py::arg("delta") = r.delta);
      }, py::arg("spec"));

  m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      }, py::arg("args"), "Run the mflab command line; returns (exit_code, stdout, stderr).");
}
