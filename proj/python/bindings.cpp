#include "xplab/cli.hpp"
#include "xplab/complexify.hpp"
#include "xplab/embeddings.hpp"
#include "xplab/inequalities.hpp"
#include "xplab/schatten.hpp"
#include "xplab/verify.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace xplab;

namespace {

// Reports cross the boundary as JSON text; the package decodes them.
std::string run_json(const std::string& config)
{
    const ExperimentConfig c = config_from_json(Json::parse(config));
    return run_report(c).report.dump();
}

std::string trace_json(const Matrix& a, const Matrix& b, double q, const std::string& kind, double param)
{
    TraceKind k;
    if (kind == "main")
        k = TraceKind::main_qge1();
    else if (kind == "qlt1")
        k = TraceKind::qlt1();
    else if (kind == "lambda")
        k = TraceKind::lambda_family();
    else if (kind == "lieb-thirring")
        k = TraceKind::lieb_thirring(param);
    else if (kind == "op-convex")
        k = TraceKind::op_convex(param);
    else
        throw ParameterError("unknown trace kind '" + kind + "'");
    return to_json(trace_inequality_report(SymMatrix(a), SymMatrix(b), q, k)).dump();
}

} // namespace

PYBIND11_MODULE(_xplab, m)
{
    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def("version", &library_version);
    m.def("subcommands", &subcommands);
    m.def("run_json", &run_json, py::arg("config"));
    m.def("linear_xp_json",
          [](const std::vector<double>& a, int k, double p, std::uint64_t seed) {
              return to_json(linear_xp_report(a, k, p, make_sample_plan(2, int(a.size()), k, 1000000, seed)))
                  .dump();
          },
          py::arg("a"), py::arg("k"), py::arg("p"), py::arg("seed") = 0);
    m.def("trace_json", &trace_json, py::arg("a"), py::arg("b"), py::arg("q"), py::arg("kind") = "main",
          py::arg("param") = 1.0);
    m.def("schatten_norm", py::overload_cast<const Matrix&, double>(&schatten_norm), py::arg("a"), py::arg("p"));
    m.def("rosenthal_distortion",
          [](std::int64_t n, double q, double p) {
              const auto r = rosenthal_distortion(n, q, p);
              return py::dict(py::arg("distortion") = r.distortion, py::arg("s_star") = r.s_star,
                              py::arg("s_max") = r.s_max, py::arg("exponent") = r.exponent);
          },
          py::arg("n"), py::arg("q"), py::arg("p"));
    m.def("psi", &psi, py::arg("p"), py::arg("q"), py::arg("t"));
    m.def("theta", &theta, py::arg("p"), py::arg("q"));
    m.def("circular_moment", &circular_moment, py::arg("p"));
    m.def("geodesic", &geodesic, py::arg("w"));
    m.def("verify",
          [](const std::string& suite) {
              py::list out;
              for (const auto& c : run_suite(suite))
                  out.append(py::dict(py::arg("suite") = c.suite, py::arg("name") = c.name,
                                      py::arg("passed") = c.passed, py::arg("observed") = c.observed,
                                      py::arg("threshold") = c.threshold));
              return out;
          },
          py::arg("suite") = "all");
}
