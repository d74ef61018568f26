#include <sstream>
#include <tuple>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mlstar/certifier.hpp"
#include "mlstar/cli.hpp"
#include "mlstar/orders.hpp"

namespace py = pybind11;
using namespace mlstar;

namespace {

CoshKind kind_from_string(const std::string& s) {
    if (s == "E21") return CoshKind::E21;
    if (s == "E22") return CoshKind::E22;
    if (s == "E23") return CoshKind::E23;
    if (s == "E24") return CoshKind::E24;
    throw DomainError("closed_form: kind must be one of E21, E22, E23, E24");
}

std::tuple<int, std::string, std::string> run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"mlstar"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

PYBIND11_MODULE(_mlstar, m) {
    m.doc() = "Normalized Mittag-Leffler functions, integral operators and order certificates";

    auto base = py::register_exception<Error>(m, "MlstarError");
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<TruncationError>(m, "TruncationError", base.ptr());
    py::register_exception<PathResolutionError>(m, "PathResolutionError", base.ptr());
    py::register_exception<QuadratureError>(m, "QuadratureError", base.ptr());
    py::register_exception<NearZeroDenominatorError>(m, "NearZeroDenominatorError", base.ptr());
    py::register_exception<DegenerateOperatorError>(m, "DegenerateOperatorError", base.ptr());

    m.def("gamma_real", &gamma_real, py::arg("x"));
    m.def("principal_power", &principal_power, py::arg("w"), py::arg("e"));

    py::class_<MLParams>(m, "MLParams")
        .def(py::init([](double alpha, double beta) {
                 MLParams p{alpha, beta};
                 p.validate();
                 return p;
             }),
             py::arg("alpha"), py::arg("beta"))
        .def_readonly("alpha", &MLParams::alpha)
        .def_readonly("beta", &MLParams::beta)
        .def("__repr__", [](const MLParams& p) {
            std::ostringstream os;
            os << "MLParams(alpha=" << p.alpha << ", beta=" << p.beta << ")";
            return os.str();
        });

    py::class_<SeriesResult>(m, "SeriesResult")
        .def_readonly("value", &SeriesResult::value)
        .def_readonly("terms_used", &SeriesResult::terms_used)
        .def_readonly("tail_bound", &SeriesResult::tail_bound);

    m.def("ml_raw", &ml_raw, py::arg("params"), py::arg("z"), py::arg("tol") = kDefaultSeriesTol);
    m.def("ml_norm", &ml_norm, py::arg("params"), py::arg("z"), py::arg("tol") = kDefaultSeriesTol);
    m.def("ml_norm_deriv", &ml_norm_deriv, py::arg("params"), py::arg("z"),
          py::arg("tol") = kDefaultSeriesTol);
    m.def("log_deriv", py::overload_cast<const MLParams&, cplx, double>(&log_deriv),
          py::arg("params"), py::arg("z"), py::arg("tol") = kDefaultSeriesTol);
    m.def("closed_form", [](const std::string& kind, cplx z) { return closed_form(kind_from_string(kind), z); },
          py::arg("kind"), py::arg("z"));

    py::class_<FactorSpec>(m, "FactorSpec")
        .def(py::init([](double alpha, double beta, double lambda, double eta) {
                 FactorSpec f{{alpha, beta}, lambda, eta};
                 f.validate();
                 return f;
             }),
             py::arg("alpha"), py::arg("beta"), py::arg("lam"), py::arg("eta") = 0.0)
        .def_readonly("params", &FactorSpec::params)
        .def_readonly("lam", &FactorSpec::lambda)
        .def_readonly("eta", &FactorSpec::eta);

    py::class_<OperatorSpec>(m, "OperatorSpec")
        .def(py::init([](std::vector<FactorSpec> factors, double zeta) {
                 OperatorSpec s{std::move(factors), zeta};
                 s.validate();
                 return s;
             }),
             py::arg("factors"), py::arg("zeta") = 1.0)
        .def_readonly("factors", &OperatorSpec::factors)
        .def_readonly("zeta", &OperatorSpec::zeta);

    py::class_<IntegralOperator>(m, "IntegralOperator")
        .def(py::init<OperatorSpec>(), py::arg("spec"))
        .def_static("unit_product", &IntegralOperator::unit_product, py::arg("zeta") = 1.0)
        .def("f_zeta_power", &IntegralOperator::f_zeta_power, py::arg("z"), py::arg("tol") = kDefaultOperatorTol)
        .def("f_value", &IntegralOperator::f_value, py::arg("z"), py::arg("tol") = kDefaultOperatorTol)
        .def("star_log_deriv", &IntegralOperator::star_log_deriv, py::arg("z"),
             py::arg("tol") = kDefaultOperatorTol)
        .def("convex_log_deriv", &IntegralOperator::convex_log_deriv, py::arg("z"),
             py::arg("series_tol") = kDefaultSeriesTol)
        .def("f_conv_value", &IntegralOperator::f_conv_value, py::arg("z"), py::arg("tol") = kDefaultOperatorTol);

    py::class_<StarlikeOrderReport>(m, "StarlikeOrderReport")
        .def_readonly("delta", &StarlikeOrderReport::delta)
        .def_readonly("hypothesis_sum", &StarlikeOrderReport::hypothesis_sum)
        .def_readonly("zeta", &StarlikeOrderReport::zeta)
        .def_readonly("hypothesis_ok", &StarlikeOrderReport::hypothesis_ok);
    py::class_<ConvexOrderReport>(m, "ConvexOrderReport")
        .def_readonly("delta", &ConvexOrderReport::delta)
        .def_readonly("beta_min", &ConvexOrderReport::beta_min)
        .def_readonly("bound_sum", &ConvexOrderReport::bound_sum)
        .def_readonly("hypothesis_ok", &ConvexOrderReport::hypothesis_ok);

    m.def("psi", &psi, py::arg("eta"));
    m.def("phi", &phi, py::arg("beta"));
    m.def("lemma3_bound", &lemma3_bound, py::arg("params"));
    m.def("starlike_delta", &starlike_delta, py::arg("spec"));
    m.def("convex_delta", [](const std::vector<FactorSpec>& f) { return convex_delta(f); },
          py::arg("factors"));

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init([](std::vector<double> radii, int angles) {
                 GridSpec g{std::move(radii), 0.0, angles};
                 if (!g.radii.empty()) {
                     g.r_max = g.radii.back();
                 }
                 g.validate();
                 return g;
             }),
             py::arg("radii"), py::arg("angles") = 720)
        .def_static("defaults", &GridSpec::defaults)
        .def_readonly("radii", &GridSpec::radii)
        .def_readonly("r_max", &GridSpec::r_max)
        .def_readonly("angles", &GridSpec::angles);

    py::class_<CertifyOptions>(m, "CertifyOptions")
        .def(py::init<>())
        .def_readwrite("eval_tolerance", &CertifyOptions::eval_tolerance)
        .def_readwrite("quadrature_tol", &CertifyOptions::quadrature_tol)
        .def_readwrite("series_tol", &CertifyOptions::series_tol)
        .def_readwrite("threads", &CertifyOptions::threads)
        .def_readwrite("predicted_offset", &CertifyOptions::predicted_offset);

    py::class_<Certificate>(m, "Certificate")
        .def_property_readonly("quantity", [](const Certificate& c) { return std::string(to_string(c.quantity)); })
        .def_property_readonly("verdict", [](const Certificate& c) { return std::string(to_string(c.verdict)); })
        .def_readonly("predicted", &Certificate::predicted)
        .def_readonly("observed", &Certificate::observed)
        .def_readonly("margin", &Certificate::margin)
        .def_readonly("boundary_observed", &Certificate::boundary_observed)
        .def_readonly("hypothesis_ok", &Certificate::hypothesis_ok)
        .def_readonly("points_evaluated", &Certificate::points_evaluated)
        .def_property_readonly("argmin", [](const Certificate& c) { return c.argmin.z; })
        .def_readonly("semantics", &Certificate::semantics);

    m.def("certify_starlike",
          py::overload_cast<const OperatorSpec&, const GridSpec&, const CertifyOptions&>(&certify_starlike),
          py::arg("spec"), py::arg("grid"), py::arg("options") = CertifyOptions{},
          py::call_guard<py::gil_scoped_release>());
    m.def("certify_convex",
          [](const std::vector<FactorSpec>& f, const GridSpec& g, const CertifyOptions& o) {
              return certify_convex(f, g, o);
          },
          py::arg("factors"), py::arg("grid"), py::arg("options") = CertifyOptions{},
          py::call_guard<py::gil_scoped_release>());
    m.def("certify_ml_starlike", &certify_ml_starlike, py::arg("params"), py::arg("eta"), py::arg("grid"),
          py::arg("options") = CertifyOptions{}, py::call_guard<py::gil_scoped_release>());
    m.def("check_lemma3", &check_lemma3, py::arg("params"), py::arg("grid"),
          py::arg("options") = CertifyOptions{}, py::call_guard<py::gil_scoped_release>());

    m.def("run_cli", &run_cli, py::arg("args"),
          "Run the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
