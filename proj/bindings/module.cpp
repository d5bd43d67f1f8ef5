#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mlcalc/json_io.hpp"
#include "mlcalc/measure_mc.hpp"
#include "mlcalc/operators.hpp"

namespace py = pybind11;
using namespace mlcalc;

namespace {

ChaosVector chaos_from_json_str(const std::string& s) {
    return chaos_vector_from_json(Json::parse(s));
}

std::string chaos_to_json_str(const ChaosVector& v) {
    return chaos_vector_to_json(v).dump();
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Mittag-Leffler analysis engine: special functions, Appell "
              "biorthogonal systems, transforms, operator symbols and the "
              "grey-noise Monte Carlo sampler.";

    // translators run newest-first, so the base class goes in first
    py::register_exception<Error>(m, "MlcalcError");
    py::register_exception<NonConvergent>(m, "NonConvergentError");
    py::register_exception<OutsideDomain>(m, "OutsideDomainError");

    py::class_<MLParams>(m, "MLParams")
        .def(py::init<>())
        .def(py::init([](double beta) {
                 MLParams p;
                 p.beta = beta;
                 p.validate();
                 return p;
             }),
             py::arg("beta"))
        .def_readwrite("beta", &MLParams::beta)
        .def_readwrite("series_tol", &MLParams::series_tol)
        .def_readwrite("max_terms", &MLParams::max_terms)
        .def_readwrite("quad_points", &MLParams::quad_points);

    m.def("gamma_reciprocal", py::overload_cast<Cplx>(&gamma_reciprocal),
          "1/Gamma(z); exactly 0 at the poles");
    m.def("mittag_leffler",
          [](const MLParams& p, Cplx z) { return mittag_leffler(p, z); },
          py::arg("params"), py::arg("z"));
    m.def("mittag_leffler_general",
          [](const MLParams& p, double g, Cplx z) {
              return mittag_leffler_general(p, g, z);
          },
          py::arg("params"), py::arg("gamma"), py::arg("z"));
    m.def("ml_derivative",
          [](const MLParams& p, Cplx z) { return ml_derivative(p, z); });
    m.def("m_wright", [](const MLParams& p, double x) { return m_wright(p, x); });
    m.def("laplace_identity_residual",
          [](const MLParams& p, double s) { return laplace_identity_residual(p, s); });

    m.def("appell_coeffs",
          [](const MLParams& p, int N) { return appell_coeffs(p, N).b; },
          "coefficients b_0..b_N of 1/E_beta");

    py::class_<AppellSystem>(m, "AppellSystem")
        .def(py::init([](double beta, int dim, int max_degree) {
                 MLParams p;
                 p.beta = beta;
                 return AppellSystem(p, dim, max_degree);
             }),
             py::arg("beta"), py::arg("dim"), py::arg("max_degree"))
        .def_property_readonly("dim", &AppellSystem::dim)
        .def_property_readonly("max_degree", &AppellSystem::max_degree)
        .def("appell_kernel_json",
             [](const AppellSystem& sys, const std::vector<Cplx>& omega, int n) {
                 return sym_tensor_to_json(sys.appell_kernel(omega, n)).dump();
             })
        .def("dual_pair",
             [](const AppellSystem& sys, const std::string& Phi, const std::string& phi) {
                 return sys.dual_pair(chaos_from_json_str(Phi), chaos_from_json_str(phi));
             })
        .def("l2_pairing",
             [](const AppellSystem& sys, const std::string& f, const std::string& g) {
                 return sys.l2_pairing(chaos_from_json_str(f), chaos_from_json_str(g));
             })
        .def("evaluate",
             [](const AppellSystem& sys, const std::string& f,
                const std::vector<Cplx>& omega) {
                 return sys.evaluate(chaos_from_json_str(f), omega);
             });

    m.def("exp_pairing",
          [](const MLParams& p, const std::vector<Cplx>& xi, const std::vector<Cplx>& eta) {
              return exp_pairing(p, xi, eta);
          });
    m.def("s_transform",
          [](const AppellSystem& sys, const std::string& Phi, const std::vector<Cplx>& xi) {
              return s_transform(sys, chaos_from_json_str(Phi), xi);
          });
    m.def("t_transform",
          [](const AppellSystem& sys, const std::string& Phi, const std::vector<Cplx>& phi) {
              return t_transform(sys, chaos_from_json_str(Phi), phi);
          });
    m.def("exp_vector_json",
          [](const AppellSystem& sys, const std::vector<Cplx>& xi, int N) {
              return chaos_to_json_str(exp_vector(sys, xi, N).body);
          });

    m.def("symbol",
          [](const AppellSystem& sys, const std::string& op_json,
             const std::vector<Cplx>& xi, const std::vector<Cplx>& eta, int N) {
              OperatorRep op = operator_from_json(Json::parse(op_json));
              return symbol(sys, op, xi, eta, N);
          },
          py::arg("system"), py::arg("operator_json"), py::arg("xi"), py::arg("eta"),
          py::arg("trunc"));
    m.def("apply_operator_json",
          [](const AppellSystem& sys, const std::string& op_json, const std::string& v) {
              OperatorRep op = operator_from_json(Json::parse(op_json));
              return chaos_to_json_str(op.apply(sys, chaos_from_json_str(v)));
          });
    m.def("mehler_exp", &mehler_exp);
    m.def("mehler_semigroup_defect", &mehler_semigroup_defect);

    m.def("sample_subordinator", &sample_subordinator, py::arg("beta"), py::arg("n"),
          py::arg("seed"));
    m.def("sample_measure_flat",
          [](double beta, int d, std::int64_t n, std::uint64_t seed) {
              MLParams p;
              p.beta = beta;
              SampleBatch b = sample_measure(p, d, n, seed);
              return py::make_tuple(b.omegas, b.taus);
          },
          "row-major omegas (n*d) and taus");
    m.def("mc_char_function",
          [](double beta, int d, std::int64_t n, std::uint64_t seed,
             const std::vector<double>& phi) {
              MLParams p;
              p.beta = beta;
              SampleBatch b = sample_measure(p, d, n, seed);
              MCEstimate est = mc_char_function(b, phi);
              return py::make_tuple(est.value, est.std_error);
          });

    m.attr("__version__") = "0.1.0";
}
