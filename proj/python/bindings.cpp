#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qdigamma/errors.hpp"
#include "qdigamma/inequalities.hpp"
#include "qdigamma/limits.hpp"
#include "qdigamma/qcore.hpp"
#include "qdigamma/reference.hpp"
#include "qdigamma/report_json.hpp"

namespace py = pybind11;
using namespace qdigamma;

namespace {

std::string dump(const json::Json& j) { return json::dump(j, -1); }

Family parse_family(const std::string& name) {
    if (name == "qk") return Family::QK;
    if (name == "pq") return Family::PQ;
    throw DomainError("family must be 'qk' or 'pq'");
}

}  // namespace

PYBIND11_MODULE(_qdigamma, m) {
    m.doc() = "(q,k)- and (p,q)-digamma functions with certified truncation bounds.";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<TruncationNotConverged>(m, "TruncationNotConverged", PyExc_RuntimeError);
    py::register_exception<PositivityViolated>(m, "PositivityViolated", PyExc_RuntimeError);
    py::register_exception<NoRootInBracket>(m, "NoRootInBracket", PyExc_RuntimeError);
    py::register_exception<NoPositiveRegion>(m, "NoPositiveRegion", PyExc_RuntimeError);

    py::class_<DeformParams>(m, "DeformParams")
        .def_static("qk", &DeformParams::qk, py::arg("q"), py::arg("k"))
        .def_static("pq", &DeformParams::pq, py::arg("p"), py::arg("q"))
        .def_property_readonly("family", [](const DeformParams& p) { return std::string(to_string(p.family())); })
        .def_property_readonly("q", &DeformParams::q)
        .def_property_readonly("k", &DeformParams::k)
        .def_property_readonly("p", &DeformParams::p)
        .def("__repr__", [](const DeformParams& p) { return "DeformParams(" + dump(json::to_json(p)) + ")"; });

    py::class_<Tolerance>(m, "Tolerance")
        .def(py::init([](double abs_tol, std::size_t n_max) { return Tolerance{abs_tol, n_max}; }),
             py::arg("abs_tol") = 1e-13, py::arg("n_max") = 10'000'000)
        .def_readwrite("abs_tol", &Tolerance::abs_tol)
        .def_readwrite("n_max", &Tolerance::n_max);

    py::class_<EvalResult>(m, "EvalResult")
        .def_readonly("value", &EvalResult::value)
        .def_readonly("tail_bound", &EvalResult::tail_bound)
        .def_readonly("terms_used", &EvalResult::terms_used)
        .def("__repr__", [](const EvalResult& r) { return "EvalResult(" + dump(json::to_json(r)) + ")"; });

    py::class_<RatioSpec>(m, "RatioSpec")
        .def(py::init([](double a, double b, double c, double d, double alpha, double beta) {
                 return RatioSpec{a, b, c, d, alpha, beta};
             }),
             py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"), py::arg("alpha"), py::arg("beta"))
        .def_readwrite("a", &RatioSpec::a)
        .def_readwrite("b", &RatioSpec::b)
        .def_readwrite("c", &RatioSpec::c)
        .def_readwrite("d", &RatioSpec::d)
        .def_readwrite("alpha", &RatioSpec::alpha)
        .def_readwrite("beta", &RatioSpec::beta);

    py::class_<Threshold>(m, "Threshold")
        .def_readonly("t0", &Threshold::t0)
        .def_readonly("psi_value", &Threshold::psi_value)
        .def_readonly("psi_tail_bound", &Threshold::psi_tail_bound);

    const Tolerance dflt{};
    m.def("q_bracket", &q_bracket, py::arg("p"), py::arg("q"));
    m.def("psi_qk", &psi_qk, py::arg("t"), py::arg("params"), py::arg("tol") = dflt);
    m.def("psi_qk_prime", &psi_qk_prime, py::arg("t"), py::arg("params"), py::arg("tol") = dflt);
    m.def("ln_gamma_qk", &ln_gamma_qk, py::arg("t"), py::arg("params"), py::arg("tol") = dflt);
    m.def("psi_pq", &psi_pq, py::arg("t"), py::arg("params"));
    m.def("psi_pq_prime", &psi_pq_prime, py::arg("t"), py::arg("params"));
    m.def("ln_gamma_pq", &ln_gamma_pq, py::arg("t"), py::arg("params"));

    m.def("classical_digamma", [](double t) { return reference::classical_digamma(t).value; }, py::arg("t"));
    m.def("k_digamma_ref", [](double t, double k) { return reference::k_digamma_ref(t, k).value; },
          py::arg("t"), py::arg("k"));
    m.def("p_digamma_ref", [](double t, long p) { return reference::p_digamma_ref(t, p).value; },
          py::arg("t"), py::arg("p"));

    m.def("validate_spec",
          [](const RatioSpec& spec, const DeformParams& params, double t_min, double t_max, const Tolerance& tol) {
              const SpecValidity v = validate_spec(spec, params, t_min, t_max, tol);
              return py::make_tuple(v.valid, v.reasons);
          },
          py::arg("spec"), py::arg("params"), py::arg("t_min") = 0.0, py::arg("t_max") = 1.0,
          py::arg("tol") = dflt);
    m.def("ratio_G", &ratio_G, py::arg("spec"), py::arg("t"), py::arg("params"), py::arg("tol") = dflt);
    m.def("ratio_H", &ratio_H, py::arg("spec"), py::arg("t"), py::arg("params"));
    m.def("check_lemma_cross",
          [](const RatioSpec& spec, double t, const DeformParams& params, const Tolerance& tol) {
              return check_lemma_cross(spec, t, params, tol).margin;
          },
          py::arg("spec"), py::arg("t"), py::arg("params"), py::arg("tol") = dflt);
    m.def("find_positive_threshold", &find_positive_threshold, py::arg("params"), py::arg("tol") = dflt);

    m.def("_verify_bounds_json",
          [](const std::string& suite_name, const std::string& family, int specs, double t_min, double t_max,
             int t_points, std::uint64_t seed) {
              const auto suite = parse_suite(suite_name);
              if (!suite) throw DomainError("unknown suite " + suite_name);
              GridSpec grid;
              grid.t_min = t_min;
              grid.t_max = t_max;
              grid.t_count = t_points;
              grid.seed = seed;
              Family fam = parse_family(family);
              if (*suite == Suite::QK_THEOREM || *suite == Suite::QK_COROLLARY) fam = Family::QK;
              if (*suite == Suite::PQ_THEOREM || *suite == Suite::PQ_COROLLARY) fam = Family::PQ;
              grid.samples = random_samples(fam, specs, std::max(1.0, t_max), seed);
              VerificationReport report;
              {
                  py::gil_scoped_release release;
                  report = verify_bounds(*suite, grid);
              }
              return dump(json::document("verification_report", json::to_json(report)));
          });

    m.def("_limit_json", [](const std::string& scan, double t, double q, double k, long p, int j_max,
                            const std::vector<long>& p_list, const std::string& path) {
        if (scan == "k1") return dump(json::document("k_substitution_check", json::to_json(limits::limit_k_to_1(t, q))));
        limits::ConvergenceReport r;
        if (scan == "qk-q1")
            r = limits::limit_q_to_1_qk(t, k, j_max);
        else if (scan == "q1")
            r = limits::limit_q_to_1_qk(t, 1.0, j_max);
        else if (scan == "pq-q1")
            r = limits::limit_q_to_1_pq(t, p, j_max);
        else if (scan == "p-inf")
            r = limits::limit_p_to_inf(t, q, p_list);
        else if (scan == "pq-combined")
            r = limits::limit_pq_combined(t, j_max, 1e-2, path == "decade" ? limits::CombinedPath::Decade : limits::CombinedPath::TailControlled);
        else
            throw DomainError("unknown scan " + scan);
        return dump(json::document("convergence_report", json::to_json(r)));
    });
}
