#include "floquet/bounds.hpp"
#include "floquet/error.hpp"
#include "floquet/oracle.hpp"
#include "floquet/propagator.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace pybind11::literals;
using namespace floquet;

namespace {

// Modes -m_max..m_max as a complex numpy vector.
py::array_t<cplx> to_array(const FourierSeries& s)
{
    py::array_t<cplx> a(2 * s.m_max() + 1);
    auto v = a.mutable_unchecked<1>();
    for (int m = -s.m_max(); m <= s.m_max(); ++m)
        v(m + s.m_max()) = s[m];
    return a;
}

py::array_t<cplx> to_array(const Mat2& U)
{
    py::array_t<cplx> a({2, 2});
    auto v = a.mutable_unchecked<2>();
    v(0, 0) = U.a11;
    v(0, 1) = U.a12;
    v(1, 0) = U.a21;
    v(1, 1) = U.a22;
    return a;
}

AlphaBranch parse_branch(const std::string& b)
{
    if (b == "principal")
        return AlphaBranch::Principal;
    if (b == "negated")
        return AlphaBranch::Negated;
    throw Error("alpha branch must be 'principal' or 'negated'");
}

DriveSpec make_drive(double omega, const std::vector<std::pair<int, cplx>>& harmonics)
{
    std::vector<Harmonic> hs;
    for (const auto& [n, f] : harmonics)
        hs.push_back({n, f});
    return DriveSpec(omega, std::move(hs));
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Perturbative Floquet propagator for a driven two-level system";
    py::register_exception<Error>(m, "FloquetError", PyExc_ValueError);

    py::class_<DriveSpec>(m, "Drive", "Real zero-mean periodic drive given by its Fourier harmonics")
        .def(py::init(&make_drive), "omega"_a, "harmonics"_a, "harmonics: list of (n, complex F_n), both signs of n")
        .def_static("cos_sin", &DriveSpec::cos_sin, "omega"_a, "phi1"_a, "phi2"_a)
        .def_static("two_harmonic", &DriveSpec::two_harmonic, "omega"_a, "f1"_a, "f2"_a)
        .def_property_readonly("omega", &DriveSpec::omega)
        .def_property_readonly("period", &DriveSpec::period)
        .def_property_readonly("harmonics",
                               [](const DriveSpec& d) {
                                   std::vector<std::pair<int, cplx>> out;
                                   for (const auto& h : d.harmonics())
                                       out.emplace_back(h.n, h.f);
                                   return out;
                               })
        .def("__call__", py::vectorize(&DriveSpec::value), "t"_a)
        .def("__repr__", [](const DriveSpec& d) {
            return "<Drive omega=" + std::to_string(d.omega()) + " modes=" + std::to_string(d.harmonics().size())
                   + ">";
        });

    m.def("q_coefficients", [](const DriveSpec& d, int m_max, int scale) { return to_array(q_coefficients(d, m_max, scale)); },
          "drive"_a, "m_max"_a, "scale"_a = 1, "Q_m (scale 1) or Q^(2)_m (scale 2) for m = -m_max..m_max");

    m.def(
        "classify",
        [](const DriveSpec& d, int m_max, double tol_case) {
            const QData qd = compute_qdata(d, m_max, tol_case);
            const Classification c = classify(d, qd, tol_case);
            py::dict r;
            r["case"] = to_string(c.label);
            r["gamma_f"] = qd.gamma_f;
            r["M_q2"] = qd.mean_q2;
            r["abs_M_q2"] = c.abs_mean_q2;
            r["M_Q1"] = qd.mean_Q1 ? py::cast(*qd.mean_Q1) : py::none();
            r["threshold"] = c.threshold;
            r["m_max"] = qd.m_max;
            r["Q"] = to_array(qd.Q);
            r["Q2"] = to_array(qd.Q2);
            return r;
        },
        "drive"_a, "m_max"_a = 0, "tol_case"_a = kDefaultCaseTol);

    m.def(
        "case_boundary",
        [](double omega, double lo, double hi) {
            return bisect_mean_q2_zero([omega](double a) { return DriveSpec::cos_sin(omega, a, 0.0); }, lo, hi);
        },
        "omega"_a, "lo"_a, "hi"_a, "Cos-drive amplitude in [lo, hi] where M(q^2) vanishes");

    py::class_<FloquetSolution>(m, "Solution")
        .def_property_readonly("case", [](const FloquetSolution& s) { return to_string(s.ps.case_label); })
        .def_property_readonly("order", [](const FloquetSolution& s) { return s.ps.order; })
        .def_property_readonly("epsilon", [](const FloquetSolution& s) { return s.prop.eps; })
        .def_property_readonly("Omega", [](const FloquetSolution& s) { return s.prop.Omega; })
        .def_property_readonly("Omega_series",
                               [](const FloquetSolution& s) { return secular_frequency_series(s.ps); })
        .def_property_readonly("sigma0", [](const FloquetSolution& s) { return s.prop.sigma0; })
        .def_property_readonly("g0", [](const FloquetSolution& s) { return s.prop.g0; })
        .def_property_readonly("g", [](const FloquetSolution& s) { return to_array(s.g); })
        .def("coefficients", [](const FloquetSolution& s, int n) { return to_array(s.ps.C(n)); }, "n"_a)
        .def("U", [](const FloquetSolution& s, double t) { return to_array(evaluate_U(s.prop, t)); }, "t"_a)
        .def("riccati_residual",
             [](const FloquetSolution& s, int grid) {
                 return riccati_residual(s.g, DriveSpec(s.prop.omega, s.prop.drive), s.prop.eps, grid);
             },
             "grid"_a = 512)
        .def("unitarity_defect",
             [](const FloquetSolution& s, double t0, double t1, int points) {
                 return max_unitarity_defect(s.prop, t0, t1, points);
             },
             "t0"_a, "t1"_a, "points"_a = 256)
        .def("floquet_consistency", [](const FloquetSolution& s, double t) { return floquet_consistency(s.prop, t); },
             "t"_a)
        .def("radius", [](const FloquetSolution& s) { return radius_estimate(s.ps); });

    m.def(
        "solve",
        [](const DriveSpec& d, double eps, int order, int m_max, const std::string& branch) {
            SolveOptions o;
            o.order = order;
            o.m_max = m_max;
            o.branch = parse_branch(branch);
            return solve(d, eps, o);
        },
        "drive"_a, "epsilon"_a, "order"_a = 8, "m_max"_a = 0, "branch"_a = "principal");

    m.def(
        "oracle_propagator",
        [](const DriveSpec& d, double eps, const std::vector<double>& times, double tol) {
            const auto samples = integrate_propagator(Hamiltonian2{d, eps}, times, tol);
            py::array_t<cplx> a({static_cast<py::ssize_t>(samples.size()), py::ssize_t{2}, py::ssize_t{2}});
            auto v = a.mutable_unchecked<3>();
            for (py::ssize_t j = 0; j < static_cast<py::ssize_t>(samples.size()); ++j) {
                const Mat2& U = samples[static_cast<std::size_t>(j)].U;
                v(j, 0, 0) = U.a11;
                v(j, 0, 1) = U.a12;
                v(j, 1, 0) = U.a21;
                v(j, 1, 1) = U.a22;
            }
            return a;
        },
        "drive"_a, "epsilon"_a, "times"_a, "tol"_a = 1e-11, "Adaptive-integrator reference U(t) at the given times");

    m.def("catalan", [](int n) { return py::int_(py::str(catalan(n).str())); }, "n"_a);

    m.def(
        "check_conv_lemma",
        [](double chi, int m_range, int cutoff) {
            const auto c = check_conv_lemma(chi, m_range, cutoff);
            py::dict r;
            r["B0"] = c.B0;
            r["worst_ratio"] = c.worst_ratio;
            r["worst_m"] = c.worst_m;
            r["symmetric"] = c.symmetric;
            r["holds"] = c.holds;
            return r;
        },
        "chi"_a, "m_range"_a = 50, "cutoff"_a = 1000);
}
