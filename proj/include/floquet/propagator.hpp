#pragma once

#include "floquet/drive.hpp"
#include "floquet/mat2.hpp"
#include "floquet/riccati.hpp"

#include <vector>

namespace floquet {

struct PropagatorOptions {
    int p_max = 40;
    /// The guard |n omega + 2 Omega| >= tol_res_rel * omega on every retained mode.
    double tol_res_rel = 1e-6;
    int cap = kDefaultModeCap;
    /// Coefficients below this fraction of a table's l1 norm are trimmed from the
    /// window edges (their mass goes into the error budget).
    double trim_rel = 1e-18;
};

/// Floquet-form propagator U(t) for H_2 = eps sigma_1 + f sigma_3:
///   U11 = e^{-i Omega t} u11m(t) + e^{i Omega t} u11p(t),
///   U12 = e^{-i Omega t} u12m(t) + e^{i Omega t} u12p(t),
///   U21 = -conj(U12), U22 = conj(U11),
/// with T-periodic envelopes.
struct FloquetPropagator {
    double omega = 1.0;
    double eps = 0.0;
    std::vector<Harmonic> drive;

    cplx Omega{};
    cplx gamma_eps{};
    cplx sigma0{};
    cplx g0{};

    FourierSeries H;
    FourierSeries R;
    FourierSeries Rm2;
    FourierSeries S;
    FourierSeries V;
    FourierSeries u11_minus, u11_plus, u12_minus, u12_plus;

    /// Dropped-mode mass accumulated over the assembly.
    double error_budget = 0.0;

    double period() const;
    double f(double t) const;
};

/// Assembles the propagator from the Fourier table of g at this eps.
/// Throws "secular resonance in S" when n omega + 2 Omega nearly vanishes for a retained n.
FloquetPropagator build(const DriveSpec& d, const FourierSeries& g, double eps, const PropagatorOptions& opts = {});

Mat2 evaluate_U(const FloquetPropagator& p, double t);
/// dU/dt by termwise differentiation of the Floquet form.
Mat2 evaluate_dU(const FloquetPropagator& p, double t);

/// The sequence G_0^(n), n = 1..N; Omega(eps) = sum_n eps^{n step} G_0^(n).
std::vector<cplx> secular_frequency_series(const PerturbativeSolution& ps);
cplx secular_frequency(const PerturbativeSolution& ps, double eps);

/// ||U(t + T) - U(t) U(T)||_F
double floquet_consistency(const FloquetPropagator& p, double t);

/// sup over `points` equispaced samples of [t0, t1] of ||i U' - H_2 U||_F.
double schrodinger_residual(const FloquetPropagator& p, double t0, double t1, int points);

/// sup over `points` equispaced samples of [t0, t1] of ||U^* U - I||_F.
double max_unitarity_defect(const FloquetPropagator& p, double t0, double t1, int points);

struct SolveOptions {
    int order = 8;
    int m_max = 0;
    AlphaBranch branch = AlphaBranch::Principal;
    double tol_case = kDefaultCaseTol;
    PropagatorOptions propagator;
};

/// Everything computed for one drive at one eps.
struct FloquetSolution {
    QData qd;
    PerturbativeSolution ps;
    FourierSeries g;
    FloquetPropagator prop;
};

/// classify -> recursion -> g(eps) -> propagator. Throws "unsupported drive class"
/// for drives outside Cases I and II.
FloquetSolution solve(const DriveSpec& d, double eps, const SolveOptions& opts = {});

} // namespace floquet
