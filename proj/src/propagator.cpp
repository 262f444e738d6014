#include "floquet/propagator.hpp"

#include "floquet/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace floquet {

namespace {

FourierSeries trimmed(const FourierSeries& s, double rel)
{
    const double floor = rel * s.l1_norm();
    int keep = 0;
    for (int m = s.m_max(); m > 0; --m) {
        if (std::abs(s[m]) > floor || std::abs(s[-m]) > floor) {
            keep = m;
            break;
        }
    }
    return s.resized(keep);
}

} // namespace

double FloquetPropagator::period() const { return 2.0 * std::numbers::pi / omega; }

double FloquetPropagator::f(double t) const
{
    cplx s{};
    for (const auto& h : drive)
        s += h.f * std::polar(1.0, h.n * omega * t);
    return s.real();
}

FloquetPropagator build(const DriveSpec& d, const FourierSeries& g, double eps, const PropagatorOptions& opts)
{
    const double w = d.omega();
    if (g.omega() != w)
        throw Error("incompatible base frequency");

    FloquetPropagator p;
    p.omega = w;
    p.eps = eps;
    p.drive = d.harmonics();
    p.Omega = g[0];
    p.g0 = g.evaluate(0.0);

    const int hm = std::max(g.m_max(), d.max_mode());
    p.H = FourierSeries(w, hm);
    for (int n = -hm; n <= hm; ++n)
        if (n != 0)
            p.H.at(n) = (d.coefficient(n) + g[n]) / (n * w);
    cplx sumH{};
    for (int n = -hm; n <= hm; ++n)
        sumH += p.H[n];
    p.gamma_eps = cplx(0.0, 1.0) * sumH;

    const ExpSeriesOptions eo{.p_max = opts.p_max, .term_tol = 1e-16, .cap = opts.cap};
    const cplx I(0.0, 1.0);
    p.R = trimmed(exp_neg_series(p.H, eo) * std::exp(-I * p.gamma_eps), opts.trim_rel);
    p.Rm2 = trimmed(exp_neg_series(p.H * cplx(-2.0), eo) * std::exp(2.0 * I * p.gamma_eps), opts.trim_rel);

    if (eps == 0.0) {
        // U12 and the g(0) S term both vanish; S itself would carry the secular n = 0 mode.
        p.S = FourierSeries(w, 0);
        p.V = FourierSeries(w, 0);
        p.sigma0 = 0.0;
    } else {
        const int sm = p.Rm2.m_max();
        p.S = FourierSeries(w, sm);
        for (int n = -sm; n <= sm; ++n) {
            const cplx den = n * w + 2.0 * p.Omega;
            if (std::abs(den) < opts.tol_res_rel * w)
                throw Error("secular resonance in S");
            p.S.at(n) = -I * p.Rm2[n] / den;
        }
        // Dropped modes sit far from the window, where |n omega + 2 Omega| > omega.
        p.S.add_dropped_mass(p.Rm2.dropped_mass() / w);
        cplx sum{};
        for (int n = -sm; n <= sm; ++n)
            sum += p.S[n];
        p.sigma0 = -sum;
        p.V = trimmed(convolve(p.S, p.R, opts.cap), opts.trim_rel);
    }

    p.u11_minus = p.R * (1.0 + I * p.g0 * p.sigma0);
    p.u11_plus = p.V * (I * p.g0);
    p.u12_minus = p.R * (-I * eps * p.sigma0);
    p.u12_plus = p.V * (-I * eps);

    p.error_budget = std::max({p.R.dropped_mass(), p.Rm2.dropped_mass(), p.S.dropped_mass(), p.V.dropped_mass(),
                               g.dropped_mass()});
    return p;
}

Mat2 evaluate_U(const FloquetPropagator& p, double t)
{
    const cplx I(0.0, 1.0);
    const cplx em = std::exp(-I * p.Omega * t);
    const cplx ep = std::exp(I * p.Omega * t);
    const cplx u11 = em * p.u11_minus.evaluate(t) + ep * p.u11_plus.evaluate(t);
    const cplx u12 = em * p.u12_minus.evaluate(t) + ep * p.u12_plus.evaluate(t);
    return {u11, u12, -std::conj(u12), std::conj(u11)};
}

Mat2 evaluate_dU(const FloquetPropagator& p, double t)
{
    const cplx I(0.0, 1.0);
    const cplx em = std::exp(-I * p.Omega * t);
    const cplx ep = std::exp(I * p.Omega * t);
    const cplx d11 = em * (p.u11_minus.evaluate_derivative(t) - I * p.Omega * p.u11_minus.evaluate(t))
                     + ep * (p.u11_plus.evaluate_derivative(t) + I * p.Omega * p.u11_plus.evaluate(t));
    const cplx d12 = em * (p.u12_minus.evaluate_derivative(t) - I * p.Omega * p.u12_minus.evaluate(t))
                     + ep * (p.u12_plus.evaluate_derivative(t) + I * p.Omega * p.u12_plus.evaluate(t));
    return {d11, d12, -std::conj(d12), std::conj(d11)};
}

std::vector<cplx> secular_frequency_series(const PerturbativeSolution& ps)
{
    std::vector<cplx> out;
    out.reserve(ps.G.size());
    for (const auto& Gn : ps.G)
        out.push_back(Gn[0]);
    return out;
}

cplx secular_frequency(const PerturbativeSolution& ps, double eps)
{
    const double e = std::pow(eps, ps.epsilon_power_step);
    cplx sum{};
    double power = 1.0;
    for (const auto& Gn : ps.G) {
        power *= e;
        sum += power * Gn[0];
    }
    return sum;
}

double floquet_consistency(const FloquetPropagator& p, double t)
{
    const double T = p.period();
    return (evaluate_U(p, t + T) - evaluate_U(p, t) * evaluate_U(p, T)).frobenius();
}

double schrodinger_residual(const FloquetPropagator& p, double t0, double t1, int points)
{
    if (points < 2)
        throw Error("need at least two sample points");
    const cplx I(0.0, 1.0);
    double sup = 0.0;
    for (int j = 0; j < points; ++j) {
        const double t = t0 + (t1 - t0) * j / (points - 1);
        const Mat2 r = I * evaluate_dU(p, t) - two_level_hamiltonian(p.eps, p.f(t)) * evaluate_U(p, t);
        sup = std::max(sup, r.frobenius());
    }
    return sup;
}

double max_unitarity_defect(const FloquetPropagator& p, double t0, double t1, int points)
{
    if (points < 2)
        throw Error("need at least two sample points");
    double sup = 0.0;
    for (int j = 0; j < points; ++j)
        sup = std::max(sup, unitarity_defect(evaluate_U(p, t0 + (t1 - t0) * j / (points - 1))));
    return sup;
}

FloquetSolution solve(const DriveSpec& d, double eps, const SolveOptions& opts)
{
    FloquetSolution s;
    s.qd = compute_qdata(d, opts.m_max, opts.tol_case);
    s.ps = solve_perturbative(s.qd, opts.order, s.qd.m_max, opts.branch);
    s.g = g_series(s.ps, eps);
    s.prop = build(d, s.g, eps, opts.propagator);
    return s;
}

} // namespace floquet
