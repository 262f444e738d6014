#include "floquet/riccati.hpp"

#include "floquet/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace floquet {

namespace {

// W_k = B_k / (k omega) for k != 0; the k = 0 mode is removed (it is the mean
// the integration constants were chosen to cancel).
FourierSeries integrate_nonzero_modes(const FourierSeries& B)
{
    FourierSeries W(B.omega(), B.m_max());
    for (int k = -B.m_max(); k <= B.m_max(); ++k)
        if (k != 0)
            W.at(k) = B[k] / (k * B.omega());
    W.add_dropped_mass(B.dropped_mass());
    return W;
}

// sum_{p=lo}^{hi} conv(T_p, T_{n-p}) with full window.
FourierSeries quadratic_sum(const std::vector<FourierSeries>& tables, int n, int lo, int hi, int window)
{
    FourierSeries acc(tables.front().omega(), window);
    for (int p = lo; p <= hi; ++p)
        acc += convolve(tables[static_cast<std::size_t>(p - 1)], tables[static_cast<std::size_t>(n - p - 1)], window);
    return acc;
}

// sum_{p=2}^{n-1} sum_{n1} T^(p)_{n1} T^(n+1-p)_{-n1}
cplx mean_correction(const std::vector<FourierSeries>& tables, int n)
{
    cplx s{};
    for (int p = 2; p <= n - 1; ++p) {
        const auto& a = tables[static_cast<std::size_t>(p - 1)];
        const auto& b = tables[static_cast<std::size_t>(n - p)];
        for (int k = -a.m_max(); k <= a.m_max(); ++k)
            s += a[k] * b[-k];
    }
    return s;
}

void finish(PerturbativeSolution& ps, const QData& qd)
{
    ps.order = static_cast<int>(ps.coeff.size());
    ps.G = g_orders(ps, qd);
}

} // namespace

double PerturbativeSolution::truncation_budget() const
{
    double b = 0.0;
    for (const auto& c : coeff)
        b = std::max(b, c.dropped_mass());
    for (const auto& g : G)
        b = std::max(b, g.dropped_mass());
    return b;
}

PerturbativeSolution case1_coefficients(const QData& qd, int N, int m_max, AlphaBranch branch)
{
    if (N < 1)
        throw Error("order must be at least 1");
    if (m_max <= 0)
        m_max = qd.m_max;
    const cplx Q20 = qd.Q2[0];
    if (std::abs(Q20) <= qd.tol_case * qd.Q2.l1_norm())
        throw Error("Case I denominator vanishes");

    const double w = qd.Q.omega();
    const FourierSeries& Q = qd.Q;
    const FourierSeries& Q2 = qd.Q2;
    const int wide = 2 * m_max;

    PerturbativeSolution ps;
    ps.case_label = CaseLabel::CaseI;
    ps.m_max = m_max;
    ps.epsilon_power_step = 1;
    ps.alpha1 = std::sqrt(std::conj(Q20) / Q20);
    if (branch == AlphaBranch::Negated)
        ps.alpha1 = -ps.alpha1;
    const cplx a1 = ps.alpha1;

    // Shared closing step: C_m = sum_k W_k [Q_{m-k} - Q_m Q2_{-k} / Q2_0] + extra Q_m.
    auto assemble = [&](const FourierSeries& W, cplx extra) {
        cplx subtract{};
        for (int k = -W.m_max(); k <= W.m_max(); ++k)
            subtract += W[k] * Q2[-k];
        FourierSeries C = convolve(W, Q, m_max);
        C += Q.resized(m_max) * (extra - subtract / Q20);
        return C;
    };

    ps.coeff.push_back((Q * a1).resized(m_max));
    if (N >= 2) {
        FourierSeries A(w, Q2.m_max());
        for (int k = -Q2.m_max(); k <= Q2.m_max(); ++k)
            A.at(k) = a1 * a1 * Q2[k] - std::conj(Q2[-k]);
        ps.coeff.push_back(assemble(integrate_nonzero_modes(A), 0.0));
    }
    for (int n = 3; n <= N; ++n) {
        const FourierSeries B = quadratic_sum(ps.coeff, n, 1, n - 1, wide);
        const cplx corr = mean_correction(ps.coeff, n);
        ps.coeff.push_back(assemble(integrate_nonzero_modes(B), -corr / (2.0 * a1 * Q20)));
    }
    finish(ps, qd);
    return ps;
}

PerturbativeSolution case2_coefficients(const QData& qd, int N, int m_max)
{
    if (N < 1)
        throw Error("order must be at least 1");
    if (m_max <= 0)
        m_max = qd.m_max;
    const FourierSeries& Q = qd.Q;
    const FourierSeries& Q2 = qd.Q2;
    const double w = Q.omega();
    const int M2 = Q2.m_max();
    const int wide = 2 * m_max;

    const cplx MQ1 = mean_Q1(Q2);
    if (std::abs(MQ1) <= qd.tol_case * Q2.l1_norm())
        throw Error("Case II denominator vanishes");

    PerturbativeSolution ps;
    ps.case_label = CaseLabel::CaseII;
    ps.m_max = m_max;
    ps.epsilon_power_step = 2;
    ps.mean_Q1 = MQ1;

    // Oscillating part of d_1 = -i int q^{-2}: coefficient conj(Q2_{n1}) / (n1 w) at mode -n1.
    FourierSeries P(w, M2);
    for (int n1 = -M2; n1 <= M2; ++n1)
        if (n1 != 0)
            P.at(-n1) = std::conj(Q2[n1]) / (n1 * w);

    cplx T{};
    for (int n1 = -M2; n1 <= M2; ++n1) {
        if (n1 == 0)
            continue;
        for (int n2 = -M2; n2 <= M2; ++n2) {
            if (n2 == 0)
                continue;
            T += Q2[n1 + n2] * std::conj(Q2[n1]) * std::conj(Q2[n2]) / (n1 * w * n2 * w);
        }
    }
    const cplx iM = cplx(0.0, 1.0) * MQ1;
    ps.calR = T / (2.0 * iM);

    FourierSeries E1 = convolve(P, Q, m_max);
    E1 += Q.resized(m_max) * ps.calR;
    ps.coeff.push_back(std::move(E1));

    // inner(k) = sum_{n3 != 0} Q2_{n3-k} conj(Q2_{n3}) / (n3 w): the mean of
    // q^2 times the oscillating part of d_1 times e^{i k w t}.
    std::vector<cplx> inner(static_cast<std::size_t>(2 * wide + 1));
    for (int k = -wide; k <= wide; ++k) {
        cplx s{};
        for (int n3 = -M2; n3 <= M2; ++n3)
            if (n3 != 0)
                s += Q2[n3 - k] * std::conj(Q2[n3]) / (n3 * w);
        inner[static_cast<std::size_t>(k + wide)] = s;
    }

    for (int n = 2; n <= N; ++n) {
        const FourierSeries W = integrate_nonzero_modes(quadratic_sum(ps.coeff, n, 1, n - 1, wide));
        cplx beta{};
        for (int k = -W.m_max(); k <= W.m_max(); ++k)
            if (k != 0)
                beta += W[k] * (Q2[-k] * ps.calR + inner[static_cast<std::size_t>(k + wide)]);
        beta /= iM;
        beta += mean_correction(ps.coeff, n) / (2.0 * iM);
        FourierSeries En = convolve(W, Q, m_max);
        En += Q.resized(m_max) * beta;
        ps.coeff.push_back(std::move(En));
    }
    finish(ps, qd);
    return ps;
}

PerturbativeSolution solve_perturbative(const QData& qd, int N, int m_max, AlphaBranch branch)
{
    switch (qd.case_label) {
    case CaseLabel::CaseI: return case1_coefficients(qd, N, m_max, branch);
    case CaseLabel::CaseII: return case2_coefficients(qd, N, m_max);
    case CaseLabel::Unsupported: break;
    }
    throw Error("unsupported drive class");
}

std::vector<FourierSeries> g_orders(const PerturbativeSolution& ps, const QData& qd)
{
    std::vector<FourierSeries> G;
    G.reserve(ps.coeff.size());
    for (const auto& c : ps.coeff)
        G.push_back(convolve(qd.Q, c, ps.m_max));
    return G;
}

FourierSeries g_series(const PerturbativeSolution& ps, double eps)
{
    if (ps.G.empty())
        throw Error("no orders computed");
    FourierSeries g(ps.G.front().omega(), ps.m_max);
    const double e = std::pow(eps, ps.epsilon_power_step);
    double power = 1.0;
    for (const auto& Gn : ps.G) {
        power *= e;
        g += Gn * cplx(power);
    }
    return g;
}

double riccati_residual(const FourierSeries& g, const DriveSpec& d, double eps, int grid)
{
    if (grid < 1)
        throw Error("grid must be positive");
    const double T = d.period();
    double sup = 0.0;
    for (int j = 0; j < grid; ++j) {
        const double t = T * j / grid;
        const cplx gv = g.evaluate(t);
        const cplx dg = g.evaluate_derivative(t);
        const double f = d.value(t);
        const cplx r = dg - cplx(0.0, 1.0) * gv * gv - cplx(0.0, 2.0 * f) * gv + cplx(0.0, eps * eps);
        sup = std::max(sup, std::abs(r));
    }
    return sup;
}

double radius_estimate(const PerturbativeSolution& ps)
{
    const int N = ps.order;
    if (N < 4)
        throw Error("insufficient orders");
    const int k = std::max(3, N / 2);
    const double top = ps.Gn(N).l1_norm();
    const double base = ps.Gn(N - k).l1_norm();
    const double tiny = 1e-300;
    if (top <= tiny && base <= tiny)
        return std::numeric_limits<double>::infinity();
    if (top <= tiny)
        return std::numeric_limits<double>::infinity();
    if (base <= tiny)
        return 0.0;
    const double growth = std::pow(top / base, 1.0 / k);
    return std::pow(1.0 / growth, 1.0 / ps.epsilon_power_step);
}

} // namespace floquet
