#include "floquet/bounds.hpp"

#include "floquet/error.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>

namespace floquet {

namespace {

BigInt factorial(int n)
{
    BigInt r = 1;
    for (int i = 2; i <= n; ++i)
        r *= i;
    return r;
}

long double log_sum_exp(const std::vector<long double>& xs)
{
    long double hi = -std::numeric_limits<long double>::infinity();
    for (auto x : xs)
        hi = std::max(hi, x);
    if (!std::isfinite(hi))
        return hi;
    long double s = 0.0L;
    for (auto x : xs)
        s += std::exp(x - hi);
    return hi + std::log(s);
}

} // namespace

BigInt catalan(int n)
{
    if (n < 2)
        throw Error("catalan index must be at least 2");
    return factorial(2 * n - 4) / (factorial(n - 1) * factorial(n - 2));
}

std::vector<BigInt> catalan_recursive(int nmax)
{
    if (nmax < 2)
        throw Error("catalan index must be at least 2");
    std::vector<BigInt> c(static_cast<std::size_t>(nmax + 1));
    c[1] = 1;
    c[2] = 1;
    for (int n = 3; n <= nmax; ++n)
        for (int p = 2; p <= n - 1; ++p)
            c[static_cast<std::size_t>(n)] += c[static_cast<std::size_t>(p)] * c[static_cast<std::size_t>(n - p + 1)];
    return c;
}

double catalan_asymptotic_ratio(int n)
{
    const long double c = catalan(n).convert_to<long double>();
    return static_cast<double>(c * 16.0L * std::sqrt(std::numbers::pi_v<long double>) * std::pow(n, 1.5L)
                               / std::pow(4.0L, n));
}

KSequence k_sequence(double C1, double C2, int N)
{
    if (N < 1)
        throw Error("sequence length must be positive");
    if (C1 < 1.0 || C2 < 1.0)
        throw Error("C1 and C2 must be at least 1");
    KSequence s;
    s.C1 = C1;
    s.C2 = C2;
    const auto n1 = static_cast<std::size_t>(N + 1);
    s.K.assign(n1, 0.0L);
    s.L.assign(n1, 0.0L);
    s.log_K.assign(n1, 0.0L);
    s.log_L.assign(n1, 0.0L);

    const long double lc1 = std::log(static_cast<long double>(C1));
    const long double lc2 = std::log(static_cast<long double>(C2));
    for (int n = 1; n <= N; ++n) {
        const auto i = static_cast<std::size_t>(n);
        if (n <= 2) {
            s.log_K[i] = lc1;
            continue;
        }
        std::vector<long double> terms;
        for (int p = 1; p <= n - 1; ++p)
            terms.push_back(s.log_K[static_cast<std::size_t>(p)] + s.log_K[static_cast<std::size_t>(n - p)]);
        for (int p = 2; p <= n - 1; ++p)
            terms.push_back(s.log_K[static_cast<std::size_t>(p)] + s.log_K[static_cast<std::size_t>(n + 1 - p)]);
        s.log_K[i] = lc2 + log_sum_exp(terms);
    }
    for (int n = 1; n <= N; ++n) {
        const auto i = static_cast<std::size_t>(n);
        if (n == 1)
            s.log_L[i] = lc1;
        else
            s.log_L[i] = (n - 1) * lc1 + (n - 2) * std::log(3.0L * C2)
                         + std::log(catalan(n).convert_to<long double>());
        s.K[i] = std::exp(s.log_K[i]);
        s.L[i] = std::exp(s.log_L[i]);
    }

    if (C1 == std::floor(C1) && C2 == std::floor(C2)) {
        const BigInt c1 = static_cast<long long>(C1);
        const BigInt c2 = static_cast<long long>(C2);
        std::vector<BigInt> K(n1), L(n1);
        for (int n = 1; n <= N; ++n) {
            const auto i = static_cast<std::size_t>(n);
            if (n <= 2) {
                K[i] = c1;
                continue;
            }
            BigInt sum = 0;
            for (int p = 1; p <= n - 1; ++p)
                sum += K[static_cast<std::size_t>(p)] * K[static_cast<std::size_t>(n - p)];
            for (int p = 2; p <= n - 1; ++p)
                sum += K[static_cast<std::size_t>(p)] * K[static_cast<std::size_t>(n + 1 - p)];
            K[i] = c2 * sum;
        }
        for (int n = 1; n <= N; ++n) {
            const auto i = static_cast<std::size_t>(n);
            if (n == 1) {
                L[i] = c1;
                continue;
            }
            L[i] = boost::multiprecision::pow(c1, static_cast<unsigned>(n - 1))
                   * boost::multiprecision::pow(BigInt(3) * c2, static_cast<unsigned>(n - 2)) * catalan(n);
        }
        s.K_exact = std::move(K);
        s.L_exact = std::move(L);
    }
    return s;
}

double conv_bound(int m, double chi, int cutoff, int k)
{
    if (!(chi > 0.0))
        throw Error("chi must be positive");
    if (cutoff < 100)
        throw Error("cutoff must be at least 100");
    if (k != 2 && k != 3)
        throw Error("only k = 2 and k = 3 are supported");
    // Pairing n with -n makes the summation order symmetric under m -> -m.
    double s = 0.0;
    auto term = [&](int n) { return std::exp(-chi * (std::abs(m - n) + std::abs(n))) / std::pow(bracket(m - n) * bracket(n), k); };
    for (int n = cutoff; n >= 1; --n) {
        s += term(n) + term(-n);
    }
    s += std::exp(-chi * std::abs(m)) / std::pow(bracket(m), k);
    return s;
}

double b0_constant(double chi, int cutoff, int k)
{
    if (!(chi > 0.0))
        throw Error("chi must be positive");
    if (k != 2 && k != 3)
        throw Error("only k = 2 and k = 3 are supported");
    double B1 = 0.0, tail = 0.0;
    for (int n = cutoff; n >= 1; --n) {
        B1 += std::exp(-2.0 * chi * n) / std::pow(n, k);
        tail += 1.0 / std::pow(n, k);
    }
    tail += 1.0;
    return 2.0 * B1 + std::pow(2.0, k + 1) * tail;
}

ConvLemmaCheck check_conv_lemma(double chi, int m_range, int cutoff, int k)
{
    ConvLemmaCheck c;
    c.B0 = b0_constant(chi, cutoff, k);
    for (int m = 0; m <= m_range; ++m) {
        const double bp = conv_bound(m, chi, cutoff, k);
        const double bm = conv_bound(-m, chi, cutoff, k);
        if (bp != bm)
            c.symmetric = false;
        const double ratio = bp * std::pow(bracket(m), k) * std::exp(chi * m) / c.B0;
        if (ratio > c.worst_ratio) {
            c.worst_ratio = ratio;
            c.worst_m = m;
        }
    }
    c.holds = c.worst_ratio <= 1.0;
    return c;
}

DecayFit decay_fit(const FourierSeries& table, double chi)
{
    DecayFit f;
    f.noise_floor = 64.0 * DBL_EPSILON * table.l1_norm();
    for (int m = -table.m_max(); m <= table.m_max(); ++m) {
        const double a = std::abs(table[m]);
        if (a <= f.noise_floor)
            continue;
        const double c = a * bracket(m) * bracket(m) * std::exp(chi * std::abs(m));
        if (c > f.constant) {
            f.constant = c;
            f.worst_m = m;
        }
    }
    f.pass = std::isfinite(f.constant);
    return f;
}

double fit_chi(const FourierSeries& table, double max_constant, double chi_max)
{
    if (decay_fit(table, chi_max).constant <= max_constant)
        return chi_max;
    double lo = 0.0, hi = chi_max;
    if (decay_fit(table, 1e-12).constant > max_constant)
        throw Error("table too large for the requested decay constant");
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (decay_fit(table, mid).constant <= max_constant)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

BoundsReport bounds_report(const QData& qd, const PerturbativeSolution& ps, const FloquetPropagator* prop)
{
    BoundsReport r;
    r.chi = fit_chi(qd.Q);
    r.Qconst = decay_fit(qd.Q, r.chi).constant;
    r.B0 = b0_constant(r.chi);

    for (const auto& c : ps.coeff)
        r.coeff_fits.push_back(decay_fit(c, r.chi));
    for (const auto& g : ps.G)
        r.g_fits.push_back(decay_fit(g, r.chi));

    const auto fitted = [&](int n) { return r.coeff_fits.at(static_cast<std::size_t>(n - 1)).constant; };
    const int N = ps.order;
    r.C1 = std::max(1.0, fitted(1));
    if (N >= 2)
        r.C1 = std::max(r.C1, fitted(2));
    if (N >= 3)
        r.C2 = std::max(1.0, fitted(3) / (3.0 * r.C1 * r.C1));
    r.seq = k_sequence(r.C1, r.C2, N);
    for (int n = 4; n <= N; ++n)
        if (fitted(n) > static_cast<double>(r.seq.K[static_cast<std::size_t>(n)]))
            r.flagged_orders.push_back(n);

    r.theory_base = 12.0 * r.C1 * r.C2;
    long double worst = 0.0L;
    for (int n = 1; n <= N; ++n)
        worst = std::max(worst, r.seq.log_K[static_cast<std::size_t>(n)] - n * std::log(static_cast<long double>(r.theory_base)));
    r.K0 = static_cast<double>(std::exp(worst));

    if (N >= 4) {
        const int k = std::max(3, N / 2);
        const double top = fitted(N), base = fitted(N - k);
        r.measured_base = (top > 0.0 && base > 0.0) ? std::pow(top / base, 1.0 / k) : 0.0;
    }

    if (prop) {
        r.table_fits["H"] = decay_fit(prop->H, r.chi);
        r.table_fits["R"] = decay_fit(prop->R, r.chi);
        r.table_fits["Rm2"] = decay_fit(prop->Rm2, r.chi);
        r.table_fits["S"] = decay_fit(prop->S, r.chi);
        r.table_fits["V"] = decay_fit(prop->V, r.chi);
    }

    r.all_finite = std::isfinite(r.measured_base) && std::isfinite(r.Qconst);
    for (const auto& f : r.coeff_fits)
        r.all_finite = r.all_finite && f.pass;
    for (const auto& f : r.g_fits)
        r.all_finite = r.all_finite && f.pass;
    for (const auto& [name, f] : r.table_fits)
        r.all_finite = r.all_finite && f.pass;
    return r;
}

} // namespace floquet
