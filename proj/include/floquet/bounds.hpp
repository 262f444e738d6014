#pragma once

#include "floquet/propagator.hpp"
#include "floquet/riccati.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace floquet {

using BigInt = boost::multiprecision::cpp_int;

/// c_n = (2n-4)! / ((n-1)! (n-2)!), n >= 2 (so c_2 = c_3 = 1, c_4 = 2).
BigInt catalan(int n);
/// c_1..c_nmax from c_1 = c_2 = 1, c_n = sum_{p=2}^{n-1} c_p c_{n-p+1}; index 0 unused.
std::vector<BigInt> catalan_recursive(int nmax);
/// c_n * 16 sqrt(pi) n^{3/2} / 4^n, which tends to 1.
double catalan_asymptotic_ratio(int n);

/// <m>: |m| for m != 0 and 1 for m = 0.
inline double bracket(int m) { return m == 0 ? 1.0 : static_cast<double>(m < 0 ? -m : m); }

struct KSequence {
    double C1 = 1.0, C2 = 1.0;
    /// K[n], L[n] for n = 1..N (index 0 unused). Infinite entries mean the
    /// value overflowed long double; log_K / log_L always hold the logarithms.
    std::vector<long double> K, L;
    std::vector<long double> log_K, log_L;
    /// Exact values, present when C1 and C2 are integers.
    std::optional<std::vector<BigInt>> K_exact, L_exact;
};

/// K_1 = K_2 = C1, K_n = C2 [sum_{p=1}^{n-1} K_p K_{n-p} + sum_{p=2}^{n-1} K_p K_{n+1-p}],
/// and L_n from its closed form C1^{n-1} (3 C2)^{n-2} c_n (L_1 = C1).
KSequence k_sequence(double C1, double C2, int N);

/// sum over |n| <= cutoff of e^{-chi(|m-n| + |n|)} / (<m-n>^k <n>^k), k in {2, 3}.
double conv_bound(int m, double chi, int cutoff = 1000, int k = 2);
/// The lemma's constant 2 B_1 + 2^{k+1} sum_{n=0}^{cutoff} 1/<n>^k with B_1 = sum_{n>=1} e^{-2 chi n} / n^k.
double b0_constant(double chi, int cutoff = 1000, int k = 2);

struct ConvLemmaCheck {
    double B0 = 0.0;
    /// max over the checked m of conv_bound(m) <m>^k e^{chi |m|} / B0
    double worst_ratio = 0.0;
    int worst_m = 0;
    bool symmetric = true;
    bool holds = true;
};
/// Checks the lemma inequality for |m| <= m_range and the exact symmetry B(m) = B(-m).
ConvLemmaCheck check_conv_lemma(double chi, int m_range = 50, int cutoff = 1000, int k = 2);

struct DecayFit {
    double constant = 0.0;
    int worst_m = 0;
    bool pass = true;
    /// Modes with |c_m| at or below this are treated as round-off and skipped.
    double noise_floor = 0.0;
};

/// Smallest constant c with |c_m| <= c e^{-chi |m|} / <m>^2 over the stored modes.
DecayFit decay_fit(const FourierSeries& table, double chi);

/// Largest chi in (0, chi_max] for which decay_fit(table, chi).constant <= max_constant.
double fit_chi(const FourierSeries& table, double max_constant = 1e3, double chi_max = 10.0);

struct BoundsReport {
    double chi = 0.0;
    double Qconst = 0.0;
    double B0 = 0.0;
    /// C1, C2 for Case I; E1, E2 for Case II.
    double C1 = 1.0, C2 = 1.0;
    KSequence seq;
    /// Fitted constants of the coefficient tables, per order (index n-1).
    std::vector<DecayFit> coeff_fits;
    std::vector<DecayFit> g_fits;
    /// Fitted constants of H, R, R^(-2), S, V (when a propagator is supplied).
    std::map<std::string, DecayFit> table_fits;
    /// Orders n >= 4 whose fitted constant exceeds K_n.
    std::vector<int> flagged_orders;
    /// Root-test growth base of the fitted per-order constants.
    double measured_base = 0.0;
    /// 12 C1 C2.
    double theory_base = 0.0;
    /// max_n K_n / (12 C1 C2)^n
    double K0 = 0.0;
    bool all_finite = true;
};

/// Fits chi from the Q table, then every downstream table, and compares the
/// per-order constants with the K_n recursion seeded by the fitted C1, C2.
BoundsReport bounds_report(const QData& qd, const PerturbativeSolution& ps, const FloquetPropagator* prop = nullptr);

} // namespace floquet
