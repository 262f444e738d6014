#pragma once

#include "floquet/drive.hpp"
#include "floquet/fourier.hpp"

#include <vector>

namespace floquet {

/// Which root of alpha_1^2 = conj(M(q^2)) / M(q^2) seeds the Case I recursion.
/// The two roots give two independent solutions of the Riccati equation.
enum class AlphaBranch { Principal, Negated };

/// Per-order Fourier tables of the secular-free eps-expansion of the Riccati
/// solution g = q * sum_n c_n eps^{n * step}.
struct PerturbativeSolution {
    CaseLabel case_label = CaseLabel::CaseI;
    int order = 0;
    int m_max = 0;
    /// coeff[n-1] holds C^(n) (Case I) or E^(n) (Case II).
    std::vector<FourierSeries> coeff;
    /// G[n-1] = Q * coeff[n-1].
    std::vector<FourierSeries> G;
    cplx alpha1{};    ///< Case I only
    cplx calR{};      ///< Case II only
    cplx mean_Q1{};   ///< Case II only
    int epsilon_power_step = 1;

    const FourierSeries& C(int n) const { return coeff.at(static_cast<std::size_t>(n - 1)); }
    const FourierSeries& Gn(int n) const { return G.at(static_cast<std::size_t>(n - 1)); }
    /// Largest dropped-mass estimate over all tables.
    double truncation_budget() const;
};

/// Case I recursion for C^(n)_m, n = 1..N, |m| <= m_max.
/// Throws "Case I denominator vanishes" when |Q^(2)_0| is below the case tolerance.
PerturbativeSolution case1_coefficients(const QData& qd, int N, int m_max,
                                        AlphaBranch branch = AlphaBranch::Principal);

/// Case II recursion for E^(n)_m, n = 1..N, |m| <= m_max.
/// Throws "Case II denominator vanishes" when |M(Q_1)| is below the case tolerance.
PerturbativeSolution case2_coefficients(const QData& qd, int N, int m_max);

/// Dispatches on qd.case_label; throws "unsupported drive class" otherwise.
PerturbativeSolution solve_perturbative(const QData& qd, int N, int m_max = 0,
                                        AlphaBranch branch = AlphaBranch::Principal);

/// G^(n) = Q * coeff^(n) for every computed order.
std::vector<FourierSeries> g_orders(const PerturbativeSolution& ps, const QData& qd);

/// Fourier table of g at a given eps: G_m = sum_n eps^{n step} G^(n)_m.
FourierSeries g_series(const PerturbativeSolution& ps, double eps);

/// sup over `grid` equispaced points of one period of |g' - i g^2 - 2 i f g + i eps^2|.
double riccati_residual(const FourierSeries& g, const DriveSpec& d, double eps, int grid = 512);

/// Root-test estimate of the eps-radius of convergence from the growth of
/// ||G^(n)||_1 over the last max(3, N/2) orders. Returns +infinity when the
/// higher orders vanish. Throws "insufficient orders" for N < 4.
double radius_estimate(const PerturbativeSolution& ps);

} // namespace floquet
