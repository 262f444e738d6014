#pragma once

#include "floquet/drive.hpp"
#include "floquet/mat2.hpp"

#include <functional>
#include <vector>

namespace floquet {

/// H_2(t) = eps sigma_1 + f(t) sigma_3.
struct Hamiltonian2 {
    DriveSpec drive;
    double eps = 0.0;

    Mat2 at(double t) const { return two_level_hamiltonian(eps, drive.value(t)); }
};

struct WaveState {
    double t = 0.0;
    cplx phi_plus{};
    cplx phi_minus{};
};

struct PropagatorSample {
    double t = 0.0;
    Mat2 U;
};

struct IntegratorStats {
    long accepted = 0;
    long rejected = 0;
};

/// Adaptive Dormand-Prince 5(4) integration of i Phi' = H_2 Phi from phi0.t,
/// reporting the state exactly at each of `times` (sorted, >= phi0.t).
/// tol must lie in [1e-13, 1e-6]; step underflow throws "stiff or invalid drive".
std::vector<WaveState> integrate_schrodinger(const Hamiltonian2& h, const WaveState& phi0,
                                             const std::vector<double>& times, double tol,
                                             IntegratorStats* stats = nullptr);

/// Same, on a uniform grid from phi0.t to t_end with `points_per_period` samples per period.
std::vector<WaveState> integrate_schrodinger(const Hamiltonian2& h, const WaveState& phi0, double t_end,
                                             double tol, int points_per_period = 64);

/// Both columns of U integrated together from U(0) = I.
std::vector<PropagatorSample> integrate_propagator(const Hamiltonian2& h, const std::vector<double>& times,
                                                   double tol, IntegratorStats* stats = nullptr);

/// sup over the interior of a uniform trajectory of the Hill-equation defects
///   |phi_+'' + ( i f' + eps^2 + f^2) phi_+|  and  |phi_-'' + (-i f' + eps^2 + f^2) phi_-|,
/// second derivatives by the centered 5-point stencil. Needs >= 64 points per period.
double hill_residual(const std::vector<WaveState>& traj, const DriveSpec& d, double eps);

/// Tables of c_1..c_N (|m| <= m_max) from the time-domain construction
/// c_n = q h_n, h_n' = i q^2 sum_p h_p h_{n-p} - i delta_{n2} q^{-2}, with every
/// integration constant fixed by removing the mean of the next integrand.
/// q is obtained by quadrature of exp(i int f). Case I only; N <= 3, m_max <= 4.
std::vector<FourierSeries> symbolic_small_order(const DriveSpec& d, int N, int m_max, bool negate_alpha = false);

/// U(t) from the explicit map R(t) = exp(-i int_0^t (f + g)), S(t) = int_0^t R^{-2},
/// U11 = R (1 + i g(0) S), U12 = -i eps R S, evaluated by Gauss-Legendre panel
/// quadrature of the supplied g.
std::vector<Mat2> direct_propagator(const DriveSpec& d, const std::function<cplx(double)>& g, double eps,
                                    const std::vector<double>& times, int panels_per_period = 64);

} // namespace floquet
