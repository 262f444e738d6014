#include "floquet/oracle.hpp"

#include "floquet/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>

namespace floquet {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

template <std::size_t K>
using State = std::array<cplx, K>;

template <std::size_t K>
State<K> axpy(const State<K>& y, double h, std::initializer_list<std::pair<double, const State<K>*>> terms)
{
    State<K> out = y;
    for (const auto& [c, k] : terms)
        if (c != 0.0)
            for (std::size_t i = 0; i < K; ++i)
                out[i] += h * c * (*k)[i];
    return out;
}

void check_tolerance(double tol)
{
    if (!(tol >= 1e-13 && tol <= 1e-6))
        throw Error("integrator tolerance must lie in [1e-13, 1e-6]");
}

template <std::size_t K, class Rhs, class Emit>
void dopri(Rhs&& rhs, double t, State<K> y, const std::vector<double>& times, double tol, double h,
           IntegratorStats* stats, Emit&& emit)
{
    check_tolerance(tol);
    State<K> k1 = rhs(t, y);
    double err_prev = 1.0;
    for (double target : times) {
        if (target < t)
            throw Error("output times must be sorted and not precede the initial time");
        while (t < target) {
            const bool last = t + h >= target;
            const double step = last ? target - t : h;
            if (step < 1e-13 * std::max(1.0, std::abs(t)) && !last)
                throw Error("stiff or invalid drive");

            const State<K> k2 = rhs(t + c2 * step, axpy<K>(y, step, {{a21, &k1}}));
            const State<K> k3 = rhs(t + c3 * step, axpy<K>(y, step, {{a31, &k1}, {a32, &k2}}));
            const State<K> k4 = rhs(t + c4 * step, axpy<K>(y, step, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
            const State<K> k5 =
                rhs(t + c5 * step, axpy<K>(y, step, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
            const State<K> k6 = rhs(t + step, axpy<K>(y, step, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4},
                                                                 {a65, &k5}}));
            const State<K> ynew = axpy<K>(y, step, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
            const State<K> k7 = rhs(t + step, ynew);

            double acc = 0.0;
            for (std::size_t i = 0; i < K; ++i) {
                const cplx e = step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
                const double sc = 0.5 * tol + 0.5 * tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                acc += std::norm(e / sc);
            }
            const double err = std::sqrt(acc / K);
            if (!std::isfinite(err))
                throw Error("stiff or invalid drive");

            if (err <= 1.0) {
                t = last ? target : t + step;
                y = ynew;
                k1 = k7;
                if (stats)
                    ++stats->accepted;
                const double e = std::max(err, 1e-10);
                const double fac = std::clamp(0.9 * std::pow(e, -0.14) * std::pow(err_prev, 0.08), 0.2, 5.0);
                err_prev = e;
                // A step shortened to hit an output time says nothing about the proposal.
                if (!last || step >= h)
                    h = step * fac;
            } else {
                if (stats)
                    ++stats->rejected;
                h = step * std::max(0.2, 0.9 * std::pow(err, -0.2));
                if (h < 1e-13 * std::max(1.0, std::abs(t)))
                    throw Error("stiff or invalid drive");
            }
        }
        emit(t, y);
    }
}

double initial_step(const Hamiltonian2& h)
{
    double amp = std::abs(h.eps);
    for (const auto& x : h.drive.harmonics())
        amp += std::abs(x.f) * std::max(1, std::abs(x.n));
    return 0.01 * std::min(h.drive.period(), 1.0 / std::max(amp, 1e-3));
}

std::vector<double> uniform_times(double t0, double t_end, double period, int per_period)
{
    if (per_period < 1)
        throw Error("points per period must be positive");
    const double dt = period / per_period;
    const long n = std::max<long>(1, std::lround(std::ceil((t_end - t0) / dt - 1e-9)));
    std::vector<double> ts;
    ts.reserve(static_cast<std::size_t>(n + 1));
    for (long j = 0; j <= n; ++j)
        ts.push_back(std::min(t_end, t0 + dt * j));
    return ts;
}

// Sparse Fourier tables for the time-domain construction.
using Sparse = std::map<int, cplx>;

Sparse product(const Sparse& a, const Sparse& b)
{
    Sparse out;
    for (const auto& [k, x] : a)
        for (const auto& [l, y] : b)
            out[k + l] += x * y;
    double norm = 0.0;
    for (const auto& [m, c] : out)
        norm += std::abs(c);
    for (auto it = out.begin(); it != out.end();)
        it = std::abs(it->second) < 1e-22 * norm ? out.erase(it) : std::next(it);
    return out;
}

void accumulate(Sparse& a, const Sparse& b, cplx s)
{
    for (const auto& [m, c] : b)
        a[m] += s * c;
}

cplx mean_of(const Sparse& a)
{
    const auto it = a.find(0);
    return it == a.end() ? cplx{} : it->second;
}

// int_0^t of a mean-free table, exponent by exponent.
Sparse integrate_from_zero(const Sparse& a, double omega)
{
    double norm = 0.0;
    for (const auto& [m, c] : a)
        norm += std::abs(c);
    if (std::abs(mean_of(a)) > 1e-9 * std::max(norm, 1e-300))
        throw Error("secular term survived");
    Sparse out;
    cplx constant{};
    for (const auto& [k, c] : a) {
        if (k == 0)
            continue;
        const cplx v = c / cplx(0.0, k * omega);
        out[k] += v;
        constant -= v;
    }
    out[0] += constant;
    return out;
}

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> x, w;
};

GaussRule gauss_legendre(int n)
{
    GaussRule r{std::vector<double>(static_cast<std::size_t>(n)), std::vector<double>(static_cast<std::size_t>(n))};
    for (int i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16)
                break;
        }
        r.x[static_cast<std::size_t>(i)] = z;
        r.w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return r;
}

} // namespace

std::vector<WaveState> integrate_schrodinger(const Hamiltonian2& h, const WaveState& phi0,
                                             const std::vector<double>& times, double tol, IntegratorStats* stats)
{
    const cplx I(0.0, 1.0);
    auto rhs = [&](double t, const State<2>& y) {
        const double f = h.drive.value(t);
        return State<2>{-I * (f * y[0] + h.eps * y[1]), -I * (h.eps * y[0] - f * y[1])};
    };
    std::vector<WaveState> out;
    out.reserve(times.size());
    dopri<2>(rhs, phi0.t, State<2>{phi0.phi_plus, phi0.phi_minus}, times, tol, initial_step(h), stats,
             [&](double t, const State<2>& y) { out.push_back({t, y[0], y[1]}); });
    return out;
}

std::vector<WaveState> integrate_schrodinger(const Hamiltonian2& h, const WaveState& phi0, double t_end, double tol,
                                             int points_per_period)
{
    return integrate_schrodinger(h, phi0, uniform_times(phi0.t, t_end, h.drive.period(), points_per_period), tol);
}

std::vector<PropagatorSample> integrate_propagator(const Hamiltonian2& h, const std::vector<double>& times,
                                                   double tol, IntegratorStats* stats)
{
    const cplx I(0.0, 1.0);
    // Layout: (U11, U21, U12, U22), two independent columns.
    auto rhs = [&](double t, const State<4>& y) {
        const double f = h.drive.value(t);
        return State<4>{-I * (f * y[0] + h.eps * y[1]), -I * (h.eps * y[0] - f * y[1]),
                        -I * (f * y[2] + h.eps * y[3]), -I * (h.eps * y[2] - f * y[3])};
    };
    std::vector<PropagatorSample> out;
    out.reserve(times.size());
    dopri<4>(rhs, 0.0, State<4>{1.0, 0.0, 0.0, 1.0}, times, tol, initial_step(h), stats,
             [&](double t, const State<4>& y) { out.push_back({t, Mat2{y[0], y[2], y[1], y[3]}}); });
    return out;
}

double hill_residual(const std::vector<WaveState>& traj, const DriveSpec& d, double eps)
{
    if (traj.size() < 5)
        throw Error("trajectory too short for the 5-point stencil");
    const double dt = traj[1].t - traj[0].t;
    if (!(dt > 0.0))
        throw Error("trajectory must be increasing in time");
    for (std::size_t j = 1; j < traj.size(); ++j)
        if (std::abs(traj[j].t - traj[j - 1].t - dt) > 1e-9 * dt)
            throw Error("trajectory must be uniformly spaced");
    if (dt > d.period() / 64 * (1 + 1e-12))
        throw Error("trajectory needs at least 64 points per period");

    const cplx I(0.0, 1.0);
    const double inv = 1.0 / (12.0 * dt * dt);
    double sup = 0.0;
    for (std::size_t j = 2; j + 2 < traj.size(); ++j) {
        const double t = traj[j].t;
        const double f = d.value(t);
        const double fp = d.derivative(t);
        const auto second = [&](cplx WaveState::*c) {
            return (-(traj[j - 2].*c) + 16.0 * (traj[j - 1].*c) - 30.0 * (traj[j].*c) + 16.0 * (traj[j + 1].*c)
                    - (traj[j + 2].*c))
                   * inv;
        };
        const cplx rp = second(&WaveState::phi_plus) + (I * fp + eps * eps + f * f) * traj[j].phi_plus;
        const cplx rm = second(&WaveState::phi_minus) + (-I * fp + eps * eps + f * f) * traj[j].phi_minus;
        sup = std::max({sup, std::abs(rp), std::abs(rm)});
    }
    return sup;
}

std::vector<FourierSeries> symbolic_small_order(const DriveSpec& d, int N, int m_max, bool negate_alpha)
{
    if (N < 1 || N > 3)
        throw Error("symbolic oracle supports 1 <= N <= 3");
    if (m_max < 0 || m_max > 4)
        throw Error("symbolic oracle supports m_max <= 4");

    const double w = d.omega();
    const double T = d.period();
    constexpr int samples = 512;
    constexpr int keep = 48;
    Sparse q;
    for (int m = -keep; m <= keep; ++m) {
        cplx s{};
        for (int j = 0; j < samples; ++j) {
            const double t = T * j / samples;
            s += std::polar(1.0, d.integral(t) - m * w * t);
        }
        if (std::abs(s) > 1e-18 * samples)
            q[m] = s / static_cast<double>(samples);
    }
    const Sparse q2 = product(q, q);
    Sparse qm2;
    for (const auto& [m, c] : q2)
        qm2[-m] = std::conj(c);

    const cplx Mq2 = mean_of(q2);
    double l1 = 0.0;
    for (const auto& [m, c] : q2)
        l1 += std::abs(c);
    if (std::abs(Mq2) <= kDefaultCaseTol * l1)
        throw Error("symbolic oracle handles Case I drives only");

    const cplx I(0.0, 1.0);
    cplx alpha1 = std::sqrt(mean_of(qm2) / Mq2);
    if (negate_alpha)
        alpha1 = -alpha1;

    std::vector<Sparse> h(static_cast<std::size_t>(N + 2));
    h[1] = Sparse{{0, alpha1}};
    for (int n = 2; n <= N + 1; ++n) {
        auto integrand = [&]() {
            Sparse quad;
            for (int p = 1; p <= n - 1; ++p)
                accumulate(quad, product(h[static_cast<std::size_t>(p)], h[static_cast<std::size_t>(n - p)]), 1.0);
            Sparse out;
            accumulate(out, product(q2, quad), I);
            if (n == 2)
                accumulate(out, qm2, -I);
            return out;
        };
        Sparse in = integrand();
        if (n >= 3) {
            // The constant of h_{n-1} enters as 2 i alpha1 alpha_{n-1} q^2; choose it to kill the mean.
            const cplx a = -mean_of(in) / (2.0 * I * alpha1 * Mq2);
            h[static_cast<std::size_t>(n - 1)][0] += a;
            in = integrand();
        }
        h[static_cast<std::size_t>(n)] = integrate_from_zero(in, w);
    }

    std::vector<FourierSeries> out;
    for (int n = 1; n <= N; ++n) {
        const Sparse c = product(q, h[static_cast<std::size_t>(n)]);
        FourierSeries s(w, m_max);
        for (const auto& [m, v] : c)
            if (std::abs(m) <= m_max)
                s.at(m) = v;
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<Mat2> direct_propagator(const DriveSpec& d, const std::function<cplx(double)>& g, double eps,
                                    const std::vector<double>& times, int panels_per_period)
{
    if (panels_per_period < 1)
        throw Error("panels per period must be positive");
    static const GaussRule rule = gauss_legendre(16);
    const cplx I(0.0, 1.0);
    const double hp = d.period() / panels_per_period;
    auto integrand = [&](double t) { return d.value(t) + g(t); };
    auto gl = [&](double a, double b, auto&& fn) {
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        cplx s{};
        for (std::size_t i = 0; i < rule.x.size(); ++i)
            s += rule.w[i] * fn(mid + half * rule.x[i]);
        return half * s;
    };

    const cplx g0 = g(0.0);
    std::vector<Mat2> out;
    out.reserve(times.size());
    double t = 0.0;
    cplx phase{}; // int_0^t (f + g)
    cplx S{};     // int_0^t R^{-2}
    for (double target : times) {
        if (target < t)
            throw Error("output times must be sorted and non-negative");
        while (t < target) {
            const double b = std::min(target, t + hp);
            const double a = t;
            const cplx base = phase;
            S += gl(a, b, [&](double s) { return std::exp(2.0 * I * (base + gl(a, s, integrand))); });
            phase += gl(a, b, integrand);
            t = b;
        }
        const cplx R = std::exp(-I * phase);
        const cplx u11 = R * (1.0 + I * g0 * S);
        const cplx u12 = -I * eps * R * S;
        out.push_back({u11, u12, -std::conj(u12), std::conj(u11)});
    }
    return out;
}

} // namespace floquet
