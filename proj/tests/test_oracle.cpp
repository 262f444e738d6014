#include "doctest.h"

#include "floquet/error.hpp"
#include "floquet/oracle.hpp"
#include "floquet/propagator.hpp"

#include <cmath>
#include <limits>
#include <numbers>

using namespace floquet;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("decoupled equations")
{
    const auto d = DriveSpec::cos_sin(1.3, 0.9, 0.4);
    const auto traj = integrate_schrodinger(Hamiltonian2{d, 0.0}, {0.0, 1.0, 0.0}, 4 * d.period(), 1e-12, 32);
    for (const auto& s : traj) {
        CHECK(std::abs(s.phi_plus - std::polar(1.0, -d.integral(s.t))) < 1e-10);
        CHECK(std::abs(s.phi_minus) == 0.0);
    }
}

TEST_CASE("Rabi rotation")
{
    const DriveSpec d(1.0, {});
    const double eps = 0.3;
    std::vector<double> ts;
    for (int j = 0; j <= 20; ++j)
        ts.push_back(1.5 * j);
    const auto U = integrate_propagator(Hamiltonian2{d, eps}, ts, 1e-12);
    for (const auto& s : U) {
        CHECK(std::abs(s.U.a11 - std::cos(eps * s.t)) < 1e-10);
        CHECK(std::abs(s.U.a12 - cplx(0, -std::sin(eps * s.t))) < 1e-10);
    }
    CHECK(U.front().t == 0.0);
    CHECK((U.front().U - Mat2::identity()).frobenius() == 0.0);
}

TEST_CASE("long integration of the cosine drive")
{
    const auto d = DriveSpec::cos_sin(1.0, 1.0, 0.0);
    const Hamiltonian2 h{d, 0.1};
    IntegratorStats st;
    std::vector<double> ts;
    for (int j = 0; j <= 500; ++j)
        ts.push_back(100 * pi * j / 500);
    const auto traj = integrate_schrodinger(h, {0.0, 1.0, 0.0}, ts, 1e-11, &st);
    double drift = 0.0;
    for (const auto& s : traj)
        drift = std::max(drift, std::abs(std::norm(s.phi_plus) + std::norm(s.phi_minus) - 1.0));
    CHECK(drift <= 1e-8);
    CHECK(traj.back().t == 100 * pi);
    CHECK(st.accepted > 0);

    SUBCASE("columns match single-state runs")
    {
        const auto U = integrate_propagator(h, ts, 1e-11);
        const auto second = integrate_schrodinger(h, {0.0, 0.0, 1.0}, ts, 1e-11);
        for (std::size_t j = 0; j < ts.size(); ++j) {
            CHECK(std::abs(U[j].U.a11 - traj[j].phi_plus) < 1e-10);
            CHECK(std::abs(U[j].U.a21 - traj[j].phi_minus) < 1e-10);
            CHECK(std::abs(U[j].U.a12 - second[j].phi_plus) < 1e-10);
            CHECK(std::abs(U[j].U.a22 - second[j].phi_minus) < 1e-10);
            CHECK(std::abs(std::abs(U[j].U.det()) - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("integrator contract")
{
    const auto d = DriveSpec::cos_sin(1.0, 1.0, 0.0);
    CHECK_THROWS_AS(integrate_propagator(Hamiltonian2{d, 0.1}, {1.0}, 1e-14), Error);
    CHECK_THROWS_AS(integrate_propagator(Hamiltonian2{d, 0.1}, {1.0}, 1e-5), Error);
    CHECK_THROWS_AS(integrate_propagator(Hamiltonian2{d, 0.1}, {1.0, 0.5}, 1e-9), Error);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const DriveSpec bad(1.0, {{1, nan}, {-1, nan}});
    CHECK_THROWS_WITH_AS(integrate_propagator(Hamiltonian2{bad, 0.1}, {1.0}, 1e-9), "stiff or invalid drive", Error);
}

TEST_CASE("Hill residual")
{
    const auto d = DriveSpec::cos_sin(1.0, 1.0, 0.0);
    SUBCASE("closed form at eps = 0")
    {
        std::vector<WaveState> traj;
        for (int j = 0; j <= 2048; ++j) {
            const double t = d.period() * j / 1024;
            traj.push_back({t, std::polar(1.0, -std::sin(t)), 0.0});
        }
        CHECK(hill_residual(traj, d, 0.0) <= 1e-6);
    }
    SUBCASE("integrator trajectory")
    {
        const auto traj = integrate_schrodinger(Hamiltonian2{d, 0.2}, {0.0, 0.6, cplx(0, 0.8)}, 3 * d.period(),
                                                1e-12, 256);
        CHECK(hill_residual(traj, d, 0.2) <= 1e-6);
    }
    SUBCASE("Floquet-form trajectory follows the eps^(N+1) budget")
    {
        double r[2];
        int i = 0;
        for (double eps : {0.1, 0.05}) {
            const auto s = solve(d, eps, {.order = 4});
            std::vector<WaveState> traj;
            for (int j = 0; j <= 512; ++j) {
                const double t = d.period() * j / 256;
                const Mat2 U = evaluate_U(s.prop, t);
                traj.push_back({t, U.a11, U.a21});
            }
            r[i++] = hill_residual(traj, d, eps);
        }
        CHECK(r[0] / r[1] == doctest::Approx(32.0).epsilon(0.3));
    }
    SUBCASE("density requirement")
    {
        std::vector<WaveState> sparse;
        for (int j = 0; j < 10; ++j)
            sparse.push_back({d.period() * j / 32, 1.0, 0.0});
        CHECK_THROWS_AS(hill_residual(sparse, d, 0.0), Error);
    }
}

TEST_CASE("time-domain small-order construction")
{
    SUBCASE("empty drive")
    {
        const auto c = symbolic_small_order(DriveSpec(1.0, {}), 3, 4);
        CHECK(std::abs(c[0][0] - 1.0) < 1e-15);
        CHECK(c[1].l1_norm() < 1e-15);
        CHECK(c[2].l1_norm() < 1e-15);
    }
    SUBCASE("cosine drive against the recursion")
    {
        const auto d = DriveSpec::cos_sin(1.0, 1.0, 0.0);
        const auto qd = compute_qdata(d);
        for (bool neg : {false, true}) {
            const auto c = symbolic_small_order(d, 3, 4, neg);
            const auto ps =
                case1_coefficients(qd, 3, qd.m_max, neg ? AlphaBranch::Negated : AlphaBranch::Principal);
            for (int n = 1; n <= 3; ++n)
                for (int m = -4; m <= 4; ++m)
                    CHECK(std::abs(c[n - 1][m] - ps.C(n)[m]) < 1e-10);
            for (int m = -4; m <= 4; ++m)
                CHECK(std::abs(c[0][m] - ps.alpha1 * qd.Q[m]) < 1e-13);
        }
    }
    SUBCASE("refusals")
    {
        const auto tuned = DriveSpec::two_harmonic(1.0, 0.6024985189311821, 0.2);
        CHECK_THROWS_AS(symbolic_small_order(tuned, 2, 4), Error);
        CHECK_THROWS_AS(symbolic_small_order(DriveSpec(1.0, {}), 4, 4), Error);
        CHECK_THROWS_AS(symbolic_small_order(DriveSpec(1.0, {}), 2, 5), Error);
    }
}

TEST_CASE("direct quadrature map")
{
    SUBCASE("constant Hamiltonian")
    {
        const double eps = 0.3;
        const auto U = direct_propagator(DriveSpec(1.0, {}), [&](double) { return cplx(eps); }, eps,
                                         {0.0, 1.0, 5.0, 20.0});
        for (std::size_t j = 0; j < U.size(); ++j) {
            const double t = std::vector<double>{0.0, 1.0, 5.0, 20.0}[j];
            CHECK(std::abs(U[j].a11 - std::cos(eps * t)) < 1e-13);
            CHECK(std::abs(U[j].a12 - cplx(0, -std::sin(eps * t))) < 1e-13);
        }
    }
    SUBCASE("Riccati solution reproduces the integrator")
    {
        const auto d = DriveSpec::cos_sin(1.0, 0.8, 0.5);
        const auto s = solve(d, 0.08, {.order = 12});
        std::vector<double> ts;
        for (int j = 0; j <= 200; ++j)
            ts.push_back(6 * d.period() * j / 200);
        const auto U = direct_propagator(d, [&](double t) { return s.g.evaluate(t); }, 0.08, ts);
        const auto orc = integrate_propagator(Hamiltonian2{d, 0.08}, ts, 1e-12);
        double worst = 0.0;
        for (std::size_t j = 0; j < ts.size(); ++j)
            worst = std::max(worst, (U[j] - orc[j].U).frobenius());
        CHECK(worst < 1e-8);
    }
}
