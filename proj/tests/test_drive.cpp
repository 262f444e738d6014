#include "doctest.h"

#include "floquet/drive.hpp"
#include "floquet/error.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>

using namespace floquet;

namespace {
constexpr double pi = std::numbers::pi;
// f = 2 a cos t + 0.4 cos 2t sits on M(q^2) = 0 at this amplitude.
constexpr double kTunedA = 0.6024985189311821;
} // namespace

TEST_CASE("drive validation")
{
    CHECK_THROWS_WITH_AS(DriveSpec(1.0, {{0, 1.0}}), "drive has a nonzero mean (F0 != 0)", Error);
    CHECK_THROWS_AS(DriveSpec(1.0, {{1, 0.5}}), Error);
    CHECK_THROWS_AS(DriveSpec(1.0, {{1, cplx(0.5, 0.1)}, {-1, cplx(0.5, 0.1)}}), Error);
    CHECK_THROWS_AS(DriveSpec(1.0, {{1, 0.5}, {-1, 0.5}, {1, 0.5}}), Error);
    CHECK_THROWS_AS(DriveSpec(-1.0, {}), Error);
    CHECK_NOTHROW(DriveSpec(1.0, {}));

    const auto d = DriveSpec::cos_sin(2.0, 0.7, -0.3);
    CHECK(d.J() == 1);
    for (double t : {0.0, 0.4, 1.9})
        CHECK(d.value(t) == doctest::Approx(0.7 * std::cos(2 * t) - 0.3 * std::sin(2 * t)).epsilon(1e-14));
    CHECK(d.integral(1.1) == doctest::Approx(0.7 * std::sin(2.2) / 2 + 0.3 * (std::cos(2.2) - 1) / 2).epsilon(1e-14));
    CHECK(d.derivative(0.5) == doctest::Approx(-1.4 * std::sin(1.0) - 0.6 * std::cos(1.0)).epsilon(1e-14));
}

TEST_CASE("gamma_f")
{
    CHECK(gamma_f(DriveSpec::cos_sin(1.0, 1.0, 0.0)) == doctest::Approx(0.0));
    CHECK(gamma_f(DriveSpec::cos_sin(1.0, 0.0, 1.0)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gamma_f(DriveSpec::cos_sin(2.5, 0.3, 0.8)) == doctest::Approx(0.8 / 2.5).epsilon(1e-15));
    // gamma_f is the mean of int_0^t f.
    const auto d = DriveSpec::two_harmonic(1.0, cplx(0.3, 0.1), cplx(0, 0.2));
    double mean_integral = 0.0;
    const int n = 4096;
    for (int j = 0; j < n; ++j)
        mean_integral += d.integral(2 * pi * j / n) / n;
    CHECK(gamma_f(d) == doctest::Approx(mean_integral).epsilon(1e-12));
}

TEST_CASE("Q coefficients of a cosine drive are Bessel values")
{
    const auto d = DriveSpec::cos_sin(1.0, 1.0, 0.0);
    const auto Q = q_coefficients(d, 20, 1);
    const auto Q2 = q_coefficients(d, 20, 2);
    for (int m = -20; m <= 20; ++m) {
        CHECK(std::abs(Q[m] - oracle_ref::bessel_j(m, 1.0)) < 1e-14);
        CHECK(std::abs(Q2[m] - oracle_ref::bessel_j(m, 2.0)) < 1e-14);
    }
    CHECK(Q[0].real() == doctest::Approx(0.7651976866).epsilon(1e-10));
    CHECK(mean_value(Q2).real() == doctest::Approx(0.2238907791).epsilon(1e-9));
}

TEST_CASE("empty drive gives q = 1")
{
    const DriveSpec d(1.0, {});
    const auto Q = q_coefficients(d, 5, 1);
    CHECK(Q[0] == cplx(1.0));
    CHECK(Q.l1_norm() == 1.0);
    CHECK(q_coefficients(d, 3, 2)[0] == cplx(1.0));
}

TEST_CASE("multinomial sum agrees with the Bessel closed forms")
{
    SUBCASE("single harmonic with phase")
    {
        const auto d = DriveSpec::cos_sin(1.7, 0.9, -1.3);
        for (int s : {1, 2}) {
            const auto a = q_coefficients(d, 20, s);
            const auto b = q_coefficients_bessel(d, 20, s);
            for (int m = -20; m <= 20; ++m)
                CHECK(std::abs(a[m] - b[m]) < 1e-12);
            for (int m = 1; m <= 20; ++m)
                CHECK(std::abs(a[m]) == doctest::Approx(std::abs(a[-m])).epsilon(1e-12));
        }
    }
    SUBCASE("two harmonics")
    {
        const auto d = DriveSpec::two_harmonic(1.0, 0.3, cplx(0, 0.2));
        for (int s : {1, 2}) {
            const auto a = q_coefficients(d, 20, s);
            const auto b = q_coefficients_bessel(d, 20, s);
            for (int m = -20; m <= 20; ++m)
                CHECK(std::abs(a[m] - b[m]) < 1e-12);
        }
    }
    SUBCASE("no closed form")
    {
        const auto d = DriveSpec::from_positive_modes(1.0, {{3, 0.2}});
        CHECK_THROWS_WITH_AS(q_coefficients_bessel(d, 5, 1), "no closed form", Error);
    }
}

TEST_CASE("q data invariants")
{
    const auto d = DriveSpec::from_positive_modes(1.3, {{1, cplx(0.4, 0.2)}, {3, cplx(-0.1, 0.3)}});
    const QData qd = compute_qdata(d);
    CHECK(qd.m_max >= 24);
    CHECK(qd.Q.is_real_valued() == false);

    // unimodular on a grid
    double worst = 0.0;
    for (int j = 0; j < 1024; ++j)
        worst = std::max(worst, std::abs(std::abs(qd.Q.evaluate(d.period() * j / 1024)) - 1.0));
    CHECK(worst < 1e-10);

    // q(t) = exp(i int f)
    for (double t : {0.2, 1.1, 3.7})
        CHECK(std::abs(qd.Q.evaluate(t) - std::polar(1.0, d.integral(t))) < 1e-12);

    const auto QQ = convolve(qd.Q, qd.Q, qd.m_max);
    for (int m = -qd.m_max; m <= qd.m_max; ++m)
        CHECK(std::abs(QQ[m] - qd.Q2[m]) < 1e-10);

    // M(q^-2) = conj(M(q^2))
    const auto inv = q_coefficients(DriveSpec::from_positive_modes(1.3, {{1, -cplx(0.4, 0.2)}, {3, -cplx(-0.1, 0.3)}}),
                                    qd.m_max, 2);
    CHECK(std::abs(inv[0] - std::conj(qd.Q2[0])) < 1e-13);
    CHECK(std::abs(conjugate_series(qd.Q2)[0] - std::conj(qd.Q2[0])) == 0.0);

    // decay estimate dominates the computed table
    for (int m = -qd.m_max; m <= qd.m_max; ++m)
        CHECK(std::abs(qd.Q2[m]) <= q_decay_bound(d, m, 2) * (1 + 1e-12) + 1e-300);
}

TEST_CASE("classification")
{
    SUBCASE("cosine drive is Case I")
    {
        const auto d = DriveSpec::cos_sin(1.0, 1.0, 0.0);
        const auto qd = compute_qdata(d);
        CHECK(qd.case_label == CaseLabel::CaseI);
        CHECK(std::abs(qd.mean_q2 - oracle_ref::bessel_j(0, 2.0)) < 1e-14);
        CHECK_FALSE(qd.mean_Q1.has_value());
    }
    SUBCASE("first J0 circle is unsupported")
    {
        const double x1 = oracle_ref::j0_first_zero();
        const auto d = DriveSpec::cos_sin(1.0, x1 / 2, 0.0);
        const auto qd = compute_qdata(d);
        CHECK(qd.case_label == CaseLabel::Unsupported);
        REQUIRE(qd.mean_Q1.has_value());
        CHECK(std::abs(*qd.mean_Q1) < 1e-12);
        const auto c = classify(d, qd);
        CHECK(c.abs_mean_q2 <= c.threshold);
    }
    SUBCASE("the circle is rotation invariant")
    {
        const double x1 = oracle_ref::j0_first_zero();
        const auto d = DriveSpec::cos_sin(1.0, x1 / 2 * std::cos(0.7), x1 / 2 * std::sin(0.7));
        CHECK(compute_qdata(d).case_label == CaseLabel::Unsupported);
    }
    SUBCASE("tuned two-harmonic drive is Case II")
    {
        const auto family = [](double a) { return DriveSpec::two_harmonic(1.0, a, 0.2); };
        const double a = bisect_mean_q2_zero(family, 0.4, 0.8);
        CHECK(a == doctest::Approx(kTunedA).epsilon(1e-12));
        const auto qd = compute_qdata(family(a));
        CHECK(qd.case_label == CaseLabel::CaseII);
        REQUIRE(qd.mean_Q1.has_value());
        CHECK(std::abs(*qd.mean_Q1) > 0.1);
    }
    SUBCASE("bracket without sign change")
    {
        const auto family = [](double a) { return DriveSpec::two_harmonic(1.0, a, 0.2); };
        CHECK_THROWS_AS(bisect_mean_q2_zero(family, 0.1, 0.2), Error);
    }
}
