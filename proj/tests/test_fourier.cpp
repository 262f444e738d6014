#include "doctest.h"

#include "floquet/error.hpp"
#include "floquet/fourier.hpp"

#include <cmath>
#include <numbers>

using namespace floquet;

namespace {
constexpr double pi = std::numbers::pi;

bool near(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }
} // namespace

TEST_CASE("evaluate reproduces simple closed forms")
{
    CHECK(near(FourierSeries::constant(1.0, 1.0).evaluate(0.37), 1.0, 1e-15));
    const auto c2 = FourierSeries::from_modes(1.0, {{1, 1.0}, {-1, 1.0}});
    CHECK(near(c2.evaluate(0.0), 2.0, 1e-15));
    const auto c = FourierSeries::from_modes(1.0, {{1, 0.5}, {-1, 0.5}});
    CHECK(near(c.evaluate(pi), -1.0, 1e-15));
    CHECK(near(c.evaluate_derivative(pi / 2), -1.0, 1e-15));
}

TEST_CASE("out-of-window access")
{
    FourierSeries s(1.0, 2);
    CHECK(s[5] == cplx{});
    CHECK_THROWS_AS(s.at(3), Error);
    CHECK_THROWS_AS(FourierSeries(0.0, 1), Error);
    CHECK_THROWS_AS(FourierSeries(1.0, -1), Error);
}

TEST_CASE("convolve")
{
    const auto one = FourierSeries::constant(1.0, 1.0);
    const auto id = convolve(one, one);
    CHECK(id.m_max() == 0);
    CHECK(near(id[0], 1.0, 0));

    const auto p = FourierSeries::from_modes(1.0, {{1, 1.0}});
    const auto m = FourierSeries::from_modes(1.0, {{-1, 1.0}});
    const auto pm = convolve(p, m);
    CHECK(near(pm[0], 1.0, 0));
    CHECK(near(pm[2], 0.0, 0));

    const auto c = FourierSeries::from_modes(1.0, {{1, 0.5}, {-1, 0.5}});
    const auto c2 = convolve(c, c);
    CHECK(near(c2[2], 0.25, 1e-16));
    CHECK(near(c2[0], 0.5, 1e-16));
    CHECK(near(c2[-2], 0.25, 1e-16));

    SUBCASE("frequency mismatch")
    {
        const auto other = FourierSeries::constant(2.0, 1.0);
        CHECK_THROWS_WITH_AS(convolve(one, other), "incompatible base frequency", Error);
        CHECK_THROWS_WITH_AS(add(one, other), "incompatible base frequency", Error);
    }
}

TEST_CASE("convolution matches the pointwise product within the dropped mass")
{
    FourierSeries a(1.3, 6), b(1.3, 5);
    for (int m = -6; m <= 6; ++m)
        a.at(m) = cplx(std::exp(-0.4 * std::abs(m)), 0.1 * m);
    for (int m = -5; m <= 5; ++m)
        b.at(m) = cplx(0.3 * std::cos(m), std::exp(-0.7 * std::abs(m)));
    for (int cap : {11, 7, 3}) {
        const auto ab = convolve(a, b, cap);
        CHECK(ab.m_max() == cap);
        for (int j = 0; j < 50; ++j) {
            const double t = 0.173 * j;
            CHECK(std::abs(ab.evaluate(t) - a.evaluate(t) * b.evaluate(t)) <= ab.dropped_mass() + 1e-13);
        }
        if (cap == 11)
            CHECK(ab.dropped_mass() == 0.0);
        else
            CHECK(ab.dropped_mass() > 0.0);
    }
}

TEST_CASE("mean value and plumbing")
{
    const auto s = FourierSeries::from_modes(1.0, {{0, cplx(3, 2)}, {5, 7.0}});
    CHECK(mean_value(s) == cplx(3, 2));
    CHECK(mean_value(FourierSeries::from_modes(1.0, {{1, 1.0}, {-1, 1.0}})) == cplx{});

    const auto cj = conjugate_series(FourierSeries::from_modes(1.0, {{1, cplx(0, 1)}}));
    CHECK(cj[-1] == cplx(0, -1));
    CHECK(cj[1] == cplx{});
    CHECK(scale(FourierSeries::constant(1.0, 2.0), 0.5)[0] == cplx(1.0));
    const auto sum = add(FourierSeries::from_modes(1.0, {{1, 1.0}}), FourierSeries::from_modes(1.0, {{-1, 1.0}}));
    CHECK(near(sum.evaluate(0.0), 2.0, 1e-15));
}

TEST_CASE("real-valued series have real samples")
{
    FourierSeries s(2.0, 4);
    for (int m = 1; m <= 4; ++m) {
        s.at(m) = cplx(1.0 / m, 0.3 * m);
        s.at(-m) = std::conj(s[m]);
    }
    s.at(0) = 0.7;
    CHECK(s.is_real_valued());
    for (int j = 0; j < 40; ++j)
        CHECK(std::abs(s.evaluate(0.11 * j).imag()) <= 1e-12 * s.l1_norm());
    s.at(2) += 1e-6;
    CHECK_FALSE(s.is_real_valued());
}

TEST_CASE("exp_neg_series")
{
    SUBCASE("zero series")
    {
        const auto e = exp_neg_series(FourierSeries(1.0, 3), {.p_max = 5});
        CHECK(e[0] == cplx(1.0));
        CHECK(e.l1_norm() == doctest::Approx(1.0));
    }
    SUBCASE("second-order Taylor")
    {
        const double x = 1e-3;
        const auto e = exp_neg_series(FourierSeries::from_modes(1.0, {{1, x}}), {.p_max = 2});
        CHECK(near(e[0], 1.0, 0));
        CHECK(near(e[1], -x, 1e-18));
        CHECK(near(e[2], x * x / 2, 1e-20));
        CHECK(e.m_max() == 2);
    }
    SUBCASE("secular mode rejected")
    {
        CHECK_THROWS_WITH_AS(exp_neg_series(FourierSeries::constant(1.0, 0.1)), "secular mode in exponent", Error);
        CHECK_THROWS_AS(exp_neg_series(FourierSeries(1.0, 1), {.p_max = 0}), Error);
    }
    SUBCASE("exp(-h) * exp(h) = 1")
    {
        FourierSeries h(1.0, 3);
        h.at(1) = cplx(0.4, -0.2);
        h.at(-1) = cplx(0.1, 0.3);
        h.at(3) = cplx(0.0, 0.25);
        const auto a = exp_neg_series(h);
        const auto b = exp_neg_series(h * cplx(-1.0));
        const auto ab = convolve(a, b, 256);
        CHECK(std::abs(ab[0] - 1.0) < 1e-12);
        for (int m = 1; m <= 20; ++m) {
            CHECK(std::abs(ab[m]) < 1e-12);
            CHECK(std::abs(ab[-m]) < 1e-12);
        }
    }
    SUBCASE("matches exp pointwise")
    {
        FourierSeries h(2.0, 2);
        h.at(1) = 0.5;
        h.at(-1) = 0.5;
        h.at(2) = cplx(0, 0.2);
        const auto e = exp_neg_series(h);
        for (int j = 0; j < 20; ++j) {
            const double t = 0.29 * j;
            CHECK(std::abs(e.evaluate(t) - std::exp(-h.evaluate(t))) < 1e-13);
        }
    }
}
