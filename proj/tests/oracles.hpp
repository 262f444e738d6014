#pragma once

// Reference values computed independently of the library.

#include <cmath>
#include <numbers>

namespace oracle_ref {

/// J_n(x) by its power series sum_k (-1)^k (x/2)^{2k+n} / (k! (k+n)!), n any integer.
inline double bessel_j(int n, double x)
{
    const int an = n < 0 ? -n : n;
    const double half = 0.5 * x;
    double term = 1.0;
    for (int j = 1; j <= an; ++j)
        term *= half / j;
    double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= -half * half / (static_cast<double>(k) * (k + an));
        sum += term;
        if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum)))
            break;
    }
    return (n < 0 && (an % 2 == 1)) ? -sum : sum;
}

/// First positive zero of J_0 by bisection on the series.
inline double j0_first_zero()
{
    double lo = 2.0, hi = 3.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((bessel_j(0, mid) > 0) == (bessel_j(0, lo) > 0))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace oracle_ref
