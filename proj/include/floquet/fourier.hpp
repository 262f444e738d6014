#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace floquet {

using cplx = std::complex<double>;

/// Upper bound on the mode window of any series produced by a convolution.
inline constexpr int kDefaultModeCap = 512;

/// Truncated complex Fourier series  s(t) = sum_{|m| <= m_max} c_m e^{i m omega t}.
///
/// Coefficients are stored densely from -m_max to +m_max. Operations that drop
/// modes (convolution under a cap, window shrinking) add the l1 mass of what
/// they dropped to `dropped_mass()`, which is carried forward through later
/// arithmetic as a truncation-error estimate.
class FourierSeries {
public:
    FourierSeries() = default;
    FourierSeries(double omega, int m_max);

    static FourierSeries constant(double omega, cplx value);
    static FourierSeries from_modes(double omega, std::initializer_list<std::pair<int, cplx>> modes);
    static FourierSeries from_modes(double omega, const std::vector<std::pair<int, cplx>>& modes);

    double omega() const { return omega_; }
    int m_max() const { return m_max_; }

    /// Coefficient of mode m; zero outside the window.
    cplx operator[](int m) const
    {
        return (m < -m_max_ || m > m_max_) ? cplx{} : coeffs_[static_cast<std::size_t>(m + m_max_)];
    }
    /// Mutable access; throws when |m| > m_max.
    cplx& at(int m);

    std::span<const cplx> coefficients() const { return coeffs_; }
    std::span<cplx> coefficients() { return coeffs_; }

    double dropped_mass() const { return dropped_; }
    void add_dropped_mass(double mass) { dropped_ += mass; }

    cplx evaluate(double t) const;
    /// d/dt of the series at t (termwise, exact for the truncated object).
    cplx evaluate_derivative(double t) const;
    FourierSeries derivative() const;

    double l1_norm() const;
    double max_abs() const;

    /// Same series on a different window; modes beyond the new window are dropped.
    FourierSeries resized(int m_max) const;

    /// True when c_{-m} = conj(c_m) for every m within `rel_tol` of the l1 norm.
    bool is_real_valued(double rel_tol = 1e-14) const;

    FourierSeries& operator+=(const FourierSeries& other);
    FourierSeries& operator-=(const FourierSeries& other);
    FourierSeries& operator*=(cplx factor);

private:
    double omega_ = 1.0;
    int m_max_ = 0;
    std::vector<cplx> coeffs_{cplx{}};
    double dropped_ = 0.0;
};

FourierSeries operator+(FourierSeries a, const FourierSeries& b);
FourierSeries operator-(FourierSeries a, const FourierSeries& b);
FourierSeries operator*(FourierSeries a, cplx factor);
FourierSeries operator*(cplx factor, FourierSeries a);

cplx evaluate(const FourierSeries& s, double t);

/// Coefficient table of the pointwise product. The result window is
/// a.m_max + b.m_max, reduced to `cap`; the mass of dropped modes is recorded.
FourierSeries convolve(const FourierSeries& a, const FourierSeries& b, int cap = kDefaultModeCap);

FourierSeries add(const FourierSeries& a, const FourierSeries& b);
FourierSeries scale(const FourierSeries& s, cplx factor);

/// Series of conj(s(t)): c'_m = conj(c_{-m}).
FourierSeries conjugate_series(const FourierSeries& s);

/// Mean value over one period, i.e. the m = 0 coefficient.
cplx mean_value(const FourierSeries& s);

struct ExpSeriesOptions {
    int p_max = 40;
    /// The p-sum stops once the largest coefficient of the p-th term is below this.
    double term_tol = 1e-16;
    int cap = kDefaultModeCap;
};

/// Coefficients of exp(-h(t)) for a zero-mean series h, summed as
/// 1 + sum_{p>=1} (-1)^p / p! h^{*p}. The result window is min(p_max * h.m_max, cap).
/// Throws "secular mode in exponent" when h has a nonzero mean.
FourierSeries exp_neg_series(const FourierSeries& h, const ExpSeriesOptions& opts = {});

} // namespace floquet
