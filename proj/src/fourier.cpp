#include "floquet/fourier.hpp"

#include "floquet/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace floquet {

namespace {

void require_same_frequency(const FourierSeries& a, const FourierSeries& b)
{
    // Exact comparison: series on one problem share the same omega object value.
    if (a.omega() != b.omega())
        throw Error("incompatible base frequency");
}

} // namespace

namespace {

int checked_window(double omega, int m_max)
{
    if (!(omega > 0.0))
        throw Error("base frequency must be positive");
    if (m_max < 0)
        throw Error("mode window must be non-negative");
    return m_max;
}

} // namespace

FourierSeries::FourierSeries(double omega, int m_max)
    : omega_(omega), m_max_(checked_window(omega, m_max)), coeffs_(static_cast<std::size_t>(2 * m_max + 1))
{
}

FourierSeries FourierSeries::constant(double omega, cplx value)
{
    FourierSeries s(omega, 0);
    s.at(0) = value;
    return s;
}

FourierSeries FourierSeries::from_modes(double omega, std::initializer_list<std::pair<int, cplx>> modes)
{
    return from_modes(omega, std::vector<std::pair<int, cplx>>(modes));
}

FourierSeries FourierSeries::from_modes(double omega, const std::vector<std::pair<int, cplx>>& modes)
{
    int m_max = 0;
    for (const auto& [m, c] : modes)
        m_max = std::max(m_max, std::abs(m));
    FourierSeries s(omega, m_max);
    for (const auto& [m, c] : modes)
        s.at(m) += c;
    return s;
}

cplx& FourierSeries::at(int m)
{
    if (m < -m_max_ || m > m_max_)
        throw Error("mode index " + std::to_string(m) + " outside window " + std::to_string(m_max_));
    return coeffs_[static_cast<std::size_t>(m + m_max_)];
}

cplx FourierSeries::evaluate(double t) const
{
    const cplx z = std::polar(1.0, omega_ * t);
    const cplx zinv = std::conj(z);
    cplx sum = coeffs_[static_cast<std::size_t>(m_max_)];
    cplx zp = z, zn = zinv;
    for (int m = 1; m <= m_max_; ++m) {
        sum += (*this)[m] * zp + (*this)[-m] * zn;
        zp *= z;
        zn *= zinv;
    }
    return sum;
}

cplx FourierSeries::evaluate_derivative(double t) const
{
    const cplx z = std::polar(1.0, omega_ * t);
    const cplx zinv = std::conj(z);
    cplx sum{};
    cplx zp = z, zn = zinv;
    for (int m = 1; m <= m_max_; ++m) {
        sum += cplx(0.0, m * omega_) * ((*this)[m] * zp - (*this)[-m] * zn);
        zp *= z;
        zn *= zinv;
    }
    return sum;
}

FourierSeries FourierSeries::derivative() const
{
    FourierSeries d(*this);
    for (int m = -m_max_; m <= m_max_; ++m)
        d.at(m) *= cplx(0.0, m * omega_);
    return d;
}

double FourierSeries::l1_norm() const
{
    double s = 0.0;
    for (const auto& c : coeffs_)
        s += std::abs(c);
    return s;
}

double FourierSeries::max_abs() const
{
    double s = 0.0;
    for (const auto& c : coeffs_)
        s = std::max(s, std::abs(c));
    return s;
}

FourierSeries FourierSeries::resized(int m_max) const
{
    FourierSeries r(omega_, m_max);
    r.dropped_ = dropped_;
    for (int m = -m_max_; m <= m_max_; ++m) {
        if (std::abs(m) <= m_max)
            r.at(m) = (*this)[m];
        else
            r.dropped_ += std::abs((*this)[m]);
    }
    return r;
}

bool FourierSeries::is_real_valued(double rel_tol) const
{
    const double scale = std::max(l1_norm(), 1e-300);
    for (int m = 0; m <= m_max_; ++m)
        if (std::abs((*this)[-m] - std::conj((*this)[m])) > rel_tol * scale)
            return false;
    return true;
}

FourierSeries& FourierSeries::operator+=(const FourierSeries& other)
{
    require_same_frequency(*this, other);
    if (other.m_max_ > m_max_)
        *this = resized(other.m_max_);
    for (int m = -other.m_max_; m <= other.m_max_; ++m)
        at(m) += other[m];
    dropped_ += other.dropped_;
    return *this;
}

FourierSeries& FourierSeries::operator-=(const FourierSeries& other)
{
    require_same_frequency(*this, other);
    if (other.m_max_ > m_max_)
        *this = resized(other.m_max_);
    for (int m = -other.m_max_; m <= other.m_max_; ++m)
        at(m) -= other[m];
    dropped_ += other.dropped_;
    return *this;
}

FourierSeries& FourierSeries::operator*=(cplx factor)
{
    for (auto& c : coeffs_)
        c *= factor;
    dropped_ *= std::abs(factor);
    return *this;
}

FourierSeries operator+(FourierSeries a, const FourierSeries& b) { return a += b; }
FourierSeries operator-(FourierSeries a, const FourierSeries& b) { return a -= b; }
FourierSeries operator*(FourierSeries a, cplx factor) { return a *= factor; }
FourierSeries operator*(cplx factor, FourierSeries a) { return a *= factor; }

cplx evaluate(const FourierSeries& s, double t) { return s.evaluate(t); }

FourierSeries convolve(const FourierSeries& a, const FourierSeries& b, int cap)
{
    require_same_frequency(a, b);
    const int full = a.m_max() + b.m_max();
    const int window = std::min(full, std::max(cap, 0));
    FourierSeries out(a.omega(), window);
    double dropped = a.dropped_mass() * b.l1_norm() + b.dropped_mass() * a.l1_norm();
    for (int k = -a.m_max(); k <= a.m_max(); ++k) {
        const cplx ak = a[k];
        if (ak == cplx{})
            continue;
        for (int l = -b.m_max(); l <= b.m_max(); ++l) {
            const int m = k + l;
            const cplx term = ak * b[l];
            if (std::abs(m) <= window)
                out.at(m) += term;
            else
                dropped += std::abs(term);
        }
    }
    out.add_dropped_mass(dropped);
    return out;
}

FourierSeries add(const FourierSeries& a, const FourierSeries& b) { return a + b; }

FourierSeries scale(const FourierSeries& s, cplx factor) { return s * factor; }

FourierSeries conjugate_series(const FourierSeries& s)
{
    FourierSeries c(s.omega(), s.m_max());
    for (int m = -s.m_max(); m <= s.m_max(); ++m)
        c.at(m) = std::conj(s[-m]);
    c.add_dropped_mass(s.dropped_mass());
    return c;
}

cplx mean_value(const FourierSeries& s) { return s[0]; }

FourierSeries exp_neg_series(const FourierSeries& h, const ExpSeriesOptions& opts)
{
    if (opts.p_max < 1)
        throw Error("p_max must be at least 1");
    if (h[0] != cplx{})
        throw Error("secular mode in exponent");

    const long wide = static_cast<long>(opts.p_max) * h.m_max();
    const int window = static_cast<int>(std::min<long>(wide, opts.cap));
    FourierSeries result(h.omega(), window);
    result.at(0) = 1.0;

    const FourierSeries minus_h = h * cplx(-1.0);
    FourierSeries term = FourierSeries::constant(h.omega(), 1.0);
    for (int p = 1; p <= opts.p_max; ++p) {
        term = convolve(term, minus_h, window) * cplx(1.0 / p);
        result += term;
        if (term.max_abs() < opts.term_tol)
            break;
    }
    return result;
}

} // namespace floquet
