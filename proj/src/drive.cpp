#include "floquet/drive.hpp"

#include "floquet/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace floquet {

namespace {

constexpr double kRealityTol = 1e-12;

// exp(z e^{i n w t}) = sum_p z^p / p! e^{i p n w t}, truncated once the
// remaining tail is below 1e-18 in absolute terms.
FourierSeries exp_harmonic(double omega, int n, cplx z)
{
    const double az = std::abs(z);
    std::vector<cplx> terms{1.0};
    cplx term = 1.0;
    for (int p = 1;; ++p) {
        term *= z / static_cast<double>(p);
        terms.push_back(term);
        const double mag = std::abs(term);
        // For p > 2|z| the tail is bounded by twice the current term.
        if (p > 2.0 * az && 2.0 * mag < 1e-18)
            break;
        if (p > 400)
            throw Error("harmonic amplitude too large for the multinomial sum");
    }
    const int P = static_cast<int>(terms.size()) - 1;
    FourierSeries s(omega, P * std::abs(n));
    for (int p = 0; p <= P; ++p)
        s.at(p * n) += terms[static_cast<std::size_t>(p)];
    return s;
}

} // namespace

DriveSpec::DriveSpec(double omega, std::vector<Harmonic> harmonics)
    : omega_(omega), harmonics_(std::move(harmonics))
{
    if (!(omega_ > 0.0))
        throw Error("base frequency must be positive");
    std::sort(harmonics_.begin(), harmonics_.end(), [](const Harmonic& a, const Harmonic& b) { return a.n < b.n; });
    for (std::size_t i = 0; i < harmonics_.size(); ++i) {
        const auto& h = harmonics_[i];
        if (h.n == 0)
            throw Error("drive has a nonzero mean (F0 != 0)");
        if (i > 0 && harmonics_[i - 1].n == h.n)
            throw Error("duplicate harmonic n=" + std::to_string(h.n));
    }
    for (const auto& h : harmonics_) {
        const auto it = std::find_if(harmonics_.begin(), harmonics_.end(),
                                     [&](const Harmonic& o) { return o.n == -h.n; });
        if (it == harmonics_.end())
            throw Error("drive not real: missing partner for n=" + std::to_string(h.n));
        if (std::abs(it->f - std::conj(h.f)) > kRealityTol * std::max(1.0, std::abs(h.f)))
            throw Error("drive not real: F_{-n} != conj(F_n) for n=" + std::to_string(h.n));
    }
}

DriveSpec DriveSpec::from_positive_modes(double omega, const std::vector<Harmonic>& positive)
{
    std::vector<Harmonic> all;
    for (const auto& h : positive) {
        if (h.n <= 0)
            throw Error("from_positive_modes expects n > 0");
        if (h.f == cplx{})
            continue;
        all.push_back(h);
        all.push_back({-h.n, std::conj(h.f)});
    }
    return DriveSpec(omega, std::move(all));
}

DriveSpec DriveSpec::cos_sin(double omega, double phi1, double phi2)
{
    return from_positive_modes(omega, {{1, cplx(phi1, -phi2) / 2.0}});
}

DriveSpec DriveSpec::two_harmonic(double omega, cplx f1, cplx f2)
{
    return from_positive_modes(omega, {{1, std::conj(f1)}, {2, std::conj(f2)}});
}

double DriveSpec::period() const { return 2.0 * std::numbers::pi / omega_; }

cplx DriveSpec::coefficient(int n) const
{
    for (const auto& h : harmonics_)
        if (h.n == n)
            return h.f;
    return {};
}

int DriveSpec::max_mode() const
{
    int m = 0;
    for (const auto& h : harmonics_)
        m = std::max(m, std::abs(h.n));
    return m;
}

double DriveSpec::value(double t) const
{
    cplx s{};
    for (const auto& h : harmonics_)
        s += h.f * std::polar(1.0, h.n * omega_ * t);
    return s.real();
}

double DriveSpec::derivative(double t) const
{
    cplx s{};
    for (const auto& h : harmonics_)
        s += cplx(0.0, h.n * omega_) * h.f * std::polar(1.0, h.n * omega_ * t);
    return s.real();
}

double DriveSpec::integral(double t) const
{
    cplx s{};
    for (const auto& h : harmonics_)
        s += h.f * (std::polar(1.0, h.n * omega_ * t) - 1.0) / cplx(0.0, h.n * omega_);
    return s.real();
}

FourierSeries DriveSpec::as_series() const
{
    FourierSeries s(omega_, max_mode());
    for (const auto& h : harmonics_)
        s.at(h.n) = h.f;
    return s;
}

std::string to_string(CaseLabel label)
{
    switch (label) {
    case CaseLabel::CaseI: return "CaseI";
    case CaseLabel::CaseII: return "CaseII";
    case CaseLabel::Unsupported: return "Unsupported";
    }
    return "Unsupported";
}

double gamma_f(const DriveSpec& d)
{
    cplx sum{};
    double mag = 0.0;
    for (const auto& h : d.harmonics()) {
        const cplx term = h.f / (h.n * d.omega());
        sum += term;
        mag += std::abs(term);
    }
    const cplx g = cplx(0.0, 1.0) * sum;
    if (std::abs(g.imag()) > 1e-13 * std::max(1.0, mag))
        throw Error("drive not real");
    return g.real();
}

FourierSeries q_coefficients(const DriveSpec& d, int m_max, int scale)
{
    if (m_max < 0)
        throw Error("mode window must be non-negative");
    if (scale != 1 && scale != 2)
        throw Error("scale must be 1 or 2");
    const double g = gamma_f(d);

    FourierSeries prod = FourierSeries::constant(d.omega(), 1.0);
    for (const auto& h : d.harmonics()) {
        const cplx z = static_cast<double>(scale) * h.f / (h.n * d.omega());
        const FourierSeries factor = exp_harmonic(d.omega(), h.n, z);
        prod = convolve(prod, factor, std::numeric_limits<int>::max() / 2);
    }
    FourierSeries out = prod.resized(m_max);
    out *= std::polar(1.0, scale * g);
    return out;
}

FourierSeries q_coefficients_bessel(const DriveSpec& d, int m_max, int scale)
{
    if (scale != 1 && scale != 2)
        throw Error("scale must be 1 or 2");
    const auto& hs = d.harmonics();
    const bool single = hs.size() == 2 && d.max_mode() == 1;
    const bool pair = hs.size() == 4 && d.max_mode() == 2 && d.coefficient(1) != cplx{};
    if (!single && !pair)
        throw Error("no closed form");

    const double w = d.omega();
    const double s = scale;
    FourierSeries out(w, m_max);
    // f1 is the coefficient of e^{-i w t}, zeta its phase: e^{i zeta} = conj(f1)/|f1|.
    const cplx f1 = d.coefficient(-1);
    const double zeta1 = std::arg(std::conj(f1));
    const double x1 = 2.0 * s * std::abs(f1) / w;
    const double g = gamma_f(d);
    const cplx pre = std::polar(1.0, s * g);

    auto jn = [](int n, double x) {
        const double v = std::cyl_bessel_j(static_cast<double>(std::abs(n)), x);
        return (n < 0 && (n % 2 != 0)) ? -v : v;
    };

    if (single) {
        for (int m = -m_max; m <= m_max; ++m)
            out.at(m) = pre * std::polar(1.0, m * zeta1) * jn(m, x1);
        return out;
    }

    const cplx f2 = d.coefficient(-2);
    const double zeta2 = std::arg(std::conj(f2));
    const double x2 = s * std::abs(f2) / w;
    // The J_k(x2) factor decays factorially; 60 + x2 terms each side is ample.
    const int kmax = 60 + static_cast<int>(x2) + m_max;
    for (int m = -m_max; m <= m_max; ++m) {
        cplx sum{};
        for (int k = -kmax; k <= kmax; ++k)
            sum += std::polar(1.0, (m - 2 * k) * zeta1 + k * zeta2) * jn(m - 2 * k, x1) * jn(k, x2);
        out.at(m) = pre * sum;
    }
    return out;
}

double q_decay_bound(const DriveSpec& d, int m, int scale)
{
    if (d.empty())
        return m == 0 ? 1.0 : 0.0;
    double phi = 0.0;
    int calN = 0;
    for (const auto& h : d.harmonics()) {
        phi = std::max(phi, std::abs(h.f / (h.n * d.omega())));
        calN += std::abs(h.n);
    }
    const int k = (std::abs(m) + calN - 1) / calN;
    if (!(k + 1 > 2.0 * phi))
        return std::numeric_limits<double>::infinity();
    const double ps = scale * phi;
    const int twoJ = static_cast<int>(d.harmonics().size());
    const double log_bound = std::log(static_cast<double>(twoJ)) + (twoJ - 1) * ps + k * std::log(ps)
                             - std::lgamma(k + 1.0) - std::log1p(-ps / (k + 1.0));
    return std::exp(log_bound);
}

int default_mode_cutoff(const DriveSpec& d, double threshold, int floor_modes)
{
    if (d.empty())
        return floor_modes;
    for (int m = 1; m < 4096; ++m)
        if (q_decay_bound(d, m, 2) < threshold)
            return std::max(m, floor_modes);
    throw Error("drive amplitude too large for a finite mode window");
}

cplx mean_Q1(const FourierSeries& Q2)
{
    double sum = 0.0;
    for (int m = 1; m <= Q2.m_max(); ++m)
        sum += (std::norm(Q2[m]) - std::norm(Q2[-m])) / m;
    return cplx(0.0, sum / Q2.omega());
}

Classification classify(const DriveSpec&, const QData& qd, double tol_case)
{
    Classification c;
    c.threshold = tol_case * qd.Q2.l1_norm();
    c.abs_mean_q2 = std::abs(qd.Q2[0]);
    if (c.abs_mean_q2 > c.threshold) {
        c.label = CaseLabel::CaseI;
        return c;
    }
    c.abs_mean_Q1 = std::abs(mean_Q1(qd.Q2));
    c.label = *c.abs_mean_Q1 > c.threshold ? CaseLabel::CaseII : CaseLabel::Unsupported;
    return c;
}

QData compute_qdata(const DriveSpec& d, int m_max, double tol_case)
{
    QData qd;
    qd.m_max = m_max > 0 ? m_max : default_mode_cutoff(d);
    qd.tol_case = tol_case;
    qd.gamma_f = gamma_f(d);
    qd.Q = q_coefficients(d, qd.m_max, 1);
    qd.Q2 = q_coefficients(d, qd.m_max, 2);
    qd.mean_q2 = qd.Q2[0];
    for (const auto& h : d.harmonics()) {
        qd.phi = std::max(qd.phi, std::abs(h.f / (h.n * d.omega())));
        qd.calN += std::abs(h.n);
    }
    const Classification c = classify(d, qd, tol_case);
    qd.case_label = c.label;
    if (c.abs_mean_Q1)
        qd.mean_Q1 = mean_Q1(qd.Q2);
    return qd;
}

double projected_mean_q2(const DriveSpec& d, int m_max)
{
    const int window = m_max > 0 ? m_max : default_mode_cutoff(d);
    const cplx M = q_coefficients(d, window, 2)[0];
    return (M * std::polar(1.0, -2.0 * gamma_f(d))).real();
}

double bisect_mean_q2_zero(const std::function<DriveSpec(double)>& family, double lo, double hi, double tol,
                           int m_max)
{
    double flo = projected_mean_q2(family(lo), m_max);
    const double fhi = projected_mean_q2(family(hi), m_max);
    if (flo == 0.0)
        return lo;
    if (fhi == 0.0)
        return hi;
    if ((flo > 0) == (fhi > 0))
        throw Error("bracket does not contain a zero of M(q^2)");
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = projected_mean_q2(family(mid), m_max);
        if (fm == 0.0)
            return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace floquet
