#pragma once

#include "floquet/fourier.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace floquet {

/// One Fourier component F_n e^{i n omega t} of the drive.
struct Harmonic {
    int n = 0;
    cplx f;
};

/// Real, zero-mean, T-periodic drive f(t) = sum_a F_{n_a} e^{i n_a omega t}
/// with finitely many terms. Construction validates F_0 = 0 and the reality
/// pairing F_{-n} = conj(F_n).
class DriveSpec {
public:
    DriveSpec(double omega, std::vector<Harmonic> harmonics);

    /// Drive built from the n > 0 half of the spectrum; the n < 0 partners are mirrored.
    static DriveSpec from_positive_modes(double omega, const std::vector<Harmonic>& positive);
    /// f(t) = phi1 cos(omega t) + phi2 sin(omega t).
    static DriveSpec cos_sin(double omega, double phi1, double phi2);
    /// f(t) = f1 e^{-i w t} + conj(f1) e^{i w t} + f2 e^{-2 i w t} + conj(f2) e^{2 i w t}.
    static DriveSpec two_harmonic(double omega, cplx f1, cplx f2);

    double omega() const { return omega_; }
    double period() const;
    const std::vector<Harmonic>& harmonics() const { return harmonics_; }
    /// Half the number of nonzero modes.
    int J() const { return static_cast<int>(harmonics_.size() / 2); }
    bool empty() const { return harmonics_.empty(); }

    cplx coefficient(int n) const;
    int max_mode() const;

    double value(double t) const;
    double derivative(double t) const;
    /// int_0^t f.
    double integral(double t) const;

    FourierSeries as_series() const;

private:
    double omega_;
    std::vector<Harmonic> harmonics_;
};

enum class CaseLabel { CaseI, CaseII, Unsupported };

std::string to_string(CaseLabel label);

struct Classification {
    CaseLabel label = CaseLabel::Unsupported;
    double abs_mean_q2 = 0.0;
    /// Present only when M(q^2) vanishes (then Q_1 is periodic and its mean is defined).
    std::optional<double> abs_mean_Q1;
    /// Absolute threshold used for both comparisons.
    double threshold = 0.0;
};

/// Phase data of q(t) = exp(i int_0^t f) derived from a drive.
struct QData {
    FourierSeries Q;   ///< coefficients of q
    FourierSeries Q2;  ///< coefficients of q^2
    double gamma_f = 0.0;
    cplx mean_q2;
    std::optional<cplx> mean_Q1;
    CaseLabel case_label = CaseLabel::Unsupported;
    double phi = 0.0; ///< max_a |f_a / (n_a omega)|
    int calN = 0;     ///< sum_b |n_b|
    double tol_case = 1e-9;
    int m_max = 0;
};

inline constexpr double kDefaultCaseTol = 1e-9;

/// gamma_f = i sum_a f_a / (n_a omega); throws "drive not real" if the raw sum
/// carries an imaginary residue above 1e-13.
double gamma_f(const DriveSpec& d);

/// Q_m (scale = 1) or Q^(2)_m (scale = 2) for |m| <= m_max by the multinomial
/// sum over the exponents of each harmonic, including the e^{i scale gamma_f} prefactor.
FourierSeries q_coefficients(const DriveSpec& d, int m_max, int scale = 1);

/// Closed Bessel forms for the single-harmonic (modes +-1) and two-harmonic
/// (modes +-1, +-2) drives. Throws "no closed form" for any other pattern.
FourierSeries q_coefficients_bessel(const DriveSpec& d, int m_max, int scale = 1);

/// Upper bound on |Q_m| (scale 1) or |Q^(2)_m| (scale 2) from the multinomial
/// tail estimate; infinity where the estimate does not apply.
double q_decay_bound(const DriveSpec& d, int m, int scale);

/// Smallest window for which the decay estimate puts |Q^(2)_m| below `threshold`
/// beyond it (at least `floor_modes`).
int default_mode_cutoff(const DriveSpec& d, double threshold = 1e-14, int floor_modes = 24);

/// M(Q_1) = (i/omega) sum_{m != 0} |Q^(2)_m|^2 / m, valid when Q^(2)_0 = 0.
cplx mean_Q1(const FourierSeries& Q2);

Classification classify(const DriveSpec& d, const QData& qd, double tol_case = kDefaultCaseTol);

/// Q, Q^(2), gamma_f and the case label. m_max <= 0 selects default_mode_cutoff.
QData compute_qdata(const DriveSpec& d, int m_max = 0, double tol_case = kDefaultCaseTol);

/// Signed real quantity whose zeros are the zeros of M(q^2): Re(M(q^2) e^{-2 i gamma_f}).
double projected_mean_q2(const DriveSpec& d, int m_max = 0);

/// Bisection on projected_mean_q2 along a one-parameter drive family. The
/// bracket must contain a sign change; returns the parameter of the zero.
double bisect_mean_q2_zero(const std::function<DriveSpec(double)>& family, double lo, double hi,
                           double tol = 1e-14, int m_max = 0);

} // namespace floquet
