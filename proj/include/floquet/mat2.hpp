#pragma once

#include "floquet/fourier.hpp"

#include <cmath>

namespace floquet {

/// Dense complex 2x2 matrix, row major.
struct Mat2 {
    cplx a11{}, a12{}, a21{}, a22{};

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    Mat2 adjoint() const { return {std::conj(a11), std::conj(a21), std::conj(a12), std::conj(a22)}; }
    cplx det() const { return a11 * a22 - a12 * a21; }
    double frobenius() const { return std::sqrt(std::norm(a11) + std::norm(a12) + std::norm(a21) + std::norm(a22)); }
};

inline Mat2 operator*(const Mat2& x, const Mat2& y)
{
    return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
            x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
}
inline Mat2 operator+(const Mat2& x, const Mat2& y) { return {x.a11 + y.a11, x.a12 + y.a12, x.a21 + y.a21, x.a22 + y.a22}; }
inline Mat2 operator-(const Mat2& x, const Mat2& y) { return {x.a11 - y.a11, x.a12 - y.a12, x.a21 - y.a21, x.a22 - y.a22}; }
inline Mat2 operator*(cplx s, const Mat2& x) { return {s * x.a11, s * x.a12, s * x.a21, s * x.a22}; }

/// ||U^* U - I||_F
inline double unitarity_defect(const Mat2& u) { return (u.adjoint() * u - Mat2::identity()).frobenius(); }

/// H_2(t) = eps sigma_1 + f sigma_3.
inline Mat2 two_level_hamiltonian(double eps, double f) { return {f, eps, eps, -f}; }

} // namespace floquet
