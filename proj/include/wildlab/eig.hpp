#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wildlab {

// Largest eigenvalue of a symmetric 2x2 matrix, closed form.
inline double lambda_max_sym2(double a00, double a01, double a11) {
    const double half_tr = 0.5 * (a00 + a11);
    const double half_diff = 0.5 * (a00 - a11);
    return half_tr + std::sqrt(half_diff * half_diff + a01 * a01);
}

// Largest eigenvalue of a symmetric 3x3 matrix by the trigonometric
// (Cardano) form on the shifted deviatoric matrix. The acos argument is
// clamped to [-1,1] to absorb roundoff.
inline double lambda_max_sym3(double a00, double a01, double a02, double a11, double a12,
                              double a22) {
    const double q = (a00 + a11 + a22) / 3.0;
    const double d00 = a00 - q, d11 = a11 - q, d22 = a22 - q;
    const double p2 =
        (d00 * d00 + d11 * d11 + d22 * d22 + 2.0 * (a01 * a01 + a02 * a02 + a12 * a12)) / 6.0;
    if (p2 <= 0.0) return q;
    const double p = std::sqrt(p2);
    const double b00 = d00 / p, b11 = d11 / p, b22 = d22 / p;
    const double b01 = a01 / p, b02 = a02 / p, b12 = a12 / p;
    const double det_b = b00 * (b11 * b22 - b12 * b12) - b01 * (b01 * b22 - b12 * b02) +
                         b02 * (b01 * b12 - b11 * b02);
    const double r = std::clamp(0.5 * det_b, -1.0, 1.0);
    return q + 2.0 * p * std::cos(std::acos(r) / 3.0);
}

// Packed upper triangle (xx,xy,yy) resp. (xx,xy,xz,yy,yz,zz).
inline double lambda_max_packed(const double* a, int d) {
    return d == 2 ? lambda_max_sym2(a[0], a[1], a[2])
                  : lambda_max_sym3(a[0], a[1], a[2], a[3], a[4], a[5]);
}

// Full row-major d x d input; rejects asymmetry beyond 1e-12 and evaluates
// the closed form on the upper triangle.
inline double lambda_max_sym(const double* a, int d) {
    if (d != 2 && d != 3) throw std::invalid_argument("lambda_max_sym needs d in {2,3}");
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            if (std::abs(a[i * d + j] - a[j * d + i]) > 1e-12)
                throw std::invalid_argument("lambda_max_sym: matrix not symmetric");
    if (d == 2) return lambda_max_sym2(a[0], a[1], a[3]);
    return lambda_max_sym3(a[0], a[1], a[2], a[4], a[5], a[8]);
}

}  // namespace wildlab
