#pragma once

#include <cmath>
#include <complex>

namespace fronttrack {

// 2-component state vector (conserved quantities).
struct Vec2 {
    double u1 = 0.0;
    double u2 = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.u1 + b.u1, a.u2 + b.u2}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.u1 - b.u1, a.u2 - b.u2}; }
    friend Vec2 operator*(double s, Vec2 v) { return {s * v.u1, s * v.u2}; }
    friend Vec2 operator*(Vec2 v, double s) { return {s * v.u1, s * v.u2}; }
    friend Vec2 operator/(Vec2 v, double s) { return {v.u1 / s, v.u2 / s}; }
    Vec2& operator+=(Vec2 o) { u1 += o.u1; u2 += o.u2; return *this; }
    Vec2& operator-=(Vec2 o) { u1 -= o.u1; u2 -= o.u2; return *this; }
};

inline double dot(Vec2 a, Vec2 b) { return a.u1 * b.u1 + a.u2 * b.u2; }
inline double inf_norm(Vec2 v) { return std::max(std::fabs(v.u1), std::fabs(v.u2)); }

// Dense 2x2 real matrix, row-major entries.
struct Mat2 {
    double m11 = 0.0, m12 = 0.0;
    double m21 = 0.0, m22 = 0.0;

    friend Vec2 operator*(const Mat2& m, Vec2 v) {
        return {m.m11 * v.u1 + m.m12 * v.u2, m.m21 * v.u1 + m.m22 * v.u2};
    }
    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
                a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
    }
    friend Mat2 operator+(const Mat2& a, const Mat2& b) {
        return {a.m11 + b.m11, a.m12 + b.m12, a.m21 + b.m21, a.m22 + b.m22};
    }
    friend Mat2 operator*(double s, const Mat2& m) {
        return {s * m.m11, s * m.m12, s * m.m21, s * m.m22};
    }
    Mat2 transpose() const { return {m11, m21, m12, m22}; }
    double det() const { return m11 * m22 - m12 * m21; }
    double trace() const { return m11 + m22; }
};

inline double inf_norm(const Mat2& m) {
    return std::max(std::fabs(m.m11) + std::fabs(m.m12),
                    std::fabs(m.m21) + std::fabs(m.m22));
}

// Eigenvalues of diag(p1, p2) * K for unimodular complex phases; used by the
// robust spectral-radius scan. Returns the larger modulus.
inline double phased_spectral_radius(const Mat2& k, std::complex<double> p1,
                                     std::complex<double> p2) {
    const std::complex<double> tr = p1 * k.m11 + p2 * k.m22;
    const std::complex<double> dt = p1 * p2 * (k.m11 * k.m22 - k.m12 * k.m21);
    const std::complex<double> disc = std::sqrt(tr * tr - 4.0 * dt);
    return std::max(std::abs(0.5 * (tr + disc)), std::abs(0.5 * (tr - disc)));
}

// Largest singular value (the usual induced Euclidean norm).
inline double sigma_max(const Mat2& m) {
    const double f = m.m11 * m.m11 + m.m12 * m.m12 + m.m21 * m.m21 + m.m22 * m.m22;
    const double d = m.det();
    const double disc = std::max(0.0, f * f - 4.0 * d * d);
    return std::sqrt(0.5 * (f + std::sqrt(disc)));
}

}  // namespace fronttrack
