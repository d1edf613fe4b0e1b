#pragma once

// Dense complex 2x2 / 2-vector toolkit. Everything is closed-form: the
// boundary-condition algebra never needs more than eigenpairs of a normal
// 2x2 matrix, so no external linear-algebra dependency is pulled in here.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

namespace qbc {

using Complex = std::complex<double>;

struct Vec2 {
    Complex a{0.0, 0.0};
    Complex b{0.0, 0.0};

    Vec2() = default;
    Vec2(Complex a_, Complex b_) : a(a_), b(b_) {}

    Vec2 operator+(const Vec2& o) const { return {a + o.a, b + o.b}; }
    Vec2 operator-(const Vec2& o) const { return {a - o.a, b - o.b}; }
    Vec2 operator*(Complex s) const { return {a * s, b * s}; }
    Vec2 operator/(Complex s) const { return {a / s, b / s}; }

    double norm() const { return std::sqrt(std::norm(a) + std::norm(b)); }
};

inline Vec2 operator*(Complex s, const Vec2& v) { return v * s; }

// Antilinear in the first slot: <x|y> = conj(x1) y1 + conj(x2) y2.
inline Complex inner(const Vec2& x, const Vec2& y) {
    return std::conj(x.a) * y.a + std::conj(x.b) * y.b;
}

// Row-major [[m00, m01], [m10, m11]].
struct Mat2 {
    Complex m00{0.0, 0.0}, m01{0.0, 0.0};
    Complex m10{0.0, 0.0}, m11{0.0, 0.0};

    Mat2() = default;
    Mat2(Complex a, Complex b, Complex c, Complex d) : m00(a), m01(b), m10(c), m11(d) {}

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 zero() { return {}; }

    // |xi><xi| for a (not necessarily normalized) vector xi.
    static Mat2 projector(const Vec2& xi) {
        return {xi.a * std::conj(xi.a), xi.a * std::conj(xi.b),
                xi.b * std::conj(xi.a), xi.b * std::conj(xi.b)};
    }

    Mat2 operator+(const Mat2& o) const {
        return {m00 + o.m00, m01 + o.m01, m10 + o.m10, m11 + o.m11};
    }
    Mat2 operator-(const Mat2& o) const {
        return {m00 - o.m00, m01 - o.m01, m10 - o.m10, m11 - o.m11};
    }
    Mat2 operator*(const Mat2& o) const {
        return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
                m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
    }
    Vec2 operator*(const Vec2& v) const {
        return {m00 * v.a + m01 * v.b, m10 * v.a + m11 * v.b};
    }
    Mat2 operator*(Complex s) const { return {m00 * s, m01 * s, m10 * s, m11 * s}; }
    Mat2 operator/(Complex s) const { return {m00 / s, m01 / s, m10 / s, m11 / s}; }

    Mat2 adjoint() const {
        return {std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)};
    }

    Complex det() const { return m00 * m11 - m01 * m10; }
    Complex trace() const { return m00 + m11; }

    // Throws std::domain_error when the matrix is numerically singular.
    Mat2 inverse() const {
        const Complex d = det();
        const double scale = max_abs();
        if (std::abs(d) <= 1e-300 || std::abs(d) < 1e-14 * scale * scale) {
            throw std::domain_error("Mat2::inverse: singular matrix");
        }
        return Mat2{m11, -m01, -m10, m00} / d;
    }

    double max_abs() const {
        return std::max(std::max(std::abs(m00), std::abs(m01)),
                        std::max(std::abs(m10), std::abs(m11)));
    }

    double frobenius() const {
        return std::sqrt(std::norm(m00) + std::norm(m01) + std::norm(m10) + std::norm(m11));
    }
};

inline Mat2 operator*(Complex s, const Mat2& m) { return m * s; }

inline double unitarity_defect(const Mat2& u) {
    return (u.adjoint() * u - Mat2::identity()).max_abs();
}

inline double hermiticity_defect(const Mat2& k) {
    return (k - k.adjoint()).max_abs();
}

// Eigen-decomposition of a *normal* 2x2 matrix: eigenvalues from the
// characteristic polynomial, eigenvector for lambda1 from a column of
// (A - lambda2 I) (Cayley-Hamilton), second eigenvector as the orthogonal
// complement. Eigenvector phases are fixed by making the largest-modulus
// component real and positive, so results are reproducible.
struct EigenPair2 {
    Complex lambda1, lambda2;
    Vec2 v1, v2; // orthonormal
};

inline Vec2 fix_phase(const Vec2& v) {
    const std::size_t j = (std::abs(v.b) > std::abs(v.a)) ? 1 : 0;
    const Complex c = (j == 0) ? v.a : v.b;
    const double mag = std::abs(c);
    if (mag == 0.0) return v;
    return v * (std::conj(c) / mag);
}

inline EigenPair2 eigen_normal(const Mat2& m) {
    const Complex tr = m.trace();
    const Complex d = m.det();
    const Complex disc = std::sqrt(tr * tr - 4.0 * d);
    Complex l1 = (tr + disc) / 2.0;
    Complex l2 = (tr - disc) / 2.0;

    // columns of (m - l2 I) lie in the eigenspace of l1
    const Mat2 shifted = m - Mat2::identity() * l2;
    const Vec2 c0{shifted.m00, shifted.m10};
    const Vec2 c1{shifted.m01, shifted.m11};
    const double n0 = c0.norm();
    const double n1 = c1.norm();

    Vec2 v1;
    const double scale = std::max(m.max_abs(), 1.0);
    if (std::max(n0, n1) <= 1e-13 * scale) {
        // scalar matrix (degenerate): any orthonormal basis works
        v1 = {1.0, 0.0};
        l1 = l2 = tr / 2.0;
    } else {
        v1 = (n0 >= n1) ? c0 / n0 : c1 / n1;
    }
    v1 = fix_phase(v1);
    Vec2 v2{-std::conj(v1.b), std::conj(v1.a)};
    v2 = fix_phase(v2);
    return {l1, l2, v1, v2};
}

// Nearest unitary in Frobenius norm, via the closed-form polar decomposition
// W (W^dag W)^{-1/2}. Requires W nonsingular.
inline Mat2 polar_unitary(const Mat2& w) {
    const Mat2 h = w.adjoint() * w; // Hermitian positive definite
    EigenPair2 e = eigen_normal(h);
    const double h1 = std::max(e.lambda1.real(), 0.0);
    const double h2 = std::max(e.lambda2.real(), 0.0);
    if (h1 <= 0.0 || h2 <= 0.0) {
        throw std::domain_error("polar_unitary: singular matrix");
    }
    const Mat2 inv_sqrt = Mat2::projector(e.v1) * Complex(1.0 / std::sqrt(h1), 0.0) +
                          Mat2::projector(e.v2) * Complex(1.0 / std::sqrt(h2), 0.0);
    return w * inv_sqrt;
}

// Operator 2-norm of a Hermitian matrix (largest eigenvalue magnitude).
inline double hermitian_opnorm(const Mat2& k) {
    const EigenPair2 e = eigen_normal(k);
    return std::max(std::abs(e.lambda1), std::abs(e.lambda2));
}

} // namespace qbc
