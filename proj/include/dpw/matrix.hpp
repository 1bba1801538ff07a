#ifndef DPW_MATRIX_HPP
#define DPW_MATRIX_HPP

#include <array>
#include <cmath>
#include <complex>
#include <ostream>

#include "error.hpp"

namespace dpw {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I_unit{0.0, 1.0};

/// 2x2 complex matrix stored row-major: [[m00, m01], [m10, m11]].
struct ComplexMatrix2 {
    std::array<cplx, 4> e{};

    constexpr ComplexMatrix2() = default;
    constexpr ComplexMatrix2(cplx m00, cplx m01, cplx m10, cplx m11) : e{m00, m01, m10, m11} {}

    static constexpr ComplexMatrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr ComplexMatrix2 zero() { return {}; }
    static constexpr ComplexMatrix2 diag(cplx d0, cplx d1) { return {d0, 0.0, 0.0, d1}; }

    constexpr cplx& operator()(int i, int j) { return e[2 * i + j]; }
    constexpr const cplx& operator()(int i, int j) const { return e[2 * i + j]; }

    ComplexMatrix2& operator+=(const ComplexMatrix2& o) {
        for (int k = 0; k < 4; ++k) e[k] += o.e[k];
        return *this;
    }
    ComplexMatrix2& operator-=(const ComplexMatrix2& o) {
        for (int k = 0; k < 4; ++k) e[k] -= o.e[k];
        return *this;
    }
    ComplexMatrix2& operator*=(cplx s) {
        for (auto& x : e) x *= s;
        return *this;
    }
};

inline ComplexMatrix2 operator+(ComplexMatrix2 a, const ComplexMatrix2& b) { return a += b; }
inline ComplexMatrix2 operator-(ComplexMatrix2 a, const ComplexMatrix2& b) { return a -= b; }
inline ComplexMatrix2 operator-(ComplexMatrix2 a) { return a *= -1.0; }
inline ComplexMatrix2 operator*(ComplexMatrix2 a, cplx s) { return a *= s; }
inline ComplexMatrix2 operator*(cplx s, ComplexMatrix2 a) { return a *= s; }
inline ComplexMatrix2 operator/(ComplexMatrix2 a, cplx s) { return a *= (1.0 / s); }

inline ComplexMatrix2 operator*(const ComplexMatrix2& a, const ComplexMatrix2& b) {
    return {a.e[0] * b.e[0] + a.e[1] * b.e[2], a.e[0] * b.e[1] + a.e[1] * b.e[3],
            a.e[2] * b.e[0] + a.e[3] * b.e[2], a.e[2] * b.e[1] + a.e[3] * b.e[3]};
}

inline cplx det(const ComplexMatrix2& a) { return a.e[0] * a.e[3] - a.e[1] * a.e[2]; }
inline cplx trace(const ComplexMatrix2& a) { return a.e[0] + a.e[3]; }

inline ComplexMatrix2 inverse(const ComplexMatrix2& a) {
    const cplx d = det(a);
    if (d == 0.0) throw DomainError("inverse of a singular 2x2 matrix");
    return ComplexMatrix2{a.e[3], -a.e[1], -a.e[2], a.e[0]} / d;
}

/// Conjugate transpose.
inline ComplexMatrix2 adjoint(const ComplexMatrix2& a) {
    return {std::conj(a.e[0]), std::conj(a.e[2]), std::conj(a.e[1]), std::conj(a.e[3])};
}

inline ComplexMatrix2 conj(const ComplexMatrix2& a) {
    return {std::conj(a.e[0]), std::conj(a.e[1]), std::conj(a.e[2]), std::conj(a.e[3])};
}

inline ComplexMatrix2 transpose(const ComplexMatrix2& a) { return {a.e[0], a.e[2], a.e[1], a.e[3]}; }

/// Largest entry modulus. This is the norm used for every residual in the library.
inline double norm_inf(const ComplexMatrix2& a) {
    double m = 0.0;
    for (const auto& x : a.e) m = std::max(m, std::abs(x));
    return m;
}

/// Frobenius norm squared.
inline double norm2_sq(const ComplexMatrix2& a) {
    double s = 0.0;
    for (const auto& x : a.e) s += std::norm(x);
    return s;
}

inline bool is_finite(const ComplexMatrix2& a) {
    for (const auto& x : a.e)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
    return true;
}

inline double unitarity_defect(const ComplexMatrix2& a) {
    return norm_inf(a * adjoint(a) - ComplexMatrix2::identity());
}

inline std::ostream& operator<<(std::ostream& os, const ComplexMatrix2& a) {
    return os << "[[" << a.e[0] << ", " << a.e[1] << "], [" << a.e[2] << ", " << a.e[3] << "]]";
}

// Pauli basis. A Hermitian trace-free X equals x1 s1 + x2 s2 + x3 s3 with xi = tr(X si)/2.
inline constexpr ComplexMatrix2 pauli1{0.0, 1.0, 1.0, 0.0};
inline constexpr ComplexMatrix2 pauli2{0.0, cplx{0.0, -1.0}, cplx{0.0, 1.0}, 0.0};
inline constexpr ComplexMatrix2 pauli3{1.0, 0.0, 0.0, -1.0};

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
inline Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
inline Vec3 operator*(Vec3 a, double s) { return a *= s; }
inline Vec3 operator*(double s, Vec3 a) { return a *= s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Coordinates of the Hermitian part of X in the Pauli basis.
inline Vec3 pauli_coordinates(const ComplexMatrix2& x) {
    return {0.5 * trace(x * pauli1).real(), 0.5 * trace(x * pauli2).real(),
            0.5 * trace(x * pauli3).real()};
}

inline ComplexMatrix2 from_pauli(const Vec3& v) {
    return pauli1 * cplx(v.x) + pauli2 * cplx(v.y) + pauli3 * cplx(v.z);
}

} // namespace dpw

#endif // DPW_MATRIX_HPP
