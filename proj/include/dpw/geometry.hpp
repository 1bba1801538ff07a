#ifndef DPW_GEOMETRY_HPP
#define DPW_GEOMETRY_HPP

// Small dense helpers for 3x3 symmetric eigenproblems (plane and axis fits).

#include <array>
#include <cmath>
#include <utility>

#include "matrix.hpp"

namespace dpw {

using Sym3 = std::array<std::array<double, 3>, 3>;

struct Eigen3 {
    std::array<double, 3> values;  // ascending
    std::array<Vec3, 3> vectors;   // unit, matching values
};

/// Cyclic Jacobi rotations; exact enough for scatter matrices of a few thousand points.
inline Eigen3 symmetric_eigen(Sym3 a) {
    Sym3 v{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    for (int sweep = 0; sweep < 64; ++sweep) {
        const double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        if (off < 1e-30 * (a[0][0] * a[0][0] + a[1][1] * a[1][1] + a[2][2] * a[2][2]) || off == 0.0) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (int k = 0; k < 3; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (int k = 0; k < 3; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    std::array<int, 3> idx{0, 1, 2};
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (a[idx[j]][idx[j]] < a[idx[i]][idx[i]]) std::swap(idx[i], idx[j]);
    Eigen3 out;
    for (int i = 0; i < 3; ++i) {
        out.values[i] = a[idx[i]][idx[i]];
        out.vectors[i] = {v[0][idx[i]], v[1][idx[i]], v[2][idx[i]]};
    }
    return out;
}

inline void add_outer(Sym3& s, const Vec3& d, double w = 1.0) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s[i][j] += w * d[i] * d[j];
}

inline Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    return n > 0.0 ? v * (1.0 / n) : v;
}

} // namespace dpw

#endif // DPW_GEOMETRY_HPP
