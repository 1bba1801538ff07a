#ifndef DPW_IWASAWA_HPP
#define DPW_IWASAWA_HPP

// Pointwise Iwasawa splitting Phi = F B of a loop sampled on the unit circle:
// F unitary on the circle, B a plus-loop (holomorphic in |lambda| < 1) whose constant
// coefficient is upper triangular with positive diagonal.
//
// With H = Phi^* Phi the plus-loop X = B^-1 solves the Wiener-Hopf system P_+(H X) = C,
// i.e. the block Toeplitz system sum_j H_{k-j} X_j = delta_{k0} C (k >= 0). Its finite section
// is solved with the block Levinson-Whittle recursion, O(n^2) block operations.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "loop.hpp"
#include "matrix.hpp"
#include "parallel.hpp"

namespace dpw {

struct IwasawaConfig {
    /// Truncation degree N: Fourier modes of H beyond +-2N are dropped.
    int degree = default_truncation_degree;
    /// Block rows of the Toeplitz finite section; 0 selects 4N + 2.
    int section_blocks = 0;
    /// Residual tolerance reported through IwasawaPair::within_tolerance.
    double tol = 1e-8;
    /// Unitarity defect beyond which the finite section is declared non-convergent.
    double failure_threshold = 1e-3;
    /// Allowed |det Phi - 1|.
    double det_tol = 1e-8;
};

struct IwasawaResiduals {
    double unitarity = 0.0;
    double plus_loop_tail = 0.0;
    double reconstruction = 0.0;
};

struct IwasawaPair {
    LoopSamples F;
    LoopSamples B;
    IwasawaResiduals residuals;
    bool within_tolerance = true;

    LaurentLoop F_loop(const LambdaGrid& grid, int degree) const { return samples_to_coeffs(F, grid, degree); }
    LaurentLoop B_loop(const LambdaGrid& grid, int degree) const { return samples_to_coeffs(B, grid, degree); }
};

namespace detail {

/// Upper triangular U with positive diagonal and U^* U = V (V Hermitian positive definite).
inline ComplexMatrix2 upper_cholesky(const ComplexMatrix2& V) {
    const double v00 = V(0, 0).real();
    if (!(v00 > 0.0)) throw FactorizationError("Toeplitz section is not positive definite");
    const double u00 = std::sqrt(v00);
    const cplx u01 = V(0, 1) / u00;
    const double rest = V(1, 1).real() - std::norm(u01);
    if (!(rest > 0.0)) throw FactorizationError("Toeplitz section is not positive definite");
    return {u00, u01, 0.0, std::sqrt(rest)};
}

/// Principal square root of a Hermitian positive definite 2x2 matrix.
inline ComplexMatrix2 hermitian_sqrt(const ComplexMatrix2& S) {
    const double s = std::sqrt(std::max(det(S).real(), 0.0));
    const double t = std::sqrt(trace(S).real() + 2.0 * s);
    return (S + ComplexMatrix2::identity() * s) / t;
}

/// Unitary factor of the polar decomposition X = U P.
inline ComplexMatrix2 polar_unitary(const ComplexMatrix2& X) {
    return X * inverse(hermitian_sqrt(adjoint(X) * X));
}

} // namespace detail

inline IwasawaPair iwasawa_factor(std::span<const ComplexMatrix2> phi, const LambdaGrid& grid,
                                  const IwasawaConfig& cfg = {}) {
    const std::size_t m = grid.size();
    if (phi.size() != m) throw GridError("frame samples do not match the lambda grid");
    if (cfg.degree <= 0) throw GridError("truncation degree must be positive");
    for (std::size_t j = 0; j < m; ++j)
        if (std::abs(det(phi[j]) - 1.0) > cfg.det_tol)
            throw FactorizationError("frame is not in SL2 (|det - 1| too large); renormalize first");

    LoopSamples H(m);
    for (std::size_t j = 0; j < m; ++j) H[j] = adjoint(phi[j]) * phi[j];
    const auto Hc = fourier_coefficients(H);
    const int band = std::min(2 * cfg.degree, static_cast<int>(m / 2) - 1);
    auto Hk = [&](int k) -> ComplexMatrix2 {
        if (std::abs(k) > band) return ComplexMatrix2::zero();
        return Hc[static_cast<std::size_t>((k + static_cast<int>(m)) % static_cast<int>(m))];
    };
    const int n = cfg.section_blocks > 0 ? cfg.section_blocks : 4 * cfg.degree + 2;

    // Forward solution a (a_0 = I): sum_j H_{k-j} a_j = 0 for k = 1..s, = Vf for k = 0.
    // Backward solution b (b_s = I): sum_j H_{k-j} b_j = 0 for k = 0..s-1, = Vb for k = s.
    std::vector<ComplexMatrix2> a{ComplexMatrix2::identity()}, b{ComplexMatrix2::identity()};
    a.reserve(n);
    b.reserve(n);
    ComplexMatrix2 Vf = Hk(0), Vb = Hk(0);
    std::vector<ComplexMatrix2> a_next, b_next;
    for (int s = 0; s + 1 < n; ++s) {
        ComplexMatrix2 df = ComplexMatrix2::zero(), db = ComplexMatrix2::zero();
        const int lo = std::max(0, s + 1 - band);
        for (int j = lo; j <= s; ++j) df += Hk(s + 1 - j) * a[j];
        for (int j = 0; j <= std::min(s, band - 1); ++j) db += Hk(-1 - j) * b[j];
        const ComplexMatrix2 Kf = inverse(Vb) * df;
        const ComplexMatrix2 Kb = inverse(Vf) * db;
        a_next.assign(s + 2, ComplexMatrix2::zero());
        b_next.assign(s + 2, ComplexMatrix2::zero());
        for (int j = 0; j <= s; ++j) {
            a_next[j] += a[j];
            a_next[j + 1] -= b[j] * Kf;
            b_next[j + 1] += b[j];
            b_next[j] -= a[j] * Kb;
        }
        Vf = Vf - db * Kf;
        Vb = Vb - df * Kb;
        a.swap(a_next);
        b.swap(b_next);
    }
    // Hermitian part only; the skew part is round-off.
    Vf = (Vf + adjoint(Vf)) * 0.5;
    const ComplexMatrix2 B0 = detail::upper_cholesky(Vf);
    const ComplexMatrix2 B0inv = inverse(B0);

    // a(lambda) on the grid by FFT of its coefficients (degree n-1 may exceed m: fold modulo m).
    LoopSamples A(m, ComplexMatrix2::zero());
    {
        std::vector<cplx> buf(m);
        for (int e = 0; e < 4; ++e) {
            std::fill(buf.begin(), buf.end(), cplx{});
            for (std::size_t j = 0; j < a.size(); ++j) buf[j % m] += a[j].e[e];
            fft_inplace(buf, +1);
            for (std::size_t i = 0; i < m; ++i) A[i].e[e] = buf[i];
        }
    }

    IwasawaPair out;
    out.F.resize(m);
    out.B.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        out.F[j] = phi[j] * A[j] * B0inv;
        out.B[j] = B0 * inverse(A[j]);
    }

    auto& res = out.residuals;
    LoopSamples Bproj(m);
    for (std::size_t j = 0; j < m; ++j) {
        res.unitarity = std::max(res.unitarity, unitarity_defect(out.F[j]));
        res.reconstruction = std::max(res.reconstruction, norm_inf(out.F[j] * out.B[j] - phi[j]));
        Bproj[j] = inverse(detail::polar_unitary(out.F[j])) * phi[j];
    }
    // Negative Fourier modes of B itself and of U^-1 Phi (U the unitary part of F); both vanish
    // for an exact splitting.
    const auto Bc = fourier_coefficients(out.B);
    const auto Pc = fourier_coefficients(Bproj);
    for (std::size_t k = m / 2 + 1; k < m; ++k)
        res.plus_loop_tail = std::max({res.plus_loop_tail, norm_inf(Bc[k]), norm_inf(Pc[k])});

    if (!std::isfinite(res.unitarity) || res.unitarity > cfg.failure_threshold)
        throw FactorizationError("Toeplitz finite section did not converge (unitarity defect " +
                                 std::to_string(res.unitarity) + "); increase the truncation degree N");
    out.within_tolerance = res.unitarity <= cfg.tol && res.plus_loop_tail <= cfg.tol && res.reconstruction <= cfg.tol;
    return out;
}

struct IwasawaNodeFailure {
    std::size_t row;
    std::size_t col;
    std::string message;
};

struct IwasawaGridResult {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::optional<IwasawaPair>> pairs; // row-major, empty on failure
    std::vector<IwasawaNodeFailure> failures;
    IwasawaResiduals max_residuals;

    const IwasawaPair& at(std::size_t r, std::size_t c) const { return *pairs[r * cols + c]; }
};

/// Independent factorization of every node of a rows x cols grid of frames (row-major).
inline IwasawaGridResult iwasawa_grid(const std::vector<LoopSamples>& frames, std::size_t rows, std::size_t cols,
                                      const LambdaGrid& grid, const IwasawaConfig& cfg = {}) {
    if (frames.size() != rows * cols) throw GridError("frame count does not match grid shape");
    IwasawaGridResult out;
    out.rows = rows;
    out.cols = cols;
    out.pairs.resize(frames.size());
    std::vector<std::string> errors(frames.size());
    parallel_for(frames.size(), [&](std::size_t i) {
        try {
            out.pairs[i] = iwasawa_factor(frames[i], grid, cfg);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (!out.pairs[i]) {
            out.failures.push_back({i / cols, i % cols, errors[i]});
            continue;
        }
        const auto& r = out.pairs[i]->residuals;
        out.max_residuals.unitarity = std::max(out.max_residuals.unitarity, r.unitarity);
        out.max_residuals.plus_loop_tail = std::max(out.max_residuals.plus_loop_tail, r.plus_loop_tail);
        out.max_residuals.reconstruction = std::max(out.max_residuals.reconstruction, r.reconstruction);
    }
    return out;
}

} // namespace dpw

#endif // DPW_IWASAWA_HPP
