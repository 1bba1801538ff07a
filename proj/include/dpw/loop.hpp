#ifndef DPW_LOOP_HPP
#define DPW_LOOP_HPP

// Loops lambda -> X(lambda) with values in 2x2 complex matrices, in two representations:
// truncated Laurent coefficients (LaurentLoop) and samples on the unit circle (LambdaGrid).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "error.hpp"
#include "fft.hpp"
#include "matrix.hpp"

namespace dpw {

inline constexpr int default_truncation_degree = 32;
inline constexpr double default_tail_tolerance = 1e-12;

/// Roots of unity lambda_j = exp(2 pi i j / m); lambda_0 = 1 is the Sym point.
class LambdaGrid {
public:
    explicit LambdaGrid(std::size_t m) : points_(m) {
        if (m < 2 || !is_power_of_two(m))
            throw GridError("lambda grid size must be a power of two >= 2");
        for (std::size_t j = 0; j < m; ++j)
            points_[j] = std::polar(1.0, 2.0 * pi * static_cast<double>(j) / static_cast<double>(m));
        points_[0] = 1.0;
    }

    std::size_t size() const noexcept { return points_.size(); }
    cplx operator[](std::size_t j) const { return points_[j]; }
    std::span<const cplx> points() const noexcept { return points_; }

    /// Largest Laurent degree N the grid resolves without aliasing (m >= 2N + 2).
    int max_degree() const noexcept { return static_cast<int>(size() / 2) - 1; }

private:
    std::vector<cplx> points_;
};

/// Values of a loop on a LambdaGrid, index-aligned with the grid points.
using LoopSamples = std::vector<ComplexMatrix2>;

class LaurentLoop {
public:
    LaurentLoop() : LaurentLoop(0, {ComplexMatrix2::zero()}) {}

    /// Coefficients for exponents lo, lo+1, ...; exponents outside [-degree, degree] are
    /// dropped and their largest norm recorded in discarded_mass().
    LaurentLoop(int lo, std::vector<ComplexMatrix2> coeffs, int degree = default_truncation_degree)
        : degree_(degree) {
        if (degree <= 0) throw DomainError("truncation degree must be positive");
        int first = std::max(lo, -degree);
        int last = std::min(lo + static_cast<int>(coeffs.size()) - 1, degree);
        for (int k = lo; k < lo + static_cast<int>(coeffs.size()); ++k)
            if (k < first || k > last) discarded_ = std::max(discarded_, norm_inf(coeffs[k - lo]));
        if (first > last) {
            lo_ = 0;
            coeffs_ = {ComplexMatrix2::zero()};
            return;
        }
        lo_ = first;
        coeffs_.assign(coeffs.begin() + (first - lo), coeffs.begin() + (last - lo + 1));
    }

    static LaurentLoop constant(const ComplexMatrix2& c, int degree = default_truncation_degree) {
        return LaurentLoop(0, {c}, degree);
    }
    static LaurentLoop monomial(const ComplexMatrix2& c, int k, int degree = default_truncation_degree) {
        return LaurentLoop(k, {c}, degree);
    }

    int lo() const noexcept { return lo_; }
    int hi() const noexcept { return lo_ + static_cast<int>(coeffs_.size()) - 1; }
    int degree() const noexcept { return degree_; }
    double discarded_mass() const noexcept { return discarded_; }
    const std::vector<ComplexMatrix2>& coefficients() const noexcept { return coeffs_; }

    ComplexMatrix2 coeff(int k) const {
        if (k < lo() || k > hi()) return ComplexMatrix2::zero();
        return coeffs_[k - lo_];
    }

    ComplexMatrix2 operator()(cplx lambda) const {
        if (lambda == 0.0 && lo_ < 0) throw DomainError("loop with negative powers evaluated at lambda = 0");
        // Horner in lambda over the nonnegative part, then in 1/lambda over the negative part.
        ComplexMatrix2 pos = ComplexMatrix2::zero();
        for (int k = hi(); k >= std::max(lo_, 0); --k) pos = pos * lambda + coeff(k);
        ComplexMatrix2 neg = ComplexMatrix2::zero();
        if (lo_ < 0) {
            const cplx inv = 1.0 / lambda;
            for (int k = lo_; k <= std::min(hi(), -1); ++k) neg = (neg + coeff(k)) * inv;
            if (hi() < -1) neg = neg * std::pow(inv, -hi() - 1);
        }
        if (lo_ > 0) pos = pos * std::pow(lambda, lo_);
        return pos + neg;
    }

private:
    int lo_ = 0;
    std::vector<ComplexMatrix2> coeffs_;
    int degree_ = default_truncation_degree;
    double discarded_ = 0.0;
};

inline ComplexMatrix2 loop_eval(const LaurentLoop& x, cplx lambda) { return x(lambda); }

struct LoopProduct {
    LaurentLoop loop;
    double discarded = 0.0;
    bool overflow = false;
};

/// Cauchy product truncated to +-max(degree); overflow flags discarded mass above tail_tol.
inline LoopProduct loop_mul(const LaurentLoop& x, const LaurentLoop& y,
                            double tail_tol = default_tail_tolerance) {
    const int lo = x.lo() + y.lo();
    const int hi = x.hi() + y.hi();
    std::vector<ComplexMatrix2> c(static_cast<std::size_t>(hi - lo + 1));
    for (int i = x.lo(); i <= x.hi(); ++i)
        for (int j = y.lo(); j <= y.hi(); ++j) c[i + j - lo] += x.coeff(i) * y.coeff(j);
    LaurentLoop out(lo, std::move(c), std::max(x.degree(), y.degree()));
    const double discarded = out.discarded_mass();
    return {std::move(out), discarded, discarded > tail_tol};
}

/// x*(lambda) = adjoint(x(1/conj(lambda))); coefficientwise (x*)_k = adjoint(x_{-k}).
inline LaurentLoop loop_star(const LaurentLoop& x) {
    std::vector<ComplexMatrix2> c;
    c.reserve(x.coefficients().size());
    for (int k = -x.hi(); k <= -x.lo(); ++k) c.push_back(adjoint(x.coeff(-k)));
    return LaurentLoop(-x.hi(), std::move(c), x.degree());
}

/// All m Fourier coefficients of sampled data, c_k for k = 0..m-1 taken mod m.
inline LoopSamples fourier_coefficients(std::span<const ComplexMatrix2> values) {
    const std::size_t m = values.size();
    if (!is_power_of_two(m)) throw GridError("sample count must be a power of two");
    LoopSamples out(m);
    std::vector<cplx> buf(m);
    for (int e = 0; e < 4; ++e) {
        for (std::size_t j = 0; j < m; ++j) buf[j] = values[j].e[e];
        fft_inplace(buf, -1);
        for (std::size_t k = 0; k < m; ++k) out[k].e[e] = buf[k] / static_cast<double>(m);
    }
    return out;
}

/// Signed exponent of Fourier slot k on an m-point grid, in [-m/2, m/2).
inline int signed_exponent(std::size_t k, std::size_t m) {
    return k < m / 2 ? static_cast<int>(k) : static_cast<int>(k) - static_cast<int>(m);
}

/// Coefficients -degree..degree of sampled data; higher modes are reported as discarded mass.
inline LaurentLoop samples_to_coeffs(std::span<const ComplexMatrix2> values, const LambdaGrid& grid,
                                     int degree = default_truncation_degree) {
    if (values.size() != grid.size()) throw GridError("sample count does not match grid");
    if (grid.size() < static_cast<std::size_t>(2 * degree + 2))
        throw GridError("lambda grid too small for the requested degree (need m >= 2N+2)");
    const std::size_t m = grid.size();
    const auto all = fourier_coefficients(values);
    const int half = static_cast<int>(m / 2);
    std::vector<ComplexMatrix2> c(m);
    for (std::size_t k = 0; k < m; ++k) c[signed_exponent(k, m) + half] = all[k];
    return LaurentLoop(-half, std::move(c), degree);
}

inline LoopSamples coeffs_to_samples(const LaurentLoop& x, const LambdaGrid& grid) {
    const std::size_t m = grid.size();
    if (std::max(-x.lo(), x.hi()) >= static_cast<int>(m / 2))
        throw GridError("loop degree too large for the lambda grid (need m >= 2N+2)");
    LoopSamples out(m);
    std::vector<cplx> buf(m);
    for (int e = 0; e < 4; ++e) {
        std::fill(buf.begin(), buf.end(), cplx{});
        for (int k = x.lo(); k <= x.hi(); ++k)
            buf[static_cast<std::size_t>((k % static_cast<int>(m) + static_cast<int>(m)) % static_cast<int>(m))] =
                x.coeff(k).e[e];
        fft_inplace(buf, +1);
        for (std::size_t j = 0; j < m; ++j) out[j].e[e] = buf[j];
    }
    return out;
}

/// d/dlambda of sampled data at every grid point, by spectral differentiation.
/// The Nyquist mode has no unique derivative and is dropped.
inline LoopSamples spectral_derivative(std::span<const ComplexMatrix2> values, const LambdaGrid& grid) {
    const std::size_t m = grid.size();
    if (values.size() != m) throw GridError("sample count does not match grid");
    auto c = fourier_coefficients(values);
    for (std::size_t k = 0; k < m; ++k) {
        const int n = signed_exponent(k, m);
        c[k] = (n == -static_cast<int>(m / 2)) ? ComplexMatrix2::zero() : c[k] * cplx(n);
    }
    // sum_k k c_k lambda^k, then divide by lambda.
    LoopSamples out(m);
    std::vector<cplx> buf(m);
    for (int e = 0; e < 4; ++e) {
        for (std::size_t k = 0; k < m; ++k) buf[k] = c[k].e[e];
        fft_inplace(buf, +1);
        for (std::size_t j = 0; j < m; ++j) out[j].e[e] = buf[j] / grid[j];
    }
    return out;
}

/// d/dlambda at lambda = 1 only: sum_k k c_k.
inline ComplexMatrix2 spectral_derivative_at_one(std::span<const ComplexMatrix2> values) {
    const std::size_t m = values.size();
    const auto c = fourier_coefficients(values);
    ComplexMatrix2 d = ComplexMatrix2::zero();
    for (std::size_t k = 0; k < m; ++k) {
        const int n = signed_exponent(k, m);
        if (n != -static_cast<int>(m / 2)) d += c[k] * cplx(n);
    }
    return d;
}

/// Pointwise product of sampled loops.
inline LoopSamples pointwise_product(std::span<const ComplexMatrix2> x, std::span<const ComplexMatrix2> y) {
    if (x.size() != y.size()) throw GridError("sample count mismatch");
    LoopSamples out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = x[j] * y[j];
    return out;
}

/// max_j |X_j X_j^* - I|
inline double max_unitarity_defect(std::span<const ComplexMatrix2> x) {
    double e = 0.0;
    for (const auto& v : x) e = std::max(e, unitarity_defect(v));
    return e;
}

} // namespace dpw

#endif // DPW_LOOP_HPP
