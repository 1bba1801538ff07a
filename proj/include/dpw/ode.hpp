#ifndef DPW_ODE_HPP
#define DPW_ODE_HPP

// Adaptive Dormand-Prince 5(4) integrator for small complex systems y' = f(s, y), s real.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <utility>

#include "error.hpp"

namespace dpw {

struct OdeConfig {
    double rtol = 1e-10;
    double atol = 1e-12;
    /// Smallest admissible step relative to the interval length.
    double min_step = 1e-12;
    std::size_t max_steps = 500000;
};

struct OdeStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

template <std::size_t K>
using ComplexState = std::array<std::complex<double>, K>;

namespace detail {

// Dormand-Prince tableau (Hairer, Norsett, Wanner; DOPRI5).
struct Dopri5 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    // b - bhat (error weights), bhat being the embedded 4th-order solution.
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

template <std::size_t K>
ComplexState<K> axpy(const ComplexState<K>& y, double h,
                     std::initializer_list<std::pair<double, const ComplexState<K>*>> terms) {
    ComplexState<K> out = y;
    for (const auto& [w, k] : terms)
        for (std::size_t i = 0; i < K; ++i) out[i] += (h * w) * (*k)[i];
    return out;
}

} // namespace detail

/// Integrates from s0 to s1 (either direction). `where(s)` maps the integration variable to
/// the complex location reported when the step size underflows.
template <std::size_t K, class Rhs, class Where>
ComplexState<K> integrate_adaptive(Rhs&& rhs, double s0, double s1, ComplexState<K> y,
                                   const OdeConfig& cfg, Where&& where, OdeStats* stats = nullptr) {
    using T = detail::Dopri5;
    const double span = s1 - s0;
    if (span == 0.0) return y;
    const double dir = span > 0 ? 1.0 : -1.0;
    const double length = std::abs(span);
    double h = length / 8.0;
    double s = s0;
    ComplexState<K> k1 = rhs(s, y);
    std::size_t steps = 0;
    while (dir * (s1 - s) > 0.0) {
        if (++steps > cfg.max_steps) throw IntegrationError("step budget exhausted", where(s));
        if (h < cfg.min_step * length) throw IntegrationError("step size underflow", where(s));
        const bool last = h >= dir * (s1 - s);
        const double hs = last ? dir * (s1 - s) : dir * h;

        const auto k2 = rhs(s + T::c2 * hs, detail::axpy<K>(y, hs, {{T::a21, &k1}}));
        const auto k3 = rhs(s + T::c3 * hs, detail::axpy<K>(y, hs, {{T::a31, &k1}, {T::a32, &k2}}));
        const auto k4 = rhs(s + T::c4 * hs,
                            detail::axpy<K>(y, hs, {{T::a41, &k1}, {T::a42, &k2}, {T::a43, &k3}}));
        const auto k5 = rhs(s + T::c5 * hs, detail::axpy<K>(y, hs,
                                                            {{T::a51, &k1}, {T::a52, &k2},
                                                             {T::a53, &k3}, {T::a54, &k4}}));
        const auto k6 = rhs(s + hs, detail::axpy<K>(y, hs,
                                                    {{T::a61, &k1}, {T::a62, &k2}, {T::a63, &k3},
                                                     {T::a64, &k4}, {T::a65, &k5}}));
        const auto y_new = detail::axpy<K>(y, hs,
                                           {{T::b1, &k1}, {T::b3, &k3}, {T::b4, &k4},
                                            {T::b5, &k5}, {T::b6, &k6}});
        const auto k7 = rhs(s + hs, y_new);

        double err = 0.0;
        for (std::size_t i = 0; i < K; ++i) {
            const auto e = hs * (T::e1 * k1[i] + T::e3 * k3[i] + T::e4 * k4[i] + T::e5 * k5[i] +
                                 T::e6 * k6[i] + T::e7 * k7[i]);
            const double scale = cfg.atol + cfg.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            err = std::max(err, std::abs(e) / scale);
        }
        if (!std::isfinite(err)) throw IntegrationError("non-finite state", where(s));

        const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        if (err <= 1.0) {
            s = last ? s1 : s + hs;
            y = y_new;
            k1 = k7; // first-same-as-last
            if (stats) ++stats->accepted;
            h = std::abs(hs) * factor;
        } else {
            if (stats) ++stats->rejected;
            h = std::abs(hs) * std::min(factor, 1.0);
        }
    }
    return y;
}

template <std::size_t K, class Rhs>
ComplexState<K> integrate_adaptive(Rhs&& rhs, double s0, double s1, ComplexState<K> y,
                                   const OdeConfig& cfg, OdeStats* stats = nullptr) {
    return integrate_adaptive<K>(std::forward<Rhs>(rhs), s0, s1, y, cfg,
                                 [](double s) { return std::complex<double>(s, 0.0); }, stats);
}

} // namespace dpw

#endif // DPW_ODE_HPP
