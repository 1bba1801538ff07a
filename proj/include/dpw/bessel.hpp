#ifndef DPW_BESSEL_HPP
#define DPW_BESSEL_HPP

// Scalar Bessel equation z^2 y'' + z y' + (z^2 - alpha^2) y = 0 as an independent check on
// the matrix flow of the Bessel potential.

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "error.hpp"
#include "flow.hpp"
#include "matrix.hpp"
#include "ode.hpp"

namespace dpw {

struct ScalarSolution {
    cplx y;
    cplx dy;
    cplx alpha;
    cplx z;
    std::size_t segments = 0;
    std::size_t rejected_steps = 0;
};

/// Second derivative implied by the Bessel equation at (z, y, y').
inline cplx bessel_second_derivative(cplx alpha, cplx z, cplx y, cplx dy) {
    return -dy / z - (1.0 - alpha * alpha / (z * z)) * y;
}

/// Integrates the first-order system (y, y') along the path. In w = log z:
/// dy/dw = z y', dy'/dw = z y''.
inline ScalarSolution bessel_integrate(cplx alpha, const PathSpec& path, cplx y0, cplx dy0,
                                       const OdeConfig& cfg = {}) {
    ScalarSolution sol{y0, dy0, alpha, path.start_z()};
    OdeStats stats;
    for (const auto& seg : path.segments()) {
        const cplx dw = seg.w1 - seg.w0;
        auto rhs = [&](double s, const ComplexState<2>& st) {
            const cplx z = std::exp(seg.w0 + s * dw);
            return ComplexState<2>{z * st[1] * dw, z * bessel_second_derivative(alpha, z, st[0], st[1]) * dw};
        };
        auto where = [&](double s) { return std::exp(seg.w0 + s * dw); };
        const auto end = integrate_adaptive<2>(rhs, 0.0, 1.0, ComplexState<2>{sol.y, sol.dy}, cfg, where, &stats);
        sol.y = end[0];
        sol.dy = end[1];
        ++sol.segments;
    }
    sol.z = path.end_z();
    sol.rejected_steps = stats.rejected;
    return sol;
}

/// sqrt(2 / (pi z)) sin z, the alpha = 1/2 solution, with its derivative.
struct ClosedFormValue {
    cplx y;
    cplx dy;
};

inline ClosedFormValue half_integer_closed_form(cplx z) {
    const cplx s = std::sqrt(2.0 / (pi * z));
    return {s * std::sin(z), s * (std::cos(z) - std::sin(z) / (2.0 * z))};
}

/// Taylor coefficients c_n of the solution about z0 with y(z0) = y0, y'(z0) = dy0.
inline std::vector<cplx> bessel_taylor_coefficients(cplx alpha, cplx z0, cplx y0, cplx dy0, int degree) {
    if (z0 == 0.0) throw DomainError("Taylor expansion about the singular point z = 0");
    std::vector<cplx> c(static_cast<std::size_t>(std::max(degree, 1)) + 1, 0.0);
    c[0] = y0;
    c[1] = dy0;
    const cplx a2 = alpha * alpha;
    for (int n = 0; n + 2 <= degree; ++n) {
        const double nd = n;
        cplx s = (2.0 * z0 * nd * (nd + 1.0) + z0 * (nd + 1.0)) * c[n + 1] + (nd * nd + z0 * z0 - a2) * c[n];
        if (n >= 1) s += 2.0 * z0 * c[n - 1];
        if (n >= 2) s += c[n - 2];
        c[n + 2] = -s / (z0 * z0 * (nd + 2.0) * (nd + 1.0));
    }
    c.resize(static_cast<std::size_t>(degree) + 1);
    return c;
}

inline ClosedFormValue bessel_taylor_eval(std::span<const cplx> c, cplx z0, cplx z) {
    const cplx h = z - z0;
    cplx y = 0.0, dy = 0.0;
    for (std::size_t n = c.size(); n-- > 0;) {
        y = y * h + c[n];
        if (n >= 1) dy = dy * h + static_cast<double>(n) * c[n];
    }
    return {y, dy};
}

/// [[y1'/nu, y1], [y2'/nu, y2]] at the common endpoint. Throws when the pair is not a
/// fundamental system (|y1' y2 - y2' y1| < 1e-12).
inline ComplexMatrix2 frame_from_scalar(const ScalarSolution& y1, const ScalarSolution& y2,
                                        const std::function<cplx(cplx)>& nu) {
    if (std::abs(y1.z - y2.z) > 1e-12 * std::max(1.0, std::abs(y1.z)))
        throw DomainError("scalar solutions evaluated at different points");
    if (y1.alpha != y2.alpha) throw DomainError("scalar solutions of different order");
    const cplx wronskian = y1.dy * y2.y - y2.dy * y1.y;
    if (std::abs(wronskian) < 1e-12) throw DomainError("scalar solutions are not a fundamental system");
    const cplx n = nu(y1.z);
    return {y1.dy / n, y1.y, y2.dy / n, y2.y};
}

/// Coefficients of the Bessel potential in the generic (nu, rho) form: nu = 1/z, rho = -z + alpha^2/z.
struct BesselCoefficients {
    cplx alpha;
    cplx nu(cplx z) const { return 1.0 / z; }
    cplx dnu(cplx z) const { return -1.0 / (z * z); }
    cplx rho(cplx z) const { return -z + alpha * alpha / z; }
};

struct Jet {
    cplx y;
    cplx dy;
    cplx d2y;
};

/// y'' - (nu'/nu) y' - rho nu y for a 2-jet at z.
inline cplx scalar_residual(const std::function<cplx(cplx)>& nu, const std::function<cplx(cplx)>& dnu,
                            const std::function<cplx(cplx)>& rho, const Jet& jet, cplx z) {
    const cplx n = nu(z);
    if (n == 0.0 || !std::isfinite(std::abs(n))) throw DomainError("residual evaluated at a zero or pole of nu");
    return jet.d2y - dnu(z) / n * jet.dy - rho(z) * n * jet.y;
}

/// Residual of a computed solution against the generic equation for the Bessel coefficients,
/// with y'' taken from the integrated system's right-hand side at the endpoint.
inline cplx scalar_residual(const ScalarSolution& s) {
    const BesselCoefficients bc{s.alpha};
    const Jet jet{s.y, s.dy, bessel_second_derivative(s.alpha, s.z, s.y, s.dy)};
    return scalar_residual([&](cplx z) { return bc.nu(z); }, [&](cplx z) { return bc.dnu(z); },
                           [&](cplx z) { return bc.rho(z); }, jet, s.z);
}

/// Trace of the monodromy of a fundamental pair continued once counterclockwise around 0
/// from z0 (rows (y_i, y_i') start as the identity).
inline cplx scalar_monodromy_trace(cplx alpha, cplx z0 = 1.0, const OdeConfig& cfg = {}) {
    const auto path = PathSpec::circle(z0);
    const auto y1 = bessel_integrate(alpha, path, 1.0, 0.0, cfg);
    const auto y2 = bessel_integrate(alpha, path, 0.0, 1.0, cfg);
    return y1.y + y2.dy;
}

} // namespace dpw

#endif // DPW_BESSEL_HPP
