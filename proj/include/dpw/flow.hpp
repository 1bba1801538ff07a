#ifndef DPW_FLOW_HPP
#define DPW_FLOW_HPP

// Integration of dPhi = Phi xi along paths in the universal cover of C*, parametrized by
// w = log z, and the monodromy of the resulting frames around the puncture z = 0.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "error.hpp"
#include "loop.hpp"
#include "matrix.hpp"
#include "ode.hpp"
#include "parallel.hpp"
#include "potential.hpp"

namespace dpw {

/// Piecewise straight path in the w = log z coordinate. A circle around 0 is the
/// segment w0 -> w0 + 2 pi i; a radial ray keeps Im w fixed.
class PathSpec {
public:
    struct Segment {
        cplx w0;
        cplx w1;
    };

    PathSpec() = default;
    explicit PathSpec(std::vector<Segment> segments) : segments_(std::move(segments)) {
        for (std::size_t i = 1; i < segments_.size(); ++i)
            if (std::abs(segments_[i].w0 - segments_[i - 1].w1) > 1e-14)
                throw DomainError("path segments are not contiguous");
    }

    static PathSpec from_w(cplx w0, cplx w1) { return PathSpec({{w0, w1}}); }

    /// Straight segment in w from log z0 (principal) to log z0 + log(z1/z0) (principal).
    static PathSpec between(cplx z0, cplx z1) {
        if (z0 == 0.0 || z1 == 0.0) throw DomainError("path endpoint at z = 0");
        const cplx w0 = std::log(z0);
        return from_w(w0, w0 + std::log(z1 / z0));
    }

    /// `turns` counterclockwise circles through z0.
    static PathSpec circle(cplx z0, double turns = 1.0) {
        if (z0 == 0.0) throw DomainError("circle through z = 0");
        const cplx w0 = std::log(z0);
        return from_w(w0, w0 + cplx(0.0, 2.0 * pi * turns));
    }

    PathSpec then(cplx w1) const {
        auto segs = segments_;
        segs.push_back({end_w(), w1});
        return PathSpec(std::move(segs));
    }

    PathSpec concat(const PathSpec& other) const {
        auto segs = segments_;
        segs.insert(segs.end(), other.segments_.begin(), other.segments_.end());
        return PathSpec(std::move(segs));
    }

    const std::vector<Segment>& segments() const noexcept { return segments_; }
    cplx start_w() const { return segments_.empty() ? cplx{} : segments_.front().w0; }
    cplx end_w() const { return segments_.empty() ? cplx{} : segments_.back().w1; }
    cplx start_z() const { return std::exp(start_w()); }
    cplx end_z() const { return std::exp(end_w()); }

    /// Throws if some segment passes within `tol` of a nonzero pole (z = 0 is never reached in w).
    void check_avoids(const std::vector<Pole>& poles, double tol = 1e-8) const {
        for (const auto& seg : segments_) {
            for (const auto& p : poles) {
                if (p.z == 0.0) continue;
                auto dist = [&](double s) { return std::abs(std::exp(seg.w0 + (seg.w1 - seg.w0) * s) - p.z); };
                constexpr int n = 256;
                int best = 0;
                for (int i = 1; i <= n; ++i)
                    if (dist(double(i) / n) < dist(double(best) / n)) best = i;
                // Golden-section refinement in the bracket around the closest sample.
                double lo = std::max(0, best - 1) / double(n), hi = std::min(n, best + 1) / double(n);
                const double g = 0.5 * (std::sqrt(5.0) - 1.0);
                for (int it = 0; it < 80; ++it) {
                    const double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
                    if (dist(x1) < dist(x2)) hi = x2;
                    else lo = x1;
                }
                if (dist(0.5 * (lo + hi)) < tol) throw DomainError("path passes through a pole of the potential");
            }
        }
    }

private:
    std::vector<Segment> segments_;
};

struct FlowConfig {
    OdeConfig ode{};
};

/// Frames Phi(lambda_j) at the start of a path and at the end of each of its segments.
struct FrameSolution {
    cplx basepoint;
    std::vector<cplx> w_nodes;
    std::vector<LoopSamples> frames; // frames[i][j]: node i, lambda_j
    std::size_t rejected_steps = 0;

    const LoopSamples& initial() const { return frames.front(); }
    const LoopSamples& final() const { return frames.back(); }
};

inline LoopSamples identity_samples(const LambdaGrid& grid) {
    return LoopSamples(grid.size(), ComplexMatrix2::identity());
}

namespace detail {

inline ComplexState<4> to_state(const ComplexMatrix2& m) { return {m.e[0], m.e[1], m.e[2], m.e[3]}; }
inline ComplexMatrix2 from_state(const ComplexState<4>& s) { return {s[0], s[1], s[2], s[3]}; }

/// dPhi/ds along w(s) = w0 + s (w1 - w0): Phi xi(e^w, lambda) e^w (w1 - w0).
inline ComplexMatrix2 integrate_segment(const PotentialSpec& xi, cplx lambda, cplx w0, cplx w1,
                                        const ComplexMatrix2& phi0, const OdeConfig& cfg, OdeStats* stats) {
    const cplx dw = w1 - w0;
    auto rhs = [&](double s, const ComplexState<4>& y) {
        const cplx z = std::exp(w0 + s * dw);
        return to_state(from_state(y) * xi.evaluate_unchecked(z, lambda) * (z * dw));
    };
    auto where = [&](double s) { return std::exp(w0 + s * dw); };
    return from_state(integrate_adaptive<4>(rhs, 0.0, 1.0, to_state(phi0), cfg, where, stats));
}

} // namespace detail

/// Solves dPhi = Phi xi independently for every lambda on the grid.
inline FrameSolution integrate_frame(const PotentialSpec& xi, const PathSpec& path,
                                     std::span<const ComplexMatrix2> phi0, const LambdaGrid& grid,
                                     const FlowConfig& cfg = {}) {
    if (phi0.size() != grid.size()) throw GridError("initial frame does not match the lambda grid");
    path.check_avoids(xi.poles());
    const auto& segs = path.segments();
    FrameSolution sol;
    sol.basepoint = path.start_z();
    sol.w_nodes.push_back(path.start_w());
    for (const auto& s : segs) sol.w_nodes.push_back(s.w1);
    sol.frames.assign(segs.size() + 1, LoopSamples(grid.size()));
    std::vector<std::size_t> rejected(grid.size(), 0);
    parallel_for(grid.size(), [&](std::size_t j) {
        OdeStats stats;
        ComplexMatrix2 phi = phi0[j];
        sol.frames[0][j] = phi;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            phi = detail::integrate_segment(xi, grid[j], segs[i].w0, segs[i].w1, phi, cfg.ode, &stats);
            sol.frames[i + 1][j] = phi;
        }
        rejected[j] = stats.rejected;
    });
    for (auto r : rejected) sol.rejected_steps += r;
    return sol;
}

/// Residuals of the closing conditions: M unitary on the circle, M(1) = +-I, dM/dlambda(1) = 0.
struct MonodromyReport {
    double unitarity_error = 0.0;
    double identity_error = 0.0;
    int identity_sign = 1;
    double derivative_error = 0.0;
    double trace_law_error = 0.0;
};

/// Residuals for a monodromy sampled on a grid (lambda_0 = 1).
inline MonodromyReport closing_report(std::span<const ComplexMatrix2> M) {
    MonodromyReport rep;
    rep.unitarity_error = max_unitarity_defect(M);
    const double plus = norm_inf(M[0] - ComplexMatrix2::identity());
    const double minus = norm_inf(M[0] + ComplexMatrix2::identity());
    rep.identity_sign = plus <= minus ? 1 : -1;
    rep.identity_error = std::min(plus, minus);
    rep.derivative_error = norm_inf(spectral_derivative_at_one(M));
    return rep;
}

struct MonodromyResult {
    LoopSamples M;
    MonodromyReport report;
};

/// M = (tau* Phi) Phi^-1 for the counterclockwise loop |z| = 1 based at z0 = 1.
inline MonodromyResult monodromy(const PotentialSpec& xi, const LambdaGrid& grid, const FlowConfig& cfg = {},
                                 std::optional<LoopSamples> phi0 = std::nullopt) {
    const LoopSamples start = phi0 ? *phi0 : identity_samples(grid);
    const auto sol = integrate_frame(xi, PathSpec::circle(1.0), start, grid, cfg);
    MonodromyResult out;
    out.M.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) out.M[j] = sol.final()[j] * inverse(start[j]);
    out.report = closing_report(out.M);
    return out;
}

/// exp(2 pi i A(lambda)) = cos(2 pi mu) I + i sin(2 pi mu)/mu A, using A^2 = mu^2 I.
/// Note the factor i on the second term; as printed without it the matrix would not be exp(2 pi i A).
inline ComplexMatrix2 exp_delaunay_monodromy(const DelaunayResidue& res, cplx lambda) {
    const ComplexMatrix2 A = res(lambda);
    const cplx mu = mu_eigenvalue(res, lambda);
    const cplx x = 2.0 * pi * mu;
    // sin(x)/mu = 2 pi sin(x)/x; series below |x| = 1e-3 keeps full precision through mu -> 0.
    const cplx sinc = std::abs(x) < 1e-3 ? 1.0 - x * x / 6.0 + x * x * x * x / 120.0 : std::sin(x) / x;
    return ComplexMatrix2::identity() * std::cos(x) + A * (I_unit * 2.0 * pi * sinc);
}

/// max_j |tr M(lambda_j) + sign_flip * 2 cos(2 pi mu(lambda_j))| with sign_flip = +1 the
/// convention for the cylinder: the gauge g1c = diag(z^{1/2}, z^{-1/2}) changes sign under the
/// deck transformation, so the monodromy of xi_c is minus the one of its Delaunay-type gauge.
inline double trace_law_residual(std::span<const ComplexMatrix2> M, const DelaunayResidue& res,
                                 const LambdaGrid& grid, double sign_flip = 1.0) {
    double err = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j)
        err = std::max(err, std::abs(trace(M[j]) + sign_flip * 2.0 * std::cos(2.0 * pi * mu_eigenvalue(res, grid[j]))));
    return err;
}

inline double trace_law_check(const PotentialSpec& xi_c, const DelaunayResidue& res, const LambdaGrid& grid,
                              const FlowConfig& cfg = {}) {
    return trace_law_residual(monodromy(xi_c, grid, cfg).M, res, grid);
}

/// Real positive diagonal gauge D = diag(d, 1/d) making D M D^-1 unitary on the circle:
/// d^4 = -m21 / conj(m12). Samples where M = I to working precision (lambda = 1 for the cylinder)
/// leave d undetermined; they are filled by requiring the Nyquist mode of d to vanish.
struct Unitarizer {
    LoopSamples D;
    double structure_defect = 0.0; // largest |Im d^4| / |d^4| encountered
};

inline Unitarizer diagonal_unitarizer(std::span<const ComplexMatrix2> M, double degenerate_tol = 1e-10) {
    const std::size_t m = M.size();
    std::vector<double> d(m, 0.0);
    std::vector<std::size_t> undetermined;
    Unitarizer out;
    for (std::size_t j = 0; j < m; ++j) {
        const cplx m12 = M[j](0, 1);
        const cplx m21 = M[j](1, 0);
        if (std::abs(m12) < degenerate_tol && std::abs(m21) < degenerate_tol) {
            undetermined.push_back(j);
            continue;
        }
        if (std::abs(m12) < degenerate_tol || std::abs(m21) < degenerate_tol)
            throw FactorizationError("monodromy has a single vanishing off-diagonal entry; no diagonal unitarizer");
        const cplx q = -m21 / std::conj(m12);
        if (q.real() <= 0.0)
            throw FactorizationError("monodromy is not unitarizable by a real diagonal gauge at lambda index " +
                                     std::to_string(j));
        out.structure_defect = std::max(out.structure_defect, std::abs(q.imag()) / std::abs(q));
        d[j] = std::pow(q.real(), 0.25);
    }
    if (undetermined.size() == m) {
        std::fill(d.begin(), d.end(), 1.0);
    } else if (undetermined.size() == 1) {
        const std::size_t j0 = undetermined.front();
        double alt = 0.0;
        for (std::size_t j = 0; j < m; ++j)
            if (j != j0) alt += (j % 2 == 0 ? 1.0 : -1.0) * d[j];
        d[j0] = (j0 % 2 == 0 ? -1.0 : 1.0) * alt;
    } else if (!undetermined.empty()) {
        throw FactorizationError("monodromy degenerate at more than one lambda sample");
    }
    out.D.resize(m);
    for (std::size_t j = 0; j < m; ++j) out.D[j] = ComplexMatrix2::diag(d[j], 1.0 / d[j]);
    return out;
}

/// D M D^-1 samplewise.
inline LoopSamples conjugate_samples(std::span<const ComplexMatrix2> D, std::span<const ComplexMatrix2> M) {
    LoopSamples out(M.size());
    for (std::size_t j = 0; j < M.size(); ++j) out[j] = D[j] * M[j] * inverse(D[j]);
    return out;
}

} // namespace dpw

#endif // DPW_FLOW_HPP
