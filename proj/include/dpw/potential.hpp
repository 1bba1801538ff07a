#ifndef DPW_POTENTIAL_HPP
#define DPW_POTENTIAL_HPP

// Holomorphic potentials xi = X(z, lambda) dz, the gauge action xi.g = g^-1 xi g + g^-1 dg,
// and the specific potentials and gauges of the Bessel cylinder construction.

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "loop.hpp"
#include "matrix.hpp"

namespace dpw {

struct Pole {
    cplx z;
    int order;
};

/// Variable whose principal square root a gauge uses; its negative real ray is excluded.
enum class BranchCut { none, z, lambda };

namespace detail {
inline bool on_negative_real_axis(cplx v) { return v.imag() == 0.0 && v.real() < 0.0; }

inline void check_branch(BranchCut cut, cplx z, cplx lambda) {
    if (cut == BranchCut::z && on_negative_real_axis(z))
        throw DomainError("evaluation on the branch cut z in (-inf, 0]");
    if (cut == BranchCut::lambda && on_negative_real_axis(lambda))
        throw DomainError("evaluation on the branch cut lambda in (-inf, 0]");
}
} // namespace detail

/// Coefficient X(z, lambda) of dz of an sl2-valued meromorphic 1-form.
class PotentialSpec {
public:
    using Evaluator = std::function<ComplexMatrix2(cplx z, cplx lambda)>;

    PotentialSpec(Evaluator fn, std::vector<Pole> poles, std::string description,
                  std::vector<BranchCut> cuts = {})
        : fn_(std::move(fn)), poles_(std::move(poles)), description_(std::move(description)),
          cuts_(std::move(cuts)) {}

    ComplexMatrix2 evaluate(cplx z, cplx lambda) const {
        for (const auto& p : poles_)
            if (std::abs(z - p.z) <= 1e-300) throw DomainError("potential evaluated at a pole: " + description_);
        for (auto cut : cuts_) detail::check_branch(cut, z, lambda);
        return fn_(z, lambda);
    }
    ComplexMatrix2 operator()(cplx z, cplx lambda) const { return evaluate(z, lambda); }

    /// Evaluation without pole/branch checks, for inner integration loops whose paths were
    /// validated up front.
    ComplexMatrix2 evaluate_unchecked(cplx z, cplx lambda) const { return fn_(z, lambda); }

    const std::vector<Pole>& poles() const noexcept { return poles_; }
    const std::vector<BranchCut>& branch_cuts() const noexcept { return cuts_; }
    const std::string& description() const noexcept { return description_; }

private:
    Evaluator fn_;
    std::vector<Pole> poles_;
    std::string description_;
    std::vector<BranchCut> cuts_;
};

/// Cylinder parameter r in (-inf, 1) minus {0}.
class CylinderParams {
public:
    explicit CylinderParams(double r) : r_(r) {
        if (!std::isfinite(r) || r >= 1.0 || r == 0.0)
            throw DomainError("r must lie in (-inf, 1) \\ {0}, got " + std::to_string(r));
    }
    double r() const noexcept { return r_; }

private:
    double r_;
};

/// Off-diagonal Delaunay residue A = [[c, a/lambda + b], [a lambda + b, -c]] with real a, b.
struct DelaunayResidue {
    double a = 0.25;
    double b = 0.25;
    double c = 0.0;

    /// Validated constructor: finite entries and the closing condition a + b = 1/2.
    static DelaunayResidue make(double a, double b, double c = 0.0) {
        if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
            throw DomainError("Delaunay residue entries must be finite");
        if (std::abs(a + b - 0.5) > 1e-14) throw DomainError("Delaunay residue violates a + b = 1/2");
        return {a, b, c};
    }

    ComplexMatrix2 operator()(cplx lambda) const {
        if (lambda == 0.0) throw DomainError("Delaunay residue evaluated at lambda = 0");
        return {c, a / lambda + b, a * lambda + b, -c};
    }

    LaurentLoop as_loop(int degree = default_truncation_degree) const {
        return LaurentLoop(-1, {ComplexMatrix2{0.0, a, 0.0, 0.0}, ComplexMatrix2{c, b, b, -c},
                                ComplexMatrix2{0.0, 0.0, a, 0.0}},
                           degree);
    }
};

/// Spectral-parameter polynomial t = -(lambda - 1)^2 / (4 lambda); real in [0, 1] on the circle.
inline cplx cylinder_t(cplx lambda) { return -0.25 * (lambda - 1.0) * (lambda - 1.0) / lambda; }

inline PotentialSpec make_bessel_potential(cplx alpha) {
    const cplx a2 = alpha * alpha;
    return PotentialSpec(
        [a2](cplx z, cplx) { return ComplexMatrix2{0.0, 1.0 / z, -z + a2 / z, 0.0}; }, {{0.0, 1}},
        "bessel(alpha=" + std::to_string(alpha.real()) + "+" + std::to_string(alpha.imag()) + "i)");
}

/// Bessel potential whose order depends on lambda, alpha(lambda)^2 given directly.
inline PotentialSpec make_bessel_potential(std::function<cplx(cplx)> alpha_squared, std::string label) {
    return PotentialSpec(
        [a2 = std::move(alpha_squared)](cplx z, cplx lambda) {
            return ComplexMatrix2{0.0, 1.0 / z, -z + a2(lambda) / z, 0.0};
        },
        {{0.0, 1}}, std::move(label));
}

/// Exact Laurent coefficients in lambda of the cylinder potential at fixed z:
/// upper right lambda^-1; lower left lambda Q_t = r/(16 z^2) (lambda^2 - 2 lambda + 1) - lambda.
inline LaurentLoop cylinder_potential_loop(const CylinderParams& p, cplx z,
                                           int degree = default_truncation_degree) {
    if (z == 0.0) throw DomainError("cylinder potential evaluated at its pole z = 0");
    const cplx s = p.r() / (16.0 * z * z);
    return LaurentLoop(-1,
                       {ComplexMatrix2{0.0, 1.0, 0.0, 0.0}, ComplexMatrix2{0.0, 0.0, s, 0.0},
                        ComplexMatrix2{0.0, 0.0, -2.0 * s - 1.0, 0.0}, ComplexMatrix2{0.0, 0.0, s, 0.0}},
                       degree);
}

inline PotentialSpec make_cylinder_potential(const CylinderParams& p) {
    const double r = p.r();
    return PotentialSpec(
        [r](cplx z, cplx lambda) {
            const cplx s = r / (16.0 * z * z);
            const cplx lower = s * (lambda - 1.0) * (lambda - 1.0) - lambda;
            return ComplexMatrix2{0.0, 1.0 / lambda, lower, 0.0};
        },
        {{0.0, 2}}, "cylinder(r=" + std::to_string(r) + ")");
}

/// xi = A(lambda) dz / z.
inline PotentialSpec make_delaunay_potential(const DelaunayResidue& res) {
    return PotentialSpec([res](cplx z, cplx lambda) { return res(lambda) / z; }, {{0.0, 1}},
                         "delaunay(a=" + std::to_string(res.a) + ",b=" + std::to_string(res.b) + ")");
}

inline PotentialSpec make_zero_potential() {
    return PotentialSpec([](cplx, cplx) { return ComplexMatrix2::zero(); }, {}, "zero");
}

struct DelaunayWeights {
    double a;
    double b;
};

/// Residue weights of the cylinder's regular end: a = (1 + sqrt(1-r))/4, b = (1 - sqrt(1-r))/4.
inline DelaunayWeights delaunay_ab(const CylinderParams& p) {
    const double s = std::sqrt(1.0 - p.r());
    return {0.25 * (1.0 + s), 0.25 * (1.0 - s)};
}

inline DelaunayResidue delaunay_residue(const CylinderParams& p) {
    const auto [a, b] = delaunay_ab(p);
    return DelaunayResidue{a, b, 0.0};
}

/// mu^2 = c^2 + a^2 + b^2 + ab (1/lambda + lambda), minus the determinant of A.
inline cplx mu_squared(const DelaunayResidue& res, cplx lambda) {
    if (lambda == 0.0) throw DomainError("mu evaluated at lambda = 0");
    return res.c * res.c + res.a * res.a + res.b * res.b + res.a * res.b * (1.0 / lambda + lambda);
}

/// Eigenvalue mu of A with Re mu >= 0, and Im mu >= 0 when mu is purely imaginary.
inline cplx mu_eigenvalue(const DelaunayResidue& res, cplx lambda) {
    cplx mu = std::sqrt(mu_squared(res, lambda));
    if (mu.real() == 0.0 && mu.imag() < 0.0) mu = -mu;
    return mu;
}

/// max over the grid of |mu^2(lambda) - (1 - r t(lambda))/4| with (a, b) = delaunay_ab(r).
inline double verify_mu_alpha_identity(const CylinderParams& p, const LambdaGrid& grid) {
    const auto res = delaunay_residue(p);
    double err = 0.0;
    for (cplx lambda : grid.points())
        err = std::max(err, std::abs(mu_squared(res, lambda) - 0.25 * (1.0 - p.r() * cylinder_t(lambda))));
    return err;
}

// ---------------------------------------------------------------------------------------------
// Gauges

struct GaugeSpec {
    std::function<ComplexMatrix2(cplx z, cplx lambda)> evaluate;
    /// d/dz of evaluate.
    std::function<ComplexMatrix2(cplx z, cplx lambda)> derivative;
    BranchCut branch_cut = BranchCut::none;
    /// Sign picked up by the gauge under z -> e^{2 pi i} z.
    int multivalued_sign = 1;
    std::vector<Pole> singular_points;
    std::string label;
};

inline GaugeSpec identity_gauge() {
    return {[](cplx, cplx) { return ComplexMatrix2::identity(); },
            [](cplx, cplx) { return ComplexMatrix2::zero(); }, BranchCut::none, 1, {}, "identity"};
}

inline GaugeSpec constant_gauge(const ComplexMatrix2& g) {
    if (det(g) == 0.0) throw DomainError("constant gauge is singular");
    return {[g](cplx, cplx) { return g; }, [](cplx, cplx) { return ComplexMatrix2::zero(); },
            BranchCut::none, 1, {}, "constant"};
}

/// Pointwise product g h, with (gh)' = g' h + g h'.
inline GaugeSpec gauge_product(const GaugeSpec& g, const GaugeSpec& h) {
    if (g.branch_cut != BranchCut::none && h.branch_cut != BranchCut::none && g.branch_cut != h.branch_cut)
        throw DomainError("gauge product with incompatible branch cuts");
    auto poles = g.singular_points;
    poles.insert(poles.end(), h.singular_points.begin(), h.singular_points.end());
    return {[g, h](cplx z, cplx l) { return g.evaluate(z, l) * h.evaluate(z, l); },
            [g, h](cplx z, cplx l) {
                return g.derivative(z, l) * h.evaluate(z, l) + g.evaluate(z, l) * h.derivative(z, l);
            },
            g.branch_cut != BranchCut::none ? g.branch_cut : h.branch_cut,
            g.multivalued_sign * h.multivalued_sign, std::move(poles), g.label + "*" + h.label};
}

/// g1 = diag((1/z)^{1/2}, (1/z)^{-1/2}), principal branch.
inline GaugeSpec bessel_gauge_g1() {
    return {[](cplx z, cplx) {
                const cplx s = std::sqrt(1.0 / z);
                return ComplexMatrix2::diag(s, 1.0 / s);
            },
            [](cplx z, cplx) {
                const cplx s = std::sqrt(1.0 / z);
                return ComplexMatrix2::diag(-s / (2.0 * z), 1.0 / (2.0 * z * s));
            },
            BranchCut::z, -1, {{0.0, 1}}, "g1"};
}

/// g2 = [[1, 0], [1/(2z), 1]].
inline GaugeSpec bessel_gauge_g2() {
    return {[](cplx z, cplx) { return ComplexMatrix2{1.0, 0.0, 1.0 / (2.0 * z), 1.0}; },
            [](cplx z, cplx) { return ComplexMatrix2{0.0, 0.0, -1.0 / (2.0 * z * z), 0.0}; },
            BranchCut::none, 1, {{0.0, 1}}, "g2"};
}

/// Lambda = diag(lambda^{1/2}, lambda^{-1/2}); z-independent.
inline GaugeSpec lambda_half_gauge() {
    return {[](cplx, cplx l) {
                const cplx s = std::sqrt(l);
                return ComplexMatrix2::diag(s, 1.0 / s);
            },
            [](cplx, cplx) { return ComplexMatrix2::zero(); }, BranchCut::lambda, 1, {}, "Lambda"};
}

/// g1c = diag(z^{1/2}, z^{-1/2}). Flips sign under the deck transformation.
inline GaugeSpec cylinder_gauge_g1c() {
    return {[](cplx z, cplx) {
                const cplx s = std::sqrt(z);
                return ComplexMatrix2::diag(s, 1.0 / s);
            },
            [](cplx z, cplx) {
                const cplx s = std::sqrt(z);
                return ComplexMatrix2::diag(s / (2.0 * z), -1.0 / (2.0 * z * s));
            },
            BranchCut::z, -1, {{0.0, 1}}, "g1c"};
}

/// g2c = [[1, 0], [-lambda/2, a + b lambda]]; determinant a + b lambda.
inline GaugeSpec cylinder_gauge_g2c(const DelaunayWeights& w) {
    return {[w](cplx, cplx l) { return ComplexMatrix2{1.0, 0.0, -0.5 * l, w.a + w.b * l}; },
            [](cplx, cplx) { return ComplexMatrix2::zero(); }, BranchCut::none, 1, {}, "g2c"};
}

inline ComplexMatrix2 apply_gauge(const ComplexMatrix2& xi, const ComplexMatrix2& g, const ComplexMatrix2& dg) {
    const ComplexMatrix2 gi = inverse(g);
    return gi * xi * g + gi * dg;
}

/// xi.g = g^-1 xi g + g^-1 dg/dz. The gauge's branch cut is excluded from the result's domain.
inline PotentialSpec gauge_transform(const PotentialSpec& xi, const GaugeSpec& g) {
    auto poles = xi.poles();
    for (const auto& p : g.singular_points) {
        bool known = false;
        for (const auto& q : poles) known = known || q.z == p.z;
        if (!known) poles.push_back(p);
    }
    auto cuts = xi.branch_cuts();
    if (g.branch_cut != BranchCut::none) cuts.push_back(g.branch_cut);
    return PotentialSpec(
        [xi, g](cplx z, cplx lambda) {
            const ComplexMatrix2 gv = g.evaluate(z, lambda);
            if (std::abs(det(gv)) < 1e-300) throw DomainError("singular gauge at evaluation point");
            return apply_gauge(xi.evaluate(z, lambda), gv, g.derivative(z, lambda));
        },
        std::move(poles), xi.description() + "." + g.label, std::move(cuts));
}

/// Right-hand side of the Bessel potential gauged by g1 g2: [[0, 1], [-1 + (4 alpha^2 - 1)/(4 z^2), 0]].
inline ComplexMatrix2 bessel_gauged_closed_form(cplx alpha, cplx z) {
    return {0.0, 1.0, -1.0 + (4.0 * alpha * alpha - 1.0) / (4.0 * z * z), 0.0};
}

struct PotentialSample {
    cplx z;
    cplx lambda;
};

/// Max residual of the g1, g2 gauge chain of the Bessel potential against its closed form.
inline double verify_bessel_gauge(cplx alpha, std::span<const PotentialSample> samples) {
    const auto gauged = gauge_transform(gauge_transform(make_bessel_potential(alpha), bessel_gauge_g1()),
                                        bessel_gauge_g2());
    double err = 0.0;
    for (const auto& s : samples)
        err = std::max(err, norm_inf(gauged(s.z, s.lambda) - bessel_gauged_closed_form(alpha, s.z)));
    return err;
}

/// Max residual between the cylinder potential and the Bessel potential with
/// alpha(lambda) = sqrt(1 - r t)/2 + alpha_offset gauged by g1, g2, then Lambda.
/// A nonzero offset is a deliberately broken chain.
inline double verify_cylinder_gauge_chain(const CylinderParams& p, std::span<const PotentialSample> samples,
                                          cplx alpha_offset = 0.0) {
    const double r = p.r();
    auto alpha2 = [r, alpha_offset](cplx lambda) {
        const cplx alpha = 0.5 * std::sqrt(1.0 - r * cylinder_t(lambda)) + alpha_offset;
        return alpha * alpha;
    };
    const auto chain = gauge_transform(
        gauge_transform(gauge_transform(make_bessel_potential(alpha2, "bessel(alpha(lambda))"), bessel_gauge_g1()),
                        bessel_gauge_g2()),
        lambda_half_gauge());
    const auto cyl = make_cylinder_potential(p);
    double err = 0.0;
    for (const auto& s : samples) err = std::max(err, norm_inf(chain(s.z, s.lambda) - cyl(s.z, s.lambda)));
    return err;
}

/// |z (xi_c.(g1c g2c))(z) - A| at one point; O(|z|^2) when the gauged potential has residue A.
inline double cylinder_residue_defect(const CylinderParams& p, cplx z, cplx lambda) {
    const auto w = delaunay_ab(p);
    const auto gauged = gauge_transform(make_cylinder_potential(p),
                                        gauge_product(cylinder_gauge_g1c(), cylinder_gauge_g2c(w)));
    return norm_inf(gauged(z, lambda) * z - DelaunayResidue{w.a, w.b, 0.0}(lambda));
}

/// Max entrywise residual over samples of the two reflection relations
///   xi(z, 1/lambda)            = conj(xi(conj z, 1/conj lambda))
///   G^-1 xi(z, lambda) G       = conj(xi(conj z, 1/conj lambda)),  G = diag(1/lambda, lambda).
inline double verify_symmetry_relations(const PotentialSpec& xi, std::span<const PotentialSample> samples) {
    double err = 0.0;
    for (const auto& s : samples) {
        const cplx lam = s.lambda;
        const ComplexMatrix2 rhs = conj(xi(std::conj(s.z), 1.0 / std::conj(lam)));
        const ComplexMatrix2 lhs1 = xi(s.z, 1.0 / lam);
        const ComplexMatrix2 G = ComplexMatrix2::diag(1.0 / lam, lam);
        const ComplexMatrix2 lhs2 = inverse(G) * xi(s.z, lam) * G;
        err = std::max({err, norm_inf(lhs1 - rhs), norm_inf(lhs2 - rhs)});
    }
    return err;
}

} // namespace dpw

#endif // DPW_POTENTIAL_HPP
