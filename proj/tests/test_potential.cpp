#include <gtest/gtest.h>

#include <random>

#include "dpw/checks.hpp"
#include "dpw/potential.hpp"

using namespace dpw;

namespace {

constexpr double third = 1.0 / 3.0;

std::vector<PotentialSample> sector_samples(std::size_t n, std::uint64_t seed) {
    // Off both branch cuts: arg z and arg lambda in (-pi + 0.05, pi - 0.05).
    return random_potential_samples(n, seed);
}

TEST(BesselPotential, Examples) {
    EXPECT_LT(norm_inf(make_bessel_potential(0.0)(1.0, 0.3) - ComplexMatrix2{0.0, 1.0, -1.0, 0.0}), 1e-15);
    EXPECT_LT(norm_inf(make_bessel_potential(0.5)(1.0, 0.3) - ComplexMatrix2{0.0, 1.0, -0.75, 0.0}), 1e-15);
    for (cplx alpha : {cplx(0.2), cplx(1.0, 3.0)}) EXPECT_EQ(make_bessel_potential(alpha)(2.0, 1.0)(0, 1), cplx(0.5));
    EXPECT_THROW(make_bessel_potential(0.5)(0.0, 1.0), DomainError);
}

TEST(CylinderPotential, LambdaOneGivesQEqualMinusOne) {
    for (double r : {third, -0.25, 0.9, -7.0}) {
        const auto xi = make_cylinder_potential(CylinderParams(r));
        for (cplx z : {cplx(1.0), cplx(0.2, 0.7), cplx(-3.0, 0.1)})
            EXPECT_LT(norm_inf(xi(z, 1.0) - ComplexMatrix2{0.0, 1.0, -1.0, 0.0}), 1e-15);
    }
}

TEST(CylinderPotential, LambdaMinusOne) {
    EXPECT_EQ(cylinder_t(-1.0), cplx(1.0));
    const auto xi = make_cylinder_potential(CylinderParams(third));
    // lower left = (-1) (-1/12 - 1) = 13/12.
    EXPECT_LT(std::abs(xi(1.0, -1.0)(1, 0) - 13.0 / 12.0), 1e-15);
    EXPECT_LT(std::abs(xi(1.0, -1.0)(0, 1) + 1.0), 1e-15);
    const cplx z(0.4, -1.1);
    EXPECT_LT(std::abs(xi(z, -1.0)(1, 0) - (-1.0) * (-third / (4.0 * z * z) - 1.0)), 1e-14);
}

TEST(CylinderPotential, TIsRealInUnitIntervalOnCircle) {
    const LambdaGrid g(64);
    for (cplx l : g.points()) {
        const cplx t = cylinder_t(l);
        EXPECT_LT(std::abs(t.imag()), 1e-15);
        EXPECT_GE(t.real(), -1e-15);
        EXPECT_LE(t.real(), 1.0 + 1e-15);
    }
}

TEST(CylinderPotential, ExactLaurentFormMatchesEvaluator) {
    const CylinderParams p(-0.25);
    const auto xi = make_cylinder_potential(p);
    const cplx z(0.7, 0.4);
    const auto loop = cylinder_potential_loop(p, z);
    const LambdaGrid g(16);
    for (cplx l : g.points()) EXPECT_LT(norm_inf(loop(l) - xi(z, l)), 1e-14);
    EXPECT_EQ(loop.lo(), -1);
    EXPECT_EQ(loop.hi(), 2);
    EXPECT_THROW(xi(0.0, 1.0), DomainError);
}

TEST(CylinderParamsTest, RejectsOutOfRange) {
    EXPECT_THROW(CylinderParams(0.0), DomainError);
    EXPECT_THROW(CylinderParams(1.0), DomainError);
    EXPECT_THROW(CylinderParams(1.5), DomainError);
    EXPECT_THROW(CylinderParams(std::nan("")), DomainError);
    EXPECT_NO_THROW(CylinderParams(-1e6));
}

TEST(DelaunayPotential, Examples) {
    const auto res = DelaunayResidue::make(0.375, 0.125);
    const auto xi = make_delaunay_potential(res);
    EXPECT_LT(norm_inf(xi(1.0, 1.0) - ComplexMatrix2{0.0, 0.5, 0.5, 0.0}), 1e-15);
    EXPECT_LT(norm_inf(xi(1.0, -1.0) - ComplexMatrix2{0.0, -0.25, -0.25, 0.0}), 1e-15);
    const cplx l = std::polar(1.0, 0.8);
    EXPECT_LT(norm_inf(xi(2.0, l) - xi(1.0, l) * 0.5), 1e-15);
    EXPECT_THROW(xi(0.0, 1.0), DomainError);
    EXPECT_THROW(DelaunayResidue::make(0.3, 0.3), DomainError);
}

TEST(DelaunayAb, Examples) {
    auto w = delaunay_ab(CylinderParams(0.75));
    EXPECT_DOUBLE_EQ(w.a, 0.375);
    EXPECT_DOUBLE_EQ(w.b, 0.125);
    w = delaunay_ab(CylinderParams(-3.0));
    EXPECT_DOUBLE_EQ(w.a, 0.75);
    EXPECT_DOUBLE_EQ(w.b, -0.25);
}

TEST(DelaunayAb, SumProductAndEndClassification) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-20.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        double r = u(rng);
        if (r == 0.0 || r >= 1.0) continue;
        const auto w = delaunay_ab(CylinderParams(r));
        EXPECT_NEAR(w.a + w.b, 0.5, 1e-15);
        EXPECT_NEAR(w.a * w.b, r / 16.0, 1e-14);
        EXPECT_GT(w.a, w.b);
        EXPECT_EQ(w.a * w.b > 0, r > 0);
    }
}

TEST(MuEigenvalue, Examples) {
    for (double r : {third, -0.25, 0.7}) {
        const auto res = delaunay_residue(CylinderParams(r));
        EXPECT_LT(std::abs(mu_eigenvalue(res, 1.0) - 0.5), 1e-15);
        EXPECT_LT(std::abs(mu_eigenvalue(res, -1.0) - std::abs(res.a - res.b)), 1e-15);
    }
    const auto res = DelaunayResidue::make(0.375, 0.125);
    EXPECT_LT(std::abs(mu_squared(res, cplx(0.0, 1.0)) - 5.0 / 32.0), 1e-16);
}

TEST(MuEigenvalue, BranchAndEigenvalueProperty) {
    const auto res = delaunay_residue(CylinderParams(-3.0));
    const LambdaGrid g(64);
    for (cplx l : g.points()) {
        const cplx mu = mu_eigenvalue(res, l);
        EXPECT_GE(mu.real(), 0.0);
        if (mu.real() == 0.0) {
            EXPECT_GE(mu.imag(), 0.0);
        }
        // A^2 = mu^2 I for trace-free A.
        const auto A = res(l);
        EXPECT_LT(norm_inf(A * A - ComplexMatrix2::identity() * (mu * mu)), 1e-14);
    }
}

TEST(MuAlphaIdentity, Examples) {
    EXPECT_LT(verify_mu_alpha_identity(CylinderParams(0.75), LambdaGrid(2)), 1e-15);
    const auto res = delaunay_residue(CylinderParams(-3.0));
    EXPECT_LT(std::abs(mu_squared(res, -1.0) - 1.0), 1e-15);
    EXPECT_LT(std::abs(0.25 * (1.0 - (-3.0) * cylinder_t(-1.0)) - 1.0), 1e-15);
    for (double r : {third, -0.25, 1.0 / std::sqrt(2.0), -1.0 / pi, -3.0, 0.999})
        EXPECT_LE(verify_mu_alpha_identity(CylinderParams(r), LambdaGrid(64)), 1e-12);
}

TEST(Potentials, TraceFree) {
    const auto samples = sector_samples(50, 3);
    const std::vector<PotentialSpec> all{make_bessel_potential(cplx(0.3, 0.1)),
                                         make_cylinder_potential(CylinderParams(third)),
                                         make_delaunay_potential(DelaunayResidue::make(0.75, -0.25)),
                                         make_zero_potential()};
    for (const auto& xi : all)
        for (const auto& s : samples) EXPECT_LE(std::abs(trace(xi(s.z, s.lambda))), 1e-14) << xi.description();
}

TEST(GaugeTransform, IdentityAndConstantGauges) {
    const auto xi = make_cylinder_potential(CylinderParams(third));
    const ComplexMatrix2 g0{2.0, cplx(0.0, 1.0), 1.0, 3.0};
    const auto id = gauge_transform(xi, identity_gauge());
    const auto con = gauge_transform(xi, constant_gauge(g0));
    for (const auto& s : sector_samples(20, 4)) {
        EXPECT_EQ(norm_inf(id(s.z, s.lambda) - xi(s.z, s.lambda)), 0.0);
        EXPECT_LT(norm_inf(con(s.z, s.lambda) - inverse(g0) * xi(s.z, s.lambda) * g0), 1e-13);
    }
    EXPECT_THROW(constant_gauge(ComplexMatrix2::zero()), DomainError);
}

TEST(GaugeTransform, BesselChainAtZEqualsTwo) {
    for (cplx alpha : {cplx(0.0), cplx(0.5), cplx(0.3, 0.1)}) {
        const auto g = gauge_transform(gauge_transform(make_bessel_potential(alpha), bessel_gauge_g1()),
                                       bessel_gauge_g2());
        const ComplexMatrix2 expected{0.0, 1.0, -1.0 + (-1.0 + 4.0 * alpha * alpha) / 16.0, 0.0};
        EXPECT_LT(norm_inf(g(2.0, std::polar(1.0, 1.1)) - expected), 1e-14);
    }
}

TEST(GaugeTransform, BesselChainAtRandomPoints) {
    for (cplx alpha : {cplx(0.0), cplx(0.5), cplx(0.3, 0.1)})
        EXPECT_LE(verify_bessel_gauge(alpha, random_potential_samples(100)), 1e-10);
}

TEST(GaugeTransform, RightActionProperty) {
    const auto xi = make_cylinder_potential(CylinderParams(-0.25));
    const auto g = bessel_gauge_g1(), h = bessel_gauge_g2();
    const auto lhs = gauge_transform(gauge_transform(xi, g), h);
    const auto rhs = gauge_transform(xi, gauge_product(g, h));
    for (const auto& s : sector_samples(50, 5)) EXPECT_LT(norm_inf(lhs(s.z, s.lambda) - rhs(s.z, s.lambda)), 1e-10);
}

TEST(GaugeTransform, BranchCutIsExcluded) {
    const auto g = gauge_transform(make_bessel_potential(0.5), bessel_gauge_g1());
    EXPECT_THROW(g(cplx(-2.0, 0.0), 1.0), DomainError);
    EXPECT_NO_THROW(g(cplx(-2.0, 1e-3), 1.0));
    const auto l = gauge_transform(make_bessel_potential(0.5), lambda_half_gauge());
    EXPECT_THROW(l(1.0, -1.0), DomainError);
}

TEST(GaugeSpecs, DerivativesMatchFiniteDifferences) {
    const std::vector<GaugeSpec> gauges{bessel_gauge_g1(), bessel_gauge_g2(), lambda_half_gauge(),
                                        cylinder_gauge_g1c(), cylinder_gauge_g2c(delaunay_ab(CylinderParams(third))),
                                        gauge_product(cylinder_gauge_g1c(), cylinder_gauge_g2c({0.4, 0.1}))};
    for (const auto& g : gauges) {
        for (const auto& s : sector_samples(20, 6)) {
            const double h = 1e-5;
            const auto fd = (g.evaluate(s.z + h, s.lambda) - g.evaluate(s.z - h, s.lambda)) / cplx(2.0 * h);
            EXPECT_LT(norm_inf(fd - g.derivative(s.z, s.lambda)), 1e-8 * std::max(1.0, norm_inf(fd))) << g.label;
            EXPECT_GT(std::abs(det(g.evaluate(s.z, s.lambda))), 0.0);
        }
    }
}

TEST(GaugeSpecs, MultivaluedSignsUnderDeckTransformation) {
    // Continue z^{1/2} once around 0 along the circle: the value returns with the recorded sign.
    for (const auto& g : {bessel_gauge_g1(), cylinder_gauge_g1c()}) {
        EXPECT_EQ(g.multivalued_sign, -1);
        const cplx s0 = std::sqrt(cplx(1.0));
        cplx s = s0;
        for (int i = 1; i <= 1000; ++i) {
            const cplx z = std::polar(1.0, 2.0 * pi * i / 1000.0);
            const cplx c = std::sqrt(z);
            s = std::abs(c - s) < std::abs(c + s) ? c : -c; // continuous continuation
        }
        EXPECT_NEAR((s / s0).real(), g.multivalued_sign, 1e-12);
    }
    EXPECT_EQ(bessel_gauge_g2().multivalued_sign, 1);
    EXPECT_EQ(gauge_product(bessel_gauge_g1(), cylinder_gauge_g1c()).multivalued_sign, 1);
}

TEST(GaugeChain, CylinderFromBesselWithLambdaDependentAlpha) {
    const auto samples = random_potential_samples(100);
    for (double r : {third, -0.25, 1.0 / std::sqrt(2.0), -1.0 / pi})
        EXPECT_LE(verify_cylinder_gauge_chain(CylinderParams(r), samples), 1e-10);
    EXPECT_GT(verify_cylinder_gauge_chain(CylinderParams(third), samples, 0.1), 1e-2);
}

TEST(GaugeChain, CylinderGaugedToDelaunayResidue) {
    // Residue defect of xi_c.(g1c g2c) shrinks with |z|, so the residue at 0 is A.
    const CylinderParams p(third);
    const cplx lam = std::polar(1.0, 0.9);
    const double d1 = cylinder_residue_defect(p, cplx(1e-2, 1e-2), lam);
    const double d2 = cylinder_residue_defect(p, cplx(1e-3, 1e-3), lam);
    EXPECT_LT(d2, 1e-4);
    EXPECT_LT(d2, d1 / 5.0);
}

TEST(SymmetryRelations, CylinderPotentialSatisfiesBoth) {
    const auto xi = make_cylinder_potential(CylinderParams(third));
    const std::vector<PotentialSample> one{{cplx(1.0, 1.0), std::polar(1.0, pi / 3.0)}};
    EXPECT_LE(verify_symmetry_relations(xi, one), 1e-12);
    const std::vector<PotentialSample> fixed{{cplx(2.5), 1.0}};
    EXPECT_EQ(verify_symmetry_relations(xi, fixed), 0.0);
    for (double r : {third, -0.25, 1.0 / std::sqrt(2.0), -1.0 / pi})
        EXPECT_LE(verify_symmetry_relations(make_cylinder_potential(CylinderParams(r)), random_potential_samples(100)),
                  1e-12);
}

TEST(SymmetryRelations, BrokenPotentialIsDetected) {
    const double r = third;
    const PotentialSpec broken(
        [r](cplx z, cplx l) {
            const cplx q = -r / (4.0 * z * z) * cylinder_t(l) - 1.0;
            return ComplexMatrix2{0.0, 1.0 / l, I_unit * l * q, 0.0};
        },
        {{0.0, 2}}, "broken");
    const std::vector<PotentialSample> one{{cplx(1.0, 1.0), std::polar(1.0, pi / 3.0)}};
    EXPECT_GT(verify_symmetry_relations(broken, one), 0.1);
}

} // namespace
