#include <gtest/gtest.h>

#include "dpw/bessel.hpp"
#include "dpw/checks.hpp"

using namespace dpw;

namespace {

OdeConfig tol(double rtol) {
    OdeConfig c;
    c.rtol = rtol;
    c.atol = rtol * 1e-2;
    return c;
}

// Power series of J_n at z, and its derivative.
std::pair<cplx, cplx> bessel_j_series(int n, cplx z) {
    auto series = [](int order, cplx x) {
        cplx term = std::pow(x / 2.0, order), sum = 0.0;
        for (int k = 1; k <= order; ++k) term /= double(k);
        for (int k = 0; k < 60; ++k) {
            sum += term;
            term *= -(x * x / 4.0) / double((k + 1) * (k + 1 + order));
        }
        return sum;
    };
    const cplx j = series(n, z);
    const cplx dj = n == 0 ? -series(1, z) : series(n - 1, z) - double(n) / z * j;
    return {j, dj};
}

TEST(BesselScalar, HalfIntegerClosedForm) {
    const auto a = half_integer_closed_form(1.0), b = half_integer_closed_form(2.0);
    const auto sol = bessel_integrate(0.5, PathSpec::between(1.0, 2.0), a.y, a.dy, tol(1e-12));
    EXPECT_LT(std::abs(sol.y - b.y), 1e-9);
    EXPECT_LT(std::abs(sol.dy - b.dy), 1e-9);
    EXPECT_EQ(sol.z, cplx(2.0));
}

TEST(BesselScalar, ZeroDataStaysZero) {
    const auto sol = bessel_integrate(cplx(0.3, 0.1), PathSpec::between(1.0, cplx(2.0, 1.0)), 0.0, 0.0);
    EXPECT_EQ(sol.y, cplx(0.0));
    EXPECT_EQ(sol.dy, cplx(0.0));
}

TEST(BesselScalar, MatchesSeriesOracleForIntegerOrder) {
    for (int n : {0, 1, 2}) {
        const auto [j0, dj0] = bessel_j_series(n, 1.0);
        for (cplx z1 : {cplx(1.1), cplx(2.0), cplx(0.5, 0.8)}) {
            const auto sol = bessel_integrate(double(n), PathSpec::between(1.0, z1), j0, dj0, tol(1e-12));
            const auto [j1, dj1] = bessel_j_series(n, z1);
            EXPECT_LT(std::abs(sol.y - j1), 1e-9) << n << " " << z1;
            EXPECT_LT(std::abs(sol.dy - dj1), 1e-9) << n << " " << z1;
        }
    }
}

TEST(BesselScalar, TaylorCoefficientsMatchSeries) {
    const auto [j0, dj0] = bessel_j_series(0, 1.0);
    const auto c = bessel_taylor_coefficients(0.0, 1.0, j0, dj0, 30);
    ASSERT_EQ(c.size(), 31u);
    const auto v = bessel_taylor_eval(c, 1.0, 1.1);
    const auto [j1, dj1] = bessel_j_series(0, 1.1);
    EXPECT_LT(std::abs(v.y - j1), 1e-14);
    EXPECT_LT(std::abs(v.dy - dj1), 1e-14);
    EXPECT_THROW(bessel_taylor_coefficients(0.0, 0.0, 1.0, 0.0, 5), DomainError);
}

TEST(BesselScalar, ResidualExamples) {
    const BesselCoefficients bc{0.0};
    auto nu = [&](cplx z) { return bc.nu(z); };
    auto dnu = [&](cplx z) { return bc.dnu(z); };
    auto rho = [&](cplx z) { return bc.rho(z); };
    // y = 1: residual is -rho nu = 1 at z = 1.
    EXPECT_LT(std::abs(scalar_residual(nu, dnu, rho, Jet{1.0, 0.0, 0.0}, 1.0) - 1.0), 1e-15);
    EXPECT_THROW(scalar_residual([](cplx) { return cplx(0.0); }, dnu, rho, Jet{1.0, 0.0, 0.0}, 1.0), DomainError);
    const auto [j, dj] = bessel_j_series(0, 1.7);
    const cplx d2j = -dj / 1.7 - j;
    EXPECT_LT(std::abs(scalar_residual(nu, dnu, rho, Jet{j, dj, d2j}, 1.7)), 1e-14);
    const auto sol = bessel_integrate(cplx(0.3, 0.1), PathSpec::between(1.0, 3.0), 1.0, 0.0);
    EXPECT_LT(std::abs(scalar_residual(sol)), 1e-13);
}

TEST(BesselScalar, FrameRejectsDependentPair) {
    auto nu = [](cplx z) { return 1.0 / z; };
    const ScalarSolution a{1.0, 2.0, 0.5, 1.0}, b{2.0, 4.0, 0.5, 1.0};
    EXPECT_THROW(frame_from_scalar(a, b, nu), DomainError);
    EXPECT_THROW(frame_from_scalar(a, ScalarSolution{0.0, 1.0, 0.5, 2.0}, nu), DomainError);
    EXPECT_THROW(frame_from_scalar(a, ScalarSolution{0.0, 1.0, 0.4, 1.0}, nu), DomainError);
    const auto F = frame_from_scalar(ScalarSolution{1.0, 0.0, 0.5, 1.0}, ScalarSolution{0.0, 1.0, 0.5, 1.0}, nu);
    EXPECT_LT(norm_inf(F - ComplexMatrix2{0.0, 1.0, 1.0, 0.0}), 1e-15);
}

TEST(BesselScalar, ScaledWronskianIsConstant) {
    for (cplx alpha : {cplx(0.0), cplx(0.5), cplx(0.3, 0.1)}) {
        const auto y1 = bessel_integrate(alpha, PathSpec::between(1.0, 4.0), 1.0, 0.0, tol(1e-12));
        const auto y2 = bessel_integrate(alpha, PathSpec::between(1.0, 4.0), 0.0, 1.0, tol(1e-12));
        EXPECT_LT(std::abs(4.0 * (y1.dy * y2.y - y2.dy * y1.y) + 1.0), 1e-9) << alpha;
    }
}

TEST(BesselEquivalenceTest, ScalarAndMatrixFramesAgree) {
    for (cplx alpha : {cplx(0.0), cplx(0.5), cplx(0.3, 0.1)}) {
        const auto eq = bessel_equivalence(alpha, 3.0, 16, 1e-10);
        EXPECT_LE(eq.frame_error, 1e-7) << alpha;
        EXPECT_LE(eq.wronskian_drift, 1e-9) << alpha;
    }
}

TEST(BesselMonodromy, TraceIsTwoCosTwoPiAlpha) {
    const auto cfg = tol(1e-12);
    for (cplx alpha : {cplx(0.0), cplx(0.5), cplx(0.3, 0.1), cplx(0.2)}) {
        const cplx scalar = scalar_monodromy_trace(alpha, 1.0, cfg);
        EXPECT_LT(std::abs(scalar - 2.0 * std::cos(2.0 * pi * alpha)), 1e-8) << alpha;
        const LambdaGrid one(2);
        FlowConfig fc;
        fc.ode = cfg;
        const auto M = monodromy(make_bessel_potential(alpha), one, fc).M;
        EXPECT_LT(std::abs(trace(M[0]) - scalar), 1e-8) << alpha;
    }
}

} // namespace
