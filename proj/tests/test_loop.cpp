#include <gtest/gtest.h>

#include <random>

#include "dpw/fft.hpp"
#include "dpw/loop.hpp"
#include "test_support.hpp"

using namespace dpw;
using dpw::test::random_loop;
using dpw::test::random_matrix;

namespace {

const ComplexMatrix2 E12{0.0, 1.0, 0.0, 0.0};

TEST(LoopEval, IdentityLoopIsIdentityEverywhere) {
    const auto id = LaurentLoop::constant(ComplexMatrix2::identity());
    for (cplx lam : {cplx(1.0), cplx(0.3, -2.0), cplx(0.0, 1.0)})
        EXPECT_EQ(norm_inf(loop_eval(id, lam) - ComplexMatrix2::identity()), 0.0);
}

TEST(LoopEval, MonomialAtI) {
    const auto x = LaurentLoop::monomial(E12, 1);
    const auto v = loop_eval(x, cplx(0.0, 1.0));
    EXPECT_LT(norm_inf(v - ComplexMatrix2{0.0, cplx(0.0, 1.0), 0.0, 0.0}), 1e-15);
}

TEST(LoopEval, DelaunayResidueAtOne) {
    // [[0, a/lambda + b], [a lambda + b, 0]] with a = 3/8, b = 1/8.
    const LaurentLoop A(-1, {ComplexMatrix2{0.0, 0.375, 0.0, 0.0}, ComplexMatrix2{0.0, 0.125, 0.125, 0.0},
                             ComplexMatrix2{0.0, 0.0, 0.375, 0.0}});
    EXPECT_LT(norm_inf(loop_eval(A, 1.0) - ComplexMatrix2{0.0, 0.5, 0.5, 0.0}), 1e-15);
}

TEST(LoopEval, ZeroWithNegativePowersIsDomainError) {
    const auto x = LaurentLoop::monomial(E12, -1);
    EXPECT_THROW(loop_eval(x, 0.0), DomainError);
    EXPECT_NO_THROW(loop_eval(LaurentLoop::monomial(E12, 2), 0.0));
}

TEST(LoopEval, MatchesDirectSumForWideExponentRanges) {
    std::mt19937_64 rng(7);
    for (auto [lo, hi] : {std::pair{-5, -2}, std::pair{-3, 4}, std::pair{2, 6}, std::pair{-1, -1}}) {
        const auto x = random_loop(rng, lo, hi);
        const cplx lam(0.7, 0.9);
        ComplexMatrix2 direct;
        for (int k = lo; k <= hi; ++k) direct += x.coeff(k) * std::pow(lam, k);
        EXPECT_LT(norm_inf(x(lam) - direct), 1e-12) << lo << ".." << hi;
    }
}

TEST(LoopMul, IdentityAndInverseMonomials) {
    std::mt19937_64 rng(1);
    const auto x = random_loop(rng, -2, 3);
    const auto p = loop_mul(LaurentLoop::constant(ComplexMatrix2::identity()), x);
    for (int k = -2; k <= 3; ++k) EXPECT_EQ(norm_inf(p.loop.coeff(k) - x.coeff(k)), 0.0);
    const auto q = loop_mul(LaurentLoop::monomial(ComplexMatrix2::identity(), 1),
                            LaurentLoop::monomial(ComplexMatrix2::identity(), -1));
    EXPECT_EQ(q.loop.lo(), 0);
    EXPECT_EQ(q.loop.hi(), 0);
    EXPECT_EQ(norm_inf(q.loop.coeff(0) - ComplexMatrix2::identity()), 0.0);
}

TEST(LoopMul, PointwiseOracleOnRandomDegreeThreeLoops) {
    std::mt19937_64 rng(2);
    const auto x = random_loop(rng, -3, 3), y = random_loop(rng, -3, 3);
    const auto xy = loop_mul(x, y);
    EXPECT_FALSE(xy.overflow);
    const LambdaGrid g(16);
    for (std::size_t j = 0; j < g.size(); ++j)
        EXPECT_LT(norm_inf(xy.loop(g[j]) - x(g[j]) * y(g[j])), 1e-12);
}

TEST(LoopMul, TruncationFlagsOverflow) {
    const auto x = LaurentLoop::monomial(ComplexMatrix2::identity(), 3, 4);
    const auto p = loop_mul(x, x);
    EXPECT_TRUE(p.overflow);
    EXPECT_DOUBLE_EQ(p.discarded, 1.0);
    EXPECT_LE(p.loop.hi(), 4);
    // Tiny discarded coefficients stay below the tolerance.
    const auto small = loop_mul(x, LaurentLoop::monomial(ComplexMatrix2::identity() * 1e-14, 3, 4));
    EXPECT_FALSE(small.overflow);
}

TEST(LoopStar, HermitianConstantIsFixed) {
    const ComplexMatrix2 h{2.0, cplx(1.0, -3.0), cplx(1.0, 3.0), -1.0};
    const auto s = loop_star(LaurentLoop::constant(h));
    EXPECT_EQ(norm_inf(s.coeff(0) - h), 0.0);
}

TEST(LoopStar, DiagonalMonomials) {
    const LaurentLoop x(-1, {ComplexMatrix2::diag(0.0, 1.0), ComplexMatrix2::zero(), ComplexMatrix2::diag(1.0, 0.0)});
    const auto s = loop_star(x);
    const cplx lam = std::polar(1.0, 0.4);
    EXPECT_LT(norm_inf(s(lam) - ComplexMatrix2::diag(1.0 / lam, lam)), 1e-15);
}

TEST(LoopStar, PointwiseAdjointOnCircle) {
    std::mt19937_64 rng(3);
    const auto x = random_loop(rng, -4, 5);
    const auto s = loop_star(x);
    const LambdaGrid g(32);
    for (std::size_t j = 0; j < g.size(); ++j) EXPECT_LT(norm_inf(s(g[j]) - adjoint(x(g[j]))), 1e-12);
}

TEST(LoopStar, InvolutionAndAntiHomomorphism) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = random_loop(rng, -3, 2), y = random_loop(rng, -1, 4);
        const auto xx = loop_star(loop_star(x));
        for (int k = x.lo(); k <= x.hi(); ++k) EXPECT_EQ(norm_inf(xx.coeff(k) - x.coeff(k)), 0.0);
        const auto lhs = loop_star(loop_mul(x, y).loop);
        const auto rhs = loop_mul(loop_star(y), loop_star(x)).loop;
        for (int k = -8; k <= 8; ++k) EXPECT_LT(norm_inf(lhs.coeff(k) - rhs.coeff(k)), 1e-13);
    }
}

TEST(LoopProperties, DeterminantIsMultiplicative) {
    std::mt19937_64 rng(5);
    const LambdaGrid g(16);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = random_loop(rng, -2, 2), y = random_loop(rng, -2, 2);
        const auto xy = loop_mul(x, y).loop;
        for (std::size_t j = 0; j < g.size(); ++j) {
            const cplx lhs = det(xy(g[j])), rhs = det(x(g[j])) * det(y(g[j]));
            EXPECT_LT(std::abs(lhs - rhs), 1e-12 * std::max(1.0, std::abs(rhs)));
        }
    }
}

TEST(LambdaGridTest, PointsAndValidation) {
    const LambdaGrid g(64);
    EXPECT_EQ(g[0], cplx(1.0));
    for (std::size_t j = 0; j < g.size(); ++j) EXPECT_NEAR(std::abs(g[j]), 1.0, 1e-15);
    EXPECT_THROW(LambdaGrid(48), GridError);
    EXPECT_THROW(LambdaGrid(1), GridError);
    EXPECT_EQ(g.max_degree(), 31);
}

TEST(Fft, MatchesNaiveDft) {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> n;
    std::vector<cplx> x(32);
    for (auto& v : x) v = {n(rng), n(rng)};
    auto y = x;
    fft_inplace(y, -1);
    for (std::size_t k = 0; k < x.size(); ++k) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) s += x[j] * std::polar(1.0, -2.0 * pi * double(j * k) / 32.0);
        EXPECT_LT(std::abs(s - y[k]), 1e-12);
    }
}

TEST(SamplesToCoeffs, ConstantAndMonomial) {
    const LambdaGrid g(16);
    const ComplexMatrix2 c{1.0, 2.0, cplx(0.0, 1.0), -4.0};
    const auto lc = samples_to_coeffs(LoopSamples(16, c), g, 4);
    EXPECT_LT(norm_inf(lc.coeff(0) - c), 1e-15);
    for (int k = -4; k <= 4; ++k)
        if (k != 0) EXPECT_LT(norm_inf(lc.coeff(k)), 1e-15);

    LoopSamples mono(16);
    for (std::size_t j = 0; j < 16; ++j) mono[j] = E12 * g[j];
    const auto lm = samples_to_coeffs(mono, g, 4);
    EXPECT_LT(norm_inf(lm.coeff(1) - E12), 1e-14);
    for (int k = -4; k <= 4; ++k)
        if (k != 1) EXPECT_LE(norm_inf(lm.coeff(k)), 1e-14);
}

TEST(SamplesToCoeffs, RoundTripDegreeEight) {
    std::mt19937_64 rng(8);
    const LambdaGrid g(64);
    const auto x = random_loop(rng, -8, 8);
    const auto s = coeffs_to_samples(x, g);
    for (std::size_t j = 0; j < g.size(); ++j) EXPECT_LT(norm_inf(s[j] - x(g[j])), 1e-12);
    const auto back = samples_to_coeffs(s, g, 16);
    for (int k = -16; k <= 16; ++k) EXPECT_LT(norm_inf(back.coeff(k) - x.coeff(k)), 1e-12);
}

TEST(SamplesToCoeffs, GridTooSmallForDegree) {
    const LambdaGrid g(16);
    EXPECT_THROW(samples_to_coeffs(LoopSamples(16), g, 8), GridError);
    EXPECT_THROW(samples_to_coeffs(LoopSamples(8), g, 4), GridError);
    EXPECT_THROW(coeffs_to_samples(LaurentLoop::monomial(E12, 8), g), GridError);
}

TEST(SamplesToCoeffs, TruncationRecordsDiscardedMass) {
    const LambdaGrid g(32);
    LoopSamples s(32);
    for (std::size_t j = 0; j < 32; ++j) s[j] = E12 * std::pow(g[j], 6);
    EXPECT_NEAR(samples_to_coeffs(s, g, 4).discarded_mass(), 1.0, 1e-12);
}

TEST(SpectralDerivative, MatchesAnalyticDerivative) {
    std::mt19937_64 rng(9);
    const LambdaGrid g(64);
    const auto x = random_loop(rng, -5, 5);
    const auto d = spectral_derivative(coeffs_to_samples(x, g), g);
    for (std::size_t j = 0; j < g.size(); ++j) {
        ComplexMatrix2 exact;
        for (int k = -5; k <= 5; ++k) exact += x.coeff(k) * (cplx(k) * std::pow(g[j], k - 1));
        EXPECT_LT(norm_inf(d[j] - exact), 1e-11);
    }
    EXPECT_LT(norm_inf(spectral_derivative_at_one(coeffs_to_samples(x, g)) - d[0]), 1e-11);
}

} // namespace
