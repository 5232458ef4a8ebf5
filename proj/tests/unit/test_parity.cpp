#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "degspec/parity.hpp"

using namespace degspec;
using std::numbers::pi;

namespace {

CoefficientSet symmetric(int n)
{
    std::vector<CoefficientFunction> fs(static_cast<std::size_t>(n), zero_coefficient());
    fs[0] = polynomial({-0.5, 1.0});
    fs[1] = cosine_series({1.0});
    if (n >= 4) {
        fs[2] = polynomial({-0.125, 0.75, -1.5, 1.0});
        fs[3] = polynomial({0.25, -1.0, 1.0});
    }
    return CoefficientSet(n, fs);
}

}  // namespace

TEST(ParityInitialData, PlacesConstantsInSlots)
{
    const std::vector<complex> c{2.0, complex(0.0, 3.0)};
    const auto even = parity_initial_data(4, Parity::even, c);
    const auto odd = parity_initial_data(4, Parity::odd, c);
    EXPECT_EQ(even(0), complex(2.0));
    EXPECT_EQ(even(2), complex(0.0, 3.0));
    EXPECT_EQ(even(1), complex(0.0));
    EXPECT_EQ(odd(1), complex(2.0));
    EXPECT_EQ(odd(3), complex(0.0, 3.0));
    EXPECT_EQ(odd(0), complex(0.0));
}

TEST(ParityCombination, OddSineAtFirstDirichletEigenvalue)
{
    const SpectralProblem prob(CoefficientSet::zeros(2), DegenerateBoundary{-1.0});
    ParityOptions opts;
    opts.grid_size = 11;
    const auto pc = parity_combination(prob, -pi * pi, Parity::odd, {1.0}, opts);
    ASSERT_EQ(pc.trace.cols(), 11);
    for (std::size_t i = 0; i < pc.grid.size(); ++i) {
        const double x = pc.grid[i];
        EXPECT_NEAR(std::abs(pc.trace(0, Eigen::Index(i)) - std::sin(pi * (x - 0.5)) / pi), 0.0, 1e-9) << x;
    }
    EXPECT_EQ(pc.reflection_sign(), -1.0);
}

TEST(ParityCombination, EvenConstantAtZeroLambda)
{
    for (int n : {2, 4}) {
        const SpectralProblem prob(CoefficientSet::zeros(n), DegenerateBoundary{1.0});
        std::vector<complex> c(static_cast<std::size_t>(n / 2), 0.0);
        c[0] = 1.0;
        const auto pc = parity_combination(prob, 0.0, Parity::even, c);
        EXPECT_LE((pc.trace.row(0).array() - 1.0).abs().maxCoeff(), 1e-12) << n;
    }
}

TEST(ParityCombination, RejectsBadInput)
{
    const SpectralProblem prob(symmetric(4), DegenerateBoundary{1.0});
    EXPECT_THROW(parity_combination(prob, 0.0, Parity::even, {1.0}), ValidationError);
    EXPECT_THROW(parity_combination(prob, 0.0, Parity::even, {0.0, 0.0}), ValidationError);
    const CoefficientSet skew(2, {zero_coefficient(), polynomial({0.0, 1.0})});
    EXPECT_THROW(parity_combination(SpectralProblem(skew, DegenerateBoundary{1.0}), 0.0, Parity::odd, {1.0}),
                 ValidationError);
}

TEST(ReflectionResidual, SymmetricCoefficientsGiveDefiniteParity)
{
    for (int n : {2, 4}) {
        const SpectralProblem prob(symmetric(n), DegenerateBoundary{0.5});
        std::vector<complex> c;
        for (int k = 0; k < n / 2; ++k) {
            c.emplace_back(1.0 + k, -0.5 * k);
        }
        for (const Parity p : {Parity::odd, Parity::even}) {
            const auto pc = parity_combination(prob, complex(-40.0, 9.0), p, c);
            const double scale = pc.trace.row(0).cwiseAbs().maxCoeff();
            EXPECT_LE(reflection_residual(pc), 1e-7 * std::max(1.0, scale)) << n << " " << to_string(p);
        }
    }
}

TEST(ReflectionResidual, NonSymmetricControlBreaksParity)
{
    const CoefficientSet skew(2, {zero_coefficient(), polynomial({0.0, 1.0})});
    const SpectralProblem prob(skew, DegenerateBoundary{1.0});
    ParityOptions opts;
    opts.require_symmetric = false;
    const auto pc = parity_combination(prob, -25.0, Parity::odd, {1.0}, opts);
    EXPECT_GT(reflection_residual(pc), 1e-3);
}

TEST(BcResidual, MatchingParitySatisfiesBoundaryConditions)
{
    const complex lambda(3.0, 4.0);
    const auto c = symmetric(2);
    const auto even = parity_combination(SpectralProblem(c, DegenerateBoundary{1.0}), lambda, Parity::even, {1.0});
    EXPECT_LE(bc_residual(SpectralProblem(c, DegenerateBoundary{1.0}), even), 1e-7);
    const auto odd = parity_combination(SpectralProblem(c, DegenerateBoundary{-1.0}), lambda, Parity::odd, {1.0});
    EXPECT_LE(bc_residual(SpectralProblem(c, DegenerateBoundary{-1.0}), odd), 1e-7);
    // Same even function against d = 1/2 is not an eigenfunction.
    EXPECT_GT(bc_residual(SpectralProblem(c, DegenerateBoundary{0.5}), even), 0.1);
    // The wrong parity at d = +1 fails too.
    EXPECT_GT(bc_residual(SpectralProblem(c, DegenerateBoundary{1.0}), odd), 0.1);
}

TEST(BcResidual, RequiresDegenerateForm)
{
    const SpectralProblem prob(CoefficientSet::zeros(2), dirichlet_boundary());
    const auto pc = parity_combination(SpectralProblem(CoefficientSet::zeros(2), DegenerateBoundary{1.0}), 0.0,
                                       Parity::even, {1.0});
    EXPECT_THROW(bc_residual(prob, pc), ValidationError);
}

TEST(EigenspaceRank, Examples)
{
    EXPECT_EQ(eigenspace_rank(SpectralProblem(CoefficientSet::zeros(2), DegenerateBoundary{1.0}), 0.0), 1);
    EXPECT_EQ(eigenspace_dimension(SpectralProblem(CoefficientSet::zeros(2), DegenerateBoundary{1.0}), 0.0), 1);
    EXPECT_EQ(eigenspace_rank(SpectralProblem(CoefficientSet::zeros(2), DegenerateBoundary{0.3}), 0.0), 2);
    const SpectralProblem four(symmetric(4), DegenerateBoundary{-1.0});
    EXPECT_EQ(eigenspace_rank(four, complex(10.0, -3.0)), 2);
    EXPECT_EQ(eigenspace_dimension(four, complex(10.0, -3.0)), 2);
}

TEST(MatrixRank, SvdThreshold)
{
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(3, 3);
    m(2, 2) = 1e-12;
    EXPECT_EQ(matrix_rank(m, 1e-9), 2);
    EXPECT_EQ(matrix_rank(m, 1e-13), 3);
    EXPECT_EQ(matrix_rank(Eigen::MatrixXcd::Zero(2, 2), 1e-9), 0);
}

TEST(EndpointParity, FundamentalSystemIsDefinite)
{
    for (int n : {2, 4}) {
        const auto fm = integrate_fundamental(symmetric(n), complex(-70.0, 15.0));
        EXPECT_LE(endpoint_parity_residual(fm), 1e-7) << n;
        EXPECT_LE(fundamental_reflection_residual(symmetric(n), complex(-70.0, 15.0)), 1e-7) << n;
    }
}

TEST(ParityProperties, ResidualIsScaleInvariant)
{
    const auto c = symmetric(4);
    const SpectralProblem prob(c, DegenerateBoundary{1.0});
    const std::vector<complex> base{complex(0.7, 0.2), complex(-1.1, 0.4)};
    std::vector<complex> doubled;
    for (const auto& z : base) {
        doubled.push_back(2.0 * z);
    }
    const complex lambda(-12.0, 6.0);
    const double r1 = bc_residual(prob, parity_combination(prob, lambda, Parity::even, base));
    const double r2 = bc_residual(prob, parity_combination(prob, lambda, Parity::even, doubled));
    EXPECT_LT(std::abs(r1 - r2), 1e-9);
}

TEST(ParityProperties, RandomLambdaEigenfunctions)
{
    std::mt19937 rng(20241014);
    std::uniform_real_distribution<double> re(-200.0, 200.0), im(-50.0, 50.0), cst(-2.0, 2.0);
    const auto c = symmetric(4);
    const SpectralProblem plus(c, DegenerateBoundary{1.0});
    const SpectralProblem minus(c, DegenerateBoundary{-1.0});
    for (int trial = 0; trial < 10; ++trial) {
        const complex lambda(re(rng), im(rng));
        std::vector<complex> k{complex(cst(rng), cst(rng)), complex(cst(rng), cst(rng))};
        const auto even = parity_combination(plus, lambda, Parity::even, k);
        const auto odd = parity_combination(minus, lambda, Parity::odd, k);
        EXPECT_LE(bc_residual(plus, even), 1e-7) << lambda;
        EXPECT_LE(bc_residual(minus, odd), 1e-7) << lambda;
        EXPECT_EQ(eigenspace_dimension(plus, lambda), 2) << lambda;
    }
}
