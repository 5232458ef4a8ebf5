#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "degspec/determinant.hpp"
#include "degspec/oracles.hpp"

using namespace degspec;
using std::numbers::pi;

TEST(ConstCoeffOracle, AgreesWithIntegrator)
{
    const std::vector<complex> lambdas{0.0, complex(0.3, -0.4), complex(-50.0, 20.0), complex(800.0, -300.0),
                                       complex(-1e4, 0.0), complex(0.0, 1e4)};
    for (int n : {2, 4}) {
        for (const auto& lambda : lambdas) {
            const auto exact = oracles::const_coeff_fundamental(n, lambda);
            const auto num = integrate_fundamental(CoefficientSet::zeros(n), lambda);
            const double scale = std::max({1.0, exact.u0.cwiseAbs().maxCoeff(), exact.u1.cwiseAbs().maxCoeff()});
            EXPECT_LE((exact.u0 - num.u0).cwiseAbs().maxCoeff(), 1e-8 * scale) << n << " " << lambda;
            EXPECT_LE((exact.u1 - num.u1).cwiseAbs().maxCoeff(), 1e-8 * scale) << n << " " << lambda;
        }
    }
}

TEST(ConstCoeffOracle, SecondOrderTrigonometricForm)
{
    const complex lambda(-16.0, 0.0);  // u'' = -16 u
    const auto fm = oracles::const_coeff_fundamental(2, lambda);
    EXPECT_NEAR(fm.u1(0, 0).real(), std::cos(2.0), 1e-13);
    EXPECT_NEAR(fm.u1(0, 1).real(), std::sin(2.0) / 4.0, 1e-13);
    EXPECT_NEAR(fm.u0(1, 1).real(), std::cos(2.0), 1e-13);
    EXPECT_NEAR(fm.u0(1, 0).real(), 4.0 * std::sin(2.0), 1e-13);
}

TEST(DirichletReference, ValuesAndZerosOfDelta)
{
    EXPECT_NEAR(oracles::dirichlet_reference(1).real(), -9.8696044, 1e-7);
    EXPECT_NEAR(oracles::dirichlet_reference(2).real(), -39.4784176, 1e-7);
    EXPECT_NEAR(oracles::dirichlet_reference(3).real(), -88.8264396, 1e-7);
    const SpectralProblem prob(CoefficientSet::zeros(2), dirichlet_boundary());
    for (int k = 1; k <= 3; ++k) {
        EXPECT_LE(std::abs(char_det(prob, oracles::dirichlet_reference(k)).delta), 1e-9) << k;
    }
    EXPECT_THROW(oracles::dirichlet_reference(0), ValidationError);
}

TEST(BruteForceDet, FreeProblem)
{
    const SpectralProblem prob(CoefficientSet::zeros(2), DegenerateBoundary{2.0});
    EXPECT_LE(std::abs(oracles::brute_force_det(prob, complex(5.0, 7.0)) - 3.0), 1e-9);
}

TEST(BruteForceDet, SymmetricClosedForm)
{
    const CoefficientSet c(2, {polynomial({-0.5, 1.0}), cosine_series({1.0})});
    const SpectralProblem prob(c, DegenerateBoundary{0.5});
    const complex expected = -0.75 * std::exp(-0.125);
    EXPECT_NEAR(expected.real(), -0.661873, 1e-6);
    const complex brute = oracles::brute_force_det(prob, complex(-20.0, 4.0));
    EXPECT_LE(std::abs(brute - expected), 1e-6);
    EXPECT_LE(std::abs(char_det(prob, complex(-20.0, 4.0)).delta - brute), 1e-6);
}

TEST(BruteForceDet, VanishesAtDOne)
{
    const CoefficientSet c(2, {polynomial({-0.5, 1.0}), cosine_series({1.0})});
    const SpectralProblem prob(c, DegenerateBoundary{1.0});
    EXPECT_LE(std::abs(oracles::brute_force_det(prob, 17.0)), 1e-8);
}

TEST(BruteForceDet, RejectsTooFewSteps)
{
    const SpectralProblem prob(CoefficientSet::zeros(2), DegenerateBoundary{2.0});
    EXPECT_THROW(oracles::brute_force_det(prob, 0.0, 10), ValidationError);
}
