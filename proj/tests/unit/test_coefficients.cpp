#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "degspec/coefficients.hpp"

using namespace degspec;

namespace {

double max_gap(const CoefficientFunction& a, const CoefficientFunction& b, int grid = 1001)
{
    double worst = 0.0;
    for (int i = 0; i < grid; ++i) {
        const double x = double(i) / (grid - 1);
        worst = std::max(worst, std::abs(a(x) - b(x)));
    }
    return worst;
}

}  // namespace

TEST(MakeCoefficient, ZeroIsZeroEverywhere)
{
    const auto p = zero_coefficient();
    for (double x : {0.0, 0.3, 0.5, 1.0}) {
        EXPECT_EQ(p(x), complex{});
    }
}

TEST(MakeCoefficient, PolynomialRoot)
{
    const auto p = polynomial({-0.5, 1.0});
    EXPECT_NEAR(std::abs(p(0.5)), 0.0, 1e-15);
    EXPECT_NEAR(p(1.0).real(), 0.5, 1e-15);
}

TEST(MakeCoefficient, CosineSeriesZero)
{
    const auto p = cosine_series({1.0});
    EXPECT_NEAR(std::abs(p(0.25)), 0.0, 1e-15);
    EXPECT_NEAR(p(0.0).real(), 1.0, 1e-15);
}

TEST(MakeCoefficient, SamplesInterpolateLinearly)
{
    const auto p = piecewise_samples({0.0, 1.0, complex(0.0, 2.0)});
    EXPECT_NEAR(std::abs(p(0.25) - complex(0.5, 0.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(p(0.75) - complex(0.5, 1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(p(1.0) - complex(0.0, 2.0)), 0.0, 1e-15);
    ASSERT_EQ(p.breakpoints().size(), 1u);
    EXPECT_DOUBLE_EQ(p.breakpoints()[0], 0.5);
}

TEST(MakeCoefficient, RejectsMalformedSpecs)
{
    EXPECT_THROW(make_coefficient(CoefficientKind::polynomial, {}), ValidationError);
    EXPECT_THROW(make_coefficient(CoefficientKind::cosine_series, {}), ValidationError);
    EXPECT_THROW(make_coefficient(CoefficientKind::piecewise_samples, {1.0}), ValidationError);
    EXPECT_THROW(make_coefficient(CoefficientKind::zero, {1.0}), ValidationError);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(make_coefficient(CoefficientKind::polynomial, {complex(nan, 0.0)}), ValidationError);
    EXPECT_THROW(make_coefficient(CoefficientKind::polynomial, {complex(0.0, INFINITY)}), ValidationError);
}

TEST(CoefficientSet, RequiresEvenOrderAndMatchingLength)
{
    EXPECT_THROW(CoefficientSet(3, {zero_coefficient(), zero_coefficient(), zero_coefficient()}), ValidationError);
    EXPECT_THROW(CoefficientSet(0, {}), ValidationError);
    EXPECT_THROW(CoefficientSet(2, {zero_coefficient()}), ValidationError);
    EXPECT_NO_THROW(CoefficientSet::zeros(4));
    EXPECT_EQ(CoefficientSet::zeros(6).nu(), 3);
}

TEST(ReflectNegate, OddLinearIsFixedPoint)
{
    const auto p = polynomial({-0.5, 1.0});
    EXPECT_LE(max_gap(reflect_negate(1, p), p), 1e-15);
}

TEST(ReflectNegate, EvenCosineIsFixedPoint)
{
    const auto p = cosine_series({1.0});
    EXPECT_LE(max_gap(reflect_negate(2, p), p), 1e-12);
}

TEST(ReflectNegate, ConstantIsNegatedForOddIndex)
{
    const auto q = reflect_negate(1, polynomial({1.0}));
    EXPECT_LE(max_gap(q, polynomial({-1.0})), 0.0);
}

TEST(ReflectNegate, SamplesAreReversed)
{
    const auto p = piecewise_samples({1.0, 2.0, 4.0});
    const auto q = reflect_negate(3, p);
    EXPECT_EQ(q(0.0), complex(-4.0));
    EXPECT_EQ(q(1.0), complex(-1.0));
}

TEST(ReflectNegate, IsAnInvolution)
{
    const std::vector<CoefficientFunction> samples{
        polynomial({complex(0.3, -1.0), 2.0, complex(0.0, 0.7), -1.5}), cosine_series({1.0, complex(0.0, 0.5)}),
        piecewise_samples({0.0, complex(1.0, 1.0), 3.0, -2.0}), zero_coefficient()};
    for (const auto& p : samples) {
        for (int m = 1; m <= 4; ++m) {
            EXPECT_LE(max_gap(reflect_negate(m, reflect_negate(m, p)), p), 1e-12);
        }
    }
}

TEST(SymmetryResidual, SymmetricSetIsZero)
{
    const CoefficientSet c(2, {polynomial({-0.5, 1.0}), cosine_series({1.0})});
    const auto r = symmetry_residual(c);
    EXPECT_LE(r[0], 1e-15);
    EXPECT_LE(r[1], 1e-12);
}

TEST(SymmetryResidual, ConstantFirstCoefficientGivesTwo)
{
    const CoefficientSet c(2, {polynomial({1.0}), zero_coefficient()});
    EXPECT_DOUBLE_EQ(symmetry_residual(c)[0], 2.0);
}

TEST(SymmetryResidual, LinearSecondCoefficientGivesOne)
{
    const CoefficientSet c(2, {zero_coefficient(), polynomial({0.0, 1.0})});
    const auto r = symmetry_residual(c);
    EXPECT_DOUBLE_EQ(r[0], 0.0);
    EXPECT_DOUBLE_EQ(r[1], 1.0);
    EXPECT_THROW(symmetry_residual(c, 1), ValidationError);
}

TEST(Symmetrize, OddPartOfConstantVanishes)
{
    const auto s = symmetrize(CoefficientSet(2, {polynomial({1.0}), zero_coefficient()}));
    EXPECT_LE(max_gap(s.p(1), zero_coefficient()), 0.0);
}

TEST(Symmetrize, EvenPartOfLinear)
{
    const auto s = symmetrize(CoefficientSet(2, {zero_coefficient(), polynomial({0.0, 1.0})}));
    EXPECT_LE(max_gap(s.p(2), polynomial({0.5})), 1e-15);
}

TEST(Symmetrize, IdempotentOnQuadratic)
{
    const CoefficientSet c(2, {polynomial({0.0, 0.0, 1.0}), polynomial({0.0, 0.0, 1.0})});
    const auto once = symmetrize(c);
    const auto twice = symmetrize(once);
    for (int m = 1; m <= 2; ++m) {
        EXPECT_LE(max_gap(once.p(m), twice.p(m)), 1e-12);
    }
    const auto r = symmetry_residual(once);
    EXPECT_LE(std::max(r[0], r[1]), 1e-12);
}
