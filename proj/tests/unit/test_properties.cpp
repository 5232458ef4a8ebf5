#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "degspec/degspec.hpp"

using namespace degspec;

namespace {

class Gen {
public:
    explicit Gen(unsigned seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    CoefficientFunction function()
    {
        std::vector<complex> params(static_cast<std::size_t>(integer(2, 4)));
        for (auto& p : params) {
            p = complex(uniform(-2.0, 2.0), uniform(-1.0, 1.0));
        }
        switch (integer(0, 2)) {
        case 0:
            return polynomial(params);
        case 1:
            return cosine_series(params);
        default:
            return piecewise_samples(params);
        }
    }

    CoefficientSet set(int n)
    {
        std::vector<CoefficientFunction> fs;
        for (int m = 0; m < n; ++m) {
            fs.push_back(function());
        }
        return CoefficientSet(n, fs);
    }

private:
    std::mt19937 rng_;
};

double gap(const CoefficientFunction& a, const CoefficientFunction& b)
{
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double x = i / 200.0;
        worst = std::max(worst, std::abs(a(x) - b(x)));
    }
    return worst;
}

}  // namespace

TEST(Properties, ReflectNegateIsAnInvolution)
{
    Gen g(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = g.function();
        const int m = g.integer(1, 6);
        EXPECT_LE(gap(reflect_negate(m, reflect_negate(m, p)), p), 1e-10);
    }
}

TEST(Properties, SymmetrizeIsIdempotentAndSymmetric)
{
    Gen g(12);
    for (int trial = 0; trial < 20; ++trial) {
        const auto c = g.set(2 * g.integer(1, 3));
        const auto once = symmetrize(c);
        const auto twice = symmetrize(once);
        EXPECT_TRUE(is_reflection_symmetric(once));
        for (int m = 1; m <= c.order(); ++m) {
            EXPECT_LE(gap(once.p(m), twice.p(m)), 1e-10);
        }
    }
}

TEST(Properties, WronskianMatchesLiouville)
{
    Gen g(13);
    for (int trial = 0; trial < 8; ++trial) {
        const auto c = g.set(2 * g.integer(1, 2));
        const complex lambda(g.uniform(-150.0, 150.0), g.uniform(-40.0, 40.0));
        const auto fm = integrate_fundamental(c, lambda);
        const complex det0 = fm.u0.determinant();
        EXPECT_LE(std::abs(det0 - wronskian_predicted(c, 0.0)), 1e-7 * std::max(1.0, std::abs(det0))) << lambda;
    }
}

TEST(Properties, SymmetrizedDeltaIsConstantAndPredicted)
{
    Gen g(14);
    for (int trial = 0; trial < 6; ++trial) {
        const auto c = symmetrize(g.set(2 * g.integer(1, 2)));
        const complex d(g.uniform(-2.0, 2.0), g.uniform(-1.0, 1.0));
        const SpectralProblem prob(c, DegenerateBoundary{d});
        const complex predicted = predicted_delta(prob);
        for (int k = 0; k < 3; ++k) {
            const complex lambda(g.uniform(-100.0, 100.0), g.uniform(-20.0, 20.0));
            EXPECT_LE(std::abs(char_det(prob, lambda).delta - predicted), 1e-6 * std::max(1.0, std::abs(predicted)))
                << d << " " << lambda;
        }
    }
}

TEST(Properties, DefiniteParityForSymmetrizedData)
{
    Gen g(15);
    for (int trial = 0; trial < 6; ++trial) {
        const auto c = symmetrize(g.set(2 * g.integer(1, 2)));
        const complex lambda(g.uniform(-150.0, 150.0), g.uniform(-40.0, 40.0));
        EXPECT_LE(fundamental_reflection_residual(c, lambda), 1e-7) << lambda;
    }
}

TEST(Properties, WindingIsAdditive)
{
    Gen g(16);
    const SpectralProblem prob(CoefficientSet::zeros(2), dirichlet_boundary());
    ContourOptions opts;
    opts.locate_roots = false;
    for (int trial = 0; trial < 4; ++trial) {
        const double lo = g.uniform(-130.0, -100.0), hi = g.uniform(-5.0, -1.0);
        double cut = g.uniform(lo + 5.0, hi - 5.0);
        const Rectangle whole{lo, hi, -1.5, 1.5};
        const auto total = count_zeros(prob, whole, opts);
        const auto a = count_zeros(prob, {lo, cut, -1.5, 1.5}, opts);
        const auto b = count_zeros(prob, {cut, hi, -1.5, 1.5}, opts);
        EXPECT_EQ(a.winding + b.winding, total.winding) << lo << " " << cut << " " << hi;
        EXPECT_EQ(total.winding, 3);
    }
}

TEST(Properties, IntegratorAgreesWithBruteForce)
{
    Gen g(17);
    for (int trial = 0; trial < 3; ++trial) {
        const auto c = g.set(2);
        const SpectralProblem prob(c, DegenerateBoundary{complex(g.uniform(-2.0, 2.0), 0.0)});
        const complex lambda(g.uniform(-60.0, 60.0), g.uniform(-10.0, 10.0));
        const complex a = char_det(prob, lambda).delta;
        const complex b = oracles::brute_force_det(prob, lambda);
        EXPECT_LE(std::abs(a - b), 1e-6 * std::max(1.0, std::abs(a))) << lambda;
    }
}
