#pragma once

// Boundary forms, the boundary-condition matrix applied to the midpoint
// fundamental system, and the characteristic determinant Delta(lambda).

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <variant>

#include <Eigen/Dense>

#include "degspec/coefficients.hpp"
#include "degspec/errors.hpp"
#include "degspec/integrator.hpp"

namespace degspec {

/// B_j(u) = u^(n-j)(0) + d (-1)^(j+1) u^(n-j)(1), j = 1..n.
struct DegenerateBoundary {
    complex d;
};

/// B_j(u) = sum_ord a(j, ord) u^(ord)(0) + b(j, ord) u^(ord)(1).
struct GeneralBoundary {
    Eigen::MatrixXcd a;
    Eigen::MatrixXcd b;
};

using BoundaryForm = std::variant<DegenerateBoundary, GeneralBoundary>;

/// The degenerate family written out as explicit (A | B) blocks.
inline GeneralBoundary degenerate_as_general(int n, complex d)
{
    GeneralBoundary g{Eigen::MatrixXcd::Zero(n, n), Eigen::MatrixXcd::Zero(n, n)};
    for (int j = 1; j <= n; ++j) {
        const double sign = (j + 1) % 2 == 0 ? 1.0 : -1.0;
        g.a(j - 1, n - j) = 1.0;
        g.b(j - 1, n - j) = d * sign;
    }
    return g;
}

/// u(0) = 0, u(1) = 0 for second-order problems.
inline GeneralBoundary dirichlet_boundary()
{
    GeneralBoundary g{Eigen::MatrixXcd::Zero(2, 2), Eigen::MatrixXcd::Zero(2, 2)};
    g.a(0, 0) = 1.0;
    g.b(1, 0) = 1.0;
    return g;
}

/// Row-reversal sign (-1)^(n(n-1)/2) relating det ||u_i^(n-j)(0)|| to the
/// Wronskian with rows sorted by derivative order.
inline double row_reversal_sign(int n) { return ((n * (n - 1) / 2) % 2 == 0) ? 1.0 : -1.0; }

class SpectralProblem {
public:
    SpectralProblem(CoefficientSet coefficients, BoundaryForm boundary, IntegratorConfig integ = {})
        : coefficients_(std::move(coefficients)), boundary_(std::move(boundary)), integ_(integ)
    {
        integ_.validate();
        if (const auto* g = std::get_if<GeneralBoundary>(&boundary_)) {
            const int n = coefficients_.order();
            if (g->a.rows() != n || g->a.cols() != n || g->b.rows() != n || g->b.cols() != n) {
                throw ValidationError("general boundary blocks must be " + std::to_string(n) + "x"
                                      + std::to_string(n));
            }
            Eigen::MatrixXcd ab(n, 2 * n);
            ab << g->a, g->b;
            Eigen::FullPivLU<Eigen::MatrixXcd> lu(ab);
            lu.setThreshold(1e-12);
            if (lu.rank() != n) {
                throw ValidationError("general boundary form (A | B) must have full row rank");
            }
        } else {
            const complex d = std::get<DegenerateBoundary>(boundary_).d;
            if (!std::isfinite(d.real()) || !std::isfinite(d.imag())) {
                throw ValidationError("boundary parameter d must be finite");
            }
        }
    }

    const CoefficientSet& coefficients() const noexcept { return coefficients_; }
    const BoundaryForm& boundary() const noexcept { return boundary_; }
    const IntegratorConfig& integ() const noexcept { return integ_; }
    int order() const noexcept { return coefficients_.order(); }

    bool is_degenerate() const noexcept { return std::holds_alternative<DegenerateBoundary>(boundary_); }

    complex d() const
    {
        if (!is_degenerate()) {
            throw ValidationError("problem does not use the degenerate boundary form");
        }
        return std::get<DegenerateBoundary>(boundary_).d;
    }

private:
    CoefficientSet coefficients_;
    BoundaryForm boundary_;
    IntegratorConfig integ_;
};

/// Boundary forms applied to the columns of a fundamental system.
inline Eigen::MatrixXcd bc_matrix(const BoundaryForm& boundary, const FundamentalMatrixPair& fm)
{
    const int n = fm.n;
    if (const auto* deg = std::get_if<DegenerateBoundary>(&boundary)) {
        Eigen::MatrixXcd m(n, n);
        for (int j = 1; j <= n; ++j) {
            const double sign = (j + 1) % 2 == 0 ? 1.0 : -1.0;
            m.row(j - 1) = fm.u0.row(n - j) + (deg->d * sign) * fm.u1.row(n - j);
        }
        return m;
    }
    const auto& g = std::get<GeneralBoundary>(boundary);
    return g.a * fm.u0 + g.b * fm.u1;
}

inline Eigen::MatrixXcd bc_matrix(const SpectralProblem& prob, complex lambda)
{
    return bc_matrix(prob.boundary(), integrate_fundamental(prob.coefficients(), lambda, prob.integ()));
}

struct CharDetSample {
    complex lambda;
    complex delta;
    double est_error = 0.0;
};

namespace detail {

/// Largest coefficient magnitude multiplying an endpoint value in any row.
inline double boundary_weight(const BoundaryForm& boundary)
{
    if (const auto* deg = std::get_if<DegenerateBoundary>(&boundary)) {
        return 1.0 + std::abs(deg->d);
    }
    const auto& g = std::get<GeneralBoundary>(boundary);
    return g.a.cwiseAbs().rowwise().sum().maxCoeff() + g.b.cwiseAbs().rowwise().sum().maxCoeff();
}

/// Hadamard-style bound on |det(M + E)| - |det M| for entrywise |E| <= eps.
inline double determinant_perturbation(const Eigen::MatrixXcd& m, double eps)
{
    const auto n = m.rows();
    Eigen::VectorXd norms(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        norms(i) = m.row(i).norm();
    }
    double bound = 0.0;
    const double row_eps = eps * std::sqrt(double(n));
    for (Eigen::Index j = 0; j < n; ++j) {
        double prod = row_eps;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i != j) {
                prod *= norms(i) + row_eps;
            }
        }
        bound += prod;
    }
    return bound;
}

}  // namespace detail

/// Delta(lambda) = det of the boundary-condition matrix (partially pivoted LU).
inline CharDetSample char_det(const SpectralProblem& prob, complex lambda)
{
    const auto fm = integrate_fundamental(prob.coefficients(), lambda, prob.integ());
    const Eigen::MatrixXcd m = bc_matrix(prob.boundary(), fm);
    const complex delta = m.partialPivLu().determinant();
    const double entry_err = detail::boundary_weight(prob.boundary()) * fm.est_error;
    return CharDetSample{lambda, delta, detail::determinant_perturbation(m, entry_err)};
}

/// sigma_n (1 - d^2)^nu exp(integral_0^{1/2} p_1), the lambda-independent
/// value of Delta for reflection-symmetric coefficients.
inline complex predicted_delta(const SpectralProblem& prob)
{
    if (!prob.is_degenerate()) {
        throw ValidationError("predicted_delta requires the degenerate boundary form");
    }
    if (!is_reflection_symmetric(prob.coefficients(), 1e-9)) {
        throw ValidationError("predicted_delta requires reflection-symmetric coefficients (residual <= 1e-9)");
    }
    const int n = prob.order();
    const complex d = prob.d();
    const complex wronskian_at_zero = wronskian_predicted(prob.coefficients(), 0.0);
    return row_reversal_sign(n) * std::pow(1.0 - d * d, n / 2) * wronskian_at_zero;
}

/// Relative gap between the computed Delta(lambda) and the closed-form value.
/// Needs only the degenerate form; for non-symmetric coefficients the same
/// closed-form expression is used as the comparison target.
inline double factorization_check(const SpectralProblem& prob, complex lambda)
{
    if (!prob.is_degenerate()) {
        throw ValidationError("factorization_check requires the degenerate boundary form");
    }
    const int n = prob.order();
    const complex d = prob.d();
    const complex predicted
        = row_reversal_sign(n) * std::pow(1.0 - d * d, n / 2) * wronskian_predicted(prob.coefficients(), 0.0);
    const complex computed = char_det(prob, lambda).delta;
    return std::abs(computed - predicted) / std::max(1.0, std::abs(predicted));
}

}  // namespace degspec
