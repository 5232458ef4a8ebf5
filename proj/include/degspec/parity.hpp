#pragma once

// Odd/even midpoint-parity combinations of the fundamental system and the
// eigenspace dimension of the boundary-condition matrix.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "degspec/coefficients.hpp"
#include "degspec/determinant.hpp"
#include "degspec/errors.hpp"
#include "degspec/integrator.hpp"

namespace degspec {

enum class Parity { odd, even };

inline std::string_view to_string(Parity p) { return p == Parity::odd ? "odd" : "even"; }

/// u = sum_k c_k u_{2k+1} (odd) or sum_k c_k u_{2k} (even), k = 0..nu-1,
/// sampled with its first n-1 derivatives on x_i = i / (N - 1).
struct ParityCombination {
    Parity parity = Parity::odd;
    std::vector<complex> constants;
    std::vector<double> grid;
    /// trace(ord, i) = u^(ord)(grid[i]).
    Eigen::MatrixXcd trace;

    /// The parity partner of slot k: +1 for even, -1 for odd.
    double reflection_sign() const noexcept { return parity == Parity::odd ? -1.0 : 1.0; }
};

struct ParityOptions {
    int grid_size = 201;
    /// Reject non-symmetric coefficients (residual above 1e-9). Switched off
    /// only for control experiments on non-symmetric data.
    bool require_symmetric = true;
};

/// Initial data at x = 1/2 placing the constants in the parity slots.
inline Eigen::VectorXcd parity_initial_data(int n, Parity parity, std::span<const complex> constants)
{
    Eigen::VectorXcd y0 = Eigen::VectorXcd::Zero(n);
    const int offset = parity == Parity::odd ? 1 : 0;
    for (std::size_t k = 0; k < constants.size(); ++k) {
        y0(2 * Eigen::Index(k) + offset) = constants[k];
    }
    return y0;
}

inline ParityCombination parity_combination(const SpectralProblem& prob, complex lambda, Parity parity,
                                            std::vector<complex> constants, const ParityOptions& opts = {})
{
    const int n = prob.order();
    if (constants.size() != std::size_t(n / 2)) {
        throw ValidationError("parity combination needs nu = " + std::to_string(n / 2) + " constants");
    }
    if (std::all_of(constants.begin(), constants.end(), [](complex z) { return z == complex{}; })) {
        throw ValidationError("parity combination constants are all zero");
    }
    if (opts.grid_size < 2) {
        throw ValidationError("parity combination grid needs at least 2 points");
    }
    if (opts.require_symmetric && !is_reflection_symmetric(prob.coefficients(), 1e-9)) {
        throw ValidationError("parity combination requires reflection-symmetric coefficients");
    }

    ParityCombination pc;
    pc.parity = parity;
    pc.constants = std::move(constants);
    pc.grid.resize(std::size_t(opts.grid_size));
    for (int i = 0; i < opts.grid_size; ++i) {
        pc.grid[std::size_t(i)] = double(i) / double(opts.grid_size - 1);
    }
    const Eigen::MatrixXcd y0 = parity_initial_data(n, parity, pc.constants);
    auto prop = propagate_from_midpoint(prob.coefficients(), lambda, y0, pc.grid, prob.integ());
    pc.trace.resize(n, opts.grid_size);
    for (int i = 0; i < opts.grid_size; ++i) {
        pc.trace.col(i) = prop.states[std::size_t(i)].col(0);
    }
    return pc;
}

/// max_i |u(x_i) - s u(1 - x_i)|, s = -1 odd, +1 even.
inline double reflection_residual(const ParityCombination& pc)
{
    const auto count = pc.trace.cols();
    const double s = pc.reflection_sign();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < count; ++i) {
        worst = std::max(worst, std::abs(pc.trace(0, i) - s * pc.trace(0, count - 1 - i)));
    }
    return worst;
}

/// max_j |B_j(u)| over the degenerate boundary forms, divided by the largest
/// endpoint derivative magnitude of u.
inline double bc_residual(const SpectralProblem& prob, const ParityCombination& pc)
{
    if (!prob.is_degenerate()) {
        throw ValidationError("bc_residual requires the degenerate boundary form");
    }
    const int n = prob.order();
    const complex d = prob.d();
    const auto left = pc.trace.col(0);
    const auto right = pc.trace.col(pc.trace.cols() - 1);
    const double scale = std::max(left.cwiseAbs().maxCoeff(), right.cwiseAbs().maxCoeff());
    double worst = 0.0;
    for (int j = 1; j <= n; ++j) {
        const double sign = (j + 1) % 2 == 0 ? 1.0 : -1.0;
        worst = std::max(worst, std::abs(left(n - j) + d * sign * right(n - j)));
    }
    return scale > 0.0 ? worst / scale : worst;
}

/// Numerical rank by singular values above tol * sigma_max.
inline int matrix_rank(const Eigen::MatrixXcd& m, double tol)
{
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) {
        return 0;
    }
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > tol * sv(0)) {
            ++rank;
        }
    }
    return rank;
}

inline int eigenspace_rank(const SpectralProblem& prob, complex lambda, double tol = 1e-9)
{
    return matrix_rank(bc_matrix(prob, lambda), tol);
}

/// n - rank: the number of independent eigenfunctions at lambda.
inline int eigenspace_dimension(const SpectralProblem& prob, complex lambda, double tol = 1e-9)
{
    return prob.order() - eigenspace_rank(prob, lambda, tol);
}

/// max over (ord, k) of |U1(ord, k) - (-1)^(k + ord) U0(ord, k)|.
inline double endpoint_parity_residual(const FundamentalMatrixPair& fm)
{
    double worst = 0.0;
    for (int ord = 0; ord < fm.n; ++ord) {
        for (int k = 0; k < fm.n; ++k) {
            const double s = (k + ord) % 2 == 0 ? 1.0 : -1.0;
            worst = std::max(worst, std::abs(fm.u1(ord, k) - s * fm.u0(ord, k)));
        }
    }
    return worst;
}

/// max over k and grid x of |u_k(x) - (-1)^k u_k(1 - x)|.
inline double fundamental_reflection_residual(const CoefficientSet& c, complex lambda, int grid_size = 201,
                                              const IntegratorConfig& cfg = {})
{
    const int n = c.order();
    std::vector<double> grid(static_cast<std::size_t>(grid_size));
    for (int i = 0; i < grid_size; ++i) {
        grid[std::size_t(i)] = double(i) / double(grid_size - 1);
    }
    const auto prop = propagate_from_midpoint(c, lambda, Eigen::MatrixXcd::Identity(n, n), grid, cfg);
    double worst = 0.0;
    for (int i = 0; i < grid_size; ++i) {
        const auto& a = prop.states[std::size_t(i)];
        const auto& b = prop.states[std::size_t(grid_size - 1 - i)];
        for (int k = 0; k < n; ++k) {
            const double s = k % 2 == 0 ? 1.0 : -1.0;
            worst = std::max(worst, std::abs(a(0, k) - s * b(0, k)));
        }
    }
    return worst;
}

}  // namespace degspec
