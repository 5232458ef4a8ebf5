#pragma once

// Reference values computed without the adaptive integrator or the Eigen
// determinant path: closed-form constant-coefficient systems, the classical
// Dirichlet spectrum, and a fixed-step RK4 recomputation of Delta.

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "degspec/coefficients.hpp"
#include "degspec/determinant.hpp"
#include "degspec/errors.hpp"
#include "degspec/integrator.hpp"

namespace degspec::oracles {

namespace detail {

inline double factorial(int k)
{
    double f = 1.0;
    for (int i = 2; i <= k; ++i) {
        f *= double(i);
    }
    return f;
}

/// u_k^(ord) at x = 1/2 + t for u^(n) = lambda u with identity data at 1/2.
inline complex const_coeff_entry(int n, complex lambda, int ord, int k, double t)
{
    if (lambda == complex{}) {
        if (k < ord) {
            return {};
        }
        return std::pow(t, k - ord) / factorial(k - ord);
    }
    if (std::abs(lambda) < 1.0) {
        // Entire series sum_q lambda^q t^(k - ord + q n) / (k - ord + q n)!,
        // free of the 1/r^k cancellation the root formula has near 0.
        complex acc{};
        complex lam_q = 1.0;
        for (int q = 0; q < 200; ++q, lam_q *= lambda) {
            const int e = k - ord + q * n;
            if (e < 0) {
                continue;
            }
            const complex term = lam_q * std::pow(t, e) / factorial(e);
            acc += term;
            if (q > 2 && std::abs(term) < 1e-18 * std::max(1.0, std::abs(acc))) {
                break;
            }
        }
        return acc;
    }
    // (r^(ord - k) / n) sum_i zeta^(i (ord - k)) exp(r zeta^i t)
    const complex r = std::pow(lambda, 1.0 / double(n));
    complex acc{};
    for (int i = 0; i < n; ++i) {
        const complex zeta = std::polar(1.0, 2.0 * std::numbers::pi * double(i) / double(n));
        acc += std::pow(zeta, ord - k) * std::exp(r * zeta * t);
    }
    return std::pow(r, ord - k) * acc / double(n);
}

/// Determinant by Gaussian elimination with complete pivoting.
inline complex complete_pivot_det(std::vector<std::vector<complex>> a)
{
    const std::size_t n = a.size();
    complex det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pr = col, pc = col;
        double best = -1.0;
        for (std::size_t i = col; i < n; ++i) {
            for (std::size_t j = col; j < n; ++j) {
                if (std::abs(a[i][j]) > best) {
                    best = std::abs(a[i][j]);
                    pr = i;
                    pc = j;
                }
            }
        }
        if (best == 0.0) {
            return {};
        }
        if (pr != col) {
            std::swap(a[pr], a[col]);
            det = -det;
        }
        if (pc != col) {
            for (auto& row : a) {
                std::swap(row[pc], row[col]);
            }
            det = -det;
        }
        det *= a[col][col];
        for (std::size_t i = col + 1; i < n; ++i) {
            const complex f = a[i][col] / a[col][col];
            for (std::size_t j = col; j < n; ++j) {
                a[i][j] -= f * a[col][j];
            }
        }
    }
    return det;
}

/// Classical RK4 with `steps` equal steps from 1/2 to `target`; columns are
/// the fundamental solutions, returned as rows[ord][k].
inline std::vector<std::vector<complex>> rk4_march(const CoefficientSet& c, complex lambda, double target, long steps)
{
    const int n = c.order();
    const std::size_t dim = std::size_t(n) * std::size_t(n);
    // state[ord * n + k] = u_k^(ord)
    std::vector<complex> y(dim, complex{});
    for (int k = 0; k < n; ++k) {
        y[std::size_t(k * n + k)] = 1.0;
    }
    std::vector<complex> p(static_cast<std::size_t>(n));
    auto rhs = [&](double x, const std::vector<complex>& s, std::vector<complex>& out) {
        for (int m = 1; m <= n; ++m) {
            p[std::size_t(m - 1)] = c.p(m)(x);
        }
        for (int k = 0; k < n; ++k) {
            for (int ord = 0; ord + 1 < n; ++ord) {
                out[std::size_t(ord * n + k)] = s[std::size_t((ord + 1) * n + k)];
            }
            complex top = lambda * s[std::size_t(k)];
            for (int m = 1; m <= n; ++m) {
                top -= p[std::size_t(m - 1)] * s[std::size_t((n - m) * n + k)];
            }
            out[std::size_t((n - 1) * n + k)] = top;
        }
    };

    const double h = (target - 0.5) / double(steps);
    std::vector<complex> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    for (long s = 0; s < steps; ++s) {
        const double x = 0.5 + double(s) * h;
        rhs(x, y, k1);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        rhs(x + 0.5 * h, tmp, k2);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        rhs(x + 0.5 * h, tmp, k3);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * k3[i];
        rhs(x + h, tmp, k4);
        for (std::size_t i = 0; i < dim; ++i) {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    std::vector<std::vector<complex>> rows(static_cast<std::size_t>(n), std::vector<complex>(static_cast<std::size_t>(n)));
    for (int ord = 0; ord < n; ++ord) {
        for (int k = 0; k < n; ++k) {
            rows[std::size_t(ord)][std::size_t(k)] = y[std::size_t(ord * n + k)];
        }
    }
    return rows;
}

}  // namespace detail

/// Exact midpoint-normalized fundamental system of u^(n) = lambda u.
inline FundamentalMatrixPair const_coeff_fundamental(int n, complex lambda)
{
    if (n < 2 || n % 2 != 0) {
        throw ValidationError("const_coeff_fundamental: n must be even and >= 2");
    }
    FundamentalMatrixPair fm;
    fm.n = n;
    fm.u0.resize(n, n);
    fm.u1.resize(n, n);
    for (int ord = 0; ord < n; ++ord) {
        for (int k = 0; k < n; ++k) {
            fm.u0(ord, k) = detail::const_coeff_entry(n, lambda, ord, k, -0.5);
            fm.u1(ord, k) = detail::const_coeff_entry(n, lambda, ord, k, 0.5);
        }
    }
    return fm;
}

/// k-th eigenvalue of u'' = lambda u, u(0) = u(1) = 0: -k^2 pi^2.
inline complex dirichlet_reference(int k)
{
    if (k < 1) {
        throw ValidationError("dirichlet_reference: k must be >= 1");
    }
    return -double(k) * double(k) * std::numbers::pi * std::numbers::pi;
}

/// Delta(lambda) from a fixed-step RK4 march with `steps` steps per half
/// interval, its own boundary assembly and a complete-pivoting determinant.
inline complex brute_force_det(const SpectralProblem& prob, complex lambda, long steps = 100000)
{
    if (steps < 1000) {
        throw ValidationError("brute_force_det: steps must be >= 1000");
    }
    const int n = prob.order();
    const auto left = detail::rk4_march(prob.coefficients(), lambda, 0.0, steps);
    const auto right = detail::rk4_march(prob.coefficients(), lambda, 1.0, steps);

    std::vector<std::vector<complex>> m(std::size_t(n), std::vector<complex>(std::size_t(n), complex{}));
    if (prob.is_degenerate()) {
        const complex d = prob.d();
        for (int j = 1; j <= n; ++j) {
            const complex w = (j % 2 == 1) ? d : -d;
            for (int k = 0; k < n; ++k) {
                m[std::size_t(j - 1)][std::size_t(k)]
                    = left[std::size_t(n - j)][std::size_t(k)] + w * right[std::size_t(n - j)][std::size_t(k)];
            }
        }
    } else {
        const auto& g = std::get<GeneralBoundary>(prob.boundary());
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                complex acc{};
                for (int ord = 0; ord < n; ++ord) {
                    acc += g.a(j, ord) * left[std::size_t(ord)][std::size_t(k)]
                         + g.b(j, ord) * right[std::size_t(ord)][std::size_t(k)];
                }
                m[std::size_t(j)][std::size_t(k)] = acc;
            }
        }
    }
    return detail::complete_pivot_det(std::move(m));
}

}  // namespace degspec::oracles
