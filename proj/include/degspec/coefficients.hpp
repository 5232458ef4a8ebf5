#pragma once

// Complex coefficient functions p_1..p_n on [0, 1] for the operator
//   l(u) = u^(n) + sum_{m=1}^{n} p_m(x) u^(n-m)
// and the midpoint reflection p_m(x) -> (-1)^m p_m(1 - x).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "degspec/errors.hpp"

namespace degspec {

using complex = std::complex<double>;

enum class CoefficientKind { zero, polynomial, cosine_series, piecewise_samples };

inline std::string_view to_string(CoefficientKind kind)
{
    switch (kind) {
    case CoefficientKind::zero: return "zero";
    case CoefficientKind::polynomial: return "polynomial";
    case CoefficientKind::cosine_series: return "cosine-series";
    case CoefficientKind::piecewise_samples: return "piecewise-samples";
    }
    return "unknown";
}

inline CoefficientKind coefficient_kind_from_string(std::string_view name)
{
    if (name == "zero") return CoefficientKind::zero;
    if (name == "polynomial") return CoefficientKind::polynomial;
    if (name == "cosine-series") return CoefficientKind::cosine_series;
    if (name == "piecewise-samples") return CoefficientKind::piecewise_samples;
    throw ValidationError("unknown coefficient kind '" + std::string(name) + "'");
}

/// A closed-form or sampled complex function on [0, 1].
///
/// Parameter meaning by kind:
///  - zero: no parameters.
///  - polynomial: params[k] multiplies x^k.
///  - cosine-series: params[q] multiplies cos(2 pi (q + 1) x).
///  - piecewise-samples: values at x_i = i / (N - 1), linearly interpolated.
class CoefficientFunction {
public:
    CoefficientFunction() = default;

    CoefficientKind kind() const noexcept { return kind_; }
    const std::vector<complex>& params() const noexcept { return params_; }

    bool is_zero() const noexcept
    {
        return kind_ == CoefficientKind::zero
            || std::all_of(params_.begin(), params_.end(), [](complex z) { return z == complex{}; });
    }

    complex operator()(double x) const
    {
        switch (kind_) {
        case CoefficientKind::zero:
            return {};
        case CoefficientKind::polynomial: {
            complex acc{};
            for (auto it = params_.rbegin(); it != params_.rend(); ++it) {
                acc = acc * x + *it;
            }
            return acc;
        }
        case CoefficientKind::cosine_series: {
            complex acc{};
            for (std::size_t q = 0; q < params_.size(); ++q) {
                acc += params_[q] * std::cos(2.0 * std::numbers::pi * double(q + 1) * x);
            }
            return acc;
        }
        case CoefficientKind::piecewise_samples: {
            const auto cells = params_.size() - 1;
            const double t = std::clamp(x, 0.0, 1.0) * double(cells);
            const auto i = std::min<std::size_t>(static_cast<std::size_t>(t), cells - 1);
            const double w = t - double(i);
            return params_[i] * (1.0 - w) + params_[i + 1] * w;
        }
        }
        return {};
    }

    /// Interior points where the function is not smooth.
    std::vector<double> breakpoints() const
    {
        std::vector<double> out;
        if (kind_ == CoefficientKind::piecewise_samples) {
            const auto cells = params_.size() - 1;
            for (std::size_t i = 1; i < cells; ++i) {
                out.push_back(double(i) / double(cells));
            }
        }
        return out;
    }

    friend CoefficientFunction make_coefficient(CoefficientKind kind, std::vector<complex> params);

private:
    CoefficientFunction(CoefficientKind kind, std::vector<complex> params)
        : kind_(kind), params_(std::move(params))
    {}

    CoefficientKind kind_ = CoefficientKind::zero;
    std::vector<complex> params_;
};

inline CoefficientFunction make_coefficient(CoefficientKind kind, std::vector<complex> params)
{
    for (const auto& z : params) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw ValidationError("coefficient parameters must be finite");
        }
    }
    switch (kind) {
    case CoefficientKind::zero:
        if (!params.empty()) {
            throw ValidationError("zero coefficient takes no parameters");
        }
        break;
    case CoefficientKind::polynomial:
    case CoefficientKind::cosine_series:
        if (params.empty()) {
            throw ValidationError(std::string(to_string(kind)) + " coefficient needs at least one parameter");
        }
        break;
    case CoefficientKind::piecewise_samples:
        if (params.size() < 2) {
            throw ValidationError("piecewise-samples coefficient needs at least 2 grid values");
        }
        break;
    }
    return CoefficientFunction(kind, std::move(params));
}

inline CoefficientFunction zero_coefficient() { return make_coefficient(CoefficientKind::zero, {}); }

inline CoefficientFunction polynomial(std::vector<complex> ascending)
{
    return make_coefficient(CoefficientKind::polynomial, std::move(ascending));
}

inline CoefficientFunction cosine_series(std::vector<complex> amplitudes)
{
    return make_coefficient(CoefficientKind::cosine_series, std::move(amplitudes));
}

inline CoefficientFunction piecewise_samples(std::vector<complex> values)
{
    return make_coefficient(CoefficientKind::piecewise_samples, std::move(values));
}

/// The data n = 2 nu and p_1..p_n.
class CoefficientSet {
public:
    CoefficientSet(int n, std::vector<CoefficientFunction> functions)
        : n_(n), functions_(std::move(functions))
    {
        if (n_ < 2 || n_ % 2 != 0) {
            throw ValidationError("n must be even and >= 2, got " + std::to_string(n_));
        }
        if (functions_.size() != std::size_t(n_)) {
            throw ValidationError("expected " + std::to_string(n_) + " coefficient functions, got "
                                  + std::to_string(functions_.size()));
        }
    }

    /// All-zero coefficients, i.e. u^(n) = lambda u.
    static CoefficientSet zeros(int n)
    {
        return CoefficientSet(n, std::vector<CoefficientFunction>(n < 0 ? 0 : std::size_t(n), zero_coefficient()));
    }

    int order() const noexcept { return n_; }
    int nu() const noexcept { return n_ / 2; }

    /// p_m, 1-based as in the operator.
    const CoefficientFunction& p(int m) const { return functions_.at(std::size_t(m - 1)); }
    const std::vector<CoefficientFunction>& functions() const noexcept { return functions_; }

    /// out[m - 1] = p_m(x).
    void evaluate(double x, std::span<complex> out) const
    {
        for (std::size_t i = 0; i < functions_.size(); ++i) {
            out[i] = functions_[i](x);
        }
    }

    std::vector<double> breakpoints() const
    {
        std::vector<double> all;
        for (const auto& f : functions_) {
            auto b = f.breakpoints();
            all.insert(all.end(), b.begin(), b.end());
        }
        std::sort(all.begin(), all.end());
        all.erase(std::unique(all.begin(), all.end()), all.end());
        return all;
    }

private:
    int n_;
    std::vector<CoefficientFunction> functions_;
};

namespace detail {

inline double reflection_sign(int m) { return m % 2 == 0 ? 1.0 : -1.0; }

/// Coefficients of p(1 - x) in ascending powers of x.
inline std::vector<complex> reflect_polynomial(const std::vector<complex>& a)
{
    const auto deg = a.size();
    std::vector<complex> out(deg, complex{});
    for (std::size_t k = 0; k < deg; ++k) {
        // (1 - x)^k = sum_j C(k, j) (-x)^j
        double binom = 1.0;
        for (std::size_t j = 0; j <= k; ++j) {
            out[j] += a[k] * (j % 2 == 0 ? binom : -binom);
            binom = binom * double(k - j) / double(j + 1);
        }
    }
    return out;
}

}  // namespace detail

/// q(x) = (-1)^m p(1 - x).
inline CoefficientFunction reflect_negate(int m, const CoefficientFunction& p)
{
    const double s = detail::reflection_sign(m);
    std::vector<complex> params;
    switch (p.kind()) {
    case CoefficientKind::zero:
        return p;
    case CoefficientKind::polynomial:
        params = detail::reflect_polynomial(p.params());
        break;
    case CoefficientKind::cosine_series:
        // cos(2 pi q (1 - x)) = cos(2 pi q x)
        params = p.params();
        break;
    case CoefficientKind::piecewise_samples:
        params.assign(p.params().rbegin(), p.params().rend());
        break;
    }
    for (auto& z : params) {
        z *= s;
    }
    return make_coefficient(p.kind(), std::move(params));
}

/// Entry m - 1 is max over a uniform grid of |p_m(x) - (-1)^m p_m(1 - x)|.
inline std::vector<double> symmetry_residual(const CoefficientSet& c, int grid_size = 1001)
{
    if (grid_size < 2) {
        throw ValidationError("symmetry_residual: grid_size must be >= 2");
    }
    std::vector<double> out(std::size_t(c.order()), 0.0);
    for (int m = 1; m <= c.order(); ++m) {
        const auto& p = c.p(m);
        const double s = detail::reflection_sign(m);
        double worst = 0.0;
        for (int i = 0; i < grid_size; ++i) {
            const double x = double(i) / double(grid_size - 1);
            worst = std::max(worst, std::abs(p(x) - s * p(1.0 - x)));
        }
        out[std::size_t(m - 1)] = worst;
    }
    return out;
}

inline bool is_reflection_symmetric(const CoefficientSet& c, double tol = 1e-9, int grid_size = 1001)
{
    const auto r = symmetry_residual(c, grid_size);
    return std::all_of(r.begin(), r.end(), [tol](double v) { return v <= tol; });
}

/// Projects each p_m onto (p_m(x) + (-1)^m p_m(1 - x)) / 2.
inline CoefficientSet symmetrize(const CoefficientSet& c)
{
    std::vector<CoefficientFunction> out;
    out.reserve(std::size_t(c.order()));
    for (int m = 1; m <= c.order(); ++m) {
        const auto& p = c.p(m);
        if (p.kind() == CoefficientKind::zero) {
            out.push_back(p);
            continue;
        }
        const auto q = reflect_negate(m, p);
        std::vector<complex> params(p.params().size());
        for (std::size_t i = 0; i < params.size(); ++i) {
            params[i] = 0.5 * (p.params()[i] + q.params()[i]);
        }
        out.push_back(make_coefficient(p.kind(), std::move(params)));
    }
    return CoefficientSet(c.order(), std::move(out));
}

}  // namespace degspec
