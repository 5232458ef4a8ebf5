#pragma once

// Locating and counting zeros of Delta(lambda): lattice scans, argument
// principle on rectangles, Newton polishing.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "degspec/coefficients.hpp"
#include "degspec/determinant.hpp"
#include "degspec/errors.hpp"

namespace degspec {

struct Rectangle {
    double re_min = 0.0;
    double re_max = 0.0;
    double im_min = 0.0;
    double im_max = 0.0;

    void validate() const
    {
        if (!(re_min < re_max) || !(im_min < im_max)) {
            throw ValidationError("rectangle needs re_min < re_max and im_min < im_max");
        }
    }

    double width() const noexcept { return re_max - re_min; }
    double height() const noexcept { return im_max - im_min; }
    bool contains(complex z) const noexcept
    {
        return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
    }

    /// Grown about the centre by `fraction` of each side length.
    Rectangle inflated(double fraction) const noexcept
    {
        const double dx = 0.5 * fraction * width(), dy = 0.5 * fraction * height();
        return {re_min - dx, re_max + dx, im_min - dy, im_max + dy};
    }
};

struct ZeroCountReport {
    Rectangle rect;
    int winding = 0;
    double quad_error = 0.0;
    std::vector<complex> roots;
    double boundary_min_abs = 0.0;
};

struct ContourOptions {
    int panels_per_edge = 16;
    /// Absolute tolerance per panel on (1 / 2 pi i) integral Delta'/Delta.
    double panel_tol = 1e-6;
    int max_panel_depth = 10;
    /// Guard: min |Delta| on the contour must exceed guard * max |Delta|.
    double guard = 1e-8;
    int inflate_retries = 5;
    /// Accepted deviation of the contour integral from the nearest integer.
    double max_quad_error = 0.25;
    bool locate_roots = true;
    int max_split_depth = 12;
    double root_tol = 1e-8;
    int root_max_iter = 50;
};

namespace detail {

struct GaussLegendre8 {
    std::array<double, 8> nodes{};
    std::array<double, 8> weights{};

    GaussLegendre8()
    {
        using rule = boost::math::quadrature::gauss<double, 8>;
        const auto& a = rule::abscissa();
        const auto& w = rule::weights();
        for (std::size_t i = 0; i < 4; ++i) {
            nodes[i] = -a[3 - i];
            weights[i] = w[3 - i];
            nodes[7 - i] = a[3 - i];
            weights[7 - i] = w[3 - i];
        }
    }
};

inline const GaussLegendre8& gl8()
{
    static const GaussLegendre8 rule;
    return rule;
}

inline double fd_step(complex lambda) { return 1e-6 * std::max(1.0, std::abs(lambda)); }

/// Delta and its central-difference derivative.
struct DeltaWithSlope {
    complex delta;
    complex slope;
};

inline DeltaWithSlope delta_with_slope(const SpectralProblem& prob, complex lambda)
{
    const double h = fd_step(lambda);
    const complex center = char_det(prob, lambda).delta;
    const complex plus = char_det(prob, lambda + h).delta;
    const complex minus = char_det(prob, lambda - h).delta;
    return {center, (plus - minus) / (2.0 * h)};
}

/// Zeroth and first moments (1 / 2 pi i) contour integral of lambda^k Delta'/Delta.
struct ContourMoments {
    complex m0;
    complex m1;
    double min_abs = std::numeric_limits<double>::infinity();
    double max_abs = 0.0;
};

class ContourIntegrator {
public:
    ContourIntegrator(const SpectralProblem& prob, const ContourOptions& opts) : prob_(prob), opts_(opts) {}

    ContourMoments integrate(const Rectangle& r)
    {
        moments_ = {};
        const std::array<complex, 5> corners{complex{r.re_min, r.im_min}, complex{r.re_max, r.im_min},
                                             complex{r.re_max, r.im_max}, complex{r.re_min, r.im_max},
                                             complex{r.re_min, r.im_min}};
        for (std::size_t e = 0; e < 4; ++e) {
            const complex a = corners[e], b = corners[e + 1];
            for (int p = 0; p < opts_.panels_per_edge; ++p) {
                const complex pa = a + (b - a) * (double(p) / opts_.panels_per_edge);
                const complex pb = a + (b - a) * (double(p + 1) / opts_.panels_per_edge);
                const auto coarse = panel(pa, pb);
                const auto [m0, m1] = adaptive(pa, pb, coarse, opts_.panel_tol, 0);
                moments_.m0 += m0;
                moments_.m1 += m1;
            }
        }
        const complex scale = 1.0 / complex(0.0, 2.0 * std::numbers::pi);
        moments_.m0 *= scale;
        moments_.m1 *= scale;
        return moments_;
    }

private:
    using Pair = std::pair<complex, complex>;

    Pair panel(complex a, complex b)
    {
        const auto& rule = gl8();
        const complex mid = 0.5 * (a + b), half = 0.5 * (b - a);
        complex s0{}, s1{};
        for (std::size_t i = 0; i < 8; ++i) {
            const complex z = mid + half * rule.nodes[i];
            const auto ds = delta_with_slope(prob_, z);
            const double mag = std::abs(ds.delta);
            moments_.min_abs = std::min(moments_.min_abs, mag);
            moments_.max_abs = std::max(moments_.max_abs, mag);
            if (mag == 0.0) {
                throw ContourError("Delta vanishes exactly on the contour at lambda = "
                                   + degspec::detail::format_complex(z));
            }
            const complex g = ds.slope / ds.delta;
            s0 += rule.weights[i] * g;
            s1 += rule.weights[i] * z * g;
        }
        return {s0 * half, s1 * half};
    }

    Pair adaptive(complex a, complex b, const Pair& whole, double tol, int depth)
    {
        const complex mid = 0.5 * (a + b);
        const auto left = panel(a, mid);
        const auto right = panel(mid, b);
        const Pair split{left.first + right.first, left.second + right.second};
        const double diff = std::abs(split.first - whole.first) / (2.0 * std::numbers::pi);
        if (diff <= tol || depth >= opts_.max_panel_depth) {
            return split;
        }
        const auto l = adaptive(a, mid, left, 0.5 * tol, depth + 1);
        const auto rr = adaptive(mid, b, right, 0.5 * tol, depth + 1);
        return {l.first + rr.first, l.second + rr.second};
    }

    const SpectralProblem& prob_;
    const ContourOptions& opts_;
    ContourMoments moments_;
};

inline bool guard_ok(const ContourMoments& m, double guard)
{
    return m.min_abs > guard * m.max_abs;
}

inline bool is_identically_zero(const SpectralProblem& prob)
{
    if (!prob.is_degenerate()) {
        return false;
    }
    const complex d = prob.d();
    return std::abs(1.0 - d * d) < 1e-12 && is_reflection_symmetric(prob.coefficients(), 1e-9);
}

}  // namespace detail

/// Newton iteration on Delta with a central-difference derivative. Converges
/// when the step is below 1e-10 |lambda| and |Delta| <= tol * scale, where
/// scale is the Hadamard bound of the boundary-condition matrix at lambda0.
inline complex refine_root(const SpectralProblem& prob, complex lambda0, double tol = 1e-8, int max_iter = 50)
{
    if (max_iter < 1) {
        throw ValidationError("refine_root: max_iter must be >= 1");
    }
    const Eigen::MatrixXcd m0 = bc_matrix(prob, lambda0);
    double scale = 1.0;
    for (Eigen::Index i = 0; i < m0.rows(); ++i) {
        scale *= m0.row(i).norm();
    }
    scale = std::max(scale, std::numeric_limits<double>::min());

    complex lambda = lambda0;
    for (int it = 0; it < max_iter; ++it) {
        detail::DeltaWithSlope ds;
        try {
            ds = detail::delta_with_slope(prob, lambda);
        } catch (const Error& e) {
            throw NoRootError(std::string("Newton iteration left the admissible region: ") + e.what());
        }
        if (ds.delta == complex{}) {
            return lambda;
        }
        if (ds.slope == complex{} || !std::isfinite(std::abs(ds.slope))) {
            throw NoRootError("Delta has vanishing slope at lambda = " + degspec::detail::format_complex(lambda)
                              + "; no root found");
        }
        const complex step = ds.delta / ds.slope;
        const complex next = lambda - step;
        if (!std::isfinite(std::abs(next)) || std::abs(next) > prob.integ().lambda_cap) {
            throw NoRootError("Newton iteration diverged from lambda0 = " + degspec::detail::format_complex(lambda0));
        }
        lambda = next;
        if (std::abs(step) <= 1e-10 * std::max(1.0, std::abs(lambda))) {
            const complex at = char_det(prob, lambda).delta;
            if (std::abs(at) <= tol * scale) {
                return lambda;
            }
        }
    }
    throw NoRootError("Newton iteration did not converge within " + std::to_string(max_iter)
                      + " iterations from lambda0 = " + degspec::detail::format_complex(lambda0));
}

namespace detail {

struct RootLocator {
    const SpectralProblem& prob;
    const ContourOptions& opts;
    ContourIntegrator integrator;
    std::vector<complex> roots;

    RootLocator(const SpectralProblem& p, const ContourOptions& o) : prob(p), opts(o), integrator(p, o) {}

    void add(complex z)
    {
        for (const auto& r : roots) {
            if (std::abs(r - z) <= 1e-7 * std::max(1.0, std::abs(z))) {
                return;
            }
        }
        roots.push_back(z);
    }

    std::optional<ContourMoments> moments(const Rectangle& r)
    {
        auto m = integrator.integrate(r);
        if (!guard_ok(m, opts.guard)) {
            return std::nullopt;
        }
        return m;
    }

    void locate(const Rectangle& r, const ContourMoments& m, int depth)
    {
        const int count = int(std::lround(m.m0.real()));
        if (count <= 0 || std::abs(m.m0 - double(count)) > opts.max_quad_error) {
            return;
        }
        if (count == 1 || depth >= opts.max_split_depth) {
            const complex guess = m.m1 / m.m0;
            try {
                const complex z = refine_root(prob, guess, opts.root_tol, opts.root_max_iter);
                if (r.inflated(1e-6).contains(z)) {
                    add(z);
                }
            } catch (const NoRootError&) {
            }
            return;
        }
        const bool split_re = r.width() >= r.height();
        for (double frac : {0.5, 0.45, 0.55, 0.4, 0.6}) {
            Rectangle a = r, b = r;
            if (split_re) {
                a.re_max = b.re_min = r.re_min + frac * r.width();
            } else {
                a.im_max = b.im_min = r.im_min + frac * r.height();
            }
            const auto ma = moments(a);
            if (!ma) {
                continue;
            }
            const auto mb = moments(b);
            if (!mb) {
                continue;
            }
            locate(a, *ma, depth + 1);
            locate(b, *mb, depth + 1);
            return;
        }
    }
};

}  // namespace detail

/// Argument-principle zero count of Delta inside `rect`, with Newton-polished
/// roots when requested.
inline ZeroCountReport count_zeros(const SpectralProblem& prob, const Rectangle& rect, const ContourOptions& opts = {})
{
    rect.validate();
    if (opts.panels_per_edge < 1) {
        throw ValidationError("panels_per_edge must be >= 1");
    }
    if (detail::is_identically_zero(prob)) {
        throw WholePlaneSpectrumError(
            "Delta is identically zero (d = +-1 with symmetric coefficients): the spectrum is the whole "
            "complex plane; use eigenspace_rank instead of counting zeros");
    }

    detail::RootLocator locator(prob, opts);
    Rectangle r = rect;
    std::optional<detail::ContourMoments> m;
    for (int attempt = 0; attempt <= opts.inflate_retries; ++attempt) {
        m = locator.moments(r);
        if (m) {
            break;
        }
        r = r.inflated(0.01);
    }
    if (!m) {
        throw ContourError("Delta comes too close to zero on the contour; inflating the rectangle "
                           + std::to_string(opts.inflate_retries) + " times did not help");
    }

    ZeroCountReport report;
    report.rect = r;
    report.winding = int(std::lround(m->m0.real()));
    report.quad_error = std::abs(m->m0 - double(report.winding));
    report.boundary_min_abs = m->min_abs;
    if (report.quad_error > opts.max_quad_error) {
        throw ContourError("contour integral " + degspec::detail::format_complex(m->m0)
                           + " is not close to an integer; increase panels_per_edge");
    }
    if (report.winding < 0) {
        throw ContourError("negative winding " + std::to_string(report.winding) + " for an entire function");
    }
    if (opts.locate_roots && report.winding > 0) {
        locator.locate(r, *m, 0);
        report.roots = std::move(locator.roots);
        std::sort(report.roots.begin(), report.roots.end(), [](complex a, complex b) {
            return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
        });
        if (report.roots.size() > std::size_t(report.winding)) {
            report.roots.resize(std::size_t(report.winding));
        }
    }
    return report;
}

/// Delta on an nx by ny lattice, rows ordered by imaginary part then real
/// part, both ascending. A count of 1 along an axis samples only its minimum.
struct ScanGrid {
    int nx = 0;
    int ny = 0;
    std::vector<CharDetSample> samples;
    /// Empty for successful points, else the integrator's message.
    std::vector<std::string> failures;

    const CharDetSample& at(int i, int j) const { return samples[std::size_t(j) * std::size_t(nx) + std::size_t(i)]; }
};

inline ScanGrid scan_grid(const SpectralProblem& prob, const Rectangle& rect, int nx, int ny)
{
    if (nx < 1 || ny < 1) {
        throw ValidationError("scan_grid needs nx, ny >= 1");
    }
    if ((nx > 1 && !(rect.re_min < rect.re_max)) || (ny > 1 && !(rect.im_min < rect.im_max))
        || rect.re_min > rect.re_max || rect.im_min > rect.im_max) {
        throw ValidationError("scan rectangle is empty along a sampled axis");
    }
    auto coord = [](double lo, double hi, int count, int i) {
        if (count == 1) {
            return lo;
        }
        return i == count - 1 ? hi : lo + (hi - lo) * double(i) / double(count - 1);
    };
    ScanGrid grid;
    grid.nx = nx;
    grid.ny = ny;
    grid.samples.reserve(std::size_t(nx) * std::size_t(ny));
    grid.failures.reserve(std::size_t(nx) * std::size_t(ny));
    for (int j = 0; j < ny; ++j) {
        const double im = coord(rect.im_min, rect.im_max, ny, j);
        for (int i = 0; i < nx; ++i) {
            const complex lambda{coord(rect.re_min, rect.re_max, nx, i), im};
            try {
                grid.samples.push_back(char_det(prob, lambda));
                grid.failures.emplace_back();
            } catch (const Error& e) {
                const double nan = std::numeric_limits<double>::quiet_NaN();
                grid.samples.push_back({lambda, complex{nan, nan}, std::numeric_limits<double>::infinity()});
                grid.failures.emplace_back(e.what());
            }
        }
    }
    return grid;
}

}  // namespace degspec
