#pragma once

// The end-to-end check suite behind `degspec reproduce-paper`: for a
// reflection-symmetric operator, Delta is lambda-independent, equals
// sigma_n (1 - d^2)^nu exp(integral_0^{1/2} p_1), vanishes identically at
// d = +-1 with an nu-dimensional eigenspace, and has no zeros otherwise.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "degspec/coefficients.hpp"
#include "degspec/determinant.hpp"
#include "degspec/parity.hpp"
#include "degspec/spectrum.hpp"

namespace degspec::cli {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// p_m = (x - 1/2) / m for odd m, cos(2 pi x) / (m / 2) for even m.
inline CoefficientSet default_symmetric_coefficients(int n)
{
    std::vector<CoefficientFunction> fs;
    for (int m = 1; m <= n; ++m) {
        if (m % 2 == 1) {
            fs.push_back(polynomial({-0.5 / m, 1.0 / m}));
        } else {
            fs.push_back(cosine_series({2.0 / m}));
        }
    }
    return CoefficientSet(n, std::move(fs));
}

struct ReproduceOptions {
    Rectangle lambda_grid{-100.0, 100.0, -20.0, 20.0};
    int grid_points = 5;
    Rectangle count_rect{-200.0, 200.0, -50.0, 50.0};
    double constancy_tol = 1e-6;
    double prediction_tol = 1e-6;
    double zero_delta_tol = 1e-8;
    double bc_residual_tol = 1e-7;
    double rank_tol = 1e-9;
};

inline std::vector<CheckResult> reproduce_paper(const CoefficientSet& coeffs, complex d,
                                                const IntegratorConfig& integ = {}, const ReproduceOptions& opts = {})
{
    std::vector<CheckResult> out;
    const int n = coeffs.order();
    const int nu = coeffs.nu();

    const auto residual = symmetry_residual(coeffs);
    const double sym = *std::max_element(residual.begin(), residual.end());
    out.push_back({"coefficient symmetry", sym <= 1e-9, fmt::format("max residual {:.3e} (tol 1e-9)", sym)});
    if (!out.back().pass) {
        return out;
    }

    const SpectralProblem prob(coeffs, DegenerateBoundary{d}, integ);
    const auto grid = scan_grid(prob, opts.lambda_grid, opts.grid_points, opts.grid_points);
    const complex delta0 = char_det(prob, 0.0).delta;
    double spread = 0.0;
    for (const auto& s : grid.samples) {
        spread = std::max(spread, std::abs(s.delta - delta0));
    }
    const double spread_rel = spread / std::max(1.0, std::abs(delta0));
    out.push_back({"Delta constant in lambda", spread_rel <= opts.constancy_tol,
                   fmt::format("max |Delta - Delta(0)| / max(1,|Delta(0)|) = {:.3e} over {}x{} grid (tol {:.0e})",
                               spread_rel, opts.grid_points, opts.grid_points, opts.constancy_tol)});

    const complex predicted = predicted_delta(prob);
    double worst = 0.0;
    for (const auto& s : grid.samples) {
        worst = std::max(worst, std::abs(s.delta - predicted) / std::max(1.0, std::abs(predicted)));
    }
    out.push_back({"Delta matches (1-d^2)^nu closed form", worst <= opts.prediction_tol,
                   fmt::format("predicted {:.12g}{:+.12g}i, max relative gap {:.3e} (tol {:.0e})", predicted.real(),
                               predicted.imag(), worst, opts.prediction_tol)});

    const std::vector<complex> probes{{0.0, 0.0}, {10.0, -3.0}, {-57.0, 12.0}, {83.0, 5.0}};
    for (const double dd : {1.0, -1.0}) {
        const SpectralProblem whole(coeffs, DegenerateBoundary{dd}, integ);
        double max_abs = 0.0;
        bool dims_ok = true;
        std::string dims;
        for (const auto& l : probes) {
            max_abs = std::max(max_abs, std::abs(char_det(whole, l).delta));
            const int dim = eigenspace_dimension(whole, l, opts.rank_tol);
            dims_ok = dims_ok && dim == nu;
            dims += (dims.empty() ? "" : ",") + std::to_string(dim);
        }
        const Parity matching = dd > 0 ? Parity::even : Parity::odd;
        std::vector<complex> constants(std::size_t(nu), 0.0);
        for (int k = 0; k < nu; ++k) {
            constants[std::size_t(k)] = complex(1.0 + k, 0.5 * k);
        }
        const auto pc = parity_combination(whole, probes[1], matching, constants);
        const double bc = bc_residual(whole, pc);
        const bool pass = max_abs <= opts.zero_delta_tol && dims_ok && bc <= opts.bc_residual_tol;
        out.push_back({fmt::format("spectrum is the whole plane at d = {:+g}", dd), pass,
                       fmt::format("max |Delta| {:.3e}, eigenspace dims [{}] (want {}), {} combination bc residual {:.3e}",
                                   max_abs, dims, nu, to_string(matching), bc)});
    }

    const bool whole_plane = std::abs(1.0 - d * d) < 1e-12;
    if (whole_plane) {
        bool rejected = false;
        try {
            (void)count_zeros(prob, opts.count_rect);
        } catch (const WholePlaneSpectrumError&) {
            rejected = true;
        }
        out.push_back({"zero count rejected (Delta identically zero)", rejected,
                       rejected ? "count_zeros reports the whole plane" : "count_zeros did not reject"});
    } else {
        bool dims_ok = true;
        for (const auto& l : probes) {
            dims_ok = dims_ok && eigenspace_dimension(prob, l, opts.rank_tol) == 0;
        }
        out.push_back({"no eigenvectors at probe points", dims_ok, fmt::format("n = {}, d = {:g}{:+g}i", n, d.real(), d.imag())});
        ContourOptions copts;
        copts.locate_roots = false;
        const auto report = count_zeros(prob, opts.count_rect, copts);
        out.push_back({"no eigenvalues in count rectangle", report.winding == 0 && report.quad_error <= 0.25,
                       fmt::format("winding {} (quad error {:.3e}) over [{:g},{:g}]x[{:g},{:g}]", report.winding,
                                   report.quad_error, report.rect.re_min, report.rect.re_max, report.rect.im_min,
                                   report.rect.im_max)});
    }
    return out;
}

}  // namespace degspec::cli
