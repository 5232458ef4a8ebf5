#pragma once

// Subcommand dispatch for the degspec tool. Exit codes: 0 success,
// 1 validation error, 2 numerical or I/O failure (or failed checks in
// reproduce-paper).

#include <complex>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "degspec/cli/config.hpp"
#include "degspec/cli/csv.hpp"
#include "degspec/cli/reproduce.hpp"
#include "degspec/degspec.hpp"

namespace degspec::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 1;
inline constexpr int exit_numerical = 2;

/// "re" or "re,im".
inline complex parse_complex_arg(const std::string& text, const std::string& name)
{
    std::istringstream is(text);
    double re = 0.0, im = 0.0;
    char comma = 0;
    if (!(is >> re)) {
        throw ValidationError(name + ": expected RE or RE,IM, got '" + text + "'");
    }
    if (is >> comma) {
        if (comma != ',' || !(is >> im)) {
            throw ValidationError(name + ": expected RE or RE,IM, got '" + text + "'");
        }
    }
    std::string rest;
    if (is >> rest) {
        throw ValidationError(name + ": trailing characters in '" + text + "'");
    }
    return {re, im};
}

inline JobConfig load_config(const std::string& path)
{
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw ValidationError("cannot read config '" + path + "'");
    }
    std::ostringstream buf;
    buf << file.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

inline std::string fmt_complex(complex z) { return fmt::format("{:.17g} {} {:.17g}i", z.real(), z.imag() < 0 ? '-' : '+', std::abs(z.imag())); }

inline void print_det(const CharDetSample& s, std::ostream& out)
{
    fmt::print(out, "lambda    = {}\n", fmt_complex(s.lambda));
    fmt::print(out, "re_delta  = {:.17g}\n", s.delta.real());
    fmt::print(out, "im_delta  = {:.17g}\n", s.delta.imag());
    fmt::print(out, "est_error = {:.6e}\n", s.est_error);
}

inline void print_report(const ZeroCountReport& r, std::ostream& out)
{
    fmt::print(out, "rect             = [{:g}, {:g}] x [{:g}, {:g}]\n", r.rect.re_min, r.rect.re_max, r.rect.im_min,
               r.rect.im_max);
    fmt::print(out, "winding          = {}\n", r.winding);
    fmt::print(out, "quad_error       = {:.6e}\n", r.quad_error);
    fmt::print(out, "boundary_min_abs = {:.6e}\n", r.boundary_min_abs);
    fmt::print(out, "roots            = {}\n", r.roots.size());
    for (std::size_t i = 0; i < r.roots.size(); ++i) {
        fmt::print(out, "root[{}]          = {}\n", i, fmt_complex(r.roots[i]));
    }
}

inline int run_command(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"Characteristic determinants and eigenvalue counts for n-th order two-point problems", "degspec"};
    app.require_subcommand(1);

    std::string config_path;
    std::string lambda_text;
    std::string output_path;
    std::optional<int> nx, ny, panels, grid_size;

    auto* verify = app.add_subcommand("verify-symmetry", "Per-coefficient reflection-symmetry residuals");
    verify->add_option("config", config_path, "Job config (JSON)")->required();
    verify->add_option("--grid", grid_size, "Evaluation grid size");

    auto* det = app.add_subcommand("det", "Characteristic determinant at one lambda");
    det->add_option("config", config_path, "Job config (JSON)")->required();
    det->add_option("--lambda", lambda_text, "Spectral parameter RE or RE,IM");

    auto* scan = app.add_subcommand("scan", "Delta on a lattice, written as CSV");
    scan->add_option("config", config_path, "Job config (JSON)")->required();
    scan->add_option("--output,-o", output_path, "CSV path");
    scan->add_option("--nx", nx, "Lattice points along Re lambda");
    scan->add_option("--ny", ny, "Lattice points along Im lambda");

    auto* count = app.add_subcommand("count", "Argument-principle zero count in a rectangle");
    count->add_option("config", config_path, "Job config (JSON)")->required();
    count->add_option("--panels", panels, "Gauss-Legendre panels per edge");

    int repro_n = 2;
    std::string repro_d = "0.5";
    auto* repro = app.add_subcommand("reproduce-paper", "Run the symmetric-coefficient dichotomy checks");
    repro->add_option("--n", repro_n, "Even operator order")->capture_default_str();
    repro->add_option("--d", repro_d, "Boundary parameter RE or RE,IM")->capture_default_str();
    repro->add_option("--config", config_path, "Use this config's coefficients and integrator settings");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_validation;
    }

    try {
        if (*repro) {
            const complex d = parse_complex_arg(repro_d, "--d");
            IntegratorConfig integ;
            std::optional<CoefficientSet> coeffs;
            if (!config_path.empty()) {
                const auto cfg = load_config(config_path);
                integ = cfg.problem.integ;
                coeffs = build_coefficients(cfg.problem);
            } else {
                if (repro_n < 2 || repro_n % 2 != 0) {
                    throw ValidationError("--n: n must be even and >= 2");
                }
                coeffs = default_symmetric_coefficients(repro_n);
            }
            fmt::print(out, "reproduce-paper: n = {}, d = {}\n", coeffs->order(), fmt_complex(d));
            bool all = true;
            for (const auto& c : reproduce_paper(*coeffs, d, integ)) {
                fmt::print(out, "{} {}: {}\n", c.pass ? "PASS" : "FAIL", c.name, c.detail);
                all = all && c.pass;
            }
            fmt::print(out, "{}\n", all ? "ALL PASS" : "SOME CHECKS FAILED");
            return all ? exit_ok : exit_numerical;
        }

        auto cfg = load_config(config_path);
        if (*verify) {
            cfg.job = JobKind::verify_symmetry;
            if (grid_size) cfg.params.grid_size = *grid_size;
            const auto coeffs = build_coefficients(cfg.problem);
            const auto r = symmetry_residual(coeffs, cfg.params.grid_size);
            double worst = 0.0;
            for (std::size_t m = 0; m < r.size(); ++m) {
                fmt::print(out, "p_{} residual = {:.6e}\n", m + 1, r[m]);
                worst = std::max(worst, r[m]);
            }
            fmt::print(out, "max residual = {:.6e} ({})\n", worst, worst <= 1e-9 ? "symmetric" : "not symmetric");
            return exit_ok;
        }

        const auto prob = build_problem(cfg.problem);
        if (*det) {
            cfg.job = JobKind::det;
            if (!lambda_text.empty()) cfg.params.lambda = parse_complex_arg(lambda_text, "--lambda");
            print_det(char_det(prob, cfg.params.lambda), out);
            return exit_ok;
        }
        if (*scan) {
            cfg.job = JobKind::scan;
            if (!output_path.empty()) cfg.params.output = output_path;
            if (nx) cfg.params.nx = *nx;
            if (ny) cfg.params.ny = *ny;
            if (cfg.params.output.empty()) {
                throw ValidationError("scan: no output path (job.output or --output)");
            }
            const auto grid = scan_grid(prob, cfg.params.rect, cfg.params.nx, cfg.params.ny);
            emit_csv(grid, cfg.params.output);
            std::size_t failed = 0;
            for (const auto& f : grid.failures) {
                if (!f.empty()) {
                    ++failed;
                    fmt::print(err, "warning: {}\n", f);
                }
            }
            fmt::print(out, "wrote {} rows to {} ({} failed points)\n", grid.samples.size(), cfg.params.output, failed);
            return exit_ok;
        }
        if (*count) {
            cfg.job = JobKind::count;
            if (panels) cfg.params.panels = *panels;
            ContourOptions opts;
            opts.panels_per_edge = cfg.params.panels;
            opts.root_tol = cfg.params.root_tol;
            cfg.params.rect.validate();
            print_report(count_zeros(prob, cfg.params.rect, opts), out);
            return exit_ok;
        }
    } catch (const ValidationError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return exit_validation;
    } catch (const Error& e) {
        fmt::print(err, "error: {}\n", e.what());
        return exit_numerical;
    }
    return exit_validation;
}

}  // namespace degspec::cli
