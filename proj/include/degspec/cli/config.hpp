#pragma once

// JSON job configuration for the degspec command-line tool.
//
//   {
//     "problem": {
//       "n": 2,
//       "boundary": {"type": "degenerate", "d": [0.5, 0]},
//       "coefficients": [{"kind": "polynomial", "params": [[-0.5, 0], [1, 0]]},
//                        {"kind": "cosine-series", "params": [[1, 0]]}],
//       "symmetrize": false
//     },
//     "integrator": {"rel_tol": 1e-10, "abs_tol": 1e-12},
//     "job": {"kind": "det", "lambda": [0, 0]}
//   }
//
// Complex numbers are [re, im] pairs; a bare number is read as a real value.

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "degspec/coefficients.hpp"
#include "degspec/determinant.hpp"
#include "degspec/errors.hpp"
#include "degspec/integrator.hpp"
#include "degspec/spectrum.hpp"

namespace degspec::cli {

using json = nlohmann::json;

enum class JobKind { verify_symmetry, det, scan, count, reproduce_paper };

inline std::string_view to_string(JobKind kind)
{
    switch (kind) {
    case JobKind::verify_symmetry: return "verify-symmetry";
    case JobKind::det: return "det";
    case JobKind::scan: return "scan";
    case JobKind::count: return "count";
    case JobKind::reproduce_paper: return "reproduce-paper";
    }
    return "unknown";
}

inline JobKind job_kind_from_string(std::string_view name)
{
    for (auto k : {JobKind::verify_symmetry, JobKind::det, JobKind::scan, JobKind::count, JobKind::reproduce_paper}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw ValidationError("job.kind: unknown job '" + std::string(name) + "'");
}

struct CoefficientSpec {
    CoefficientKind kind = CoefficientKind::zero;
    std::vector<complex> params;
};

struct ProblemSpec {
    int n = 2;
    BoundaryForm boundary = DegenerateBoundary{0.0};
    std::vector<CoefficientSpec> coefficients;
    bool symmetrize = false;
    IntegratorConfig integ;
};

struct JobParams {
    complex lambda{0.0, 0.0};
    Rectangle rect{-200.0, 200.0, -50.0, 50.0};
    int nx = 101;
    int ny = 101;
    int panels = 16;
    int grid_size = 1001;
    double root_tol = 1e-8;
    std::string output;
};

struct JobConfig {
    ProblemSpec problem;
    JobKind job = JobKind::det;
    JobParams params;
};

namespace detail {

inline void reject_unknown_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed)
{
    if (!obj.is_object()) {
        throw ValidationError(path + ": expected an object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ValidationError(path + "." + key + ": unknown key");
        }
    }
}

inline double read_number(const json& v, const std::string& path)
{
    if (!v.is_number()) {
        throw ValidationError(path + ": expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw ValidationError(path + ": must be finite");
    }
    return x;
}

inline int read_int(const json& v, const std::string& path)
{
    if (!v.is_number_integer()) {
        throw ValidationError(path + ": expected an integer");
    }
    return v.get<int>();
}

inline complex read_complex(const json& v, const std::string& path)
{
    if (v.is_number()) {
        return {read_number(v, path), 0.0};
    }
    if (!v.is_array() || v.size() != 2) {
        throw ValidationError(path + ": expected a complex number as [re, im]");
    }
    return {read_number(v[0], path + "[0]"), read_number(v[1], path + "[1]")};
}

inline Eigen::MatrixXcd read_matrix(const json& v, int n, const std::string& path)
{
    if (!v.is_array() || v.size() != std::size_t(n)) {
        throw ValidationError(path + ": expected " + std::to_string(n) + " rows");
    }
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i) {
        const auto& row = v[std::size_t(i)];
        const std::string rp = path + "[" + std::to_string(i) + "]";
        if (!row.is_array() || row.size() != std::size_t(n)) {
            throw ValidationError(rp + ": expected " + std::to_string(n) + " entries");
        }
        for (int j = 0; j < n; ++j) {
            m(i, j) = read_complex(row[std::size_t(j)], rp + "[" + std::to_string(j) + "]");
        }
    }
    return m;
}

inline json complex_to_json(complex z) { return json::array({z.real(), z.imag()}); }

inline json matrix_to_json(const Eigen::MatrixXcd& m)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(complex_to_json(m(i, j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

inline ProblemSpec parse_problem(const json& p, const json* integ)
{
    reject_unknown_keys(p, "problem", {"n", "boundary", "coefficients", "symmetrize"});
    ProblemSpec spec;
    if (!p.contains("n")) {
        throw ValidationError("problem.n: missing");
    }
    spec.n = read_int(p["n"], "problem.n");
    if (spec.n < 2 || spec.n % 2 != 0) {
        throw ValidationError("problem.n: n must be even and >= 2");
    }

    if (!p.contains("coefficients") || !p["coefficients"].is_array()) {
        throw ValidationError("problem.coefficients: expected an array of {kind, params}");
    }
    const auto& cs = p["coefficients"];
    if (cs.size() != std::size_t(spec.n)) {
        throw ValidationError("problem.coefficients: expected " + std::to_string(spec.n) + " entries, got "
                              + std::to_string(cs.size()));
    }
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const std::string path = "problem.coefficients[" + std::to_string(i) + "]";
        reject_unknown_keys(cs[i], path, {"kind", "params"});
        if (!cs[i].contains("kind") || !cs[i]["kind"].is_string()) {
            throw ValidationError(path + ".kind: expected a string");
        }
        CoefficientSpec c;
        try {
            c.kind = coefficient_kind_from_string(cs[i]["kind"].get<std::string>());
        } catch (const ValidationError& e) {
            throw ValidationError(path + ".kind: " + e.what());
        }
        if (cs[i].contains("params")) {
            const auto& ps = cs[i]["params"];
            if (!ps.is_array()) {
                throw ValidationError(path + ".params: expected an array");
            }
            for (std::size_t k = 0; k < ps.size(); ++k) {
                c.params.push_back(read_complex(ps[k], path + ".params[" + std::to_string(k) + "]"));
            }
        }
        try {
            (void)make_coefficient(c.kind, c.params);
        } catch (const ValidationError& e) {
            throw ValidationError(path + ": " + e.what());
        }
        spec.coefficients.push_back(std::move(c));
    }

    if (!p.contains("boundary")) {
        throw ValidationError("problem.boundary: missing");
    }
    const auto& b = p["boundary"];
    if (!b.is_object() || !b.contains("type") || !b["type"].is_string()) {
        throw ValidationError("problem.boundary.type: expected \"degenerate\" or \"general\"");
    }
    const auto type = b["type"].get<std::string>();
    if (type == "degenerate") {
        reject_unknown_keys(b, "problem.boundary", {"type", "d"});
        if (!b.contains("d")) {
            throw ValidationError("problem.boundary.d: missing");
        }
        spec.boundary = DegenerateBoundary{read_complex(b["d"], "problem.boundary.d")};
    } else if (type == "general") {
        reject_unknown_keys(b, "problem.boundary", {"type", "A", "B"});
        if (!b.contains("A") || !b.contains("B")) {
            throw ValidationError("problem.boundary: general form needs A and B");
        }
        spec.boundary = GeneralBoundary{read_matrix(b["A"], spec.n, "problem.boundary.A"),
                                        read_matrix(b["B"], spec.n, "problem.boundary.B")};
    } else {
        throw ValidationError("problem.boundary.type: expected \"degenerate\" or \"general\", got \"" + type + "\"");
    }

    if (p.contains("symmetrize")) {
        if (!p["symmetrize"].is_boolean()) {
            throw ValidationError("problem.symmetrize: expected a boolean");
        }
        spec.symmetrize = p["symmetrize"].get<bool>();
    }

    if (integ != nullptr) {
        reject_unknown_keys(*integ, "integrator", {"rel_tol", "abs_tol", "max_steps", "min_step", "lambda_cap"});
        auto& ic = spec.integ;
        if (integ->contains("rel_tol")) ic.rel_tol = read_number((*integ)["rel_tol"], "integrator.rel_tol");
        if (integ->contains("abs_tol")) ic.abs_tol = read_number((*integ)["abs_tol"], "integrator.abs_tol");
        if (integ->contains("min_step")) ic.min_step = read_number((*integ)["min_step"], "integrator.min_step");
        if (integ->contains("lambda_cap")) ic.lambda_cap = read_number((*integ)["lambda_cap"], "integrator.lambda_cap");
        if (integ->contains("max_steps")) {
            if (!(*integ)["max_steps"].is_number_integer()) {
                throw ValidationError("integrator.max_steps: expected an integer");
            }
            ic.max_steps = (*integ)["max_steps"].get<long>();
        }
        try {
            ic.validate();
        } catch (const ValidationError& e) {
            throw ValidationError(std::string("integrator: ") + e.what());
        }
    }
    return spec;
}

inline Rectangle parse_rect(const json& r)
{
    reject_unknown_keys(r, "job.rect", {"re_min", "re_max", "im_min", "im_max"});
    Rectangle rect;
    for (const char* key : {"re_min", "re_max", "im_min", "im_max"}) {
        if (!r.contains(key)) {
            throw ValidationError(std::string("job.rect.") + key + ": missing");
        }
    }
    rect.re_min = read_number(r["re_min"], "job.rect.re_min");
    rect.re_max = read_number(r["re_max"], "job.rect.re_max");
    rect.im_min = read_number(r["im_min"], "job.rect.im_min");
    rect.im_max = read_number(r["im_max"], "job.rect.im_max");
    if (rect.re_min > rect.re_max || rect.im_min > rect.im_max) {
        throw ValidationError("job.rect: min must not exceed max");
    }
    return rect;
}

}  // namespace detail

/// Parses and validates a JSON job document. Throws ValidationError with the
/// line and column of syntax errors, or the dotted path of the offending field.
inline JobConfig parse_config(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const auto [line, col] = detail::line_and_column(text, e.byte);
        throw ValidationError("parse error at line " + std::to_string(line) + ", column " + std::to_string(col)
                              + ": " + e.what());
    }
    detail::reject_unknown_keys(doc, "config", {"problem", "integrator", "job"});
    if (!doc.contains("problem")) {
        throw ValidationError("problem: missing");
    }

    JobConfig cfg;
    cfg.problem = detail::parse_problem(doc["problem"], doc.contains("integrator") ? &doc["integrator"] : nullptr);

    if (doc.contains("job")) {
        const auto& j = doc["job"];
        detail::reject_unknown_keys(j, "job",
                                    {"kind", "lambda", "rect", "nx", "ny", "panels", "grid_size", "root_tol", "output"});
        auto& jp = cfg.params;
        if (j.contains("kind")) {
            if (!j["kind"].is_string()) {
                throw ValidationError("job.kind: expected a string");
            }
            cfg.job = job_kind_from_string(j["kind"].get<std::string>());
        }
        if (j.contains("lambda")) jp.lambda = detail::read_complex(j["lambda"], "job.lambda");
        if (j.contains("rect")) jp.rect = detail::parse_rect(j["rect"]);
        if (j.contains("nx")) jp.nx = detail::read_int(j["nx"], "job.nx");
        if (j.contains("ny")) jp.ny = detail::read_int(j["ny"], "job.ny");
        if (j.contains("panels")) jp.panels = detail::read_int(j["panels"], "job.panels");
        if (j.contains("grid_size")) jp.grid_size = detail::read_int(j["grid_size"], "job.grid_size");
        if (j.contains("root_tol")) jp.root_tol = detail::read_number(j["root_tol"], "job.root_tol");
        if (j.contains("output")) {
            if (!j["output"].is_string()) {
                throw ValidationError("job.output: expected a string");
            }
            jp.output = j["output"].get<std::string>();
        }
        if (jp.nx < 1 || jp.ny < 1) throw ValidationError("job.nx, job.ny: must be >= 1");
        if (jp.panels < 1) throw ValidationError("job.panels: must be >= 1");
        if (jp.grid_size < 2) throw ValidationError("job.grid_size: must be >= 2");
        if (!(jp.root_tol > 0)) throw ValidationError("job.root_tol: must be positive");
    }
    return cfg;
}

inline json to_json(const JobConfig& cfg)
{
    const auto& p = cfg.problem;
    json coeffs = json::array();
    for (const auto& c : p.coefficients) {
        json entry{{"kind", std::string(to_string(c.kind))}};
        if (!c.params.empty()) {
            json params = json::array();
            for (auto z : c.params) {
                params.push_back(detail::complex_to_json(z));
            }
            entry["params"] = std::move(params);
        }
        coeffs.push_back(std::move(entry));
    }
    json boundary;
    if (const auto* deg = std::get_if<DegenerateBoundary>(&p.boundary)) {
        boundary = {{"type", "degenerate"}, {"d", detail::complex_to_json(deg->d)}};
    } else {
        const auto& g = std::get<GeneralBoundary>(p.boundary);
        boundary = {{"type", "general"}, {"A", detail::matrix_to_json(g.a)}, {"B", detail::matrix_to_json(g.b)}};
    }
    const auto& jp = cfg.params;
    json job{{"kind", std::string(to_string(cfg.job))},
             {"lambda", detail::complex_to_json(jp.lambda)},
             {"rect",
              {{"re_min", jp.rect.re_min}, {"re_max", jp.rect.re_max}, {"im_min", jp.rect.im_min}, {"im_max", jp.rect.im_max}}},
             {"nx", jp.nx},
             {"ny", jp.ny},
             {"panels", jp.panels},
             {"grid_size", jp.grid_size},
             {"root_tol", jp.root_tol}};
    if (!jp.output.empty()) {
        job["output"] = jp.output;
    }
    return json{{"problem", {{"n", p.n}, {"boundary", boundary}, {"coefficients", coeffs}, {"symmetrize", p.symmetrize}}},
                {"integrator",
                 {{"rel_tol", p.integ.rel_tol},
                  {"abs_tol", p.integ.abs_tol},
                  {"max_steps", p.integ.max_steps},
                  {"min_step", p.integ.min_step},
                  {"lambda_cap", p.integ.lambda_cap}}},
                {"job", job}};
}

inline CoefficientSet build_coefficients(const ProblemSpec& spec)
{
    std::vector<CoefficientFunction> fs;
    fs.reserve(spec.coefficients.size());
    for (const auto& c : spec.coefficients) {
        fs.push_back(make_coefficient(c.kind, c.params));
    }
    CoefficientSet set(spec.n, std::move(fs));
    return spec.symmetrize ? symmetrize(set) : set;
}

inline SpectralProblem build_problem(const ProblemSpec& spec)
{
    return SpectralProblem(build_coefficients(spec), spec.boundary, spec.integ);
}

}  // namespace degspec::cli
