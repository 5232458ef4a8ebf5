#pragma once

// Companion-system integration of
//   u^(n) + sum_m p_m(x) u^(n-m) = lambda u
// from the midpoint x = 1/2 outwards, with an embedded Dormand-Prince
// 8(5,3) pair on complex state.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "degspec/coefficients.hpp"
#include "degspec/errors.hpp"

namespace degspec {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    long max_steps = 1'000'000;
    double min_step = 1e-14;
    /// Largest |lambda| accepted by the integrator.
    double lambda_cap = 1e6;

    void validate() const
    {
        if (!(rel_tol > 0) || !(abs_tol > 0) || !(min_step > 0) || !(lambda_cap > 0)) {
            throw ValidationError("integrator tolerances, min_step and lambda_cap must be positive");
        }
        if (max_steps < 10) {
            throw ValidationError("integrator max_steps must be >= 10");
        }
    }
};

/// Endpoint derivative data of the midpoint-normalized fundamental system:
/// u0(ord, k) = u_k^(ord)(0), u1(ord, k) = u_k^(ord)(1).
struct FundamentalMatrixPair {
    int n = 0;
    Eigen::MatrixXcd u0;
    Eigen::MatrixXcd u1;
    double est_error = 0.0;
};

/// out[i] = y[i + 1] for i < n - 1, out[n - 1] = lambda y[0] - sum_m p_m(x) y[n - m].
inline std::vector<complex> companion_rhs(const CoefficientSet& c, complex lambda, double x,
                                          std::span<const complex> y)
{
    const auto n = std::size_t(c.order());
    if (y.size() != n) {
        throw ValidationError("companion_rhs: state length must equal n");
    }
    std::vector<complex> p(n);
    c.evaluate(x, p);
    std::vector<complex> out(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        out[i] = y[i + 1];
    }
    complex top = lambda * y[0];
    for (std::size_t m = 1; m <= n; ++m) {
        if (!std::isfinite(p[m - 1].real()) || !std::isfinite(p[m - 1].imag())) {
            throw EvaluationError("coefficient p_" + std::to_string(m) + " is not finite at x = "
                                  + std::to_string(x));
        }
        top -= p[m - 1] * y[n - m];
    }
    out[n - 1] = top;
    return out;
}

namespace detail {

// Dormand-Prince 8(5,3) tableau (Hairer, Norsett & Wanner, DOP853).
struct Dop853 {
    static constexpr double c2 = 0.526001519587677318785587544488E-01;
    static constexpr double c3 = 0.789002279381515978178381316732E-01;
    static constexpr double c4 = 0.118350341907227396726757197510E+00;
    static constexpr double c5 = 0.281649658092772603273242802490E+00;
    static constexpr double c6 = 0.333333333333333333333333333333E+00;
    static constexpr double c7 = 0.25E+00;
    static constexpr double c8 = 0.307692307692307692307692307692E+00;
    static constexpr double c9 = 0.651282051282051282051282051282E+00;
    static constexpr double c10 = 0.6E+00;
    static constexpr double c11 = 0.857142857142857142857142857142E+00;

    static constexpr double b1 = 5.42937341165687622380535766363E-2;
    static constexpr double b6 = 4.45031289275240888144113950566E0;
    static constexpr double b7 = 1.89151789931450038304281599044E0;
    static constexpr double b8 = -5.8012039600105847814672114227E0;
    static constexpr double b9 = 3.1116436695781989440891606237E-1;
    static constexpr double b10 = -1.52160949662516078556178806805E-1;
    static constexpr double b11 = 2.01365400804030348374776537501E-1;
    static constexpr double b12 = 4.47106157277725905176885569043E-2;

    static constexpr double a21 = 5.26001519587677318785587544488E-2;
    static constexpr double a31 = 1.97250569845378994544595329183E-2;
    static constexpr double a32 = 5.91751709536136983633785987549E-2;
    static constexpr double a41 = 2.95875854768068491816892993775E-2;
    static constexpr double a43 = 8.87627564304205475450678981324E-2;
    static constexpr double a51 = 2.41365134159266685502369798665E-1;
    static constexpr double a53 = -8.84549479328286085344864962717E-1;
    static constexpr double a54 = 9.24834003261792003115737966543E-1;
    static constexpr double a61 = 3.7037037037037037037037037037E-2;
    static constexpr double a64 = 1.70828608729473871279604482173E-1;
    static constexpr double a65 = 1.25467687566822425016691814123E-1;
    static constexpr double a71 = 3.7109375E-2;
    static constexpr double a74 = 1.70252211019544039314978060272E-1;
    static constexpr double a75 = 6.02165389804559606850219397283E-2;
    static constexpr double a76 = -1.7578125E-2;
    static constexpr double a81 = 3.70920001185047927108779319836E-2;
    static constexpr double a84 = 1.70383925712239993810214054705E-1;
    static constexpr double a85 = 1.07262030446373284651809199168E-1;
    static constexpr double a86 = -1.53194377486244017527936158236E-2;
    static constexpr double a87 = 8.27378916381402288758473766002E-3;
    static constexpr double a91 = 6.24110958716075717114429577812E-1;
    static constexpr double a94 = -3.36089262944694129406857109825E0;
    static constexpr double a95 = -8.68219346841726006818189891453E-1;
    static constexpr double a96 = 2.75920996994467083049415600797E1;
    static constexpr double a97 = 2.01540675504778934086186788979E1;
    static constexpr double a98 = -4.34898841810699588477366255144E1;
    static constexpr double a101 = 4.77662536438264365890433908527E-1;
    static constexpr double a104 = -2.48811461997166764192642586468E0;
    static constexpr double a105 = -5.90290826836842996371446475743E-1;
    static constexpr double a106 = 2.12300514481811942347288949897E1;
    static constexpr double a107 = 1.52792336328824235832596922938E1;
    static constexpr double a108 = -3.32882109689848629194453265587E1;
    static constexpr double a109 = -2.03312017085086261358222928593E-2;
    static constexpr double a111 = -9.3714243008598732571704021658E-1;
    static constexpr double a114 = 5.18637242884406370830023853209E0;
    static constexpr double a115 = 1.09143734899672957818500254654E0;
    static constexpr double a116 = -8.14978701074692612513997267357E0;
    static constexpr double a117 = -1.85200656599969598641566180701E1;
    static constexpr double a118 = 2.27394870993505042818970056734E1;
    static constexpr double a119 = 2.49360555267965238987089396762E0;
    static constexpr double a1110 = -3.0467644718982195003823669022E0;
    static constexpr double a121 = 2.27331014751653820792359768449E0;
    static constexpr double a124 = -1.05344954667372501984066689879E1;
    static constexpr double a125 = -2.00087205822486249909675718444E0;
    static constexpr double a126 = -1.79589318631187989172765950534E1;
    static constexpr double a127 = 2.79488845294199600508499808837E1;
    static constexpr double a128 = -2.85899827713502369474065508674E0;
    static constexpr double a129 = -8.87285693353062954433549289258E0;
    static constexpr double a1210 = 1.23605671757943030647266201528E1;
    static constexpr double a1211 = 6.43392746015763530355970484046E-1;

    static constexpr double bhh1 = 0.244094488188976377952755905512E+00;
    static constexpr double bhh2 = 0.733846688281611857341361741547E+00;
    static constexpr double bhh3 = 0.220588235294117647058823529412E-01;

    static constexpr double er1 = 0.1312004499419488073250102996E-01;
    static constexpr double er6 = -0.1225156446376204440720569753E+01;
    static constexpr double er7 = -0.4957589496572501915214079952E+00;
    static constexpr double er8 = 0.1664377182454986536961530415E+01;
    static constexpr double er9 = -0.3503288487499736816886487290E+00;
    static constexpr double er10 = 0.3341791187130174790297318841E+00;
    static constexpr double er11 = 0.8192320648511571246570742613E-01;
    static constexpr double er12 = -0.2235530786388629525884427845E-01;
};

using State = Eigen::MatrixXcd;

/// Companion right-hand side applied column-wise to an n x m block of states.
class CompanionSystem {
public:
    CompanionSystem(const CoefficientSet& c, complex lambda)
        : c_(c), lambda_(lambda), n_(c.order()), p_(std::size_t(c.order()))
    {}

    int order() const noexcept { return n_; }

    void operator()(double x, const State& y, State& out)
    {
        c_.evaluate(std::clamp(x, 0.0, 1.0), p_);
        out.resize(y.rows(), y.cols());
        out.topRows(n_ - 1) = y.bottomRows(n_ - 1);
        out.row(n_ - 1) = lambda_ * y.row(0);
        for (int m = 1; m <= n_; ++m) {
            const complex pm = p_[std::size_t(m - 1)];
            if (!std::isfinite(pm.real()) || !std::isfinite(pm.imag())) {
                throw EvaluationError("coefficient p_" + std::to_string(m) + " is not finite at x = "
                                      + std::to_string(x));
            }
            if (pm != complex{}) {
                out.row(n_ - 1) -= pm * y.row(n_ - m);
            }
        }
    }

private:
    const CoefficientSet& c_;
    complex lambda_;
    int n_;
    std::vector<complex> p_;
};

/// Adaptive DOP853 march over a sequence of stop points in one direction.
class Dop853Stepper {
public:
    Dop853Stepper(CompanionSystem& f, const IntegratorConfig& cfg, complex lambda)
        : f_(f), cfg_(cfg), lambda_(lambda)
    {}

    double est_error() const noexcept { return est_error_; }

    /// Advances y from x to each stop in turn; stops must be monotone in
    /// the direction of travel. Returns the states at the stops.
    std::vector<State> run(double x, State y, std::span<const double> stops)
    {
        std::vector<State> out;
        out.reserve(stops.size());
        if (stops.empty()) {
            return out;
        }
        f_(x, y, k1_);
        const double span_total = std::abs(stops.back() - x);
        double h = initial_step(x, y, stops.back() > x ? 1.0 : -1.0, span_total);
        for (double stop : stops) {
            if (stop != x) {
                h = std::copysign(std::abs(h), stop - x);
                h = advance(x, y, stop, h);
                x = stop;
            }
            out.push_back(y);
        }
        return out;
    }

private:
    double weighted_norm_sq(const State& a, const State& y, const State& ynew) const
    {
        double acc = 0.0;
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            for (Eigen::Index i = 0; i < a.rows(); ++i) {
                const double sk = cfg_.abs_tol + cfg_.rel_tol * std::max(std::abs(y(i, j)), std::abs(ynew(i, j)));
                acc += std::norm(a(i, j)) / (sk * sk);
            }
        }
        return acc;
    }

    double initial_step(double x, const State& y, double dir, double hmax)
    {
        const auto count = double(y.size());
        double dnf = 0.0, dny = 0.0;
        for (Eigen::Index j = 0; j < y.cols(); ++j) {
            for (Eigen::Index i = 0; i < y.rows(); ++i) {
                const double sk = cfg_.abs_tol + cfg_.rel_tol * std::abs(y(i, j));
                dnf += std::norm(k1_(i, j)) / (sk * sk);
                dny += std::norm(y(i, j)) / (sk * sk);
            }
        }
        double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
        h = std::min(h, hmax);
        State y1 = y + dir * h * k1_;
        State f1;
        f_(x + dir * h, y1, f1);
        double der2 = 0.0;
        for (Eigen::Index j = 0; j < y.cols(); ++j) {
            for (Eigen::Index i = 0; i < y.rows(); ++i) {
                const double sk = cfg_.abs_tol + cfg_.rel_tol * std::abs(y(i, j));
                der2 += std::norm(f1(i, j) - k1_(i, j)) / (sk * sk);
            }
        }
        der2 = std::sqrt(der2 / count) / h;
        const double der12 = std::max(std::abs(der2), std::sqrt(dnf / count));
        const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 1.0 / 8.0);
        return dir * std::min({100.0 * h, h1, hmax});
    }

    /// March from x to stop; returns the proposed next step size.
    double advance(double& x, State& y, double stop, double h)
    {
        constexpr double safe = 0.9, facc1 = 1.0 / 0.333, facc2 = 1.0 / 6.0, expo1 = 1.0 / 8.0;
        const double dir = stop > x ? 1.0 : -1.0;
        bool reject = false;
        bool last = false;
        while (true) {
            if (++steps_ > cfg_.max_steps) {
                throw StiffnessError("integrator exceeded max_steps at lambda = " + format_complex(lambda_)
                                         + ", x = " + std::to_string(x),
                                     lambda_, x);
            }
            if (std::abs(h) < cfg_.min_step) {
                throw StiffnessError("integrator step size underflow at lambda = " + format_complex(lambda_)
                                         + ", x = " + std::to_string(x),
                                     lambda_, x);
            }
            double h_step = h;
            last = false;
            if ((x + 1.01 * h_step - stop) * dir > 0.0) {
                h_step = stop - x;
                last = true;
            }

            stage(x, y, h_step);

            const double n_comp = double(y.size());
            const double err5 = weighted_norm_sq(e5_, y, ynew_);
            const double err3 = weighted_norm_sq(e3_, y, ynew_);
            double deno = err5 + 0.01 * err3;
            if (deno <= 0.0) {
                deno = 1.0;
            }
            const double err = std::abs(h_step) * err5 * std::sqrt(1.0 / (deno * n_comp));

            const double fac11 = std::pow(err, expo1);
            const double fac = std::max(facc2, std::min(facc1, fac11 / safe));
            double hnew = h_step / fac;

            if (err <= 1.0) {
                est_error_ += err * local_scale();
                y = ynew_;
                f_(x + h_step, y, k1_);
                x = last ? stop : x + h_step;
                if (reject) {
                    hnew = dir * std::min(std::abs(hnew), std::abs(h_step));
                }
                reject = false;
                if (last) {
                    // Keep the unclipped proposal when the clip made the step short.
                    return dir * std::max(std::abs(hnew), std::abs(h));
                }
                h = hnew;
            } else {
                h = h_step / std::min(facc1, fac11 / safe);
                reject = true;
            }
        }
    }

    double local_scale() const
    {
        double s = 0.0;
        for (Eigen::Index i = 0; i < ynew_.size(); ++i) {
            s = std::max(s, cfg_.abs_tol + cfg_.rel_tol * std::abs(ynew_.data()[i]));
        }
        return s;
    }

    void stage(double x, const State& y, double h)
    {
        using T = Dop853;
        f_(x + T::c2 * h, y + h * T::a21 * k1_, k2_);
        f_(x + T::c3 * h, y + h * (T::a31 * k1_ + T::a32 * k2_), k3_);
        f_(x + T::c4 * h, y + h * (T::a41 * k1_ + T::a43 * k3_), k4_);
        f_(x + T::c5 * h, y + h * (T::a51 * k1_ + T::a53 * k3_ + T::a54 * k4_), k5_);
        f_(x + T::c6 * h, y + h * (T::a61 * k1_ + T::a64 * k4_ + T::a65 * k5_), k6_);
        f_(x + T::c7 * h, y + h * (T::a71 * k1_ + T::a74 * k4_ + T::a75 * k5_ + T::a76 * k6_), k7_);
        f_(x + T::c8 * h, y + h * (T::a81 * k1_ + T::a84 * k4_ + T::a85 * k5_ + T::a86 * k6_ + T::a87 * k7_), k8_);
        f_(x + T::c9 * h,
           y + h * (T::a91 * k1_ + T::a94 * k4_ + T::a95 * k5_ + T::a96 * k6_ + T::a97 * k7_ + T::a98 * k8_), k9_);
        f_(x + T::c10 * h,
           y + h * (T::a101 * k1_ + T::a104 * k4_ + T::a105 * k5_ + T::a106 * k6_ + T::a107 * k7_
                    + T::a108 * k8_ + T::a109 * k9_),
           k10_);
        f_(x + T::c11 * h,
           y + h * (T::a111 * k1_ + T::a114 * k4_ + T::a115 * k5_ + T::a116 * k6_ + T::a117 * k7_
                    + T::a118 * k8_ + T::a119 * k9_ + T::a1110 * k10_),
           k11_);
        f_(x + h,
           y + h * (T::a121 * k1_ + T::a124 * k4_ + T::a125 * k5_ + T::a126 * k6_ + T::a127 * k7_
                    + T::a128 * k8_ + T::a129 * k9_ + T::a1210 * k10_ + T::a1211 * k11_),
           k12_);
        State slope = T::b1 * k1_ + T::b6 * k6_ + T::b7 * k7_ + T::b8 * k8_ + T::b9 * k9_ + T::b10 * k10_
                    + T::b11 * k11_ + T::b12 * k12_;
        ynew_ = y + h * slope;
        e3_ = slope - T::bhh1 * k1_ - T::bhh2 * k9_ - T::bhh3 * k12_;
        e5_ = T::er1 * k1_ + T::er6 * k6_ + T::er7 * k7_ + T::er8 * k8_ + T::er9 * k9_ + T::er10 * k10_
            + T::er11 * k11_ + T::er12 * k12_;
    }

    static std::string format_complex(complex z) { return degspec::detail::format_complex(z); }

    CompanionSystem& f_;
    const IntegratorConfig& cfg_;
    complex lambda_;
    long steps_ = 0;
    double est_error_ = 0.0;
    State k1_, k2_, k3_, k4_, k5_, k6_, k7_, k8_, k9_, k10_, k11_, k12_;
    State ynew_, e3_, e5_;
};

inline void check_lambda(complex lambda, const IntegratorConfig& cfg)
{
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) {
        throw ValidationError("lambda must be finite");
    }
    if (std::abs(lambda) > cfg.lambda_cap) {
        throw ValidationError("|lambda| = " + std::to_string(std::abs(lambda)) + " exceeds the integrator cap "
                              + std::to_string(cfg.lambda_cap));
    }
}

}  // namespace detail

/// States at the requested points of the solutions with data `initial` at
/// x = 1/2. Both halves are marched outwards from the midpoint, stopping at
/// coefficient breakpoints so kinks fall on step boundaries.
struct MidpointPropagation {
    std::vector<Eigen::MatrixXcd> states;
    double est_error = 0.0;
};

inline MidpointPropagation propagate_from_midpoint(const CoefficientSet& c, complex lambda,
                                                   const Eigen::MatrixXcd& initial,
                                                   std::span<const double> points,
                                                   const IntegratorConfig& cfg)
{
    cfg.validate();
    detail::check_lambda(lambda, cfg);
    if (initial.rows() != c.order()) {
        throw ValidationError("initial data must have n rows");
    }
    for (double x : points) {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw ValidationError("output points must lie in [0, 1]");
        }
    }

    const auto kinks = c.breakpoints();
    // Stops on each side, ordered outwards from 1/2; flagged if requested.
    struct Stop {
        double x;
        bool output;
    };
    auto build = [&](bool right) {
        std::vector<Stop> stops;
        for (double x : points) {
            if (right ? x > 0.5 : x < 0.5) {
                stops.push_back({x, true});
            }
        }
        for (double x : kinks) {
            if (right ? x > 0.5 : x < 0.5) {
                stops.push_back({x, false});
            }
        }
        std::sort(stops.begin(), stops.end(), [right](const Stop& a, const Stop& b) {
            return right ? a.x < b.x : a.x > b.x;
        });
        return stops;
    };

    MidpointPropagation result;
    result.states.resize(points.size());
    detail::CompanionSystem sys(c, lambda);
    for (bool right : {false, true}) {
        const auto stops = build(right);
        if (stops.empty()) {
            continue;
        }
        std::vector<double> xs;
        xs.reserve(stops.size());
        for (const auto& s : stops) {
            xs.push_back(s.x);
        }
        detail::Dop853Stepper stepper(sys, cfg, lambda);
        auto states = stepper.run(0.5, initial, xs);
        result.est_error += stepper.est_error();
        for (std::size_t i = 0; i < stops.size(); ++i) {
            if (!stops[i].output) {
                continue;
            }
            for (std::size_t k = 0; k < points.size(); ++k) {
                if (points[k] == stops[i].x) {
                    result.states[k] = states[i];
                }
            }
        }
    }
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (points[k] == 0.5) {
            result.states[k] = initial;
        }
    }
    return result;
}

/// Fundamental system with u_k^(j)(1/2) = delta_{kj}, evaluated at both endpoints.
inline FundamentalMatrixPair integrate_fundamental(const CoefficientSet& c, complex lambda,
                                                   const IntegratorConfig& cfg = {})
{
    const int n = c.order();
    const std::array<double, 2> ends{0.0, 1.0};
    auto prop = propagate_from_midpoint(c, lambda, Eigen::MatrixXcd::Identity(n, n), ends, cfg);
    return FundamentalMatrixPair{n, std::move(prop.states[0]), std::move(prop.states[1]), prop.est_error};
}

/// Integral of p_1 over [a, b] by adaptive Gauss-Kronrod, split at breakpoints.
inline complex integrate_p1(const CoefficientSet& c, double a, double b, double rel_tol = 1e-10)
{
    const auto& p1 = c.p(1);
    if (p1.is_zero() || a == b) {
        return {};
    }
    const double lo = std::min(a, b), hi = std::max(a, b);
    std::vector<double> cuts{lo};
    for (double k : p1.breakpoints()) {
        if (k > lo && k < hi) {
            cuts.push_back(k);
        }
    }
    cuts.push_back(hi);

    complex total{};
    double total_err = 0.0, total_l1 = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double err = 0.0, l1 = 0.0;
        total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            [&p1](double t) { return p1(t); }, cuts[i], cuts[i + 1], 15, rel_tol, &err, &l1);
        total_err += err;
        total_l1 += l1;
    }
    if (!std::isfinite(total.real()) || !std::isfinite(total.imag())
        || total_err > rel_tol * std::max(std::abs(total), total_l1) + 1e-15) {
        throw QuadratureError("quadrature of p_1 did not converge (error estimate "
                              + std::to_string(total_err) + ")");
    }
    return a <= b ? total : -total;
}

/// Liouville-Abel value of the order-sorted Wronskian at x:
/// exp(-integral_{1/2}^{x} p_1).
inline complex wronskian_predicted(const CoefficientSet& c, double x)
{
    return std::exp(-integrate_p1(c, 0.5, x));
}

}  // namespace degspec
