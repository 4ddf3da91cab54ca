#include "hct/hh.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <utility>

namespace hct {

namespace {

constexpr double kOrderingSlack = 1e-9;
constexpr double kResidualSlack = 1e-7;
constexpr double kBoundSlack = 1e-9;

void finish_chain(ChainReport& report) {
    const std::size_t n = report.values.size();
    report.margins.resize(n - 1);
    report.ordering_ok = true;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        report.margins[i] = report.values[i + 1] - report.values[i];
        const double slack = report.quad_errors[i] + report.quad_errors[i + 1] + kOrderingSlack;
        if (report.margins[i] < -slack) report.ordering_ok = false;
    }
}

using Partial2 = std::function<double(double, double)>;

Partial2 make_mixed_partial(const Expr& f, PartialMode mode) {
    if (mode == PartialMode::Symbolic) {
        // shared_ptr keeps the derivative tree alive inside the closure
        auto dxy = std::make_shared<Expr>(mixed_partial(f));
        return [dxy](double x, double y) { return eval(*dxy, x, y); };
    }
    auto fcopy = std::make_shared<Expr>(f);
    return [fcopy](double x, double y) {
        const double hx = 1e-5 * std::max(1.0, std::fabs(x));
        const double hy = 1e-5 * std::max(1.0, std::fabs(y));
        const double fpp = eval(*fcopy, x + hx, y + hy);
        const double fpm = eval(*fcopy, x + hx, y - hy);
        const double fmp = eval(*fcopy, x - hx, y + hy);
        const double fmm = eval(*fcopy, x - hx, y - hy);
        return (fpp - fpm - fmp + fmm) / (4.0 * hx * hy);
    };
}

struct LhsParts {
    double value = 0.0;
    double err = 0.0;
    bool converged = true;
};

// Corner average + harmonic double mean - half the sum of the four edge
// harmonic means.
LhsParts identity_lhs(const Expr& f, const Rect& r, const Tolerance& tol) {
    LhsParts out;
    const double corner_avg =
        0.25 * (eval(f, r.a, r.c) + eval(f, r.a, r.d) + eval(f, r.b, r.c) + eval(f, r.b, r.d));

    QuadResult dm = harmonic_mean_2d(f, r, tol);

    auto edge_x = [&f](double y) { return [&f, y](double x) { return eval(f, x, y); }; };
    auto edge_y = [&f](double x) { return [&f, x](double y) { return eval(f, x, y); }; };
    QuadResult e1 = harmonic_mean_1d(edge_x(r.c), r.a, r.b, tol);
    QuadResult e2 = harmonic_mean_1d(edge_x(r.d), r.a, r.b, tol);
    QuadResult e3 = harmonic_mean_1d(edge_y(r.a), r.c, r.d, tol);
    QuadResult e4 = harmonic_mean_1d(edge_y(r.b), r.c, r.d, tol);

    out.value = corner_avg + dm.value - 0.5 * (e1.value + e2.value + e3.value + e4.value);
    out.err = dm.err_estimate +
              0.5 * (e1.err_estimate + e2.err_estimate + e3.err_estimate + e4.err_estimate);
    out.converged = dm.converged && e1.converged && e2.converged && e3.converged && e4.converged;
    return out;
}

}  // namespace

ChainReport chain_harmonic_1d(const Expr& g, double a, double b, const Tolerance& tol) {
    if (!(a > 0.0 && a < b)) throw std::invalid_argument("chain requires 0 < a < b");
    if (uses_variable(g, Var::Y))
        throw std::invalid_argument("the one-dimensional chain requires an expression free of y");

    ChainReport report;
    report.kind = ChainKind::Harmonic1D;
    report.names = {"midpoint", "harmonic_mean", "endpoint_average"};

    const double midpoint = eval(g, 2.0 * a * b / (a + b), 1.0);
    QuadResult mean = harmonic_mean_1d([&g](double x) { return eval(g, x, 1.0); }, a, b, tol);
    const double endpoints = 0.5 * (eval(g, a, 1.0) + eval(g, b, 1.0));

    report.values = {midpoint, mean.value, endpoints};
    report.quad_errors = {0.0, mean.err_estimate, 0.0};
    report.quad_converged = mean.converged;
    finish_chain(report);
    return report;
}

ChainReport chain_harmonic_2d(const Expr& f, const Rect& r, const Tolerance& tol) {
    ChainReport report;
    report.kind = ChainKind::Harmonic2D;
    report.names = {"midpoint", "midline_mean_average", "double_mean", "edge_mean_average",
                    "corner_average"};

    const double hx = 2.0 * r.a * r.b / (r.a + r.b);
    const double hy = 2.0 * r.c * r.d / (r.c + r.d);

    const double midpoint = eval(f, hx, hy);

    QuadResult mid_x = harmonic_mean_1d([&f, hy](double x) { return eval(f, x, hy); }, r.a, r.b, tol);
    QuadResult mid_y = harmonic_mean_1d([&f, hx](double y) { return eval(f, hx, y); }, r.c, r.d, tol);
    const double midline = 0.5 * (mid_x.value + mid_y.value);
    const double midline_err = 0.5 * (mid_x.err_estimate + mid_y.err_estimate);

    QuadResult dm = harmonic_mean_2d(f, r, tol);

    QuadResult e1 = harmonic_mean_1d([&f, &r](double x) { return eval(f, x, r.c); }, r.a, r.b, tol);
    QuadResult e2 = harmonic_mean_1d([&f, &r](double x) { return eval(f, x, r.d); }, r.a, r.b, tol);
    QuadResult e3 = harmonic_mean_1d([&f, &r](double y) { return eval(f, r.a, y); }, r.c, r.d, tol);
    QuadResult e4 = harmonic_mean_1d([&f, &r](double y) { return eval(f, r.b, y); }, r.c, r.d, tol);
    const double edges = 0.25 * (e1.value + e2.value + e3.value + e4.value);
    const double edges_err =
        0.25 * (e1.err_estimate + e2.err_estimate + e3.err_estimate + e4.err_estimate);

    const double corners =
        0.25 * (eval(f, r.a, r.c) + eval(f, r.a, r.d) + eval(f, r.b, r.c) + eval(f, r.b, r.d));

    report.values = {midpoint, midline, dm.value, edges, corners};
    report.quad_errors = {0.0, midline_err, dm.err_estimate, edges_err, 0.0};
    report.quad_converged = mid_x.converged && mid_y.converged && dm.converged && e1.converged &&
                            e2.converged && e3.converged && e4.converged;
    finish_chain(report);
    return report;
}

ChainReport chain_classical_2d(const Expr& f, const Rect& r, const Tolerance& tol) {
    ChainReport report;
    report.kind = ChainKind::Classical2D;
    report.names = {"midpoint", "midline_mean_average", "double_mean", "corner_average"};

    const double mx = 0.5 * (r.a + r.b);
    const double my = 0.5 * (r.c + r.d);
    const double wx = r.b - r.a;
    const double wy = r.d - r.c;

    const double midpoint = eval(f, mx, my);

    Tolerance line_tol = tol;
    line_tol.abs_tol = tol.abs_tol * wx;
    QuadResult mid_x = integrate_1d([&f, my](double x) { return eval(f, x, my); }, r.a, r.b, line_tol);
    line_tol.abs_tol = tol.abs_tol * wy;
    QuadResult mid_y = integrate_1d([&f, mx](double y) { return eval(f, mx, y); }, r.c, r.d, line_tol);
    const double midline = 0.5 * (mid_x.value / wx + mid_y.value / wy);
    const double midline_err = 0.5 * (mid_x.err_estimate / wx + mid_y.err_estimate / wy);

    Tolerance area_tol = tol;
    area_tol.abs_tol = tol.abs_tol * wx * wy;
    QuadResult dm = integrate_2d([&f](double x, double y) { return eval(f, x, y); }, r.a, r.b, r.c,
                                 r.d, area_tol);
    const double double_mean = dm.value / (wx * wy);
    const double double_mean_err = dm.err_estimate / (wx * wy);

    const double corners =
        0.25 * (eval(f, r.a, r.c) + eval(f, r.a, r.d) + eval(f, r.b, r.c) + eval(f, r.b, r.d));

    report.values = {midpoint, midline, double_mean, corners};
    report.quad_errors = {0.0, midline_err, double_mean_err, 0.0};
    report.quad_converged = mid_x.converged && mid_y.converged && dm.converged;
    finish_chain(report);
    return report;
}

IdentityReport evaluate_identity(const Expr& f, const Rect& r, const Tolerance& tol, PartialMode partials) {
    IdentityReport report;

    Tolerance quad_tol = tol;
    if (partials == PartialMode::FiniteDifference) {
        // FD mixed partials carry roundoff noise around 1e-7 relative; a
        // tighter target would only chase that noise.
        quad_tol.abs_tol = std::max(quad_tol.abs_tol, 1e-7);
    }

    LhsParts lhs = identity_lhs(f, r, quad_tol);
    report.lhs = lhs.value;
    report.lhs_err = lhs.err;

    Partial2 mixed = make_mixed_partial(f, partials);
    const double a = r.a, b = r.b, c = r.c, d = r.d;
    const double prefactor = a * b * c * d * (b - a) * (d - c) / 4.0;

    Tolerance rhs_tol = quad_tol;
    rhs_tol.abs_tol = quad_tol.abs_tol / prefactor;
    QuadResult weighted = integrate_2d_unit(
        [&mixed, a, b, c, d](double t, double s) {
            const double at = t * b + (1.0 - t) * a;
            const double bs = s * d + (1.0 - s) * c;
            return (1.0 - 2.0 * t) * (1.0 - 2.0 * s) / (at * at * bs * bs) *
                   mixed(a * b / at, c * d / bs);
        },
        rhs_tol);

    report.rhs = prefactor * weighted.value;
    report.rhs_err = prefactor * weighted.err_estimate;
    report.residual = report.lhs - report.rhs;
    report.residual_ok = std::fabs(report.residual) <= report.lhs_err + report.rhs_err + kResidualSlack;
    report.quad_converged = lhs.converged && weighted.converged;
    return report;
}

BoundReport evaluate_bound(const Expr& f, const Rect& r, const BoundParams& bp, const Tolerance& tol,
                           PartialMode partials) {
    BoundReport report;

    Tolerance quad_tol = tol;
    if (partials == PartialMode::FiniteDifference) quad_tol.abs_tol = std::max(quad_tol.abs_tol, 1e-7);

    LhsParts lhs = identity_lhs(f, r, quad_tol);
    report.lhs_abs = std::fabs(lhs.value);
    report.lhs_err = lhs.err;

    Partial2 mixed = make_mixed_partial(f, partials);
    const double q = bp.q;
    const double corner_q[4] = {std::pow(std::fabs(mixed(r.a, r.c)), q),
                                std::pow(std::fabs(mixed(r.a, r.d)), q),
                                std::pow(std::fabs(mixed(r.b, r.c)), q),
                                std::pow(std::fabs(mixed(r.b, r.d)), q)};

    MomentsResult direct = holder_moments_direct(r, q, quad_tol);
    report.moments_direct = direct.moments;

    const double prefactor = r.a * r.b * r.c * r.d * (r.b - r.a) * (r.d - r.c) / 4.0;
    const double holder_factor = std::pow(bp.p + 1.0, -2.0 / bp.p);

    const double m[4] = {direct.moments.m1, direct.moments.m2, direct.moments.m3, direct.moments.m4};
    double weighted_sum = 0.0;
    double weighted_err = 0.0;
    for (int i = 0; i < 4; ++i) {
        weighted_sum += m[i] * corner_q[i];
        weighted_err += direct.err_estimates[static_cast<std::size_t>(i)] * corner_q[i];
    }
    report.rhs_direct = prefactor * holder_factor * std::pow(weighted_sum, 1.0 / q);
    report.rhs_err = weighted_sum > 0.0
                         ? prefactor * holder_factor * (1.0 / q) *
                               std::pow(weighted_sum, 1.0 / q - 1.0) * weighted_err
                         : 0.0;

    CornerCoefficients coeff = c_coefficients(r, q);
    report.moments_c_implied = coeff.implied;
    const double mc[4] = {coeff.implied.m1, coeff.implied.m2, coeff.implied.m3, coeff.implied.m4};
    double c_sum = 0.0;
    for (int i = 0; i < 4; ++i) c_sum += mc[i] * corner_q[i];
    report.rhs_c_coeff = prefactor * holder_factor * std::pow(c_sum, 1.0 / q);

    report.holds_direct =
        report.lhs_abs <= report.rhs_direct + report.lhs_err + report.rhs_err + kBoundSlack;
    report.c_coeff_consistent =
        std::fabs(report.rhs_c_coeff - report.rhs_direct) <= 1e-6 * (1.0 + report.rhs_direct);
    report.quad_converged = lhs.converged && direct.converged;
    return report;
}

}  // namespace hct
