#include "hct/special.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hct {

BoundParams::BoundParams(double q_) : q(q_), p(q_ / (q_ - 1.0)) {
    if (!(q > 1.0 + 1e-9)) throw std::invalid_argument("q must exceed 1 + 1e-9");
}

namespace {

// Lanczos g = 7, n = 9 (Godfrey coefficients).
constexpr double kLanczos[9] = {
    0.99999999999980993,     676.5203681218851,      -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,    12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6,  1.5056327351493116e-7};

constexpr double kHalfLnTwoPi = 0.91893853320467274178;  // ln(2*pi)/2
constexpr double kPi = 3.14159265358979323846;

std::string num_msg(const char* fmt, double v) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

}  // namespace

double ln_gamma(double x) {
    if (!(x > 0.0)) throw DomainError(num_msg("ln_gamma requires a positive argument, got %.17g", x));
    if (x < 0.5) {
        // Reflection keeps the Lanczos sum in its accurate range.
        return std::log(kPi / std::sin(kPi * x)) - ln_gamma(1.0 - x);
    }
    const double z = x - 1.0;
    double acc = kLanczos[0];
    for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (z + i);
    const double t = z + 7.5;
    return kHalfLnTwoPi + (z + 0.5) * std::log(t) - t + std::log(acc);
}

double beta(double x, double y) {
    if (!(x > 0.0) || !(y > 0.0)) throw DomainError("beta requires positive arguments");
    return std::exp(ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y));
}

double gauss_2f1(double alpha, double b, double c, double z) {
    if (!(c > b && b > 0.0))
        throw DomainError("gauss_2f1 requires c > b > 0");
    if (!(z >= 0.0 && z < 1.0))
        throw DomainError(num_msg("gauss_2f1 requires 0 <= z < 1, got z = %.17g", z));

    // Route (i): power series sum_n (alpha)_n (b)_n / ((c)_n n!) z^n.
    double sum = 1.0;
    double term = 1.0;
    if (z != 0.0) {
        for (long n = 0;; ++n) {
            term *= (alpha + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
            sum += term;
            if (std::fabs(term) <= 1e-16 * std::fabs(sum)) break;
            if (n >= 1000000L)
                throw NotConvergedError("gauss_2f1 series did not converge within 10^6 terms");
        }
    }

    // Route (ii): Euler integral, scaled by 1/B(b, c-b). The quadrature
    // nodes are interior, so endpoint factors t^(b-1), (1-t)^(c-b-1) are
    // never evaluated at 0.
    const double scale = 1.0 / beta(b, c - b);
    QuadResult integral = integrate_1d(
        [alpha, b, c, z](double t) {
            return std::pow(t, b - 1.0) * std::pow(1.0 - t, c - b - 1.0) * std::pow(1.0 - z * t, -alpha);
        },
        0.0, 1.0, Tolerance{1e-12, 1e-12, 50});
    const double euler = scale * integral.value;

    if (std::fabs(sum - euler) > 1e-10 * (1.0 + std::fabs(sum))) {
        throw std::runtime_error(
            num_msg("gauss_2f1 series/integral cross-check failed: series %.17g vs integral ", sum) +
            num_msg("%.17g", euler));
    }
    return sum;
}

namespace {

void check_moment_exponent(double q) {
    if (!(q >= 1.0)) throw std::invalid_argument("moment exponent q must be >= 1");
}

}  // namespace

MomentsResult holder_moments_direct(const Rect& r, double q, const Tolerance& tol) {
    check_moment_exponent(q);
    const double a = r.a, b = r.b, c = r.c, d = r.d;
    const double e2q = -2.0 * q;

    const Integrand2D weights[4] = {
        [=](double t, double s) {
            return t * s * std::pow((a + t * (b - a)) * (c + s * (d - c)), e2q);
        },
        [=](double t, double s) {
            return t * (1.0 - s) * std::pow((a + t * (b - a)) * (c + s * (d - c)), e2q);
        },
        [=](double t, double s) {
            return (1.0 - t) * s * std::pow((a + t * (b - a)) * (c + s * (d - c)), e2q);
        },
        [=](double t, double s) {
            return (1.0 - t) * (1.0 - s) * std::pow((a + t * (b - a)) * (c + s * (d - c)), e2q);
        }};

    MomentsResult out{};
    double m[4];
    for (int i = 0; i < 4; ++i) {
        QuadResult qr = integrate_2d_unit(weights[i], tol);
        m[i] = qr.value;
        out.err_estimates[static_cast<std::size_t>(i)] = qr.err_estimate;
        out.evaluations += qr.evaluations;
        out.converged = out.converged && qr.converged;
    }
    out.moments = HolderMoments{m[0], m[1], m[2], m[3]};
    return out;
}

AxisFactors holder_axis_factors(double lo, double hi, double q) {
    if (!(lo > 0.0 && lo < hi)) throw std::invalid_argument("axis factors require 0 < lo < hi");
    check_moment_exponent(q);
    const double z = 1.0 - lo / hi;
    const double scale = std::pow(hi, -2.0 * q);
    const double f1 = gauss_2f1(2.0 * q, 1.0, 2.0, z);
    const double f2 = gauss_2f1(2.0 * q, 2.0, 3.0, z);
    return AxisFactors{scale * (f1 - 0.5 * f2), 0.5 * scale * f2};
}

HolderMoments holder_moments_closed_form(const Rect& r, double q) {
    const AxisFactors fx = holder_axis_factors(r.a, r.b, q);
    const AxisFactors fy = holder_axis_factors(r.c, r.d, q);
    HolderMoments m{fx.weight_t * fy.weight_t, fx.weight_t * fy.weight_one_minus_t,
                    fx.weight_one_minus_t * fy.weight_t, fx.weight_one_minus_t * fy.weight_one_minus_t};

    MomentsResult direct = holder_moments_direct(r, q, Tolerance{1e-15, 1e-13, 50});
    const double closed[4] = {m.m1, m.m2, m.m3, m.m4};
    const double ref[4] = {direct.moments.m1, direct.moments.m2, direct.moments.m3, direct.moments.m4};
    for (int i = 0; i < 4; ++i) {
        if (std::fabs(closed[i] - ref[i]) > 1e-9 * std::fabs(ref[i])) {
            throw std::runtime_error(
                num_msg("closed-form moment disagrees with direct quadrature: %.17g vs ", closed[i]) +
                num_msg("%.17g", ref[i]));
        }
    }
    return m;
}

CornerCoefficients c_coefficients(const Rect& r, double q) {
    check_moment_exponent(q);
    const double zx = 1.0 - r.a / r.b;
    const double zy = 1.0 - r.c / r.d;
    const double f1x = gauss_2f1(2.0 * q, 1.0, 2.0, zx);
    const double f2x = gauss_2f1(2.0 * q, 2.0, 3.0, zx);
    const double f1y = gauss_2f1(2.0 * q, 1.0, 2.0, zy);
    const double f2y = gauss_2f1(2.0 * q, 2.0, 3.0, zy);

    CornerCoefficients out{};
    out.c1 = f1x * f1y;
    out.c2 = f1x * f2y;
    out.c3 = f2x * f1y;
    out.c4 = f2x * f2y;
    const double denom = 4.0 * std::pow(r.b * r.d, 2.0 * q);
    out.implied = HolderMoments{out.c1 / denom, out.c2 / denom, out.c3 / denom, out.c4 / denom};
    return out;
}

QuadResult holder_weight_total(const Rect& r, double q, const Tolerance& tol) {
    check_moment_exponent(q);
    const double a = r.a, b = r.b, c = r.c, d = r.d;
    const double e2q = -2.0 * q;
    return integrate_2d_unit(
        [=](double t, double s) { return std::pow((a + t * (b - a)) * (c + s * (d - c)), e2q); }, tol);
}

}  // namespace hct
