#pragma once

#include <array>

#include "hct/quad.hpp"

namespace hct {

/// Conjugate Hoelder exponents. p is always derived from q so that
/// 1/p + 1/q = 1 holds exactly; q must exceed 1 + 1e-9.
struct BoundParams {
    double q;
    double p;
    explicit BoundParams(double q_);
};

/// The four weighted moments Int Int w(t,s) * (A_t B_s)^(-2q) dt ds over the
/// unit square, for w in {ts, t(1-s), (1-t)s, (1-t)(1-s)}, where
/// A_t = t*b + (1-t)*a and B_s = s*d + (1-s)*c. The weights sum to one, so
/// m1+m2+m3+m4 equals the unweighted moment (see holder_weight_total).
struct HolderMoments {
    double m1, m2, m3, m4;
};

struct MomentsResult {
    HolderMoments moments;
    std::array<double, 4> err_estimates;
    long long evaluations = 0;
    bool converged = true;
};

/// One-axis factors Int_0^1 t * A_t^(-2q) dt and Int_0^1 (1-t) * A_t^(-2q) dt
/// expressed through the Gauss hypergeometric function with z = 1 - lo/hi:
///   weight t      : hi^(-2q) * (2F1(2q,1;2;z) - 2F1(2q,2;3;z)/2)
///   weight (1-t)  : hi^(-2q) / 2 * 2F1(2q,2;3;z)
struct AxisFactors {
    double weight_t;
    double weight_one_minus_t;
};

/// The closed-form corner coefficients C1..C4 (products of 2F1 values) and
/// the moments they imply, C_i / (4*(b*d)^(2q)). These are reported next to
/// the directly integrated moments and are NOT substituted for them; the two
/// disagree and the discrepancy is part of the output.
struct CornerCoefficients {
    double c1, c2, c3, c4;
    HolderMoments implied;
};

/// Natural log of the Gamma function for x > 0 (Lanczos approximation,
/// relative error below 1e-13).
double ln_gamma(double x);

/// Euler Beta function, exp(lnGamma(x) + lnGamma(y) - lnGamma(x+y)).
double beta(double x, double y);

/// Gauss hypergeometric function 2F1(alpha, b; c; z) for c > b > 0 and
/// 0 <= z < 1. Evaluated twice on every call: by the power series with
/// term-ratio stopping at 1e-16, and by the Euler integral
/// (1/B(b,c-b)) Int_0^1 t^(b-1) (1-t)^(c-b-1) (1-zt)^(-alpha) dt.
/// The two routes must agree to 1e-10 relative; the series value is
/// returned. Throws NotConvergedError if the series needs more than 10^6
/// terms.
double gauss_2f1(double alpha, double b, double c, double z);

/// Ground-truth moments by direct cubature of the explicit integrands.
/// q >= 1 is accepted; q = 1 is the boundary case used by oracle tests only.
MomentsResult holder_moments_direct(const Rect& r, double q, const Tolerance& tol = {});

AxisFactors holder_axis_factors(double lo, double hi, double q);

/// Moments assembled from the per-axis closed forms. Asserts agreement with
/// holder_moments_direct to 1e-9 relative and throws if that fails.
HolderMoments holder_moments_closed_form(const Rect& r, double q);

/// Literal C-coefficient products and their implied moments.
CornerCoefficients c_coefficients(const Rect& r, double q);

/// Fifth quadrature Int Int (A_t B_s)^(-2q) dt ds used to audit the
/// weight-sum identity of HolderMoments.
QuadResult holder_weight_total(const Rect& r, double q, const Tolerance& tol = {});

}  // namespace hct
