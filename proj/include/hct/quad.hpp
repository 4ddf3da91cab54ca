#pragma once

#include <functional>

#include "hct/expr.hpp"

namespace hct {

/// Rectangle [a,b] x [c,d] in the open positive quadrant, 0 < a < b and
/// 0 < c < d. The constructor throws std::invalid_argument naming the
/// violated constraint.
struct Rect {
    double a, b, c, d;
    Rect(double a_, double b_, double c_, double d_);
};

struct Tolerance {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_depth = 50;
};

struct QuadResult {
    double value = 0.0;
    double err_estimate = 0.0;
    long long evaluations = 0;
    bool converged = true;
};

using Integrand1D = std::function<double(double)>;
using Integrand2D = std::function<double(double, double)>;

/// Adaptive bisection with a nested Gauss(7)/Kronrod(15) pair per panel.
/// The local error estimate is |K15 - G7|. Panels are visited left before
/// right and reduced with compensated summation in that fixed order, so the
/// result is reproducible bit for bit. When max_depth is exhausted the best
/// value is returned with converged = false.
QuadResult integrate_1d(const Integrand1D& g, double lo, double hi, const Tolerance& tol = {});

/// (a*b/(b-a)) * Int_a^b g(x)/x^2 dx, computed after the substitution
/// u = 1/x which removes the 1/x^2 weight:
/// (1/(1/a - 1/b)) * Int_{1/b}^{1/a} g(1/u) du.
QuadResult harmonic_mean_1d(const Integrand1D& g, double a, double b, const Tolerance& tol = {});

/// Tensor-product adaptive cubature: the outer integral runs over x and each
/// outer evaluation resolves an inner adaptive integral over y. The error
/// estimate combines outer and inner contributions additively.
QuadResult integrate_2d(const Integrand2D& h, double xlo, double xhi, double ylo, double yhi,
                        const Tolerance& tol = {});

/// integrate_2d on the closed unit square.
QuadResult integrate_2d_unit(const Integrand2D& h, const Tolerance& tol = {});

/// abcd/((b-a)(d-c)) * Int Int f(x,y)/(xy)^2 dx dy via the 1/x substitution
/// applied in both variables.
QuadResult harmonic_mean_2d(const Expr& f, const Rect& r, const Tolerance& tol = {});

}  // namespace hct
