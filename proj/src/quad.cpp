#include "hct/quad.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hct {

Rect::Rect(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {
    if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d)))
        throw std::invalid_argument("rect bounds must be finite");
    if (!(a > 0.0)) throw std::invalid_argument("a must be positive");
    if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
    if (!(a < b)) throw std::invalid_argument("a must be < b");
    if (!(c < d)) throw std::invalid_argument("c must be < d");
}

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (positive abscissae).
// Gauss nodes sit at the odd indices and the centre.
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679,  0.1903505780647854,  0.2044329400752989, 0.2094821410847278};
constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694};

struct Kahan {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        double y = v - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

struct Panel {
    double value;
    double err;
};

Panel gk15(const Integrand1D& g, double lo, double hi) {
    const double centre = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = g(centre);
    double k = kWgk[7] * fc;
    double gauss = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = g(centre - dx);
        const double f2 = g(centre + dx);
        k += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) gauss += kWg[(j - 1) / 2] * (f1 + f2);
    }
    k *= half;
    gauss *= half;
    return {k, std::fabs(k - gauss)};
}

struct AdaptiveState {
    const Integrand1D& g;
    int max_depth;
    Kahan value;
    Kahan err;
    long long evaluations = 0;
    bool converged = true;
};

void subdivide(AdaptiveState& st, double lo, double hi, double local_target, int depth) {
    Panel p = gk15(st.g, lo, hi);
    st.evaluations += 15;
    if (p.err <= local_target || depth >= st.max_depth) {
        st.value.add(p.value);
        st.err.add(p.err);
        if (p.err > local_target) st.converged = false;
        return;
    }
    const double mid = 0.5 * (lo + hi);
    subdivide(st, lo, mid, 0.5 * local_target, depth + 1);
    subdivide(st, mid, hi, 0.5 * local_target, depth + 1);
}

void check_tolerance(const Tolerance& tol) {
    if (tol.abs_tol < 0.0 || tol.rel_tol < 0.0) throw std::invalid_argument("tolerances must be nonnegative");
    if (tol.abs_tol == 0.0 && tol.rel_tol == 0.0)
        throw std::invalid_argument("at least one of abs_tol, rel_tol must be positive");
    if (tol.max_depth < 0) throw std::invalid_argument("max_depth must be nonnegative");
}

}  // namespace

QuadResult integrate_1d(const Integrand1D& g, double lo, double hi, const Tolerance& tol) {
    check_tolerance(tol);
    if (!(lo < hi)) throw std::invalid_argument("integration bounds must satisfy lo < hi");

    AdaptiveState st{g, tol.max_depth, {}, {}, 0, true};
    Panel whole = gk15(g, lo, hi);
    st.evaluations += 15;
    const double target = std::max(tol.abs_tol, tol.rel_tol * std::fabs(whole.value));

    subdivide(st, lo, hi, target, 0);

    QuadResult r;
    r.value = st.value.sum;
    r.err_estimate = st.err.sum;
    r.evaluations = st.evaluations;
    r.converged = st.converged && st.err.sum <= target;
    return r;
}

QuadResult harmonic_mean_1d(const Integrand1D& g, double a, double b, const Tolerance& tol) {
    if (!(a > 0.0 && a < b)) throw std::invalid_argument("harmonic mean requires 0 < a < b");
    const double scale = a * b / (b - a);  // = 1/(1/a - 1/b)
    Tolerance inner = tol;
    inner.abs_tol = tol.abs_tol / scale;
    QuadResult r = integrate_1d([&g](double u) { return g(1.0 / u); }, 1.0 / b, 1.0 / a, inner);
    r.value *= scale;
    r.err_estimate *= scale;
    return r;
}

QuadResult integrate_2d(const Integrand2D& h, double xlo, double xhi, double ylo, double yhi,
                        const Tolerance& tol) {
    check_tolerance(tol);
    if (!(xlo < xhi && ylo < yhi)) throw std::invalid_argument("integration bounds must satisfy lo < hi");

    Tolerance inner = tol;
    inner.abs_tol = 0.5 * tol.abs_tol / (xhi - xlo);
    inner.rel_tol = tol.rel_tol;
    Tolerance outer = tol;
    outer.abs_tol = 0.5 * tol.abs_tol;

    long long inner_evaluations = 0;
    double max_inner_err = 0.0;
    bool inner_converged = true;

    Integrand1D marginal = [&](double xx) {
        QuadResult ir = integrate_1d([&h, xx](double yy) { return h(xx, yy); }, ylo, yhi, inner);
        inner_evaluations += ir.evaluations;
        max_inner_err = std::max(max_inner_err, ir.err_estimate);
        inner_converged = inner_converged && ir.converged;
        return ir.value;
    };

    QuadResult out = integrate_1d(marginal, xlo, xhi, outer);
    out.err_estimate += (xhi - xlo) * max_inner_err;
    out.evaluations = inner_evaluations;
    out.converged = out.converged && inner_converged;
    return out;
}

QuadResult integrate_2d_unit(const Integrand2D& h, const Tolerance& tol) {
    return integrate_2d(h, 0.0, 1.0, 0.0, 1.0, tol);
}

QuadResult harmonic_mean_2d(const Expr& f, const Rect& r, const Tolerance& tol) {
    const double scale = r.a * r.b * r.c * r.d / ((r.b - r.a) * (r.d - r.c));
    Tolerance inner = tol;
    inner.abs_tol = tol.abs_tol / scale;
    QuadResult q = integrate_2d([&f](double u, double v) { return eval(f, 1.0 / u, 1.0 / v); },
                                1.0 / r.b, 1.0 / r.a, 1.0 / r.d, 1.0 / r.c, inner);
    q.value *= scale;
    q.err_estimate *= scale;
    return q;
}

}  // namespace hct
