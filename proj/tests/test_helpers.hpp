#pragma once

#include <cmath>
#include <random>
#include <string>

#include "hct/expr.hpp"

namespace hct::testing {

// Independent finite-difference oracles for symbolic derivatives.
inline double central_fd(const Expr& e, Var v, double x, double y, double h = 1e-5) {
    if (v == Var::X) return (eval(e, x + h, y) - eval(e, x - h, y)) / (2.0 * h);
    return (eval(e, x, y + h) - eval(e, x, y - h)) / (2.0 * h);
}

inline double central_fd_mixed(const Expr& e, double x, double y, double h = 1e-5) {
    return (eval(e, x + h, y + h) - eval(e, x + h, y - h) - eval(e, x - h, y + h) +
            eval(e, x - h, y - h)) /
           (4.0 * h * h);
}

// Random expression source strings that stay smooth and tame on [1,3]^2.
// Depth-limited; abs excluded (the derivative convention at 0 is tested
// separately).
inline std::string random_expr_string(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> leaf(0, 2);
    std::uniform_real_distribution<double> cval(0.5, 2.5);
    if (depth <= 0) {
        switch (leaf(rng)) {
            case 0: return "x";
            case 1: return "y";
            default: {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.3f", cval(rng));
                return buf;
            }
        }
    }
    std::uniform_int_distribution<int> pick(0, 9);
    const std::string a = random_expr_string(rng, depth - 1);
    const std::string b = random_expr_string(rng, depth - 1);
    switch (pick(rng)) {
        case 0: return "(" + a + "+" + b + ")";
        case 1: return "(" + a + "-" + b + ")";
        case 2: return "(" + a + "*" + b + ")";
        case 3: return "(" + a + ")/(" + b + "+4)";  // keep denominators away from 0
        case 4: return "sin(" + a + ")";
        case 5: return "cos(" + a + ")";
        case 6: return "sqrt(" + a + "+4)";
        case 7: return "ln(" + a + "+4)";
        case 8: return "(" + a + ")^2";
        default: return "exp((" + a + ")/8)";
    }
}

}  // namespace hct::testing
