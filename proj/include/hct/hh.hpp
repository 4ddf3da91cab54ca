#pragma once

#include <string>
#include <vector>

#include "hct/special.hpp"

namespace hct {

enum class ChainKind { Harmonic1D, Harmonic2D, Classical2D };

/// Ordered chain members with their quadrature error estimates and the
/// successive differences. ordering_ok tolerates a margin deficit up to the
/// two adjacent error estimates plus 1e-9: the inequalities are exact but
/// the evaluator is approximate.
struct ChainReport {
    ChainKind kind;
    std::vector<std::string> names;
    std::vector<double> values;
    std::vector<double> quad_errors;
    std::vector<double> margins;  // values[i+1] - values[i]
    bool ordering_ok = false;
    bool quad_converged = true;
};

/// Both sides of the integration-by-parts identity: lhs is the corner
/// average plus the weighted double mean minus half the four edge means;
/// rhs is the weighted double integral of the mixed partial.
struct IdentityReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;  // lhs - rhs
    bool residual_ok = false;
    double lhs_err = 0.0;
    double rhs_err = 0.0;
    bool quad_converged = true;
};

/// The Hoelder-type bound evaluated two ways: rhs_direct uses the directly
/// integrated weight moments (the normative verdict) and rhs_c_coeff uses
/// the closed-form C-coefficient variant. The two are expected to disagree;
/// c_coeff_consistent records whether they match to 1e-6 relative.
struct BoundReport {
    double lhs_abs = 0.0;
    double rhs_direct = 0.0;
    double rhs_c_coeff = 0.0;
    bool holds_direct = false;
    bool c_coeff_consistent = false;
    HolderMoments moments_direct{};
    HolderMoments moments_c_implied{};
    double lhs_err = 0.0;
    double rhs_err = 0.0;
    bool quad_converged = true;
};

enum class PartialMode { Symbolic, FiniteDifference };

/// g(2ab/(a+b)) <= harmonic mean of g <= (g(a)+g(b))/2 for a univariate
/// expression (y must not occur).
ChainReport chain_harmonic_1d(const Expr& g, double a, double b, const Tolerance& tol = {});

/// The five-member chain: harmonic midpoint value, average of the two
/// mid-line harmonic means, harmonic double mean, average of the four edge
/// harmonic means, corner average. Members are computed independently so the
/// per-member error estimates stay honest.
ChainReport chain_harmonic_2d(const Expr& f, const Rect& r, const Tolerance& tol = {});

/// The classical four-member chain with unweighted means.
ChainReport chain_classical_2d(const Expr& f, const Rect& r, const Tolerance& tol = {});

/// Residual check of the identity. PartialMode::FiniteDifference switches
/// the mixed partial to 4-point central differences with step 1e-5*scale
/// (for expressions with abs nodes); quadrature then runs against a noise
/// floor of 1e-7 absolute.
IdentityReport evaluate_identity(const Expr& f, const Rect& r, const Tolerance& tol = {},
                                 PartialMode partials = PartialMode::Symbolic);

/// Bound report; holds_direct compares |lhs| of the identity against the
/// direct-moment right-hand side plus the combined error estimates + 1e-9.
BoundReport evaluate_bound(const Expr& f, const Rect& r, const BoundParams& bp, const Tolerance& tol = {},
                           PartialMode partials = PartialMode::Symbolic);

}  // namespace hct
