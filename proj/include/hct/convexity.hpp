#pragma once

#include <optional>

#include "hct/quad.hpp"

namespace hct {

enum class ConvexityMode { HarmonicJoint, HarmonicCoordinate, ClassicalJoint, ClassicalCoordinate, Harmonic1D };

/// Where a witness lives: a full point pair, a horizontal slice (y fixed),
/// a vertical slice (x fixed), or the plain 1-D check on [a,b].
enum class SliceKind { Joint, Row, Column, OneD };

/// A concrete failure of the convexity inequality: the pair, the weight t,
/// and the two sides, with violation = lhs - rhs > 0. For Row/Column slices
/// both points carry the fixed coordinate; for OneD only x1/x2 are used.
struct Witness {
    double x1 = 0.0, y1 = 0.0;
    double x2 = 0.0, y2 = 0.0;
    double t = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double violation = 0.0;
    SliceKind slice = SliceKind::Joint;
};

struct ConvexityVerdict {
    ConvexityMode mode;
    bool certified_on_grid = false;
    int grid_n = 0;
    std::optional<Witness> witness;
};

/// Scans a grid_n x grid_n lattice of the rectangle (all pairs of lattice
/// points, all t in {0, 1/grid_n, ..., 1}) and returns the first violation
/// exceeding tol in lexicographic (x1, y1, x2, y2, t) order, or certifies
/// on the grid. Coordinate modes check each lattice row and then each
/// lattice column as a one-dimensional slice. Harmonic modes evaluate at the
/// weighted harmonic mean x1*x2/(t*x2 + (1-t)*x1) against
/// t*f(x1,y1) + (1-t)*f(x2,y2). Harmonic1D uses [a,b] of the rectangle and
/// requires the expression to be free of y.
///
/// Certification is a lattice statement only, never a proof over the
/// continuum.
ConvexityVerdict check_convexity(const Expr& f, const Rect& r, ConvexityMode mode, int grid_n = 64,
                                 double tol = 1e-9);

/// Grid scan (fixed 32-lattice) keeping the largest violation, followed by
/// up to `budget` rounds of local refinement that halve the lattice spacing
/// around the current best tuple. Returns the best witness found, or
/// nothing when no violation exceeds the 1e-9 noise floor.
std::optional<Witness> counterexample_search(const Expr& f, const Rect& r, ConvexityMode mode, int budget);

}  // namespace hct
