#include "hct/convexity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace hct {

namespace {

// Weighted means for the pair (u, v): both reduce to u at t = 1, matching
// the right-hand side t*f(first) + (1-t)*f(second).
inline double harmonic_pair_mean(double u, double v, double t) {
    return u * v / (t * v + (1.0 - t) * u);
}
inline double arithmetic_pair_mean(double u, double v, double t) {
    return t * u + (1.0 - t) * v;
}

inline bool is_harmonic(ConvexityMode mode) {
    return mode == ConvexityMode::HarmonicJoint || mode == ConvexityMode::HarmonicCoordinate ||
           mode == ConvexityMode::Harmonic1D;
}

inline bool is_coordinate(ConvexityMode mode) {
    return mode == ConvexityMode::HarmonicCoordinate || mode == ConvexityMode::ClassicalCoordinate;
}

std::vector<double> lattice(double lo, double hi, int n) {
    std::vector<double> pts(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        pts[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return pts;
}

struct PairCheck {
    const Expr& f;
    bool harmonic;

    double mean(double u, double v, double t) const {
        return harmonic ? harmonic_pair_mean(u, v, t) : arithmetic_pair_mean(u, v, t);
    }

    Witness joint(double x1, double y1, double x2, double y2, double t, double f1, double f2) const {
        Witness w;
        w.x1 = x1; w.y1 = y1; w.x2 = x2; w.y2 = y2; w.t = t;
        w.lhs = eval(f, mean(x1, x2, t), mean(y1, y2, t));
        w.rhs = t * f1 + (1.0 - t) * f2;
        w.violation = w.lhs - w.rhs;
        w.slice = SliceKind::Joint;
        return w;
    }

    Witness row(double y, double x1, double x2, double t, double f1, double f2) const {
        Witness w;
        w.x1 = x1; w.y1 = y; w.x2 = x2; w.y2 = y; w.t = t;
        w.lhs = eval(f, mean(x1, x2, t), y);
        w.rhs = t * f1 + (1.0 - t) * f2;
        w.violation = w.lhs - w.rhs;
        w.slice = SliceKind::Row;
        return w;
    }

    Witness column(double x, double y1, double y2, double t, double f1, double f2) const {
        Witness w;
        w.x1 = x; w.y1 = y1; w.x2 = x; w.y2 = y2; w.t = t;
        w.lhs = eval(f, x, mean(y1, y2, t));
        w.rhs = t * f1 + (1.0 - t) * f2;
        w.violation = w.lhs - w.rhs;
        w.slice = SliceKind::Column;
        return w;
    }

    Witness one_d(double x1, double x2, double t, double f1, double f2) const {
        Witness w;
        w.x1 = x1; w.x2 = x2; w.t = t;
        w.lhs = eval(f, mean(x1, x2, t), 1.0);
        w.rhs = t * f1 + (1.0 - t) * f2;
        w.violation = w.lhs - w.rhs;
        w.slice = SliceKind::OneD;
        return w;
    }
};

}  // namespace

ConvexityVerdict check_convexity(const Expr& f, const Rect& r, ConvexityMode mode, int grid_n, double tol) {
    if (grid_n < 3) throw std::invalid_argument("grid_n must be at least 3");
    if (mode == ConvexityMode::Harmonic1D && uses_variable(f, Var::Y))
        throw std::invalid_argument("harmonic-1d mode requires an expression free of y");

    ConvexityVerdict verdict{mode, false, grid_n, std::nullopt};
    const PairCheck check{f, is_harmonic(mode)};
    const int n = grid_n;
    const int nt = grid_n;  // t = k/grid_n for k = 0..grid_n
    const std::vector<double> xs = lattice(r.a, r.b, n);
    const std::vector<double> ys = lattice(r.c, r.d, n);

    auto t_of = [nt](int k) { return static_cast<double>(k) / nt; };

    if (mode == ConvexityMode::Harmonic1D) {
        std::vector<double> g(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = eval(f, xs[static_cast<std::size_t>(i)], 1.0);
        for (int i1 = 0; i1 < n; ++i1) {
            for (int i2 = i1 + 1; i2 < n; ++i2) {
                for (int k = 0; k <= nt; ++k) {
                    Witness w = check.one_d(xs[static_cast<std::size_t>(i1)], xs[static_cast<std::size_t>(i2)],
                                            t_of(k), g[static_cast<std::size_t>(i1)], g[static_cast<std::size_t>(i2)]);
                    if (w.violation > tol) {
                        verdict.witness = w;
                        return verdict;
                    }
                }
            }
        }
        verdict.certified_on_grid = true;
        return verdict;
    }

    // Lattice values, row-major with x as the outer index so that flattened
    // order is lexicographic in (x, y).
    std::vector<double> values(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            values[static_cast<std::size_t>(i * n + j)] =
                eval(f, xs[static_cast<std::size_t>(i)], ys[static_cast<std::size_t>(j)]);

    if (is_coordinate(mode)) {
        // Horizontal slices first (y fixed, ascending), then vertical ones.
        for (int j = 0; j < n; ++j) {
            const double y = ys[static_cast<std::size_t>(j)];
            for (int i1 = 0; i1 < n; ++i1) {
                const double g1 = values[static_cast<std::size_t>(i1 * n + j)];
                for (int i2 = i1 + 1; i2 < n; ++i2) {
                    const double g2 = values[static_cast<std::size_t>(i2 * n + j)];
                    for (int k = 0; k <= nt; ++k) {
                        Witness w = check.row(y, xs[static_cast<std::size_t>(i1)],
                                              xs[static_cast<std::size_t>(i2)], t_of(k), g1, g2);
                        if (w.violation > tol) {
                            verdict.witness = w;
                            return verdict;
                        }
                    }
                }
            }
        }
        for (int i = 0; i < n; ++i) {
            const double x = xs[static_cast<std::size_t>(i)];
            for (int j1 = 0; j1 < n; ++j1) {
                const double g1 = values[static_cast<std::size_t>(i * n + j1)];
                for (int j2 = j1 + 1; j2 < n; ++j2) {
                    const double g2 = values[static_cast<std::size_t>(i * n + j2)];
                    for (int k = 0; k <= nt; ++k) {
                        Witness w = check.column(x, ys[static_cast<std::size_t>(j1)],
                                                 ys[static_cast<std::size_t>(j2)], t_of(k), g1, g2);
                        if (w.violation > tol) {
                            verdict.witness = w;
                            return verdict;
                        }
                    }
                }
            }
        }
        verdict.certified_on_grid = true;
        return verdict;
    }

    // Joint modes. A pair scanned as (p2, p1) is the same check as (p1, p2)
    // with t replaced by 1-t, so scanning flattened indices k1 < k2 over the
    // full t range visits every distinct check once and still yields the
    // lexicographically first violation.
    const int total = n * n;
    for (int k1 = 0; k1 < total; ++k1) {
        const double x1 = xs[static_cast<std::size_t>(k1 / n)];
        const double y1 = ys[static_cast<std::size_t>(k1 % n)];
        const double f1 = values[static_cast<std::size_t>(k1)];
        for (int k2 = k1 + 1; k2 < total; ++k2) {
            const double x2 = xs[static_cast<std::size_t>(k2 / n)];
            const double y2 = ys[static_cast<std::size_t>(k2 % n)];
            const double f2 = values[static_cast<std::size_t>(k2)];
            for (int k = 0; k <= nt; ++k) {
                Witness w = check.joint(x1, y1, x2, y2, t_of(k), f1, f2);
                if (w.violation > tol) {
                    verdict.witness = w;
                    return verdict;
                }
            }
        }
    }
    verdict.certified_on_grid = true;
    return verdict;
}

namespace {

constexpr double kSearchNoiseFloor = 1e-9;
constexpr int kSearchBaseGrid = 16;

// A candidate tuple for the refinement pass. The meaning of the coordinates
// depends on the slice family; `dims` of them are active.
struct SearchFamily {
    SliceKind slice;
    int dims;
    std::array<double, 5> lo;
    std::array<double, 5> hi;
};

Witness evaluate_candidate(const PairCheck& check, const SearchFamily& fam,
                           const std::array<double, 5>& v, const Expr& f) {
    switch (fam.slice) {
        case SliceKind::Joint:
            return check.joint(v[0], v[1], v[2], v[3], v[4], eval(f, v[0], v[1]), eval(f, v[2], v[3]));
        case SliceKind::Row:
            return check.row(v[0], v[1], v[2], v[3], eval(f, v[1], v[0]), eval(f, v[2], v[0]));
        case SliceKind::Column:
            return check.column(v[0], v[1], v[2], v[3], eval(f, v[0], v[1]), eval(f, v[0], v[2]));
        case SliceKind::OneD:
            return check.one_d(v[0], v[1], v[2], eval(f, v[0], 1.0), eval(f, v[1], 1.0));
    }
    return Witness{};
}

bool degenerate(const SearchFamily& fam, const std::array<double, 5>& v) {
    switch (fam.slice) {
        case SliceKind::Joint: return v[0] == v[2] && v[1] == v[3];
        case SliceKind::Row:
        case SliceKind::Column: return v[1] == v[2];
        case SliceKind::OneD: return v[0] == v[1];
    }
    return false;
}

void search_family(const Expr& f, const PairCheck& check, const SearchFamily& fam, int budget,
                   std::optional<Witness>& best, double& best_violation) {
    // Coarse scan.
    std::array<int, 5> steps{};
    std::array<double, 5> spacing{};
    for (int d = 0; d < fam.dims; ++d) {
        steps[static_cast<std::size_t>(d)] = kSearchBaseGrid;
        spacing[static_cast<std::size_t>(d)] =
            (fam.hi[static_cast<std::size_t>(d)] - fam.lo[static_cast<std::size_t>(d)]) / kSearchBaseGrid;
    }

    std::array<double, 5> best_pt{};
    bool have_pt = false;
    double fam_best = 0.0;

    std::array<int, 5> idx{};
    const int total_dims = fam.dims;
    while (true) {
        std::array<double, 5> v{};
        for (int d = 0; d < total_dims; ++d)
            v[static_cast<std::size_t>(d)] = fam.lo[static_cast<std::size_t>(d)] +
                                             spacing[static_cast<std::size_t>(d)] * idx[static_cast<std::size_t>(d)];
        if (!degenerate(fam, v)) {
            Witness w = evaluate_candidate(check, fam, v, f);
            if (!have_pt || w.violation > fam_best) {
                fam_best = w.violation;
                best_pt = v;
                have_pt = true;
            }
        }
        int d = 0;
        for (; d < total_dims; ++d) {
            if (++idx[static_cast<std::size_t>(d)] <= steps[static_cast<std::size_t>(d)]) break;
            idx[static_cast<std::size_t>(d)] = 0;
        }
        if (d == total_dims) break;
    }
    if (!have_pt) return;

    // Local refinement: halve the lattice spacing each round and hill-climb
    // within the 3^dims neighbourhood at the current step.
    std::array<double, 5> h = spacing;
    for (int round = 0; round < budget; ++round) {
        for (int d = 0; d < total_dims; ++d) h[static_cast<std::size_t>(d)] *= 0.5;
        for (int moves = 0; moves < 100; ++moves) {
            std::array<double, 5> improved_pt = best_pt;
            double improved = fam_best;
            std::array<int, 5> off{};
            for (int d = 0; d < total_dims; ++d) off[static_cast<std::size_t>(d)] = -1;
            while (true) {
                std::array<double, 5> v{};
                for (int d = 0; d < total_dims; ++d) {
                    double coord = best_pt[static_cast<std::size_t>(d)] +
                                   h[static_cast<std::size_t>(d)] * off[static_cast<std::size_t>(d)];
                    coord = std::clamp(coord, fam.lo[static_cast<std::size_t>(d)],
                                       fam.hi[static_cast<std::size_t>(d)]);
                    v[static_cast<std::size_t>(d)] = coord;
                }
                if (!degenerate(fam, v)) {
                    Witness w = evaluate_candidate(check, fam, v, f);
                    if (w.violation > improved) {
                        improved = w.violation;
                        improved_pt = v;
                    }
                }
                int d = 0;
                for (; d < total_dims; ++d) {
                    if (++off[static_cast<std::size_t>(d)] <= 1) break;
                    off[static_cast<std::size_t>(d)] = -1;
                }
                if (d == total_dims) break;
            }
            if (improved <= fam_best) break;
            fam_best = improved;
            best_pt = improved_pt;
        }
    }

    if (fam_best > best_violation) {
        best_violation = fam_best;
        best = evaluate_candidate(check, fam, best_pt, f);
    }
}

}  // namespace

std::optional<Witness> counterexample_search(const Expr& f, const Rect& r, ConvexityMode mode, int budget) {
    if (budget < 1) throw std::invalid_argument("budget must be at least 1");
    if (mode == ConvexityMode::Harmonic1D && uses_variable(f, Var::Y))
        throw std::invalid_argument("harmonic-1d mode requires an expression free of y");

    const PairCheck check{f, is_harmonic(mode)};
    std::optional<Witness> best;
    double best_violation = 0.0;

    if (mode == ConvexityMode::Harmonic1D) {
        SearchFamily fam{SliceKind::OneD, 3, {r.a, r.a, 0.0}, {r.b, r.b, 1.0}};
        search_family(f, check, fam, budget, best, best_violation);
    } else if (is_coordinate(mode)) {
        SearchFamily rows{SliceKind::Row, 4, {r.c, r.a, r.a, 0.0}, {r.d, r.b, r.b, 1.0}};
        SearchFamily cols{SliceKind::Column, 4, {r.a, r.c, r.c, 0.0}, {r.b, r.d, r.d, 1.0}};
        search_family(f, check, rows, budget, best, best_violation);
        search_family(f, check, cols, budget, best, best_violation);
    } else {
        SearchFamily joint{SliceKind::Joint, 5, {r.a, r.c, r.a, r.c, 0.0}, {r.b, r.d, r.b, r.d, 1.0}};
        search_family(f, check, joint, budget, best, best_violation);
    }

    if (best && best->violation > kSearchNoiseFloor) return best;
    return std::nullopt;
}

}  // namespace hct
