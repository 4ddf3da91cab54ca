#include <doctest.h>

#include <cmath>

#include "hct/convexity.hpp"

using namespace hct;

namespace {

// Direct evaluation of the harmonic-joint inequality gap for one pair, used
// as an oracle against scan results: lhs - rhs at the weighted harmonic
// means, with t attached to the first point's value.
double harmonic_joint_gap(const Expr& f, double x1, double y1, double x2, double y2, double t) {
    const double mx = x1 * x2 / (t * x2 + (1.0 - t) * x1);
    const double my = y1 * y2 / (t * y2 + (1.0 - t) * y1);
    return eval(f, mx, my) - (t * eval(f, x1, y1) + (1.0 - t) * eval(f, x2, y2));
}

// Brute-force maximum violation over a lattice, independent of the library
// scan order.
double brute_force_max_violation(const Expr& f, const Rect& r, int n) {
    double best = 0.0;
    for (int i1 = 0; i1 < n; ++i1)
        for (int j1 = 0; j1 < n; ++j1)
            for (int i2 = 0; i2 < n; ++i2)
                for (int j2 = 0; j2 < n; ++j2) {
                    if (i1 == i2 && j1 == j2) continue;
                    const double x1 = r.a + (r.b - r.a) * i1 / (n - 1);
                    const double y1 = r.c + (r.d - r.c) * j1 / (n - 1);
                    const double x2 = r.a + (r.b - r.a) * i2 / (n - 1);
                    const double y2 = r.c + (r.d - r.c) * j2 / (n - 1);
                    for (int k = 0; k <= n; ++k) {
                        const double g = harmonic_joint_gap(f, x1, y1, x2, y2, double(k) / n);
                        if (g > best) best = g;
                    }
                }
    return best;
}

}  // namespace

TEST_CASE("the product of differences splits coordinate from joint convexity") {
    Expr f = parse("(x-1)*(y-2)");
    Rect r(1, 3, 2, 3);

    SUBCASE("coordinate mode certifies") {
        ConvexityVerdict v = check_convexity(f, r, ConvexityMode::HarmonicCoordinate, 50);
        CHECK(v.certified_on_grid);
        CHECK(!v.witness);
    }

    SUBCASE("joint mode refutes, and the witness re-evaluates") {
        ConvexityVerdict v = check_convexity(f, r, ConvexityMode::HarmonicJoint, 50);
        REQUIRE(v.witness);
        const Witness& w = *v.witness;
        CHECK(w.violation > 1e-9);
        CHECK(w.lhs - w.rhs == doctest::Approx(w.violation).epsilon(1e-12));
        // no stale data: recompute from scratch
        CHECK(harmonic_joint_gap(f, w.x1, w.y1, w.x2, w.y2, w.t) ==
              doctest::Approx(w.violation).epsilon(1e-12));
        // witness coordinates stay inside the rectangle
        CHECK(w.x1 >= r.a); CHECK(w.x1 <= r.b);
        CHECK(w.x2 >= r.a); CHECK(w.x2 <= r.b);
        CHECK(w.y1 >= r.c); CHECK(w.y1 <= r.d);
        CHECK(w.y2 >= r.c); CHECK(w.y2 <= r.d);
        CHECK(w.t >= 0.0);  CHECK(w.t <= 1.0);
    }

    SUBCASE("a closed-form violating pair: (1,3),(3,2) at t = 1/2") {
        // Both corner values vanish, so the right side is 0 while the mean
        // point value is (3/2 - 1)(12/5 - 2) = 1/5.
        const double gap = harmonic_joint_gap(f, 1.0, 3.0, 3.0, 2.0, 0.5);
        CHECK(gap == doctest::Approx(0.2).epsilon(1e-14));
        // and near the family's maximum, 4t(1-t)/((1+2t)(3-t)) at t = 0.41
        const double t = 0.41;
        const double expected = 4.0 * t * (1.0 - t) / ((1.0 + 2.0 * t) * (3.0 - t));
        CHECK(harmonic_joint_gap(f, 1.0, 3.0, 3.0, 2.0, t) ==
              doctest::Approx(expected).epsilon(1e-14));
    }

    SUBCASE("the scan returns the lexicographically first violation") {
        ConvexityVerdict v = check_convexity(f, r, ConvexityMode::HarmonicJoint, 100);
        REQUIRE(v.witness);
        const Witness& w = *v.witness;
        // First point is the lattice origin in x; the violation family needs
        // y1 > c and x2 > a with w2 = c.
        CHECK(w.x1 == 1.0);
        CHECK(w.y1 == doctest::Approx(2.0 + 1.0 / 99.0).epsilon(1e-12));
        CHECK(w.x2 == doctest::Approx(1.0 + 2.0 / 99.0).epsilon(1e-12));
        CHECK(w.y2 == 2.0);
        CHECK(w.t == doctest::Approx(0.01).epsilon(1e-12));
    }
}

TEST_CASE("1/(x*y) is coordinate-convex but not jointly harmonically convex") {
    Expr f = parse("1/(x*y)");
    Rect r(1, 2, 1, 2);

    SUBCASE("each slice is harmonic-affine, so coordinate mode certifies") {
        ConvexityVerdict v = check_convexity(f, r, ConvexityMode::HarmonicCoordinate, 32);
        CHECK(v.certified_on_grid);
    }

    SUBCASE("joint mode finds the discordant-pair violation") {
        // Closed form: gap = t(1-t)(1/x1 - 1/x2)(1/y2 - 1/y1) * lhs-free
        // algebra; at (1,2),(2,1), t=1/2 the mean is (4/3,4/3) and
        // 9/16 - 1/2 = 1/16.
        CHECK(harmonic_joint_gap(f, 1.0, 2.0, 2.0, 1.0, 0.5) ==
              doctest::Approx(0.0625).epsilon(1e-13));
        ConvexityVerdict v = check_convexity(f, r, ConvexityMode::HarmonicJoint, 24);
        REQUIRE(v.witness);
        CHECK(v.witness->violation > 1e-9);
        // oracle agreement
        CHECK(brute_force_max_violation(f, r, 8) > 0.0);
    }
}

TEST_CASE("sums of coordinate-wise harmonically convex functions certify jointly") {
    Expr f = parse("x+y");
    Rect r(1, 2, 1, 2);
    ConvexityVerdict v = check_convexity(f, r, ConvexityMode::HarmonicJoint, 16);
    CHECK(v.certified_on_grid);
    CHECK(!counterexample_search(f, r, ConvexityMode::HarmonicJoint, 3));
}

TEST_CASE("constants certify everywhere and search finds nothing") {
    Expr f = parse("1");
    Rect r(1, 3, 2, 3);
    for (ConvexityMode mode : {ConvexityMode::HarmonicJoint, ConvexityMode::HarmonicCoordinate,
                               ConvexityMode::ClassicalJoint, ConvexityMode::ClassicalCoordinate,
                               ConvexityMode::Harmonic1D}) {
        ConvexityVerdict v = check_convexity(f, r, mode, 12);
        CHECK(v.certified_on_grid);
        CHECK(!counterexample_search(f, r, mode, 2));
    }
}

TEST_CASE("joint certification implies coordinate certification on the same lattice") {
    Rect r(1, 2, 1, 2);
    for (const char* src : {"x+y", "1", "x*y+x+y"}) {
        Expr f = parse(src);
        ConvexityVerdict joint = check_convexity(f, r, ConvexityMode::HarmonicJoint, 12);
        if (joint.certified_on_grid) {
            ConvexityVerdict coord = check_convexity(f, r, ConvexityMode::HarmonicCoordinate, 12);
            CHECK_MESSAGE(coord.certified_on_grid, src);
        }
    }
}

TEST_CASE("nondecreasing classically convex slices are harmonically convex slices") {
    Rect r(1, 2, 1, 3);
    for (const char* src : {"x*y", "x+y", "x^2*y^2", "exp(x+y)"}) {
        Expr f = parse(src);
        ConvexityVerdict classical = check_convexity(f, r, ConvexityMode::ClassicalCoordinate, 20);
        REQUIRE_MESSAGE(classical.certified_on_grid, src);
        ConvexityVerdict harmonic = check_convexity(f, r, ConvexityMode::HarmonicCoordinate, 20);
        CHECK_MESSAGE(harmonic.certified_on_grid, src);
    }
}

TEST_CASE("classical joint mode refutes an indefinite bilinear form") {
    // (x-1)(y-2) has Hessian [[0,1],[1,0]]: not classically convex.
    Expr f = parse("(x-1)*(y-2)");
    Rect r(1, 3, 2, 3);
    ConvexityVerdict v = check_convexity(f, r, ConvexityMode::ClassicalJoint, 20);
    REQUIRE(v.witness);
    const Witness& w = *v.witness;
    // re-evaluate with classical means
    const double mx = w.t * w.x1 + (1.0 - w.t) * w.x2;
    const double my = w.t * w.y1 + (1.0 - w.t) * w.y2;
    const double gap = eval(f, mx, my) - (w.t * eval(f, w.x1, w.y1) + (1.0 - w.t) * eval(f, w.x2, w.y2));
    CHECK(gap == doctest::Approx(w.violation).epsilon(1e-12));
}

TEST_CASE("harmonic 1-D mode") {
    SUBCASE("x is harmonically convex on [1,2]") {
        ConvexityVerdict v = check_convexity(parse("x"), Rect(1, 2, 1, 2), ConvexityMode::Harmonic1D, 24);
        CHECK(v.certified_on_grid);
    }
    SUBCASE("1/x is harmonic-affine, certified with equality") {
        ConvexityVerdict v = check_convexity(parse("1/x"), Rect(1, 2, 1, 2), ConvexityMode::Harmonic1D, 24);
        CHECK(v.certified_on_grid);
    }
    SUBCASE("-ln(x) is refuted: its reciprocal transform is concave") {
        ConvexityVerdict v =
            check_convexity(parse("0-ln(x)"), Rect(1, 2, 1, 2), ConvexityMode::Harmonic1D, 24);
        REQUIRE(v.witness);
        CHECK(v.witness->slice == SliceKind::OneD);
    }
    SUBCASE("expressions in y are rejected") {
        CHECK_THROWS_AS(check_convexity(parse("x*y"), Rect(1, 2, 1, 2), ConvexityMode::Harmonic1D, 12),
                        std::invalid_argument);
    }
}

TEST_CASE("grid refinement never flips a harmonic-affine certification") {
    // alpha/(x*y) + beta has harmonic-affine slices: coordinate equality family.
    for (const char* src : {"1/(x*y)", "2/(x*y)-1", "3/(x*y)+0.5"}) {
        Expr f = parse(src);
        Rect r(1, 2, 1, 3);
        ConvexityVerdict coarse = check_convexity(f, r, ConvexityMode::HarmonicCoordinate, 16);
        REQUIRE_MESSAGE(coarse.certified_on_grid, src);
        ConvexityVerdict fine = check_convexity(f, r, ConvexityMode::HarmonicCoordinate, 32);
        CHECK_MESSAGE(fine.certified_on_grid, src);
    }
}

TEST_CASE("counterexample search refines beyond the coarse lattice") {
    Expr f = parse("(x-1)*(y-2)");
    Rect r(1, 3, 2, 3);

    auto found = counterexample_search(f, r, ConvexityMode::HarmonicJoint, 8);
    REQUIRE(found);
    CHECK(found->violation > 1e-9);
    // soundness: the reported tuple re-evaluates to the reported violation
    CHECK(harmonic_joint_gap(f, found->x1, found->y1, found->x2, found->y2, found->t) ==
          doctest::Approx(found->violation).epsilon(1e-12));

    // refinement dominates an independent coarse scan
    const double coarse_max = brute_force_max_violation(f, r, 9);
    CHECK(found->violation >= coarse_max - 1e-12);

    // the violation is bounded by sup f - 0 = 2 on this rectangle
    CHECK(found->violation <= 2.0);

    // hand-maximised family value: 4t(1-t)/((1+2t)(3-t)) ~ 0.20527 at t ~ 0.41
    CHECK(found->violation >= 0.2);
}

TEST_CASE("grid_n below 3 is rejected") {
    CHECK_THROWS_AS(check_convexity(parse("x"), Rect(1, 2, 1, 2), ConvexityMode::Harmonic1D, 2),
                    std::invalid_argument);
}

TEST_CASE("domain errors carry the offending lattice point") {
    // ln(y-2) fails on the first slice of [1,3]x[2,3] where y = 2.
    Expr f = parse("ln(y-2)");
    CHECK_THROWS_AS(check_convexity(f, Rect(1, 3, 2, 3), ConvexityMode::HarmonicCoordinate, 8),
                    DomainError);
}
