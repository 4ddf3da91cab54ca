#include <doctest.h>

#include <cmath>

#include "hct/convexity.hpp"
#include "hct/hh.hpp"

using namespace hct;

namespace {

const double kLn2 = std::log(2.0);
const double kLn3 = std::log(3.0);

}  // namespace

TEST_CASE("one-dimensional chain") {
    SUBCASE("constants are sharp") {
        ChainReport r = chain_harmonic_1d(parse("1"), 1.0, 2.0);
        REQUIRE(r.values.size() == 3);
        for (double v : r.values) CHECK(std::fabs(v - 1.0) <= 1e-12);
        for (double m : r.margins) CHECK(std::fabs(m) <= 1e-12);
        CHECK(r.ordering_ok);
    }
    SUBCASE("1/x is harmonic-affine: equality throughout") {
        ChainReport r = chain_harmonic_1d(parse("1/x"), 1.0, 2.0);
        for (double v : r.values) CHECK(v == doctest::Approx(0.75).epsilon(1e-10));
        CHECK(r.ordering_ok);
    }
    SUBCASE("x gives the strict chain 4/3 < 2 ln 2 < 3/2") {
        ChainReport r = chain_harmonic_1d(parse("x"), 1.0, 2.0);
        CHECK(r.values[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
        CHECK(r.values[1] == doctest::Approx(2.0 * kLn2).epsilon(1e-11));
        CHECK(r.values[2] == doctest::Approx(1.5).epsilon(1e-12));
        CHECK(r.ordering_ok);
    }
    SUBCASE("rejects expressions in y") {
        CHECK_THROWS_AS(chain_harmonic_1d(parse("x*y"), 1.0, 2.0), std::invalid_argument);
    }
}

TEST_CASE("harmonic 2-D chain") {
    SUBCASE("constants are sharp on several rectangles") {
        for (Rect r : {Rect(1, 2, 1, 3), Rect(0.5, 2.5, 2, 7), Rect(3, 4, 0.1, 9)}) {
            ChainReport c = chain_harmonic_2d(parse("1"), r);
            REQUIRE(c.values.size() == 5);
            for (double v : c.values) CHECK(std::fabs(v - 1.0) <= 1e-12);
            for (double m : c.margins) CHECK(std::fabs(m) <= 1e-12);
            CHECK(c.ordering_ok);
        }
    }

    SUBCASE("x*y on [1,2]x[1,3] matches the closed forms") {
        ChainReport c = chain_harmonic_2d(parse("x*y"), Rect(1, 2, 1, 3));
        // members via ln antiderivatives
        const double m1 = 2.0;                                   // f(4/3, 3/2)
        const double m2 = 0.5 * (1.5 * 2.0 * kLn2 + (4.0 / 3.0) * 1.5 * kLn3);
        const double m3 = 6.0 * kLn2 * kLn3 / 2.0;
        const double m4 = 0.25 * (2.0 * kLn2 + 6.0 * kLn2 + 1.5 * kLn3 + 3.0 * kLn3);
        const double m5 = 3.0;
        const double expected[5] = {m1, m2, m3, m4, m5};
        for (int i = 0; i < 5; ++i)
            CHECK(std::fabs(c.values[static_cast<std::size_t>(i)] - expected[i]) <= 1e-8);
        // the frozen decimals
        CHECK(std::fabs(c.values[1] - 2.1383331) <= 1e-6);
        CHECK(std::fabs(c.values[2] - 2.2845000) <= 1e-6);
        CHECK(std::fabs(c.values[3] - 2.6222330) <= 1e-6);
        CHECK(c.ordering_ok);
    }

    SUBCASE("1/(x*y) is harmonic-affine in each variable: all members 0.5") {
        ChainReport c = chain_harmonic_2d(parse("1/(x*y)"), Rect(1, 2, 1, 3));
        for (double v : c.values) CHECK(std::fabs(v - 0.5) <= 1e-9);
        CHECK(c.ordering_ok);
    }

    SUBCASE("ordering holds for the coordinate-convex family") {
        for (const char* src : {"x*y", "x+y", "1/(x*y)", "x^2*y^2", "exp(x+y)"}) {
            Expr f = parse(src);
            // chain validity premise: coordinate-harmonic certification
            ConvexityVerdict v =
                check_convexity(f, Rect(1, 2, 1, 3), ConvexityMode::HarmonicCoordinate, 16);
            REQUIRE_MESSAGE(v.certified_on_grid, src);
            ChainReport c = chain_harmonic_2d(f, Rect(1, 2, 1, 3));
            CHECK_MESSAGE(c.ordering_ok, src);
        }
    }

    SUBCASE("a concave function breaks the ordering") {
        ChainReport c = chain_harmonic_2d(parse("0-x*y"), Rect(1, 2, 1, 3));
        CHECK(!c.ordering_ok);
    }
}

TEST_CASE("classical 2-D chain") {
    SUBCASE("constants are sharp") {
        ChainReport c = chain_classical_2d(parse("1"), Rect(1, 2, 1, 3));
        REQUIRE(c.values.size() == 4);
        for (double v : c.values) CHECK(std::fabs(v - 1.0) <= 1e-12);
        CHECK(c.ordering_ok);
    }
    SUBCASE("bilinear x*y collapses to equality") {
        ChainReport c = chain_classical_2d(parse("x*y"), Rect(1, 2, 1, 3));
        for (double v : c.values) CHECK(v == doctest::Approx(3.0).epsilon(1e-11));
        CHECK(c.ordering_ok);
    }
    SUBCASE("x^2*y^2 matches polynomial antiderivatives") {
        ChainReport c = chain_classical_2d(parse("x^2*y^2"), Rect(1, 2, 1, 3));
        const double mid = 9.0;                                      // (1.5^2)(2^2)
        const double midline = 0.5 * (4.0 * 7.0 / 3.0 + (9.0 / 8.0) * 26.0 / 3.0);
        const double dmean = (7.0 / 3.0) * (26.0 / 3.0) / 2.0;       // 10.111...
        const double corners = (1.0 + 9.0 + 4.0 + 36.0) / 4.0;       // 12.5
        CHECK(c.values[0] == doctest::Approx(mid).epsilon(1e-12));
        CHECK(c.values[1] == doctest::Approx(midline).epsilon(1e-10));
        CHECK(c.values[2] == doctest::Approx(dmean).epsilon(1e-10));
        CHECK(c.values[3] == doctest::Approx(corners).epsilon(1e-12));
        CHECK(c.ordering_ok);
    }
}

TEST_CASE("a function constant in y reduces the 2-D chain to the 1-D chain") {
    Expr f = parse("x*x");
    Rect r(1, 2, 1, 3);
    ChainReport two = chain_harmonic_2d(f, r);
    ChainReport one = chain_harmonic_1d(f, r.a, r.b);
    const double tol = 1e-9;
    CHECK(std::fabs(two.values[0] - one.values[0]) <= tol);  // midpoint
    CHECK(std::fabs(two.values[2] - one.values[1]) <= tol);  // double mean = 1-D mean
    CHECK(std::fabs(two.values[4] - one.values[2]) <= tol);  // corner avg = endpoint avg
}

TEST_CASE("identity residual") {
    SUBCASE("constants vanish on both sides") {
        IdentityReport r = evaluate_identity(parse("1"), Rect(1, 2, 1, 3));
        CHECK(std::fabs(r.lhs) <= 1e-12);
        CHECK(std::fabs(r.rhs) <= 1e-12);
        CHECK(r.residual_ok);
    }

    SUBCASE("x*y on [1,2]x[1,3]: both sides equal 3(3/2 - 2ln2)(2/3 - ln3/2)") {
        IdentityReport r = evaluate_identity(parse("x*y"), Rect(1, 2, 1, 3));
        const double expected = 3.0 * (1.5 - 2.0 * kLn2) * (2.0 / 3.0 - kLn3 / 2.0);
        CHECK(r.lhs == doctest::Approx(expected).epsilon(1e-7));
        CHECK(r.rhs == doctest::Approx(expected).epsilon(1e-7));
        CHECK(std::fabs(r.lhs - 0.0400337) <= 1e-6);
        CHECK(std::fabs(r.residual) <= 1e-7);
        CHECK(r.residual_ok);
    }

    SUBCASE("x*y on the square [1,2]^2: (3/2 - 2ln2)^2") {
        IdentityReport r = evaluate_identity(parse("x*y"), Rect(1, 2, 1, 2));
        const double expected = (1.5 - 2.0 * kLn2) * (1.5 - 2.0 * kLn2);
        CHECK(std::fabs(r.lhs - expected) <= 1e-8);
        CHECK(std::fabs(r.rhs - expected) <= 1e-8);
        CHECK(r.residual_ok);
    }

    SUBCASE("residual stays below 1e-7 for the polynomial and rational set") {
        for (const char* src : {"x*y", "x^2*y^2", "1/(x*y)", "exp(x+y)"}) {
            IdentityReport r = evaluate_identity(parse(src), Rect(1, 2, 1, 3));
            CHECK_MESSAGE(std::fabs(r.residual) <= 1e-7, src, " residual ", r.residual);
            CHECK_MESSAGE(r.residual_ok, src);
        }
    }

    SUBCASE("finite-difference partials reproduce the identity within noise") {
        IdentityReport r =
            evaluate_identity(parse("x*y"), Rect(1, 2, 1, 3), Tolerance{}, PartialMode::FiniteDifference);
        CHECK(std::fabs(r.residual) <= 5e-6);
        CHECK(r.residual_ok);
    }

    SUBCASE("scaling f scales both sides exactly (lambda = 2 and -1)") {
        // With a purely relative tolerance every float op scales exactly
        // under doubling and negation, so the equality is bitwise.
        Tolerance rel_only{0.0, 1e-10, 50};
        IdentityReport base = evaluate_identity(parse("x*y"), Rect(1, 2, 1, 3), rel_only);
        IdentityReport doubled = evaluate_identity(parse("2*x*y"), Rect(1, 2, 1, 3), rel_only);
        IdentityReport negated = evaluate_identity(parse("-x*y"), Rect(1, 2, 1, 3), rel_only);
        CHECK(doubled.lhs == 2.0 * base.lhs);
        CHECK(doubled.rhs == 2.0 * base.rhs);
        CHECK(negated.lhs == -base.lhs);
        CHECK(negated.rhs == -base.rhs);
    }
}

TEST_CASE("bound report") {
    SUBCASE("x*y with q = 2 on [1,2]^2 matches the worked values") {
        BoundReport r = evaluate_bound(parse("x*y"), Rect(1, 2, 1, 2), BoundParams(2.0));
        CHECK(std::fabs(r.lhs_abs - 0.0129290) <= 1e-6);
        // |mixed partial| = 1 so rhs = (1/3)*sqrt(sum m_i) = (1/3)(7/24)
        CHECK(std::fabs(r.rhs_direct - 7.0 / 72.0) <= 1e-8);
        const double msum = r.moments_direct.m1 + r.moments_direct.m2 + r.moments_direct.m3 +
                            r.moments_direct.m4;
        CHECK(msum == doctest::Approx((7.0 / 24.0) * (7.0 / 24.0)).epsilon(1e-9));
        CHECK(r.holds_direct);
        CHECK(!r.c_coeff_consistent);  // the coefficient variant genuinely differs
    }

    SUBCASE("constants: zero mixed partial, zero bound, holds") {
        BoundReport r = evaluate_bound(parse("1"), Rect(1, 3, 2, 3), BoundParams(2.0));
        CHECK(r.lhs_abs <= 1e-12);
        CHECK(r.rhs_direct == 0.0);
        CHECK(r.holds_direct);
    }

    SUBCASE("dominance across functions, exponents and rectangles") {
        const Rect rects[] = {Rect(1, 2, 1, 2), Rect(1, 2, 1, 3)};
        for (const char* src : {"x*y", "x^2*y^2", "1/(x*y)"}) {
            Expr f = parse(src);
            for (double q : {1.5, 2.0, 3.0}) {
                for (const Rect& r : rects) {
                    // hypothesis pre-flight: |mixed partial|^q must be
                    // coordinate-wise harmonically convex
                    Expr magnitude = make_unary(UnaryOp::Abs, mixed_partial(f));
                    Expr hyp = make_binary(BinaryOp::Pow, magnitude, make_constant(q));
                    ConvexityVerdict pre =
                        check_convexity(hyp, r, ConvexityMode::HarmonicCoordinate, 16);
                    REQUIRE_MESSAGE(pre.certified_on_grid, src, " q=", q);

                    BoundReport b = evaluate_bound(f, r, BoundParams(q));
                    CHECK_MESSAGE(b.holds_direct, src, " q=", q);
                    CHECK_MESSAGE(b.lhs_abs <= b.rhs_direct + b.lhs_err + b.rhs_err + 1e-9, src,
                                  " q=", q);
                }
            }
        }
    }

    SUBCASE("finite-difference partials agree with symbolic ones") {
        BoundReport sym = evaluate_bound(parse("x*y"), Rect(1, 2, 1, 2), BoundParams(2.0));
        BoundReport fd = evaluate_bound(parse("x*y"), Rect(1, 2, 1, 2), BoundParams(2.0), Tolerance{},
                                        PartialMode::FiniteDifference);
        CHECK(std::fabs(sym.rhs_direct - fd.rhs_direct) <= 1e-6);
        CHECK(fd.holds_direct);
    }
}
