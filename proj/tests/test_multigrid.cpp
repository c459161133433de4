#include <catch2/catch_amalgamated.hpp>

#include "support/oracles.hpp"
#include "ugrid/dense.hpp"
#include "ugrid/multigrid.hpp"
#include "ugrid/solver.hpp"

using namespace ugrid;

namespace {

InteriorMask full_square(int n) {
    InteriorMask m(n);
    for (int i = 1; i < n - 1; ++i)
        for (int j = 1; j < n - 1; ++j) m.set_interior(i, j);
    return m;
}

}  // namespace

TEST_CASE("restrict_full_weighting") {
    SECTION("constants are preserved") {
        GridField c(17, 2.5);
        GridField r = restrict_full_weighting(c);
        REQUIRE(r.n() == 9);
        for (double v : r.data()) CHECK(v == Catch::Approx(2.5).epsilon(1e-15));
    }
    SECTION("impulse at a coarse-aligned point") {
        GridField f(9);
        f(4, 4) = 1.0;
        GridField r = restrict_full_weighting(f);
        CHECK(r(2, 2) == 0.25);
        CHECK(r(2, 1) == 0.0);  // two fine cells away
        GridField g(9);
        g(3, 4) = 1.0;  // off-lattice neighbor lands with weight 1/8
        GridField r2 = restrict_full_weighting(g);
        CHECK(r2(2, 2) == 0.125);
        CHECK(r2(1, 2) == 0.125);
    }
    SECTION("matches the scalar-loop oracle") {
        Rng rng(4);
        GridField f = oracle::random_field(17, rng);
        GridField got = restrict_full_weighting(f);
        GridField want = oracle::restrict_loop(f);
        for (std::size_t k = 0; k < got.size(); ++k) CHECK(got.data()[k] == Catch::Approx(want.data()[k]).margin(1e-16));
    }
    SECTION("too small to coarsen") { CHECK_THROWS_AS(restrict_full_weighting(GridField(5)), std::invalid_argument); }
}

TEST_CASE("prolong_bilinear") {
    SECTION("constants") {
        GridField c(9, -1.25);
        GridField f = prolong_bilinear(c);
        REQUIRE(f.n() == 17);
        for (double v : f.data()) CHECK(v == -1.25);
    }
    SECTION("reproduces linear ramps") {
        GridField c(9);
        for (int i = 0; i < 9; ++i)
            for (int j = 0; j < 9; ++j) c(i, j) = 2.0 * i - 3.0 * j;
        GridField f = prolong_bilinear(c);
        for (int i = 0; i < 17; ++i)
            for (int j = 0; j < 17; ++j) CHECK(f(i, j) == Catch::Approx(1.0 * i - 1.5 * j).margin(1e-13));
    }
    SECTION("matches the scalar-loop oracle") {
        Rng rng(6);
        GridField c = oracle::random_field(9, rng);
        GridField got = prolong_bilinear(c);
        GridField want = oracle::prolong_loop(c);
        for (std::size_t k = 0; k < got.size(); ++k) CHECK(got.data()[k] == want.data()[k]);
    }
}

TEST_CASE("coarsen_mask") {
    SECTION("full interior stays full interior") {
        InteriorMask c = coarsen_mask(full_square(17));
        for (int i = 1; i < 8; ++i)
            for (int j = 1; j < 8; ++j) CHECK(c.interior(i, j));
        CHECK(c.interior_count() == 49);
    }
    SECTION("all boundary stays all boundary") {
        InteriorMask c = coarsen_mask(InteriorMask(17));
        CHECK(c.interior_count() == 0);
    }
    SECTION("matches the brute-force footprint rule") {
        Rng rng(8);
        for (int rep = 0; rep < 10; ++rep) {
            InteriorMask m = oracle::random_mask(17, rng, 0.8);
            InteriorMask c = coarsen_mask(m);
            for (int I = 0; I < 9; ++I)
                for (int J = 0; J < 9; ++J)
                    CHECK(c.interior(I, J) == oracle::coarse_point_interior_loop(m, I, J));
        }
    }
}

TEST_CASE("dense_solve") {
    SECTION("single interior point") {
        InteriorMask m(5);
        m.set_interior(2, 2);
        PdeProblem p = PdeProblem::poisson(GridField(5), GridField(5, 1.0), m);
        GridField u = dense_solve(p);
        CHECK(u(2, 2) == Catch::Approx(1.0).margin(1e-12));
        CHECK(u(0, 0) == 1.0);
    }
    SECTION("self-consistency: solution satisfies both masked equations") {
        Rng rng(12);
        GridField f = oracle::random_field(9, rng), b = oracle::random_field(9, rng);
        InteriorMask m = oracle::random_mask(9, rng);
        PdeProblem p = PdeProblem::poisson(f, b, m);
        GridField u = dense_solve(p);
        CHECK(l2_norm(residual(p, u)) < 1e-10);
        for (int i = 0; i < 9; ++i)
            for (int j = 0; j < 9; ++j)
                if (!m.interior(i, j)) CHECK(u(i, j) == b(i, j));
    }
    SECTION("Helmholtz k^2 = 1 agrees with the smoother iterated to stagnation") {
        // Keep the interior small enough that the plain Jacobi sweep still
        // contracts at this wavenumber.
        Rng rng(14);
        InteriorMask m(9);
        for (int i = 3; i <= 5; ++i)
            for (int j = 3; j <= 5; ++j) m.set_interior(i, j);
        PdeProblem p = PdeProblem::helmholtz(oracle::random_field(9, rng), oracle::random_field(9, rng), m,
                                             GridField(9, 1.0));
        GridField u = masked_compose(GridField(9), p.b, p.mask);
        for (int it = 0; it < 20000; ++it) u = smooth(p, u);
        GridField ustar = dense_solve(p);
        CHECK(linf_norm(u - ustar) / std::max(1.0, linf_norm(ustar)) < 1e-8);
    }
    SECTION("singular Helmholtz is reported, not regularized") {
        // Constant k^2 equal to a Laplacian eigenvalue on the 3x3 interior.
        InteriorMask m(5);
        for (int i = 1; i <= 3; ++i)
            for (int j = 1; j <= 3; ++j) m.set_interior(i, j);
        const double k2 = 4.0 - 2.0 * std::sqrt(2.0);
        PdeProblem p = PdeProblem::helmholtz(GridField(5), GridField(5), m, GridField(5, k2));
        CHECK_THROWS_WITH(dense_solve(p), Catch::Matchers::ContainsSubstring("singular"));
    }
    SECTION("size guard") {
        PdeProblem p = PdeProblem::poisson(GridField(65), GridField(65), full_square(65));
        CHECK_THROWS_AS(dense_solve(p), std::invalid_argument);
    }
}

TEST_CASE("vcycle") {
    SECTION("zero problem is a fixed point") {
        InteriorMask m = full_square(17);
        PdeProblem p = PdeProblem::poisson(GridField(17), GridField(17), m);
        MgHierarchy h = build_hierarchy(p);
        GridField u = vcycle(p, GridField(17), h, 2, 2);
        CHECK(l2_norm(u) == 0.0);
    }
    SECTION("hierarchy shape") {
        PdeProblem p = PdeProblem::poisson(GridField(33), GridField(33), full_square(33));
        MgHierarchy h = build_hierarchy(p);
        REQUIRE(h.depth() == 4);
        CHECK(h.levels[0].n == 33);
        CHECK(h.levels[1].n == 17);
        CHECK(h.levels[2].n == 9);
        CHECK(h.levels[3].n == 5);
    }
    SECTION("exact solution passes through unchanged") {
        Rng rng(18);
        GridField f = oracle::random_field(17, rng), b = oracle::random_field(17, rng);
        PdeProblem p = PdeProblem::poisson(f, b, full_square(17));
        MgHierarchy h = build_hierarchy(p);
        GridField ustar = dense_solve(p);
        GridField out = vcycle(p, ustar, h, 2, 2);
        CHECK(linf_norm(out - ustar) < 1e-10);
    }
    SECTION("standard contraction on the 129 square") {
        Rng rng(20);
        GridField b = oracle::random_field(129, rng);
        PdeProblem p = PdeProblem::poisson(GridField(129), b, full_square(129));
        MgHierarchy h = build_hierarchy(p);
        GridField u = initial_guess(p);
        const GridField feff = effective_rhs(p);
        const double denom = l2_norm(feff);
        REQUIRE(denom > 0.0);
        for (int c = 0; c < 10; ++c) u = vcycle(p, std::move(u), h, 2, 2);
        CHECK(l2_norm(residual(p, u)) / denom <= 1e-4);
    }
    SECTION("boundary rows preserved bitwise") {
        Rng rng(22);
        GridField f = oracle::random_field(33, rng), b = oracle::random_field(33, rng);
        InteriorMask m = oracle::random_mask(33, rng, 0.8);
        PdeProblem p = PdeProblem::poisson(f, b, m);
        MgHierarchy h = build_hierarchy(p);
        GridField u = vcycle(p, initial_guess(p), h, 2, 2);
        for (int i = 0; i < 33; ++i)
            for (int j = 0; j < 33; ++j)
                if (!m.interior(i, j)) CHECK(u(i, j) == b(i, j));
    }
    SECTION("masked problem converges to the dense solution") {
        Rng rng(24);
        GridField f = oracle::random_field(33, rng), b = oracle::random_field(33, rng);
        InteriorMask m(33);
        // ring-shaped interior
        for (int i = 1; i < 32; ++i)
            for (int j = 1; j < 32; ++j) {
                const double d = std::hypot(i - 16.0, j - 16.0);
                if (d < 13.5 && d > 5.5) m.set_interior(i, j);
            }
        PdeProblem p = PdeProblem::poisson(f, b, m);
        MgHierarchy h = build_hierarchy(p);
        GridField u = initial_guess(p);
        for (int c = 0; c < 30; ++c) u = vcycle(p, std::move(u), h, 2, 2);
        GridField ustar = dense_solve(p);
        CHECK(linf_norm(u - ustar) / std::max(1.0, linf_norm(ustar)) < 1e-6);
    }
}
