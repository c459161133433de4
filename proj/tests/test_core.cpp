#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "support/oracles.hpp"
#include "ugrid/core.hpp"
#include "ugrid/io.hpp"

using namespace ugrid;

TEST_CASE("grid size discipline") {
    CHECK(is_valid_grid_size(5));
    CHECK(is_valid_grid_size(9));
    CHECK(is_valid_grid_size(1025));
    CHECK_FALSE(is_valid_grid_size(3));
    CHECK_FALSE(is_valid_grid_size(6));
    CHECK_FALSE(is_valid_grid_size(0));
    CHECK_THROWS_AS(GridField(7), std::invalid_argument);
    CHECK_THROWS_AS(InteriorMask(4), std::invalid_argument);
}

TEST_CASE("interior mask frame is always boundary") {
    InteriorMask m(9);
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) m.set_interior(i, j);
    for (int k = 0; k < 9; ++k) {
        CHECK_FALSE(m.interior(0, k));
        CHECK_FALSE(m.interior(8, k));
        CHECK_FALSE(m.interior(k, 0));
        CHECK_FALSE(m.interior(k, 8));
    }
    CHECK(m.interior(4, 4));

    std::vector<std::uint8_t> bad(81, 0);
    bad[40] = 2;
    CHECK_THROWS_AS(InteriorMask(9, std::move(bad)), std::invalid_argument);
}

TEST_CASE("masked_compose") {
    SECTION("all-boundary mask returns b everywhere") {
        GridField x(5, 5.0), b(5, 2.0);
        InteriorMask m(5);
        GridField out = masked_compose(x, b, m);
        for (double v : out.data()) CHECK(v == 2.0);
    }
    SECTION("single interior point keeps x there") {
        GridField x(5, 5.0), b(5, 2.0);
        InteriorMask m(5);
        m.set_interior(2, 2);
        GridField out = masked_compose(x, b, m);
        CHECK(out(2, 2) == 5.0);
        CHECK(out(2, 3) == 2.0);
        CHECK(out(0, 0) == 2.0);
    }
    SECTION("matches the elementwise select oracle on random 9x9 inputs") {
        Rng rng(17);
        for (int rep = 0; rep < 20; ++rep) {
            GridField x = oracle::random_field(9, rng);
            GridField b = oracle::random_field(9, rng);
            InteriorMask m = oracle::random_mask(9, rng, 0.5);
            GridField got = masked_compose(x, b, m);
            GridField want = oracle::select_loop(x, b, m);
            for (std::size_t k = 0; k < got.size(); ++k) CHECK(got.data()[k] == want.data()[k]);
        }
    }
    SECTION("idempotent") {
        Rng rng(3);
        GridField x = oracle::random_field(9, rng);
        GridField b = oracle::random_field(9, rng);
        InteriorMask m = oracle::random_mask(9, rng);
        GridField once = masked_compose(x, b, m);
        GridField twice = masked_compose(once, b, m);
        CHECK(once.data() == twice.data());
    }
    SECTION("dimension mismatch") {
        GridField x(5), b(9);
        InteriorMask m(5);
        CHECK_THROWS_AS(masked_compose(x, b, m), std::invalid_argument);
    }
}

TEST_CASE("l2_norm") {
    CHECK(l2_norm(GridField(5)) == 0.0);
    GridField single(5);
    single(2, 3) = 3.0;
    CHECK(l2_norm(single) == 3.0);
    Rng rng(11);
    GridField f = oracle::random_field(5, rng);
    CHECK(l2_norm(f) == Catch::Approx(oracle::norm_loop(f)).epsilon(1e-15));
}

TEST_CASE("relative_residual") {
    Rng rng(42);
    GridField f = oracle::random_field(9, rng);
    SECTION("zero residual") { CHECK(relative_residual(GridField(9), f) == 0.0); }
    SECTION("r equal to f gives exactly 1") { CHECK(relative_residual(f, f) == 1.0); }
    SECTION("random pair matches the ratio of scalar-loop norms") {
        GridField r = oracle::random_field(9, rng);
        CHECK(relative_residual(r, f) ==
              Catch::Approx(oracle::norm_loop(r) / oracle::norm_loop(f)).epsilon(1e-14));
    }
    SECTION("zero denominator signals a degenerate problem") {
        CHECK_THROWS_AS(relative_residual(f, GridField(9)), std::domain_error);
    }
}

namespace {
std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}
}  // namespace

TEST_CASE("field file round trip is bit exact") {
    Rng rng(7);
    GridField f(5);
    // Mix ordinary values with extreme exponents, negative zero, denormals.
    for (double& v : f.data()) v = rng.uniform(-1e3, 1e3);
    f(0, 0) = -0.0;
    f(0, 1) = 5e-324;
    f(0, 2) = -1.7976931348623157e308;
    f(0, 3) = 2.2250738585072014e-308;
    const std::string path = temp_path("roundtrip.ugf");
    write_field(path, f);
    GridField g = read_field(path);
    REQUIRE(g.n() == f.n());
    for (std::size_t k = 0; k < f.size(); ++k) {
        std::uint64_t a, b;
        std::memcpy(&a, &f.data()[k], 8);
        std::memcpy(&b, &g.data()[k], 8);
        CHECK(a == b);
    }
    std::filesystem::remove(path);
}

TEST_CASE("field file format errors") {
    const std::string path = temp_path("badfield.ugf");
    SECTION("wrong magic") {
        std::ofstream os(path, std::ios::binary);
        os << "NOPE" << std::string(32, '\0');
        os.close();
        CHECK_THROWS_WITH(read_field(path), Catch::Matchers::ContainsSubstring("magic"));
    }
    SECTION("invalid size in header") {
        std::ofstream os(path, std::ios::binary);
        os << "UGF1";
        const unsigned char n6[4] = {6, 0, 0, 0};
        os.write(reinterpret_cast<const char*>(n6), 4);
        os.close();
        CHECK_THROWS_WITH(read_field(path), Catch::Matchers::ContainsSubstring("invalid grid size"));
    }
    SECTION("truncated payload") {
        GridField f(5, 1.0);
        write_field(path, f);
        std::filesystem::resize_file(path, 40);
        CHECK_THROWS_WITH(read_field(path), Catch::Matchers::ContainsSubstring("truncated"));
    }
    std::filesystem::remove(path);
}

TEST_CASE("pgm masks") {
    Rng rng(23);
    InteriorMask m = oracle::random_mask(9, rng);
    const std::string path = temp_path("mask.pgm");
    write_mask_pgm(path, m);
    InteriorMask back = read_mask_pgm(path);
    REQUIRE(back.n() == m.n());
    CHECK(back.data() == m.data());
    std::filesystem::remove(path);

    SECTION("nonzero pixels become interior, frame forced to boundary") {
        const std::string p2 = temp_path("all255.pgm");
        std::ofstream os(p2, std::ios::binary);
        os << "P5\n9 9\n255\n";
        for (int k = 0; k < 81; ++k) os.put(char(200));
        os.close();
        InteriorMask a = read_mask_pgm(p2);
        CHECK_FALSE(a.interior(0, 4));
        CHECK(a.interior(4, 4));
        CHECK(a.interior_count() == 49);
        std::filesystem::remove(p2);
    }
    SECTION("mask as UGF1 with non-binary entry is rejected") {
        const std::string p3 = temp_path("mask.ugf");
        GridField f(5);
        f(2, 2) = 0.5;
        write_field(p3, f);
        CHECK_THROWS_WITH(read_mask_ugf(p3), Catch::Matchers::ContainsSubstring("0 or 1"));
        std::filesystem::remove(p3);
    }
}
