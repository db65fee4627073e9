#include <doctest.h>

#include <random>

#include "field.hpp"
#include "oracles.hpp"

using namespace selseg;

TEST_CASE("restriction preserves constants exactly") {
    for (int n : {4, 8, 16}) {
        Field2D f(n, n, 3.25);
        const Field2D c = restrict_full_weighting(f);
        CHECK(c.nx == n / 2);
        CHECK(c.ny == n / 2);
        for (double x : c.v) CHECK(x == 3.25);
    }
}

TEST_CASE("restriction reads the centre weight from a single impulse") {
    Field2D f(4, 4, 0.0);
    f.at(1, 1) = 16.0; // centre of the first coarse pixel's stencil
    const Field2D c = restrict_full_weighting(f);
    CHECK(c.at(0, 0) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("restriction matches the dense stencil table on random fields") {
    std::mt19937 rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const Field2D f = oracle::random_field(8, 8, rng);
        const Field2D got = restrict_full_weighting(f);
        const Field2D want = oracle::dense_restrict(f);
        for (size_t k = 0; k < got.size(); ++k)
            CHECK(std::fabs(got.v[k] - want.v[k]) < 1e-12);
    }
}

TEST_CASE("restriction rejects odd dimensions") {
    Field2D f(5, 4, 0.0);
    CHECK_THROWS_AS(restrict_full_weighting(f), Error);
}

TEST_CASE("interpolation preserves constants and replicates at the edge") {
    Field2D c(2, 2, 7.0);
    const Field2D f = interpolate_bilinear(c);
    CHECK(f.nx == 4);
    for (double x : f.v) CHECK(x == 7.0);

    Field2D c2(2, 2, 0.0);
    c2.at(1, 1) = 4.0;
    const Field2D f2 = interpolate_bilinear(c2);
    const Field2D want = oracle::dense_interpolate(c2);
    for (size_t k = 0; k < f2.size(); ++k) CHECK(std::fabs(f2.v[k] - want.v[k]) < 1e-12);
    CHECK(f2.at(3, 3) == doctest::Approx(4.0)); // clamped four-point average
}

TEST_CASE("interpolation copies coarse values at even pixels of a ramp") {
    Field2D c(4, 4);
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) c.at(i, j) = static_cast<double>(i);
    const Field2D f = interpolate_bilinear(c);
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) CHECK(f.at(2 * i, 2 * j) == c.at(i, j));
}

TEST_CASE("interpolation matches the dense table on random fields") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const Field2D c = oracle::random_field(5, 3, rng);
        const Field2D got = interpolate_bilinear(c);
        const Field2D want = oracle::dense_interpolate(c);
        REQUIRE(got.size() == want.size());
        for (size_t k = 0; k < got.size(); ++k)
            CHECK(std::fabs(got.v[k] - want.v[k]) < 1e-12);
    }
}

TEST_CASE("transfer operators are linear") {
    std::mt19937 rng(3);
    const Field2D u = oracle::random_field(8, 8, rng);
    const Field2D v = oracle::random_field(8, 8, rng);
    const double a = 1.7, b = -0.3;
    Field2D mix(8, 8);
    for (size_t k = 0; k < mix.size(); ++k) mix.v[k] = a * u.v[k] + b * v.v[k];

    const Field2D ru = restrict_full_weighting(u);
    const Field2D rv = restrict_full_weighting(v);
    const Field2D rmix = restrict_full_weighting(mix);
    for (size_t k = 0; k < rmix.size(); ++k)
        CHECK(std::fabs(rmix.v[k] - (a * ru.v[k] + b * rv.v[k])) < 1e-12);

    const Field2D iu = interpolate_bilinear(u);
    const Field2D iv = interpolate_bilinear(v);
    const Field2D imix = interpolate_bilinear(mix);
    for (size_t k = 0; k < imix.size(); ++k)
        CHECK(std::fabs(imix.v[k] - (a * iu.v[k] + b * iv.v[k])) < 1e-12);
}

TEST_CASE("restrict then interpolate keeps a constant unchanged") {
    Field2D f(16, 8, -2.5);
    const Field2D round = interpolate_bilinear(restrict_full_weighting(f));
    REQUIRE(round.size() == f.size());
    for (double x : round.v) CHECK(x == -2.5);
}

TEST_CASE("hierarchy chains") {
    const GridHierarchy h = build_hierarchy(1024, 1024, 32);
    REQUIRE(h.num_levels() == 6);
    CHECK(h.levels.front() == std::pair<int, int>{1024, 1024});
    CHECK(h.levels.back() == std::pair<int, int>{32, 32});

    CHECK(build_hierarchy(32, 32, 32).num_levels() == 1);

    const GridHierarchy r = build_hierarchy(96, 64, 32);
    REQUIRE(r.num_levels() == 2);
    CHECK(r.levels[0] == std::pair<int, int>{96, 64});
    CHECK(r.levels[1] == std::pair<int, int>{48, 32});
}

TEST_CASE("hierarchy rejects sizes that do not halve, naming a crop") {
    try {
        build_hierarchy(97, 64, 32);
        FAIL("expected a dimension error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Dimension);
        CHECK(std::string(e.what()).find("96x64") != std::string::npos);
    }
    CHECK(largest_compatible_crop(97, 97, 32) == std::pair<int, int>{96, 96});
    CHECK(largest_compatible_crop(1024, 1024, 32) == std::pair<int, int>{1024, 1024});
}
