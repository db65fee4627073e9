#include <doctest.h>

#include <cmath>
#include <random>

#include "model.hpp"
#include "oracles.hpp"

using namespace selseg;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("heaviside values and limits") {
    CHECK(heaviside(0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(heaviside(1e12, 1.0) > 1.0 - 1e-9);
    CHECK(heaviside(1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-15));
    // strictly increasing
    double prev = heaviside(-5.0, 1.0);
    for (double p = -4.5; p <= 5.0; p += 0.5) {
        const double h = heaviside(p, 1.0);
        CHECK(h > prev);
        prev = h;
    }
}

TEST_CASE("delta is the derivative of heaviside") {
    CHECK(delta(0.0, 1.0) == doctest::Approx(1.0 / kPi).epsilon(1e-15));
    CHECK(delta(1.0, 1.0) == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-15));
    for (double p : {-3.0, -1.0, 0.0, 1.0, 3.0}) {
        const double want = oracle::fd([](double x) { return heaviside(x, 1.0); }, p);
        CHECK(std::fabs(delta(p, 1.0) - want) < 1e-6);
    }
}

TEST_CASE("delta_prime is the derivative of delta") {
    CHECK(delta_prime(0.0, 1.0) == 0.0);
    CHECK(delta_prime(1.0, 1.0) == doctest::Approx(-1.0 / (2.0 * kPi)).epsilon(1e-14));
    for (double p : {-2.0, 1.0, 5.0}) {
        const double want = oracle::fd([](double x) { return delta(x, 1.0); }, p);
        CHECK(std::fabs(delta_prime(p, 1.0) - want) < 1e-6);
    }
    CHECK(delta_prime(0.7, 2.0) == doctest::Approx(-delta_prime(-0.7, 2.0)).epsilon(1e-14));
}

TEST_CASE("distance map vanishes at markers and saturates far away") {
    MarkerSet one;
    one.points = {{5, 7}, {5, 7}, {5, 7}};
    const Field2D d = distance_map(one, 0.05, 16, 16);
    CHECK(d.at(5, 7) == 0.0);

    MarkerSet two;
    two.points = {{0, 0}, {15, 15}, {0, 15}};
    const Field2D d2 = distance_map(two, 0.01, 16, 16);
    CHECK(d2.at(15, 0) > 1.0 - 1e-9); // far from every marker at this width

    // hand product at a third point
    MarkerSet pair;
    pair.points = {{0, 0}, {8, 0}, {0, 8}};
    const double sigma = 0.2;
    const Field2D dp = distance_map(pair, sigma, 16, 16);
    const double hx = 1.0 / 16;
    double want = 1.0;
    for (auto [mx, my] : pair.points) {
        const double ax = (mx - 4.0) * hx, ay = (my - 2.0) * hx;
        want *= 1.0 - std::exp(-ax * ax / (2 * sigma * sigma)) *
                          std::exp(-ay * ay / (2 * sigma * sigma));
    }
    CHECK(dp.at(4, 2) == doctest::Approx(want).epsilon(1e-12));

    MarkerSet empty;
    CHECK_THROWS_AS(distance_map(empty, 0.1, 8, 8), Error);
}

TEST_CASE("edge detector") {
    Field2D flat(8, 8, 0.4);
    for (double g : edge_detector(flat, 123.0).v) CHECK(g == 1.0);

    std::mt19937 rng(1);
    const Field2D noisy = oracle::random_field(8, 8, rng, 0.0, 1.0);
    for (double g : edge_detector(noisy, 0.0).v) CHECK(g == 1.0);

    Field2D step(8, 8, 0.0);
    for (int j = 0; j < 8; ++j)
        for (int i = 4; i < 8; ++i) step.at(i, j) = 1.0;
    const double beta = 100.0;
    const Field2D g = edge_detector(step, beta);
    const double hx = 1.0 / 8;
    const double slope = 1.0 / (2.0 * hx); // central difference across the jump
    CHECK(g.at(4, 3) == doctest::Approx(1.0 / (1.0 + beta * slope * slope)).epsilon(1e-12));
    CHECK(g.at(3, 3) == doctest::Approx(1.0 / (1.0 + beta * slope * slope)).epsilon(1e-12));
}

TEST_CASE("region means") {
    Field2D z(4, 4, 5.0);
    Field2D phi(4, 4, 0.3);
    const auto [c1, c2] = region_means(z, phi, 1.0);
    CHECK(c1 == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(c2 == doctest::Approx(5.0).epsilon(1e-14));

    std::mt19937 rng(2);
    const Field2D zr = oracle::random_field(6, 6, rng, 0.0, 1.0);
    Field2D zero(6, 6, 0.0);
    const auto [m1, m2] = region_means(zr, zero, 1.0);
    double mean = 0.0;
    for (double x : zr.v) mean += x;
    mean /= zr.size();
    CHECK(m1 == doctest::Approx(mean).epsilon(1e-12));
    CHECK(m2 == doctest::Approx(mean).epsilon(1e-12));

    // 2x2 toy with saturated phi, weighted sums by hand
    Field2D zt(2, 2), pt(2, 2);
    zt.at(0, 0) = 0;
    zt.at(1, 0) = 0;
    zt.at(0, 1) = 1;
    zt.at(1, 1) = 1;
    pt.at(0, 0) = 10;
    pt.at(1, 0) = 10;
    pt.at(0, 1) = -10;
    pt.at(1, 1) = -10;
    const double hp = heaviside(10, 1.0), hm = heaviside(-10, 1.0);
    const auto [t1, t2] = region_means(zt, pt, 1.0);
    CHECK(t1 == doctest::Approx((2.0 * hm) / (2 * hp + 2 * hm)).epsilon(1e-12));
    CHECK(t2 == doctest::Approx((2.0 * (1 - hm)) / (2 * (1 - hp) + 2 * (1 - hm))).epsilon(1e-12));
    CHECK(t1 >= 0.0);
    CHECK(t1 <= 1.0);
    CHECK(t2 >= 0.0);
    CHECK(t2 <= 1.0);
}

TEST_CASE("polygon area") {
    MarkerSet square;
    square.points = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(polygon_area(square, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));

    MarkerSet clockwise;
    clockwise.points = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};
    CHECK(polygon_area(clockwise, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));

    MarkerSet tri;
    tri.points = {{0, 0}, {1, 0}, {0, 1}};
    CHECK(polygon_area(tri, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));

    // pixel coordinates scale by the grid spacings
    MarkerSet px;
    px.points = {{0, 0}, {8, 0}, {8, 8}, {0, 8}};
    CHECK(polygon_area(px, 1.0 / 16, 1.0 / 16) == doctest::Approx(0.25).epsilon(1e-14));

    MarkerSet collinear;
    collinear.points = {{0, 0}, {1, 1}, {2, 2}};
    CHECK_THROWS_AS(polygon_area(collinear, 1.0, 1.0), Error);
}

namespace {

// Direct scalar transcription of the coefficient definitions, coded
// separately from the library path.
StencilField transcribe_coefficients(const Field2D& phi, const Field2D& d, const Field2D& g,
                                     const ModelParams& p, ModelKind kind) {
    const int nx = phi.nx, ny = phi.ny;
    auto mirror = [&](const Field2D& f, int i, int j) {
        i = std::clamp(i, 0, nx - 1);
        j = std::clamp(j, 0, ny - 1);
        return f.at(i, j);
    };
    Field2D G(nx, ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double px = (mirror(phi, i + 1, j) - mirror(phi, i - 1, j)) / (2 * phi.hx);
            const double py = (mirror(phi, i, j + 1) - mirror(phi, i, j - 1)) / (2 * phi.hy);
            const double w = kind == ModelKind::RadaChen ? d.at(i, j) * g.at(i, j) : g.at(i, j);
            G.at(i, j) = w / std::sqrt(px * px + py * py + p.eps_grad * p.eps_grad);
        }
    }
    StencilField K(nx, ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double de = delta(phi.at(i, j), p.eps_heaviside);
            K.A.at(i, j) = p.mu * de / (phi.hx * phi.hx) * 0.5 * (G.at(i, j) + mirror(G, i + 1, j));
            K.B.at(i, j) = p.mu * de / (phi.hx * phi.hx) * 0.5 * (G.at(i, j) + mirror(G, i - 1, j));
            K.C.at(i, j) = p.mu * de / (phi.hy * phi.hy) * 0.5 * (G.at(i, j) + mirror(G, i, j + 1));
            K.D.at(i, j) = p.mu * de / (phi.hy * phi.hy) * 0.5 * (G.at(i, j) + mirror(G, i, j - 1));
            K.S.at(i, j) = K.A.at(i, j) + K.B.at(i, j) + K.C.at(i, j) + K.D.at(i, j);
        }
    }
    return K;
}

} // namespace

TEST_CASE("coefficient assembly") {
    ModelParams p;

    SUBCASE("uniform diffusivity gives a symmetric interior stencil") {
        Field2D phi(8, 8);
        for (int j = 0; j < 8; ++j)
            for (int i = 0; i < 8; ++i) phi.at(i, j) = 0.1 * i;
        Field2D ones(8, 8, 1.0);
        const StencilField K = assemble_coefficients(phi, ones, ones, p, ModelKind::RadaChen);
        // one-sided gradients perturb the two outermost columns only
        for (int j = 0; j < 8; ++j) {
            for (int i = 2; i < 6; ++i)
                CHECK(K.A.at(i, j) == doctest::Approx(K.B.at(i, j)).epsilon(1e-12));
            for (int i = 0; i < 8; ++i)
                CHECK(K.C.at(i, j) == doctest::Approx(K.D.at(i, j)).epsilon(1e-12));
        }
    }

    SUBCASE("mu = 0 zeroes everything") {
        ModelParams p0;
        p0.mu = 0.0;
        std::mt19937 rng(5);
        const Field2D phi = oracle::random_field(4, 4, rng);
        const Field2D ones(4, 4, 1.0);
        const StencilField K = assemble_coefficients(phi, ones, ones, p0, ModelKind::SpencerChen);
        for (double x : K.S.v) CHECK(x == 0.0);
    }

    SUBCASE("random inputs match the scalar transcription") {
        std::mt19937 rng(6);
        for (ModelKind kind : {ModelKind::RadaChen, ModelKind::SpencerChen}) {
            const Field2D phi = oracle::random_field(4, 4, rng);
            const Field2D d = oracle::random_field(4, 4, rng, 0.0, 1.0);
            const Field2D g = oracle::random_field(4, 4, rng, 0.1, 1.0);
            const StencilField got = assemble_coefficients(phi, d, g, p, kind);
            const StencilField want = transcribe_coefficients(phi, d, g, p, kind);
            for (size_t k = 0; k < got.A.size(); ++k) {
                CHECK(std::fabs(got.A.v[k] - want.A.v[k]) < 1e-12 * (1 + std::fabs(want.A.v[k])));
                CHECK(std::fabs(got.B.v[k] - want.B.v[k]) < 1e-12 * (1 + std::fabs(want.B.v[k])));
                CHECK(std::fabs(got.C.v[k] - want.C.v[k]) < 1e-12 * (1 + std::fabs(want.C.v[k])));
                CHECK(std::fabs(got.D.v[k] - want.D.v[k]) < 1e-12 * (1 + std::fabs(want.D.v[k])));
                CHECK(got.S.v[k] ==
                      got.A.v[k] + got.B.v[k] + got.C.v[k] + got.D.v[k]); // exact row sum
                CHECK(got.A.v[k] >= 0.0);
                CHECK(got.B.v[k] >= 0.0);
                CHECK(got.C.v[k] >= 0.0);
                CHECK(got.D.v[k] >= 0.0);
            }
        }
    }

    SUBCASE("non-finite phi is rejected") {
        Field2D phi(2, 2, 0.0);
        phi.at(0, 0) = std::numeric_limits<double>::quiet_NaN();
        const Field2D ones(2, 2, 1.0);
        CHECK_THROWS_AS(assemble_coefficients(phi, ones, ones, p, ModelKind::RadaChen), Error);
    }
}

TEST_CASE("forcing field") {
    ModelParams p;

    SUBCASE("all fitting weights off") {
        p.lambda1 = p.lambda2 = p.nu = p.theta = 0.0;
        std::mt19937 rng(8);
        const Field2D phi = oracle::random_field(4, 4, rng);
        const Field2D z = oracle::random_field(4, 4, rng, 0, 1);
        const Field2D d = oracle::random_field(4, 4, rng, 0, 1);
        for (ModelKind kind : {ModelKind::RadaChen, ModelKind::SpencerChen})
            for (double x : rhs(phi, z, d, 0.3, 0.6, p, kind, 0.25).v) CHECK(x == 0.0);
    }

    SUBCASE("saturated area bracket") {
        Field2D phi(8, 8, 1e9);
        const double bracket = rc_area_bracket(phi, p, 0.25);
        CHECK(bracket == doctest::Approx(2.0 * p.nu * 0.75).epsilon(1e-8));
    }

    SUBCASE("distance-penalty forcing matches a scalar transcription") {
        std::mt19937 rng(9);
        const Field2D phi = oracle::random_field(2, 2, rng);
        const Field2D z = oracle::random_field(2, 2, rng, 0, 1);
        const Field2D d = oracle::random_field(2, 2, rng, 0, 1);
        const double c1 = 0.8, c2 = 0.2;
        const Field2D f = rhs(phi, z, d, c1, c2, p, ModelKind::SpencerChen, 0.0);
        for (size_t k = 0; k < f.size(); ++k) {
            const double want =
                delta(phi.v[k], p.eps_heaviside) *
                (p.lambda1 * (z.v[k] - c1) * (z.v[k] - c1) -
                 p.lambda2 * (z.v[k] - c2) * (z.v[k] - c2) + p.theta * d.v[k]);
            CHECK(std::fabs(f.v[k] - want) < 1e-12);
        }
    }
}

TEST_CASE("operator application") {
    SUBCASE("constant phi cancels the stencil") {
        std::mt19937 rng(10);
        StencilField K(3, 3);
        K.A = oracle::random_field(3, 3, rng, 0, 2);
        K.B = oracle::random_field(3, 3, rng, 0, 2);
        K.C = oracle::random_field(3, 3, rng, 0, 2);
        K.D = oracle::random_field(3, 3, rng, 0, 2);
        for (size_t k = 0; k < K.S.size(); ++k)
            K.S.v[k] = K.A.v[k] + K.B.v[k] + K.C.v[k] + K.D.v[k];
        const Field2D f = oracle::random_field(3, 3, rng);
        const Field2D phi(3, 3, 4.2);
        const Field2D out = apply_operator(phi, K, f);
        for (size_t k = 0; k < out.size(); ++k)
            CHECK(out.v[k] == doctest::Approx(-f.v[k]).epsilon(1e-12));
    }

    SUBCASE("zero data gives zero") {
        const StencilField K(3, 3);
        const Field2D f(3, 3, 0.0);
        std::mt19937 rng(11);
        const Field2D phi = oracle::random_field(3, 3, rng);
        for (double x : apply_operator(phi, K, f).v) CHECK(x == 0.0);
    }

    SUBCASE("random instances match the dense mirrored-boundary matrix") {
        std::mt19937 rng(12);
        for (int trial = 0; trial < 50; ++trial) {
            const int nx = trial % 2 ? 3 : 4, ny = trial % 3 ? 4 : 3;
            StencilField K(nx, ny);
            K.A = oracle::random_field(nx, ny, rng, 0, 2);
            K.B = oracle::random_field(nx, ny, rng, 0, 2);
            K.C = oracle::random_field(nx, ny, rng, 0, 2);
            K.D = oracle::random_field(nx, ny, rng, 0, 2);
            for (size_t k = 0; k < K.S.size(); ++k)
                K.S.v[k] = K.A.v[k] + K.B.v[k] + K.C.v[k] + K.D.v[k];
            const Field2D phi = oracle::random_field(nx, ny, rng);
            const Field2D f = oracle::random_field(nx, ny, rng);
            const Field2D got = apply_operator(phi, K, f);
            const Field2D want = oracle::dense_apply_operator(phi, K, f);
            for (size_t k = 0; k < got.size(); ++k) CHECK(std::fabs(got.v[k] - want.v[k]) < 1e-12);
        }
    }
}

TEST_CASE("model energy") {
    ModelParams p;

    SUBCASE("flat level set on a matching image leaves only the area penalty") {
        const int n = 8;
        Field2D phi(n, n, 0.0);
        Field2D z(n, n, 0.7);
        Field2D d(n, n, 0.5);
        Field2D g(n, n, 1.0);
        const double a1 = 0.2;
        const double e = energy(phi, z, d, g, 0.7, 0.7, p, ModelKind::RadaChen, a1);
        const double want = p.nu * ((0.5 - a1) * (0.5 - a1) + (0.5 - (1 - a1)) * (0.5 - (1 - a1)));
        CHECK(e == doctest::Approx(want).epsilon(1e-5));
    }

    SUBCASE("all weights zero") {
        ModelParams p0;
        p0.mu = p0.lambda1 = p0.lambda2 = p0.nu = p0.theta = 0.0;
        std::mt19937 rng(13);
        const Field2D phi = oracle::random_field(4, 4, rng);
        const Field2D z = oracle::random_field(4, 4, rng, 0, 1);
        const Field2D ones(4, 4, 1.0);
        CHECK(energy(phi, z, ones, ones, 0.4, 0.6, p0, ModelKind::RadaChen, 0.3) == 0.0);
        CHECK(energy(phi, z, ones, ones, 0.4, 0.6, p0, ModelKind::SpencerChen, 0.3) == 0.0);
    }

    SUBCASE("marker orientation does not change the area term") {
        MarkerSet fwd, rev;
        fwd.points = {{1, 1}, {6, 1}, {6, 6}, {1, 6}};
        rev.points = {{1, 6}, {6, 6}, {6, 1}, {1, 1}};
        CHECK(polygon_area(fwd, 1.0 / 8, 1.0 / 8) ==
              doctest::Approx(polygon_area(rev, 1.0 / 8, 1.0 / 8)).epsilon(1e-15));
    }
}

TEST_CASE("initial level set is positive exactly inside the marker polygon") {
    MarkerSet m;
    m.points = {{2, 2}, {9, 2}, {9, 9}, {2, 9}};
    CHECK(point_in_polygon(5, 5, m));
    CHECK(point_in_polygon(2, 2, m)); // boundary counts inside
    CHECK(!point_in_polygon(0, 0, m));
    CHECK(!point_in_polygon(11, 5, m));

    const Field2D phi = initial_phi(m, 12, 12);
    CHECK(phi.at(5, 5) > 0.0);
    CHECK(phi.at(0, 0) < 0.0);
    CHECK(all_finite(phi));
    double lo = 1e300, hi = -1e300;
    for (double x : phi.v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    CHECK(lo >= -1.0);
    CHECK(hi <= 1.0);
}
