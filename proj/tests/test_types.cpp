#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "gradtomo/errors.hpp"
#include "gradtomo/parallel.hpp"
#include "gradtomo/types.hpp"
#include "oracles.hpp"

using namespace gradtomo;

TEST_CASE("pixel centers follow the row-down, column-right convention", "[types]") {
    const GridSpec g{4, 0.5};
    auto [x1, x2] = g.pixel_center(0, 0);
    CHECK(x1 == -0.75);
    CHECK(x2 == 0.75);
    std::tie(x1, x2) = g.pixel_center(3, 2);
    CHECK(x1 == 0.25);
    CHECK(x2 == -0.75);
    CHECK(g.half_extent() == 1.0);
}

TEST_CASE("pixel to physical to nearest pixel is the identity", "[types]") {
    for (std::size_t n : {2u, 7u, 64u}) {
        const GridSpec g{n, 0.37};
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                const auto [x1, x2] = g.pixel_center(r, c);
                const auto rc = g.nearest_pixel(x1, x2);
                REQUIRE(rc == std::pair{r, c});
            }
        }
    }
}

TEST_CASE("grid and image invariants are enforced", "[types]") {
    CHECK_THROWS_AS(ImageGrid::zeros(GridSpec{1, 1.0}), GeometryError);
    CHECK_THROWS_AS(ImageGrid::zeros(GridSpec{8, 0.0}), GeometryError);
    CHECK_THROWS_AS(ImageGrid(GridSpec{2, 1.0}, {1, 2, 3}), GeometryError);
    CHECK_THROWS(ImageGrid(GridSpec{2, 1.0}, {1, 2, std::numeric_limits<double>::quiet_NaN(), 4}));
    CHECK_THROWS(ImageGrid(GridSpec{2, 1.0}, {1, 2, std::numeric_limits<double>::infinity(), 4}));
}

TEST_CASE("angle sets are strictly increasing inside [0, pi)", "[types]") {
    const auto a = AngleSet::evenly_distributed(36);
    REQUIRE(a.size() == 36);
    CHECK(a[0] == 0.0);
    CHECK(a[1] == Catch::Approx(std::numbers::pi / 36));
    CHECK(a[35] < std::numbers::pi);
    CHECK_THROWS_AS(AngleSet({0.0, 0.0}), GeometryError);
    CHECK_THROWS_AS(AngleSet({0.5, 0.2}), GeometryError);
    CHECK_THROWS_AS(AngleSet({std::numbers::pi}), GeometryError);
    CHECK_THROWS_AS(AngleSet({-0.1}), GeometryError);
    CHECK_THROWS_AS(AngleSet(std::vector<double>{}), GeometryError);
}

TEST_CASE("detector positions are centered and coverage is checked against the circumscribed circle", "[types]") {
    const DetectorGrid d(5, 0.5);
    CHECK(d.position(0) == -1.0);
    CHECK(d.position(2) == 0.0);
    CHECK(d.position(4) == 1.0);
    CHECK_THROWS_AS(DetectorGrid(1, 1.0), GeometryError);
    CHECK_THROWS_AS(DetectorGrid(4, -1.0), GeometryError);

    const GridSpec g{128, 1.0};
    const auto cov = DetectorGrid::covering(g, 1.0);
    CHECK(cov.count % 2 == 1);
    CHECK(cov.covers(g));
    CHECK_FALSE(DetectorGrid(cov.count - 2, 1.0).covers(g));
    CHECK(cov.max_grid_size(1.0) >= 128);
    CHECK(DetectorGrid(cov.count - 2, 1.0).max_grid_size(1.0) < 128);
}

TEST_CASE("sinogram dimensions must match the geometry", "[types]") {
    const auto angles = AngleSet::evenly_distributed(3);
    CHECK_THROWS_AS(Sinogram(angles, DetectorGrid(4, 1.0), std::vector<double>(11)), GeometryError);
    const auto s = Sinogram::zeros(angles, DetectorGrid(4, 1.0));
    CHECK(s.values().size() == 12);
    CHECK(s.row(2).size() == 4);
}

TEST_CASE("gradient fields need a shared grid and edge maps are binary", "[types]") {
    CHECK_THROWS_AS(GradientField(ImageGrid::zeros({4, 1.0}), ImageGrid::zeros({4, 2.0})), GeometryError);
    CHECK_THROWS_AS(GradientField(ImageGrid::zeros({4, 1.0}), ImageGrid::zeros({5, 1.0})), GeometryError);
    CHECK_THROWS(EdgeMap(2, {0, 1, 2, 0}));
    CHECK_THROWS_AS(EdgeMap(2, {0, 1, 0}), GeometryError);
    CHECK(EdgeMap(2, {0, 1, 1, 0}).count() == 2);
}

TEST_CASE("gradient magnitude", "[types]") {
    const GridSpec g{8, 1.0};
    SECTION("zero field") {
        const auto m = gradient_magnitude(GradientField(ImageGrid::zeros(g), ImageGrid::zeros(g)));
        for (double v : m.values()) CHECK(v == 0.0);
    }
    SECTION("3-4-5 at one pixel") {
        std::vector<double> gx(64, 0.0), gy(64, 0.0);
        gx[9] = 3.0;
        gy[9] = 4.0;
        const auto m = gradient_magnitude(GradientField(ImageGrid(g, gx), ImageGrid(g, gy)));
        CHECK(m.at(1, 1) == 5.0);
        CHECK(m.at(0, 0) == 0.0);
    }
    SECTION("random field matches an elementwise oracle and is sign invariant") {
        const auto gx = oracle::uniform(64, 11);
        const auto gy = oracle::uniform(64, 12);
        const auto m = gradient_magnitude(GradientField(ImageGrid(g, gx), ImageGrid(g, gy)));
        std::vector<double> ngx(gx), ngy(gy);
        for (auto& v : ngx) v = -v;
        for (auto& v : ngy) v = -v;
        const auto mneg = gradient_magnitude(GradientField(ImageGrid(g, ngx), ImageGrid(g, ngy)));
        for (std::size_t i = 0; i < 64; ++i) {
            CHECK(m.values()[i] == std::sqrt(gx[i] * gx[i] + gy[i] * gy[i]));
            CHECK(mneg.values()[i] == m.values()[i]);
        }
    }
}

TEST_CASE("parallel_for visits every index once and rethrows worker errors", "[parallel]") {
    const auto saved = thread_count();
    for (std::size_t workers : {1u, 3u, 8u}) {
        set_thread_count(workers);
        std::vector<int> hits(1000, 0);
        parallel_for(0, hits.size(), [&](std::size_t i) { hits[i] += 1; });
        for (int h : hits) REQUIRE(h == 1);
        CHECK_THROWS_AS(parallel_for(0, 100, [](std::size_t i) {
                            if (i == 57) throw std::runtime_error("boom");
                        }),
                        std::runtime_error);
    }
    set_thread_count(saved);
}
