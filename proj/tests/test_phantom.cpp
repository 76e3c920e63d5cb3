#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "gradtomo/phantom.hpp"
#include "gradtomo/projector.hpp"
#include "oracles.hpp"

using namespace gradtomo;
using std::numbers::pi;

TEST_CASE("shepp-logan raster", "[phantom]") {
    const GridSpec g{128, 1.0};
    const auto img = shepp_logan(g.n, g.pixel_size);
    const auto specs = shepp_logan_specs(g.half_extent());
    REQUIRE(specs.size() == 10);

    SECTION("values stay within the summed amplitudes") {
        CHECK(std::ranges::min(img.values()) >= 0.0);
        CHECK(std::ranges::max(img.values()) <= 2.0);
    }
    SECTION("nothing outside the skull") {
        for (std::size_t r = 0; r < g.n; ++r) {
            for (std::size_t c = 0; c < g.n; ++c) {
                const auto [x1, x2] = g.pixel_center(r, c);
                if (!specs[0].contains(x1, x2)) REQUIRE(img.at(r, c) == 0.0);
            }
        }
    }
    SECTION("left-right symmetric away from the asymmetric ellipses") {
        std::vector<EllipseSpec> odd;
        for (std::size_t i : {2u, 3u, 7u, 9u}) {
            odd.push_back(specs[i]);
            auto mirror = specs[i];
            mirror.center_x1 = -mirror.center_x1;
            mirror.rotation = -mirror.rotation;
            odd.push_back(mirror);
        }
        double worst = 0.0;
        std::size_t compared = 0;
        for (std::size_t r = 0; r < g.n; ++r) {
            for (std::size_t c = 0; c < g.n; ++c) {
                const auto [x1, x2] = g.pixel_center(r, c);
                if (std::ranges::any_of(odd, [&](const EllipseSpec& e) { return e.contains(x1, x2); })) continue;
                worst = std::max(worst, std::abs(img.at(r, c) - img.at(r, g.n - 1 - c)));
                ++compared;
            }
        }
        CHECK(worst == 0.0);
        CHECK(compared > g.pixel_count() / 2);
    }
    CHECK_THROWS_AS(shepp_logan(31, 1.0), std::invalid_argument);
}

TEST_CASE("ellipse specs", "[phantom]") {
    const EllipseSpec e{1.0, -1.0, 2.0, 1.0, pi / 2, 1.0};
    CHECK(e.contains(1.0, 0.9));  // semi-axis a now points along x2
    CHECK_FALSE(e.contains(2.5, -1.0));
    CHECK_THROWS_AS(disk_spec(0.0), std::invalid_argument);
    CHECK_THROWS_AS(rasterize({EllipseSpec{0, 0, 1, -1, 0, 1}}, {8, 1.0}), std::invalid_argument);
}

TEST_CASE("analytic sinogram of a disk", "[phantom]") {
    const auto angles = AngleSet::evenly_distributed(4);
    const DetectorGrid det(41, 0.1);
    const auto s = analytic_sinogram({disk_spec(1.0)}, angles, det);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(s.at(k, 20) == Catch::Approx(2.0));
        for (std::size_t i = 0; i < det.count; ++i) {
            const double pos = det.position(i);
            if (std::abs(pos) >= 1.0) REQUIRE(s.at(k, i) == 0.0);
            else REQUIRE(s.at(k, i) == Catch::Approx(oracle::disk_chord(1.0, pos)).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(analytic_sinogram({}, angles, det), std::invalid_argument);
}

TEST_CASE("analytic sinogram of an off-center rotated ellipse", "[phantom]") {
    // Brute-force line integral: sample the indicator finely along each ray.
    const EllipseSpec e{0.3, -0.2, 0.5, 0.2, 0.6, 1.5};
    const auto angles = AngleSet({0.0, 0.4, 1.3, 2.9});
    const DetectorGrid det(21, 0.1);
    const auto s = analytic_sinogram({e}, angles, det);
    const double dt = 1e-4;
    for (std::size_t k = 0; k < angles.size(); ++k) {
        const double c = std::cos(angles[k]), sn = std::sin(angles[k]);
        for (std::size_t i = 0; i < det.count; ++i) {
            const double pos = det.position(i);
            double acc = 0.0;
            for (double t = -2.0; t < 2.0; t += dt)
                if (e.contains(pos * c - t * sn, pos * sn + t * c)) acc += dt;
            REQUIRE(s.at(k, i) == Catch::Approx(e.amplitude * acc).margin(5e-4));
        }
    }
}

TEST_CASE("analytic and discrete projections of the disk agree", "[phantom]") {
    const GridSpec g{128, 1.0};
    const auto disk = disk_spec(32.0);
    const auto angles = AngleSet::evenly_distributed(180);
    const auto det = DetectorGrid::covering(g, 1.0);
    const auto a = analytic_sinogram({disk}, angles, det);
    const auto d = forward_radon(rasterize({disk}, g), angles, det);
    CHECK(oracle::rel_l2(d.values(), a.values()) <= 0.02);
}

TEST_CASE("analytic sinogram is linear in amplitude and additive over ellipses", "[phantom]") {
    const auto angles = AngleSet::evenly_distributed(7);
    const DetectorGrid det(31, 0.2);
    const EllipseSpec a{0.5, 0.1, 1.0, 0.6, 0.3, 1.0};
    EllipseSpec b{-0.4, -0.3, 0.7, 0.9, -0.2, 0.5};
    const auto sa = analytic_sinogram({a}, angles, det);
    const auto sb = analytic_sinogram({b}, angles, det);
    const auto sab = analytic_sinogram({a, b}, angles, det);
    auto b3 = b;
    b3.amplitude *= 3;
    const auto sb3 = analytic_sinogram({b3}, angles, det);
    for (std::size_t i = 0; i < sa.values().size(); ++i) {
        REQUIRE(sab.values()[i] == Catch::Approx(sa.values()[i] + sb.values()[i]).margin(1e-14));
        REQUIRE(sb3.values()[i] == Catch::Approx(3 * sb.values()[i]).margin(1e-14));
    }
}

TEST_CASE("every projection carries the phantom mass", "[phantom]") {
    const GridSpec g{128, 1.0};
    const auto specs = shepp_logan_specs(g.half_extent());
    const auto angles = AngleSet::evenly_distributed(45);
    const auto det = DetectorGrid::covering(g, 1.0);

    double area_mass = 0.0;
    for (const auto& e : specs) area_mass += e.amplitude * pi * e.semi_a * e.semi_b;
    const auto analytic = analytic_sinogram(specs, angles, det);

    const auto img = rasterize(specs, g);
    double pixel_mass = 0.0;
    for (double v : img.values()) pixel_mass += v * g.pixel_size * g.pixel_size;
    const auto discrete = forward_radon(img, angles, det);

    for (std::size_t k = 0; k < angles.size(); ++k) {
        double sa = 0.0, sd = 0.0;
        for (double v : analytic.row(k)) sa += v * det.spacing;
        for (double v : discrete.row(k)) sd += v * det.spacing;
        CAPTURE(k);
        REQUIRE(std::abs(sa - area_mass) <= 0.01 * area_mass);
        REQUIRE(std::abs(sd - pixel_mass) <= 0.01 * pixel_mass);
    }
}

TEST_CASE("noise injection", "[phantom]") {
    const GridSpec g{128, 1.0};
    const auto angles = AngleSet::evenly_distributed(180);
    const DetectorGrid det(738, 0.25);
    const auto clean = analytic_sinogram(shepp_logan_specs(g.half_extent()), angles, det);

    CHECK(std::ranges::equal(add_noise(clean, 0.0, 4).values(), clean.values()));
    const auto a = add_noise(clean, 0.02, 4);
    const auto b = add_noise(clean, 0.02, 4);
    const auto c = add_noise(clean, 0.02, 5);
    CHECK(std::ranges::equal(a.values(), b.values()));
    CHECK_FALSE(std::ranges::equal(a.values(), c.values()));

    double peak = 0.0;
    for (double v : clean.values()) peak = std::max(peak, std::abs(v));
    double mean = 0.0, sq = 0.0;
    const auto n = static_cast<double>(clean.values().size());
    for (std::size_t i = 0; i < clean.values().size(); ++i) mean += (a.values()[i] - clean.values()[i]) / n;
    for (std::size_t i = 0; i < clean.values().size(); ++i) {
        const double d = a.values()[i] - clean.values()[i] - mean;
        sq += d * d;
    }
    const double std_dev = std::sqrt(sq / (n - 1));
    CHECK(std::abs(std_dev - 0.02 * peak) <= 0.05 * 0.02 * peak);
    CHECK_THROWS_AS(add_noise(clean, -0.1, 1), std::invalid_argument);
}

TEST_CASE("angular subsampling", "[phantom]") {
    const auto angles = AngleSet::evenly_distributed(180);
    const DetectorGrid det(9, 1.0);
    const Sinogram s(angles, det, oracle::uniform(180 * 9, 2));

    const auto same = subsample_angles(s, 1);
    CHECK(same.angles() == s.angles());
    CHECK(std::ranges::equal(same.values(), s.values()));

    const auto sparse = subsample_angles(s, 5);
    REQUIRE(sparse.n_angles() == 36);
    const auto expected = AngleSet::evenly_distributed(36);
    for (std::size_t k = 0; k < 36; ++k) {
        CHECK(sparse.angles()[k] == Catch::Approx(expected[k]).margin(1e-15));
        REQUIRE(std::ranges::equal(sparse.row(k), s.row(5 * k)));
    }
    CHECK(subsample_angles(s, 7).n_angles() == 26);
    CHECK_THROWS_AS(subsample_angles(s, 0), std::invalid_argument);
}

TEST_CASE("outline edges trace the disk boundary", "[phantom]") {
    const GridSpec g{64, 1.0};
    const auto e = outline_edges({disk_spec(20.0)}, g);
    REQUIRE(e.count() > 100);
    for (std::size_t r = 0; r < g.n; ++r) {
        for (std::size_t c = 0; c < g.n; ++c) {
            if (!e.at(r, c)) continue;
            const auto [x1, x2] = g.pixel_center(r, c);
            REQUIRE(std::hypot(x1, x2) <= 20.0);
            REQUIRE(std::hypot(x1, x2) > 18.5);
        }
    }
}
