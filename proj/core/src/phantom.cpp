#include "gradtomo/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace gradtomo {

void EllipseSpec::validate() const {
    if (!(semi_a > 0.0) || !(semi_b > 0.0)) throw std::invalid_argument("ellipse semi-axes must be positive");
}

bool EllipseSpec::contains(double x1, double x2) const {
    const double dx = x1 - center_x1;
    const double dy = x2 - center_x2;
    const double c = std::cos(rotation);
    const double s = std::sin(rotation);
    const double u = dx * c + dy * s;
    const double v = -dx * s + dy * c;
    return (u * u) / (semi_a * semi_a) + (v * v) / (semi_b * semi_b) <= 1.0;
}

std::vector<EllipseSpec> shepp_logan_specs(double half_extent) {
    // Shepp & Logan (1974), as tabulated in Kak & Slaney, "Principles of Computerized
    // Tomographic Imaging", Table 3.1. Columns: center (x, y), semi-axes (a, b), rotation
    // in degrees, gray level. Unit square coordinates.
    struct Row {
        double x, y, a, b, deg, value;
    };
    constexpr Row table[] = {
        {0.0, 0.0, 0.69, 0.92, 0.0, 2.0},
        {0.0, -0.0184, 0.6624, 0.874, 0.0, -0.98},
        {0.22, 0.0, 0.11, 0.31, -18.0, -0.02},
        {-0.22, 0.0, 0.16, 0.41, 18.0, -0.02},
        {0.0, 0.35, 0.21, 0.25, 0.0, 0.01},
        {0.0, 0.1, 0.046, 0.046, 0.0, 0.01},
        {0.0, -0.1, 0.046, 0.046, 0.0, 0.01},
        {-0.08, -0.605, 0.046, 0.023, 0.0, 0.01},
        {0.0, -0.605, 0.023, 0.023, 0.0, 0.01},
        {0.06, -0.605, 0.023, 0.046, 0.0, 0.01},
    };
    std::vector<EllipseSpec> specs;
    for (const auto& r : table) {
        specs.push_back(EllipseSpec{r.x * half_extent, r.y * half_extent, r.a * half_extent, r.b * half_extent,
                                    r.deg * std::numbers::pi / 180.0, r.value});
    }
    return specs;
}

EllipseSpec disk_spec(double radius, double amplitude) {
    EllipseSpec e{0.0, 0.0, radius, radius, 0.0, amplitude};
    e.validate();
    return e;
}

ImageGrid rasterize(const std::vector<EllipseSpec>& specs, const GridSpec& grid) {
    grid.validate();
    for (const auto& e : specs) e.validate();
    std::vector<double> data(grid.pixel_count(), 0.0);
    for (std::size_t r = 0; r < grid.n; ++r) {
        for (std::size_t c = 0; c < grid.n; ++c) {
            const auto [x1, x2] = grid.pixel_center(r, c);
            double v = 0.0;
            for (const auto& e : specs)
                if (e.contains(x1, x2)) v += e.amplitude;
            data[r * grid.n + c] = v;
        }
    }
    return ImageGrid(grid, std::move(data));
}

ImageGrid shepp_logan(std::size_t n, double pixel_size) {
    if (n < 32) throw std::invalid_argument("Shepp-Logan phantom needs n >= 32, got " + std::to_string(n));
    const GridSpec grid{n, pixel_size};
    return rasterize(shepp_logan_specs(grid.half_extent()), grid);
}

Sinogram analytic_sinogram(const std::vector<EllipseSpec>& specs, const AngleSet& angles,
                           const DetectorGrid& detector) {
    if (specs.empty()) throw std::invalid_argument("analytic sinogram needs at least one ellipse");
    for (const auto& e : specs) e.validate();
    std::vector<double> data(angles.size() * detector.count, 0.0);
    for (std::size_t k = 0; k < angles.size(); ++k) {
        const double phi = angles[k];
        const double c = std::cos(phi);
        const double s = std::sin(phi);
        for (const auto& e : specs) {
            const double shift = e.center_x1 * c + e.center_x2 * s;
            const double gamma = phi - e.rotation;
            const double cg = std::cos(gamma);
            const double sg = std::sin(gamma);
            const double width2 = e.semi_a * e.semi_a * cg * cg + e.semi_b * e.semi_b * sg * sg;
            for (std::size_t i = 0; i < detector.count; ++i) {
                const double t = detector.position(i) - shift;
                const double gap = width2 - t * t;
                if (gap <= 0.0) continue;
                data[k * detector.count + i] += 2.0 * e.amplitude * e.semi_a * e.semi_b * std::sqrt(gap) / width2;
            }
        }
    }
    return Sinogram(angles, detector, std::move(data));
}

EdgeMap outline_edges(const std::vector<EllipseSpec>& specs, const GridSpec& grid) {
    grid.validate();
    const std::size_t n = grid.n;
    std::vector<std::uint8_t> edges(n * n, 0);
    std::vector<std::uint8_t> inside(n * n);
    for (const auto& e : specs) {
        e.validate();
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                const auto [x1, x2] = grid.pixel_center(r, c);
                inside[r * n + c] = e.contains(x1, x2) ? 1 : 0;
            }
        }
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                if (!inside[r * n + c]) continue;
                const bool boundary = r == 0 || c == 0 || r + 1 == n || c + 1 == n || !inside[(r - 1) * n + c] ||
                                      !inside[(r + 1) * n + c] || !inside[r * n + c - 1] || !inside[r * n + c + 1];
                if (boundary) edges[r * n + c] = 1;
            }
        }
    }
    return EdgeMap(n, std::move(edges));
}

Sinogram add_noise(const Sinogram& sino, double sigma_frac, std::uint64_t seed) {
    if (!(sigma_frac >= 0.0)) throw std::invalid_argument("sigma_frac must be >= 0");
    std::vector<double> data(sino.values().begin(), sino.values().end());
    if (sigma_frac == 0.0) return Sinogram(sino.angles(), sino.detector(), std::move(data));
    double peak = 0.0;
    for (double v : data) peak = std::max(peak, std::abs(v));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma_frac * peak);
    for (auto& v : data) v += noise(rng);
    return Sinogram(sino.angles(), sino.detector(), std::move(data));
}

Sinogram subsample_angles(const Sinogram& sino, std::size_t keep_every) {
    if (keep_every < 1) throw std::invalid_argument("keep_every must be >= 1");
    std::vector<double> angles;
    std::vector<double> data;
    for (std::size_t k = 0; k < sino.n_angles(); k += keep_every) {
        angles.push_back(sino.angles()[k]);
        const auto row = sino.row(k);
        data.insert(data.end(), row.begin(), row.end());
    }
    return Sinogram(AngleSet(std::move(angles)), sino.detector(), std::move(data));
}

}  // namespace gradtomo
