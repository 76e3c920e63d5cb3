#include "gradtomo/projector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gradtomo/errors.hpp"
#include "gradtomo/parallel.hpp"

namespace gradtomo {

namespace {

// Detector coordinates (in bins) contributed by each column and each row. Stored twice:
// angle-major for the forward loop and angle-minor for the adjoint's per-pixel loop.
// Forward and adjoint both evaluate u = col_term + row_term + mid in the same order,
// so the two operators are exact transposes of each other. u >= 0 whenever the detector
// covers the grid, so integer truncation is floor.
struct SplatGeometry {
    std::size_t n = 0;
    std::size_t n_angles = 0;
    std::size_t n_s = 0;
    double mid = 0.0;
    double weight = 0.0;
    std::vector<double> col_terms;  // n x n_angles
    std::vector<double> row_terms;  // n x n_angles
    std::vector<double> col_terms_by_angle;  // n_angles x n
    std::vector<double> row_terms_by_angle;  // n_angles x n

    SplatGeometry(const GridSpec& grid, const AngleSet& angles, const DetectorGrid& detector)
        : n(grid.n),
          n_angles(angles.size()),
          n_s(detector.count),
          mid(0.5 * static_cast<double>(detector.count - 1)),
          weight(grid.pixel_size * grid.pixel_size / detector.spacing),
          col_terms(angles.size() * grid.n),
          row_terms(angles.size() * grid.n),
          col_terms_by_angle(angles.size() * grid.n),
          row_terms_by_angle(angles.size() * grid.n) {
        for (std::size_t k = 0; k < n_angles; ++k) {
            const double c = std::cos(angles[k]) / detector.spacing;
            const double s = std::sin(angles[k]) / detector.spacing;
            for (std::size_t i = 0; i < n; ++i) {
                const auto [x1, x2] = grid.pixel_center(i, i);
                col_terms[i * n_angles + k] = x1 * c;
                row_terms[i * n_angles + k] = x2 * s;
                col_terms_by_angle[k * n + i] = x1 * c;
                row_terms_by_angle[k * n + i] = x2 * s;
            }
        }
    }
};

void check_coverage(const GridSpec& grid, const DetectorGrid& detector) {
    grid.validate();
    if (!detector.covers(grid))
        throw GeometryError("detector half-extent " + std::to_string(detector.half_extent()) +
                            " does not cover the image circumscribed radius " +
                            std::to_string(grid.half_extent() * std::numbers::sqrt2));
}

}  // namespace

void forward_radon_into(std::span<const double> image, const GridSpec& grid, const AngleSet& angles,
                        const DetectorGrid& detector, std::span<double> out) {
    check_coverage(grid, detector);
    if (image.size() != grid.pixel_count() || out.size() != angles.size() * detector.count)
        throw GeometryError("forward projection buffer sizes do not match the geometry");
    const SplatGeometry geo(grid, angles, detector);

    parallel_for(0, geo.n_angles, [&](std::size_t k) {
        double* row_out = out.data() + k * geo.n_s;
        std::fill(row_out, row_out + geo.n_s, 0.0);
        const double* cols = geo.col_terms_by_angle.data() + k * geo.n;
        const double* rows = geo.row_terms_by_angle.data() + k * geo.n;
        for (std::size_t r = 0; r < geo.n; ++r) {
            for (std::size_t c = 0; c < geo.n; ++c) {
                const double value = image[r * geo.n + c];
                if (value == 0.0) continue;
                const double u = (cols[c] + rows[r]) + geo.mid;
                const auto i0 = static_cast<std::size_t>(u);
                const double frac = u - static_cast<double>(i0);
                const double deposit = value * geo.weight;
                row_out[i0] += deposit * (1.0 - frac);
                if (i0 + 1 < geo.n_s) row_out[i0 + 1] += deposit * frac;
            }
        }
    });
}

void adjoint_radon_into(std::span<const double> sino, const GridSpec& grid, const AngleSet& angles,
                        const DetectorGrid& detector, std::span<double> out) {
    check_coverage(grid, detector);
    if (out.size() != grid.pixel_count() || sino.size() != angles.size() * detector.count)
        throw GeometryError("adjoint projection buffer sizes do not match the geometry");
    const SplatGeometry geo(grid, angles, detector);

    parallel_for(0, geo.n, [&](std::size_t r) {
        const double* rows = geo.row_terms.data() + r * geo.n_angles;
        for (std::size_t c = 0; c < geo.n; ++c) {
            const double* cols = geo.col_terms.data() + c * geo.n_angles;
            double acc = 0.0;
            for (std::size_t k = 0; k < geo.n_angles; ++k) {
                const double u = (cols[k] + rows[k]) + geo.mid;
                const auto i0 = static_cast<std::size_t>(u);
                const double frac = u - static_cast<double>(i0);
                const double* row_in = sino.data() + k * geo.n_s;
                double v = row_in[i0] * (1.0 - frac);
                if (i0 + 1 < geo.n_s) v += row_in[i0 + 1] * frac;
                acc += v;
            }
            out[r * geo.n + c] = acc * geo.weight;
        }
    });
}

Sinogram forward_radon(const ImageGrid& img, const AngleSet& angles, const DetectorGrid& detector) {
    std::vector<double> out(angles.size() * detector.count, 0.0);
    forward_radon_into(img.values(), img.spec(), angles, detector, out);
    return Sinogram(angles, detector, std::move(out));
}

ImageGrid adjoint_radon(const Sinogram& sino, const GridSpec& grid) {
    std::vector<double> out(grid.pixel_count(), 0.0);
    adjoint_radon_into(sino.values(), grid, sino.angles(), sino.detector(), out);
    return ImageGrid(grid, std::move(out));
}

double backprojection_scale(const Sinogram& sino, const GridSpec& grid) {
    return std::numbers::pi / static_cast<double>(sino.n_angles()) * sino.detector().spacing /
           (grid.pixel_size * grid.pixel_size);
}

ImageGrid backproject(const Sinogram& sino, const GridSpec& grid) {
    const ImageGrid raw = adjoint_radon(sino, grid);
    const double scale = backprojection_scale(sino, grid);
    std::vector<double> out(raw.values().begin(), raw.values().end());
    for (auto& v : out) v *= scale;
    return ImageGrid(grid, std::move(out));
}

}  // namespace gradtomo
