#include "gradtomo/method1.hpp"

#include <cmath>

#include "gradtomo/filters.hpp"
#include "gradtomo/projector.hpp"

namespace gradtomo {

namespace {

ImageGrid scaled(const ImageGrid& img, double factor) {
    std::vector<double> out(img.values().begin(), img.values().end());
    for (auto& v : out) v *= factor;
    return ImageGrid(img.spec(), std::move(out));
}

// Backprojection over the full circle; the [pi, 2pi) half repeats the [0, pi) half.
ImageGrid full_circle_backproject(const Sinogram& filtered, const GridSpec& grid) {
    return scaled(backproject(filtered, grid), 2.0);
}

}  // namespace

ImageGrid fbp_reconstruct(const Sinogram& sino, const GridSpec& grid, double cutoff_fraction) {
    const Filter1D ramp = ramlak_filter(filter_fft_size(sino.n_s()), sino.detector().spacing, cutoff_fraction);
    const std::vector<double> ones(sino.n_angles(), 1.0);
    return full_circle_backproject(convolve_s(sino, ramp, ones), grid);
}

GradientField method1_gradient_preprocess(const Sinogram& sino, double epsilon, const GridSpec& grid,
                                          double cutoff_fraction) {
    const Filter1D derivative = g_detector_kernel(epsilon, sino.detector().spacing);
    auto component = [&](int j) {
        const auto weights = direction_weights(sino.angles(), j);
        return fbp_reconstruct(convolve_s(sino, derivative, weights), grid, cutoff_fraction);
    };
    return GradientField(component(1), component(2));
}

GradientField method1_gradient_combined(const Sinogram& sino, double epsilon, const GridSpec& grid) {
    const Filter1D combined = w_filter(epsilon, filter_fft_size(sino.n_s()), sino.detector().spacing);
    auto component = [&](int j) {
        const auto weights = direction_weights(sino.angles(), j);
        return full_circle_backproject(convolve_s(sino, combined, weights), grid);
    };
    return GradientField(component(1), component(2));
}

std::vector<std::uint8_t> interior_mask(const GridSpec& grid, std::size_t border) {
    const std::size_t n = grid.n;
    const double radius = grid.half_extent();
    std::vector<std::uint8_t> mask(n * n, 0);
    for (std::size_t r = border; r + border < n; ++r) {
        for (std::size_t c = border; c + border < n; ++c) {
            const auto [x1, x2] = grid.pixel_center(r, c);
            if (std::hypot(x1, x2) <= radius) mask[r * n + c] = 1;
        }
    }
    return mask;
}

}  // namespace gradtomo
