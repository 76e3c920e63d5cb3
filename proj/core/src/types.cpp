#include "gradtomo/types.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gradtomo/errors.hpp"

namespace gradtomo {

namespace {

bool all_finite(std::span<const double> values) {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

std::pair<double, double> GridSpec::pixel_center(std::size_t row, std::size_t col) const {
    const double mid = 0.5 * static_cast<double>(n - 1);
    return {(static_cast<double>(col) - mid) * pixel_size, (mid - static_cast<double>(row)) * pixel_size};
}

std::pair<std::size_t, std::size_t> GridSpec::nearest_pixel(double x1, double x2) const {
    const double mid = 0.5 * static_cast<double>(n - 1);
    const double last = static_cast<double>(n - 1);
    const double col = std::clamp(std::round(x1 / pixel_size + mid), 0.0, last);
    const double row = std::clamp(std::round(mid - x2 / pixel_size), 0.0, last);
    return {static_cast<std::size_t>(row), static_cast<std::size_t>(col)};
}

void GridSpec::validate() const {
    if (n < 2) throw GeometryError("image grid needs n >= 2, got " + std::to_string(n));
    if (!(pixel_size > 0.0) || !std::isfinite(pixel_size))
        throw GeometryError("pixel size must be positive and finite");
}

ImageGrid::ImageGrid(GridSpec spec, std::vector<double> data) : spec_(spec), data_(std::move(data)) {
    spec_.validate();
    if (data_.size() != spec_.pixel_count())
        throw GeometryError("image data has " + std::to_string(data_.size()) + " values, expected " +
                            std::to_string(spec_.pixel_count()));
    if (!all_finite(data_)) throw std::invalid_argument("image contains non-finite values");
}

ImageGrid ImageGrid::zeros(GridSpec spec) {
    return ImageGrid(spec, std::vector<double>(spec.pixel_count(), 0.0));
}

AngleSet::AngleSet(std::vector<double> angles) : angles_(std::move(angles)) {
    if (angles_.empty()) throw GeometryError("angle set is empty");
    for (std::size_t k = 0; k < angles_.size(); ++k) {
        const double phi = angles_[k];
        if (!(phi >= 0.0 && phi < std::numbers::pi))
            throw GeometryError("angle " + std::to_string(k) + " = " + std::to_string(phi) + " outside [0, pi)");
        if (k > 0 && !(phi > angles_[k - 1]))
            throw GeometryError("angles must be strictly increasing (index " + std::to_string(k) + ")");
    }
}

AngleSet AngleSet::evenly_distributed(std::size_t count) {
    if (count == 0) throw GeometryError("angle count must be positive");
    std::vector<double> angles(count);
    for (std::size_t k = 0; k < count; ++k)
        angles[k] = static_cast<double>(k) * std::numbers::pi / static_cast<double>(count);
    return AngleSet(std::move(angles));
}

DetectorGrid::DetectorGrid(std::size_t count_, double spacing_) : count(count_), spacing(spacing_) {
    if (count < 2) throw GeometryError("detector needs at least 2 samples");
    if (!(spacing > 0.0) || !std::isfinite(spacing)) throw GeometryError("detector spacing must be positive");
}

bool DetectorGrid::covers(const GridSpec& grid) const {
    return half_extent() >= grid.half_extent() * std::numbers::sqrt2;
}

std::size_t DetectorGrid::max_grid_size(double pixel_size) const {
    auto n = static_cast<std::size_t>(std::floor(2.0 * half_extent() / (std::numbers::sqrt2 * pixel_size)));
    while (n > 0 && !covers(GridSpec{n, pixel_size})) --n;
    return n;
}

DetectorGrid DetectorGrid::covering(const GridSpec& grid, double spacing) {
    grid.validate();
    const double needed = grid.half_extent() * std::numbers::sqrt2 / spacing;
    const auto half = static_cast<std::size_t>(std::ceil(needed - 1e-9));
    return DetectorGrid(2 * half + 1, spacing);
}

Sinogram::Sinogram(AngleSet angles, DetectorGrid detector, std::vector<double> data)
    : angles_(std::move(angles)), detector_(detector), data_(std::move(data)) {
    if (detector_.count < 2 || !(detector_.spacing > 0.0)) throw GeometryError("invalid detector grid");
    const std::size_t expected = angles_.size() * detector_.count;
    if (data_.size() != expected)
        throw GeometryError("sinogram data has " + std::to_string(data_.size()) + " values, expected " +
                            std::to_string(expected));
    if (!all_finite(data_)) throw std::invalid_argument("sinogram contains non-finite values");
}

Sinogram Sinogram::zeros(AngleSet angles, DetectorGrid detector) {
    const std::size_t size = angles.size() * detector.count;
    return Sinogram(std::move(angles), detector, std::vector<double>(size, 0.0));
}

GradientField::GradientField(ImageGrid gx, ImageGrid gy) : gx_(std::move(gx)), gy_(std::move(gy)) {
    if (!(gx_.spec() == gy_.spec())) throw GeometryError("gradient components live on different grids");
}

EdgeMap::EdgeMap(std::size_t n, std::vector<std::uint8_t> data) : n_(n), data_(std::move(data)) {
    if (data_.size() != n_ * n_)
        throw GeometryError("edge map has " + std::to_string(data_.size()) + " values, expected " +
                            std::to_string(n_ * n_));
    for (auto& v : data_) {
        if (v > 1) throw std::invalid_argument("edge map values must be 0 or 1");
    }
}

std::size_t EdgeMap::count() const {
    return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

ImageGrid gradient_magnitude(const GradientField& gf) {
    const auto gx = gf.gx().values();
    const auto gy = gf.gy().values();
    std::vector<double> out(gx.size());
    for (std::size_t i = 0; i < gx.size(); ++i) out[i] = std::sqrt(gx[i] * gx[i] + gy[i] * gy[i]);
    return ImageGrid(gf.spec(), std::move(out));
}

}  // namespace gradtomo
