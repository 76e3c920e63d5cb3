#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace gradtomo {

/// Size and physical pixel pitch of a square image grid centered at the origin.
struct GridSpec {
    std::size_t n = 0;
    double pixel_size = 1.0;

    std::size_t pixel_count() const { return n * n; }

    /// Physical half-width of the field of view.
    double half_extent() const { return 0.5 * static_cast<double>(n) * pixel_size; }

    /// Physical center (x1, x2) of pixel (row, col). Rows run along -x2, columns along +x1.
    std::pair<double, double> pixel_center(std::size_t row, std::size_t col) const;

    /// Pixel whose center is nearest to (x1, x2), clamped to the grid.
    std::pair<std::size_t, std::size_t> nearest_pixel(double x1, double x2) const;

    void validate() const;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Square n x n scalar image, row-major. Immutable after construction.
class ImageGrid {
public:
    ImageGrid(GridSpec spec, std::vector<double> data);

    static ImageGrid zeros(GridSpec spec);

    const GridSpec& spec() const { return spec_; }
    std::size_t n() const { return spec_.n; }
    double pixel_size() const { return spec_.pixel_size; }

    double at(std::size_t row, std::size_t col) const { return data_[row * spec_.n + col]; }
    std::span<const double> values() const { return data_; }

private:
    GridSpec spec_;
    std::vector<double> data_;
};

/// Projection angles, strictly increasing in [0, pi).
class AngleSet {
public:
    explicit AngleSet(std::vector<double> angles);

    /// phi_k = k*pi/count for k = 0..count-1.
    static AngleSet evenly_distributed(std::size_t count);

    std::size_t size() const { return angles_.size(); }
    double operator[](std::size_t k) const { return angles_[k]; }
    std::span<const double> values() const { return angles_; }

    friend bool operator==(const AngleSet&, const AngleSet&) = default;

private:
    std::vector<double> angles_;
};

/// Centered, equispaced detector: s_i = (i - (count-1)/2) * spacing.
struct DetectorGrid {
    std::size_t count = 0;
    double spacing = 1.0;

    DetectorGrid() = default;
    DetectorGrid(std::size_t count, double spacing);

    double position(std::size_t i) const {
        return (static_cast<double>(i) - 0.5 * static_cast<double>(count - 1)) * spacing;
    }
    double half_extent() const { return 0.5 * static_cast<double>(count - 1) * spacing; }

    /// Does the sampled s range span the circumscribed circle of the grid?
    bool covers(const GridSpec& grid) const;

    /// Largest n such that an n x n grid with this pixel size is covered.
    std::size_t max_grid_size(double pixel_size) const;

    /// Smallest odd-count detector with the given spacing that covers the grid.
    static DetectorGrid covering(const GridSpec& grid, double spacing);

    friend bool operator==(const DetectorGrid&, const DetectorGrid&) = default;
};

/// Angle-major table of line integrals.
class Sinogram {
public:
    Sinogram(AngleSet angles, DetectorGrid detector, std::vector<double> data);

    static Sinogram zeros(AngleSet angles, DetectorGrid detector);

    const AngleSet& angles() const { return angles_; }
    const DetectorGrid& detector() const { return detector_; }
    std::size_t n_angles() const { return angles_.size(); }
    std::size_t n_s() const { return detector_.count; }

    double at(std::size_t angle, std::size_t bin) const { return data_[angle * detector_.count + bin]; }
    std::span<const double> row(std::size_t angle) const {
        return std::span<const double>(data_).subspan(angle * detector_.count, detector_.count);
    }
    std::span<const double> values() const { return data_; }

private:
    AngleSet angles_;
    DetectorGrid detector_;
    std::vector<double> data_;
};

/// Smoothed partial derivatives d/dx1 and d/dx2 on a shared grid.
class GradientField {
public:
    GradientField(ImageGrid gx, ImageGrid gy);

    const ImageGrid& gx() const { return gx_; }
    const ImageGrid& gy() const { return gy_; }
    const GridSpec& spec() const { return gx_.spec(); }

private:
    ImageGrid gx_;
    ImageGrid gy_;
};

/// Binary n x n edge map.
class EdgeMap {
public:
    EdgeMap(std::size_t n, std::vector<std::uint8_t> data);

    std::size_t n() const { return n_; }
    bool at(std::size_t row, std::size_t col) const { return data_[row * n_ + col] != 0; }
    std::span<const std::uint8_t> values() const { return data_; }
    std::size_t count() const;

    friend bool operator==(const EdgeMap&, const EdgeMap&) = default;

private:
    std::size_t n_;
    std::vector<std::uint8_t> data_;
};

/// Per-pixel sqrt(gx^2 + gy^2).
ImageGrid gradient_magnitude(const GradientField& gf);

}  // namespace gradtomo
