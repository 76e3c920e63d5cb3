#pragma once

#include <cstdint>
#include <vector>

#include "gradtomo/types.hpp"

namespace gradtomo {

/// Constant-valued ellipse in physical coordinates. rotation is the angle (radians) of the
/// first semi-axis from +x1.
struct EllipseSpec {
    double center_x1 = 0.0;
    double center_x2 = 0.0;
    double semi_a = 1.0;
    double semi_b = 1.0;
    double rotation = 0.0;
    double amplitude = 1.0;

    void validate() const;
    bool contains(double x1, double x2) const;
};

/// The ten-ellipse Shepp-Logan table (original amplitudes), scaled so that the unit
/// square of the table maps onto the image half-extent.
std::vector<EllipseSpec> shepp_logan_specs(double half_extent);

/// Centered disk.
EllipseSpec disk_spec(double radius, double amplitude = 1.0);

/// Sum of ellipse indicators sampled at pixel centers.
ImageGrid rasterize(const std::vector<EllipseSpec>& specs, const GridSpec& grid);

/// Shepp-Logan phantom on an n x n grid; n >= 32.
ImageGrid shepp_logan(std::size_t n, double pixel_size);

/// Exact Radon transform of a sum of ellipses, sampled on the detector.
Sinogram analytic_sinogram(const std::vector<EllipseSpec>& specs, const AngleSet& angles,
                           const DetectorGrid& detector);

/// Union of rasterized ellipse outlines: pixels inside an ellipse with a 4-neighbor outside it.
EdgeMap outline_edges(const std::vector<EllipseSpec>& specs, const GridSpec& grid);

/// Adds N(0, (sigma_frac * max|sino|)^2) noise per bin from a seeded generator.
Sinogram add_noise(const Sinogram& sino, double sigma_frac, std::uint64_t seed);

/// Keeps the angles whose index is a multiple of keep_every.
Sinogram subsample_angles(const Sinogram& sino, std::size_t keep_every);

}  // namespace gradtomo
