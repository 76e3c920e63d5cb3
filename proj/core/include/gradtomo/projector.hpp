#pragma once

#include <span>

#include "gradtomo/types.hpp"

namespace gradtomo {

/// Discrete parallel-beam Radon transform.
///
/// Pixel-driven splat: every pixel deposits value * pixel_size^2 / s_spacing onto the two
/// detector bins bracketing s = <x, theta(phi)>, split by linear interpolation weights.
/// Throws GeometryError when the detector does not cover the image's circumscribed circle.
Sinogram forward_radon(const ImageGrid& img, const AngleSet& angles, const DetectorGrid& detector);

/// Exact transpose of forward_radon (linear-interpolation backprojection without quadrature weights).
ImageGrid adjoint_radon(const Sinogram& sino, const GridSpec& grid);

/// Quadrature backprojection over [0, pi): (pi / n_angles) * (s_spacing / pixel_size^2) * adjoint_radon.
/// A sinogram of ones maps to pi at every covered pixel.
ImageGrid backproject(const Sinogram& sino, const GridSpec& grid);

/// Buffer-level forward projection: `image` holds grid.pixel_count() values, `out` receives
/// angles.size() * detector.count values (overwritten). No finiteness checks.
void forward_radon_into(std::span<const double> image, const GridSpec& grid, const AngleSet& angles,
                        const DetectorGrid& detector, std::span<double> out);

/// Buffer-level transpose of forward_radon_into.
void adjoint_radon_into(std::span<const double> sino, const GridSpec& grid, const AngleSet& angles,
                        const DetectorGrid& detector, std::span<double> out);

/// Scale factor relating backproject to adjoint_radon for this geometry.
double backprojection_scale(const Sinogram& sino, const GridSpec& grid);

}  // namespace gradtomo
