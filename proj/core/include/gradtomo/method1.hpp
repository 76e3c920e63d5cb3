#pragma once

#include "gradtomo/types.hpp"

namespace gradtomo {

/// Filtered backprojection with a Ram-Lak ramp truncated at cutoff_fraction * Nyquist.
///
/// The ramp |omega|/(4 pi) pairs with a backprojection over the full circle, which for
/// Radon data equals twice the [0, pi) backprojection; the factor 2 is applied here.
ImageGrid fbp_reconstruct(const Sinogram& sino, const GridSpec& grid, double cutoff_fraction = 1.0);

/// Smoothed gradient by preprocessing the data with the detector derivative filter k_eps,
/// weighted by cos/sin of the angle, followed by FBP of each preprocessed sinogram.
/// epsilon is a physical length.
GradientField method1_gradient_preprocess(const Sinogram& sino, double epsilon, const GridSpec& grid,
                                          double cutoff_fraction = 1.0);

/// Smoothed gradient in a single filter-then-backproject pass using the combined
/// frequency-domain filter i*omega*|omega|*exp(-eps^2 omega^2/2)/(4 pi).
GradientField method1_gradient_combined(const Sinogram& sino, double epsilon, const GridSpec& grid);

/// Pixels more than `border` pixels from the edge and inside the inscribed circle.
std::vector<std::uint8_t> interior_mask(const GridSpec& grid, std::size_t border = 3);

}  // namespace gradtomo
