#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "gradtomo/types.hpp"

namespace gradtomo {

/// Square (2*half+1)^2 image-domain stencil, row-major, rows along -x2 like ImageGrid.
struct Kernel2D {
    std::size_t half = 0;
    double pixel_size = 1.0;
    std::vector<double> values;

    std::size_t width() const { return 2 * half + 1; }
    double at(std::size_t row, std::size_t col) const { return values[row * width() + col]; }
    double sum() const;
};

/// Detector-axis filter: either an odd-length spatial kernel centered at (len-1)/2,
/// or a frequency response sampled on the DFT bins of an n_fft-point transform.
class Filter1D {
public:
    enum class Kind { spatial, frequency };

    static Filter1D spatial(std::vector<double> taps, double spacing);
    static Filter1D frequency(std::vector<std::complex<double>> response, double spacing);

    Kind kind() const { return kind_; }
    double spacing() const { return spacing_; }

    /// Spatial taps; empty for frequency filters.
    std::span<const double> taps() const { return taps_; }
    std::size_t center() const { return (taps_.size() - 1) / 2; }

    /// Frequency response per bin; empty for spatial filters.
    std::span<const std::complex<double>> response() const { return response_; }

private:
    Filter1D(Kind kind, double spacing) : kind_(kind), spacing_(spacing) {}

    Kind kind_;
    double spacing_;
    std::vector<double> taps_;
    std::vector<std::complex<double>> response_;
};

/// Angular frequency of DFT bin m for an n_fft-point transform with sample spacing `spacing`.
/// The Nyquist bin (m = n_fft/2) is assigned to the non-negative branch.
double bin_frequency(std::size_t m, std::size_t n_fft, double spacing);

/// Smallest power of two >= n.
std::size_t next_power_of_two(std::size_t n);

/// Transform length used for frequency-domain detector filtering: next power of two >= 2*n_s.
std::size_t filter_fft_size(std::size_t n_s);

/// theta_1(phi) = cos(phi), theta_2(phi) = sin(phi) for every projection angle.
std::vector<double> direction_weights(const AngleSet& angles, int component);

/// Sampled 2D Gaussian g_eps times pixel_size^2 on a (2*ceil(4*eps/pixel_size)+1)^2 stencil.
Kernel2D gaussian_kernel_2d(double epsilon, double pixel_size);

/// Sampled d g_eps / d x_j = -(x_j / eps^2) g_eps(x), times pixel_size^2. component is 1 or 2.
Kernel2D dgauss_image_kernel(double epsilon, double pixel_size, int component);

/// Angle-free factor of the detector derivative filter:
/// k_eps(s) = -s / (eps^3 sqrt(2 pi)) exp(-s^2 / (2 eps^2)).
double detector_derivative_value(double epsilon, double s);

/// k_eps sampled on |s| <= 4 eps and scaled by s_spacing.
Filter1D g_detector_kernel(double epsilon, double s_spacing);

/// |omega| / (4 pi) up to cutoff_fraction * Nyquist, zero above. n_fft must be a power of two.
Filter1D ramlak_filter(std::size_t n_fft, double s_spacing, double cutoff_fraction);

/// Angle-free part of the combined derivative filter:
/// w_eps(omega) = i * omega * |omega| * exp(-eps^2 omega^2 / 2) / (4 pi).
std::complex<double> w_response(double epsilon, double omega);

/// w_eps sampled on the DFT bins. The self-conjugate Nyquist bin keeps only its real part (zero).
Filter1D w_filter(double epsilon, std::size_t n_fft, double s_spacing);

/// Row k of the result is weights[k] * (row k (*) filter), linear convolution with zero padding.
/// Spatial filters run through an FFT of length next_power_of_two(n_s + len - 1) and keep the
/// centered segment; frequency filters are applied on their own n_fft-point grid (n_fft >= n_s).
Sinogram convolve_s(const Sinogram& sino, const Filter1D& filter, std::span<const double> weights);

/// Zero-padded 2D convolution of an image with a stencil on the same pixel grid ("same" output).
ImageGrid convolve_image(const ImageGrid& img, const Kernel2D& kernel);

}  // namespace gradtomo
