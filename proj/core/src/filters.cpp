#include "gradtomo/filters.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gradtomo/errors.hpp"
#include "gradtomo/parallel.hpp"

namespace gradtomo {

namespace {

using complex = std::complex<double>;

void require_positive_epsilon(double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("epsilon must be positive, got " + std::to_string(epsilon));
}

std::size_t stencil_half(double epsilon, double spacing) {
    return static_cast<std::size_t>(std::ceil(4.0 * epsilon / spacing));
}

double gaussian_value(double epsilon, double x1, double x2) {
    const double e2 = epsilon * epsilon;
    return std::exp(-(x1 * x1 + x2 * x2) / (2.0 * e2)) / (2.0 * std::numbers::pi * e2);
}

Eigen::FFT<double>& local_fft() {
    thread_local Eigen::FFT<double> fft;
    return fft;
}

}  // namespace

double Kernel2D::sum() const {
    double total = 0.0;
    for (double v : values) total += v;
    return total;
}

Filter1D Filter1D::spatial(std::vector<double> taps, double spacing) {
    if (taps.empty() || taps.size() % 2 == 0)
        throw std::invalid_argument("spatial filter needs an odd number of taps, got " + std::to_string(taps.size()));
    if (!(spacing > 0.0)) throw std::invalid_argument("filter spacing must be positive");
    Filter1D f(Kind::spatial, spacing);
    f.taps_ = std::move(taps);
    return f;
}

Filter1D Filter1D::frequency(std::vector<complex> response, double spacing) {
    const std::size_t n = response.size();
    if (n < 2 || (n & (n - 1)) != 0)
        throw std::invalid_argument("frequency response length must be a power of two, got " + std::to_string(n));
    if (!(spacing > 0.0)) throw std::invalid_argument("filter spacing must be positive");
    double peak = 0.0;
    for (const auto& v : response) peak = std::max(peak, std::abs(v));
    for (std::size_t m = 0; m < n; ++m) {
        const complex mirrored = response[(n - m) % n];
        if (std::abs(mirrored - std::conj(response[m])) > 1e-12 * std::max(peak, 1.0))
            throw std::invalid_argument("frequency response is not Hermitian at bin " + std::to_string(m));
    }
    Filter1D f(Kind::frequency, spacing);
    f.response_ = std::move(response);
    return f;
}

double bin_frequency(std::size_t m, std::size_t n_fft, double spacing) {
    const double scale = 2.0 * std::numbers::pi / (static_cast<double>(n_fft) * spacing);
    if (m <= n_fft / 2) return scale * static_cast<double>(m);
    return -scale * static_cast<double>(n_fft - m);
}

std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

std::size_t filter_fft_size(std::size_t n_s) { return next_power_of_two(2 * n_s); }

std::vector<double> direction_weights(const AngleSet& angles, int component) {
    if (component != 1 && component != 2) throw std::invalid_argument("component must be 1 or 2");
    std::vector<double> w(angles.size());
    for (std::size_t k = 0; k < angles.size(); ++k)
        w[k] = component == 1 ? std::cos(angles[k]) : std::sin(angles[k]);
    return w;
}

Kernel2D gaussian_kernel_2d(double epsilon, double pixel_size) {
    require_positive_epsilon(epsilon);
    Kernel2D k;
    k.half = stencil_half(epsilon, pixel_size);
    k.pixel_size = pixel_size;
    const std::size_t w = k.width();
    k.values.resize(w * w);
    const double area = pixel_size * pixel_size;
    for (std::size_t a = 0; a < w; ++a) {
        const double x2 = (static_cast<double>(k.half) - static_cast<double>(a)) * pixel_size;
        for (std::size_t b = 0; b < w; ++b) {
            const double x1 = (static_cast<double>(b) - static_cast<double>(k.half)) * pixel_size;
            k.values[a * w + b] = gaussian_value(epsilon, x1, x2) * area;
        }
    }
    return k;
}

Kernel2D dgauss_image_kernel(double epsilon, double pixel_size, int component) {
    require_positive_epsilon(epsilon);
    if (component != 1 && component != 2) throw std::invalid_argument("component must be 1 or 2");
    Kernel2D k;
    k.half = stencil_half(epsilon, pixel_size);
    k.pixel_size = pixel_size;
    const std::size_t w = k.width();
    k.values.resize(w * w);
    const double area = pixel_size * pixel_size;
    const double e2 = epsilon * epsilon;
    for (std::size_t a = 0; a < w; ++a) {
        const double x2 = (static_cast<double>(k.half) - static_cast<double>(a)) * pixel_size;
        for (std::size_t b = 0; b < w; ++b) {
            const double x1 = (static_cast<double>(b) - static_cast<double>(k.half)) * pixel_size;
            const double xj = component == 1 ? x1 : x2;
            k.values[a * w + b] = -(xj / e2) * gaussian_value(epsilon, x1, x2) * area;
        }
    }
    return k;
}

double detector_derivative_value(double epsilon, double s) {
    const double e2 = epsilon * epsilon;
    return -s / (e2 * epsilon * std::sqrt(2.0 * std::numbers::pi)) * std::exp(-s * s / (2.0 * e2));
}

Filter1D g_detector_kernel(double epsilon, double s_spacing) {
    require_positive_epsilon(epsilon);
    if (!(s_spacing > 0.0)) throw std::invalid_argument("s_spacing must be positive");
    const std::size_t half = stencil_half(epsilon, s_spacing);
    std::vector<double> taps(2 * half + 1);
    for (std::size_t i = 0; i < taps.size(); ++i) {
        const double s = (static_cast<double>(i) - static_cast<double>(half)) * s_spacing;
        taps[i] = detector_derivative_value(epsilon, s) * s_spacing;
    }
    return Filter1D::spatial(std::move(taps), s_spacing);
}

Filter1D ramlak_filter(std::size_t n_fft, double s_spacing, double cutoff_fraction) {
    if (n_fft < 2 || (n_fft & (n_fft - 1)) != 0)
        throw std::invalid_argument("n_fft must be a power of two, got " + std::to_string(n_fft));
    if (!(cutoff_fraction > 0.0 && cutoff_fraction <= 1.0))
        throw std::invalid_argument("cutoff fraction must lie in (0, 1], got " + std::to_string(cutoff_fraction));
    const double limit = cutoff_fraction * std::numbers::pi / s_spacing;
    std::vector<complex> response(n_fft);
    for (std::size_t m = 0; m < n_fft; ++m) {
        const double omega = std::abs(bin_frequency(m, n_fft, s_spacing));
        // relative slack so that cutoff 1.0 keeps the Nyquist bin despite rounding
        response[m] = omega <= limit * (1.0 + 1e-12) ? omega / (4.0 * std::numbers::pi) : 0.0;
    }
    return Filter1D::frequency(std::move(response), s_spacing);
}

std::complex<double> w_response(double epsilon, double omega) {
    const double magnitude =
        omega * std::abs(omega) * std::exp(-epsilon * epsilon * omega * omega / 2.0) / (4.0 * std::numbers::pi);
    return {0.0, magnitude};
}

Filter1D w_filter(double epsilon, std::size_t n_fft, double s_spacing) {
    require_positive_epsilon(epsilon);
    if (n_fft < 2 || (n_fft & (n_fft - 1)) != 0)
        throw std::invalid_argument("n_fft must be a power of two, got " + std::to_string(n_fft));
    std::vector<complex> response(n_fft);
    for (std::size_t m = 0; m < n_fft; ++m) response[m] = w_response(epsilon, bin_frequency(m, n_fft, s_spacing));
    response[n_fft / 2] = response[n_fft / 2].real();
    return Filter1D::frequency(std::move(response), s_spacing);
}

Sinogram convolve_s(const Sinogram& sino, const Filter1D& filter, std::span<const double> weights) {
    const std::size_t n_angles = sino.n_angles();
    const std::size_t n_s = sino.n_s();
    if (weights.size() != n_angles)
        throw GeometryError("got " + std::to_string(weights.size()) + " per-angle weights for " +
                            std::to_string(n_angles) + " angles");
    if (std::abs(filter.spacing() - sino.detector().spacing) > 1e-12 * sino.detector().spacing)
        throw GeometryError("filter spacing " + std::to_string(filter.spacing()) + " differs from detector spacing " +
                            std::to_string(sino.detector().spacing));

    std::vector<complex> spectrum;
    std::size_t n_fft = 0;
    std::size_t offset = 0;
    if (filter.kind() == Filter1D::Kind::spatial) {
        const auto taps = filter.taps();
        n_fft = next_power_of_two(n_s + taps.size() - 1);
        offset = filter.center();
        std::vector<complex> padded(n_fft, 0.0);
        std::copy(taps.begin(), taps.end(), padded.begin());
        local_fft().fwd(spectrum, padded);
    } else {
        n_fft = filter.response().size();
        if (n_fft < n_s)
            throw GeometryError("frequency filter length " + std::to_string(n_fft) + " shorter than detector " +
                                std::to_string(n_s));
        spectrum.assign(filter.response().begin(), filter.response().end());
    }

    std::vector<double> out(n_angles * n_s, 0.0);
    parallel_for(0, n_angles, [&](std::size_t k) {
        if (weights[k] == 0.0) return;
        auto& fft = local_fft();
        std::vector<complex> row(n_fft, 0.0);
        const auto src = sino.row(k);
        std::copy(src.begin(), src.end(), row.begin());
        std::vector<complex> freq;
        fft.fwd(freq, row);
        for (std::size_t m = 0; m < n_fft; ++m) freq[m] *= spectrum[m];
        fft.inv(row, freq);
        double* dst = out.data() + k * n_s;
        for (std::size_t i = 0; i < n_s; ++i) dst[i] = weights[k] * row[i + offset].real();
    });
    return Sinogram(sino.angles(), sino.detector(), std::move(out));
}

ImageGrid convolve_image(const ImageGrid& img, const Kernel2D& kernel) {
    const std::size_t n = img.n();
    const auto h = static_cast<std::ptrdiff_t>(kernel.half);
    const std::size_t w = kernel.width();
    const auto src = img.values();
    std::vector<double> out(n * n, 0.0);
    const auto sn = static_cast<std::ptrdiff_t>(n);
    parallel_for(0, n, [&](std::size_t r) {
        for (std::size_t c = 0; c < n; ++c) {
            double acc = 0.0;
            for (std::size_t a = 0; a < w; ++a) {
                const auto rr = static_cast<std::ptrdiff_t>(r) - (static_cast<std::ptrdiff_t>(a) - h);
                if (rr < 0 || rr >= sn) continue;
                for (std::size_t b = 0; b < w; ++b) {
                    const auto cc = static_cast<std::ptrdiff_t>(c) - (static_cast<std::ptrdiff_t>(b) - h);
                    if (cc < 0 || cc >= sn) continue;
                    acc += kernel.values[a * w + b] * src[static_cast<std::size_t>(rr) * n + static_cast<std::size_t>(cc)];
                }
            }
            out[r * n + c] = acc;
        }
    });
    return ImageGrid(img.spec(), std::move(out));
}

}  // namespace gradtomo
