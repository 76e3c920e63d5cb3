#include "gradtomo/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "gradtomo/method1.hpp"
#include "gradtomo/method2.hpp"
#include "gradtomo/phantom.hpp"

namespace gradtomo {

namespace {

std::vector<std::uint8_t> dilate(const EdgeMap& edges, double radius) {
    const std::size_t n = edges.n();
    const auto sn = static_cast<long>(n);
    const auto r = static_cast<long>(std::floor(radius));
    std::vector<std::uint8_t> band(n * n, 0);
    for (std::size_t row = 0; row < n; ++row) {
        for (std::size_t col = 0; col < n; ++col) {
            if (!edges.at(row, col)) continue;
            for (long dr = -r; dr <= r; ++dr) {
                for (long dc = -r; dc <= r; ++dc) {
                    if (static_cast<double>(dr * dr + dc * dc) > radius * radius) continue;
                    const long rr = static_cast<long>(row) + dr;
                    const long cc = static_cast<long>(col) + dc;
                    if (rr < 0 || cc < 0 || rr >= sn || cc >= sn) continue;
                    band[static_cast<std::size_t>(rr) * n + static_cast<std::size_t>(cc)] = 1;
                }
            }
        }
    }
    return band;
}

Sinogram measured_data(const Sinogram& noisy_full, const SparseViewConfig& config, std::size_t n_angles,
                       const std::vector<EllipseSpec>& specs) {
    if (config.full_angles % n_angles == 0) return subsample_angles(noisy_full, config.full_angles / n_angles);
    const Sinogram clean = analytic_sinogram(specs, AngleSet::evenly_distributed(n_angles), noisy_full.detector());
    return add_noise(clean, config.noise_frac, config.noise_seed);
}

}  // namespace

double spurious_fraction(const GradientField& gf, const EdgeMap& truth, double band_radius, double threshold_frac) {
    const ImageGrid magnitude = gradient_magnitude(gf);
    const auto values = magnitude.values();
    const double peak = *std::max_element(values.begin(), values.end());
    const auto band = dilate(truth, band_radius);
    std::size_t outside = 0;
    std::size_t spurious = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (band[i]) continue;
        ++outside;
        if (peak > 0.0 && values[i] > threshold_frac * peak) ++spurious;
    }
    return outside == 0 ? 0.0 : static_cast<double>(spurious) / static_cast<double>(outside);
}

const MethodOutcome& SparseViewReport::best_method2(std::size_t n_angles) const {
    const MethodOutcome* best = nullptr;
    for (const auto& o : method2) {
        if (o.n_angles != n_angles) continue;
        if (!best || o.score.f1 > best->score.f1) best = &o;
    }
    if (!best) throw std::out_of_range("no Method 2 outcome at " + std::to_string(n_angles) + " angles");
    return *best;
}

const MethodOutcome& SparseViewReport::method1_at(std::size_t n_angles) const {
    for (const auto& o : method1)
        if (o.n_angles == n_angles) return o;
    throw std::out_of_range("no Method 1 outcome at " + std::to_string(n_angles) + " angles");
}

SparseViewReport run_sparse_view(const SparseViewConfig& config) {
    if (config.sparse_angles == 0 || config.full_angles == 0) throw std::invalid_argument("angle counts must be positive");
    if (config.lambda_ladder.empty()) throw std::invalid_argument("lambda ladder is empty");

    const GridSpec grid{config.size, config.pixel_size};
    const auto specs = shepp_logan_specs(grid.half_extent());
    const DetectorGrid detector = DetectorGrid::covering(grid, config.pixel_size);
    const double epsilon = config.epsilon_px * config.pixel_size;
    const Sinogram noisy_full =
        add_noise(analytic_sinogram(specs, AngleSet::evenly_distributed(config.full_angles), detector),
                  config.noise_frac, config.noise_seed);

    SparseViewReport report{outline_edges(specs, grid), {}, {}};

    auto evaluate = [&](std::string method, std::size_t n_angles, double lambda_rel, GradientField gf,
                        std::size_t iterations) {
        EdgeMap edges = canny_from_gradient(gf, config.low_frac, config.high_frac);
        const EdgeScore score = edge_f1(edges, report.truth, config.match_radius);
        const double spurious = spurious_fraction(gf, report.truth, config.band_radius, config.spurious_frac);
        return MethodOutcome{std::move(method), n_angles, lambda_rel, score, spurious, iterations, std::move(gf),
                             std::move(edges)};
    };

    auto run_at = [&](std::size_t n_angles, const std::vector<double>& ladder) {
        const Sinogram data = measured_data(noisy_full, config, n_angles, specs);
        report.method1.push_back(
            evaluate("fbp-combined", n_angles, 0.0, method1_gradient_combined(data, epsilon, grid), 0));

        IstaConfig ista;
        ista.lambda_mode = LambdaMode::relative_to_data;
        ista.max_iters = config.max_iters;
        ista.rel_tol = config.rel_tol;
        ista.seed = config.power_seed;
        const LinearOperator op = radon_operator(grid, data.angles(), data.detector());
        const double lipschitz = estimate_lipschitz(op, ista.lipschitz_iters, ista.seed).value;
        for (double lambda_rel : ladder) {
            ista.lambda = lambda_rel;
            Method2Result m2 = method2_gradient(data, epsilon, ista, grid, lipschitz);
            const std::size_t iters = std::max(m2.gx_diagnostics.iterations, m2.gy_diagnostics.iterations);
            report.method2.push_back(evaluate("l1", n_angles, lambda_rel, std::move(m2.gradient), iters));
        }
    };

    run_at(config.sparse_angles, config.lambda_ladder);
    if (config.full_angles != config.sparse_angles)
        run_at(config.full_angles, {report.best_method2(config.sparse_angles).lambda_rel});
    return report;
}

void write_metrics_csv(std::ostream& out, const SparseViewReport& report) {
    out << "method,n_angles,lambda_rel,precision,recall,f1,spurious_fraction,iterations\n";
    auto row = [&](const MethodOutcome& o) {
        char line[256];
        std::snprintf(line, sizeof(line), "%s,%zu,%.6g,%.6f,%.6f,%.6f,%.6f,%zu\n", o.method.c_str(), o.n_angles,
                      o.lambda_rel, o.score.precision, o.score.recall, o.score.f1, o.spurious_fraction, o.iterations);
        out << line;
    };
    for (const auto& o : report.method1) row(o);
    for (const auto& o : report.method2) row(o);
}

}  // namespace gradtomo
