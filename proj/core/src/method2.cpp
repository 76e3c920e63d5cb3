#include "gradtomo/method2.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "gradtomo/errors.hpp"
#include "gradtomo/filters.hpp"
#include "gradtomo/projector.hpp"

namespace gradtomo {

namespace {

double squared_norm(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return acc;
}

double l1_norm(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += std::abs(x);
    return acc;
}

}  // namespace

void IstaConfig::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be >= 0");
    if (!(step_safety > 0.0 && step_safety < 1.0)) throw std::invalid_argument("step_safety must lie in (0, 1)");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    if (!(rel_tol >= 0.0)) throw std::invalid_argument("rel_tol must be >= 0");
    if (lipschitz_iters < 5) throw std::invalid_argument("lipschitz_iters must be >= 5");
}

LinearOperator radon_operator(const GridSpec& grid, const AngleSet& angles, const DetectorGrid& detector) {
    LinearOperator op;
    op.domain_size = grid.pixel_count();
    op.range_size = angles.size() * detector.count;
    op.apply = [grid, angles, detector](std::span<const double> in, std::span<double> out) {
        forward_radon_into(in, grid, angles, detector, out);
    };
    op.adjoint = [grid, angles, detector](std::span<const double> in, std::span<double> out) {
        adjoint_radon_into(in, grid, angles, detector, out);
    };
    return op;
}

LipschitzEstimate estimate_lipschitz(const LinearOperator& op, std::size_t iters, std::uint64_t seed) {
    if (iters < 5) throw std::invalid_argument("power method needs at least 5 iterations");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<double> x(op.domain_size);
    for (auto& v : x) v = uniform(rng);
    double norm = std::sqrt(squared_norm(x));
    for (auto& v : x) v /= norm;

    std::vector<double> ax(op.range_size);
    std::vector<double> mx(op.domain_size);
    LipschitzEstimate est;
    est.history.reserve(iters);
    for (std::size_t it = 0; it < iters; ++it) {
        op.apply(x, ax);
        op.adjoint(ax, mx);
        norm = std::sqrt(squared_norm(mx));
        est.history.push_back(norm);
        if (norm == 0.0) break;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = mx[i] / norm;
    }
    est.value = est.history.back();
    return est;
}

std::vector<double> soft_threshold(std::span<const double> v, double threshold) {
    if (!(threshold >= 0.0)) throw std::invalid_argument("threshold must be >= 0");
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v[i]) - threshold;
        out[i] = mag > 0.0 ? std::copysign(mag, v[i]) : 0.0;
    }
    return out;
}

double zero_solution_lambda(const LinearOperator& op, std::span<const double> y) {
    std::vector<double> aty(op.domain_size);
    op.adjoint(y, aty);
    double peak = 0.0;
    for (double v : aty) peak = std::max(peak, std::abs(2.0 * v));
    return peak;
}

IstaResult ista_solve(const LinearOperator& op, std::span<const double> y, const IstaConfig& config,
                      std::optional<double> lipschitz) {
    config.validate();
    if (y.size() != op.range_size)
        throw GeometryError("data has " + std::to_string(y.size()) + " values, operator range is " +
                            std::to_string(op.range_size));

    IstaResult result;
    auto& diag = result.diagnostics;
    diag.lambda =
        config.lambda_mode == LambdaMode::absolute ? config.lambda : config.lambda * zero_solution_lambda(op, y);
    diag.lipschitz = lipschitz ? *lipschitz : estimate_lipschitz(op, config.lipschitz_iters, config.seed).value;
    diag.step = diag.lipschitz > 0.0 ? config.step_safety / (2.0 * diag.lipschitz) : 0.0;
    const double lambda = diag.lambda;
    const double step = diag.step;

    std::vector<double> f(op.domain_size, 0.0);
    std::vector<double> residual(y.begin(), y.end());
    for (auto& v : residual) v = -v;
    std::vector<double> grad(op.domain_size);
    std::vector<double> af(op.range_size);

    double previous = squared_norm(residual);
    diag.objective.push_back(previous);
    if (step == 0.0) {
        diag.converged = true;
        result.solution = std::move(f);
        return result;
    }

    for (std::size_t it = 0; it < config.max_iters; ++it) {
        op.adjoint(residual, grad);
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double v = f[i] - step * 2.0 * grad[i];
            const double mag = std::abs(v) - step * lambda;
            f[i] = mag > 0.0 ? std::copysign(mag, v) : 0.0;
        }
        op.apply(f, af);
        for (std::size_t i = 0; i < af.size(); ++i) residual[i] = af[i] - y[i];
        const double objective = squared_norm(residual) + lambda * l1_norm(f);
        diag.objective.push_back(objective);
        diag.iterations = it + 1;
        if (!std::isfinite(objective))
            throw DivergenceError("ISTA objective became non-finite at iteration " + std::to_string(it + 1));
        if (std::abs(objective - previous) <= config.rel_tol * objective) {
            diag.converged = true;
            break;
        }
        previous = objective;
    }
    result.solution = std::move(f);
    return result;
}

std::pair<ImageGrid, IstaDiagnostics> ista_solve(const Sinogram& y, const IstaConfig& config, const GridSpec& grid,
                                                 std::optional<double> lipschitz) {
    const LinearOperator op = radon_operator(grid, y.angles(), y.detector());
    IstaResult r = ista_solve(op, y.values(), config, lipschitz);
    return {ImageGrid(grid, std::move(r.solution)), std::move(r.diagnostics)};
}

Method2Result method2_gradient(const Sinogram& sino, double epsilon, const IstaConfig& config, const GridSpec& grid,
                               std::optional<double> lipschitz) {
    config.validate();
    const Filter1D derivative = g_detector_kernel(epsilon, sino.detector().spacing);
    if (!lipschitz) {
        const LinearOperator op = radon_operator(grid, sino.angles(), sino.detector());
        lipschitz = estimate_lipschitz(op, config.lipschitz_iters, config.seed).value;
    }
    auto component = [&](int j) {
        const Sinogram rhs = convolve_s(sino, derivative, direction_weights(sino.angles(), j));
        return ista_solve(rhs, config, grid, lipschitz);
    };
    auto [gx, dx] = component(1);
    auto [gy, dy] = component(2);
    return Method2Result{GradientField(std::move(gx), std::move(gy)), std::move(dx), std::move(dy)};
}

}  // namespace gradtomo
