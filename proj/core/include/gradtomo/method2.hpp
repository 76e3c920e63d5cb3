#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "gradtomo/types.hpp"

namespace gradtomo {

/// Matrix-free linear map with its transpose. Both callbacks overwrite `out`.
struct LinearOperator {
    std::size_t domain_size = 0;
    std::size_t range_size = 0;
    std::function<void(std::span<const double> in, std::span<double> out)> apply;
    std::function<void(std::span<const double> in, std::span<double> out)> adjoint;
};

/// The discrete Radon transform on `grid` as a LinearOperator.
LinearOperator radon_operator(const GridSpec& grid, const AngleSet& angles, const DetectorGrid& detector);

/// How IstaConfig::lambda is interpreted.
enum class LambdaMode {
    absolute,          ///< lambda is used as given
    relative_to_data,  ///< lambda multiplies ||2 A^T y||_inf, the smallest weight giving the zero solution
};

struct IstaConfig {
    double lambda = 0.01;
    LambdaMode lambda_mode = LambdaMode::absolute;
    std::size_t max_iters = 500;
    double rel_tol = 1e-6;
    double step_safety = 0.9;  ///< step = step_safety / (2 L)
    std::size_t lipschitz_iters = 50;
    std::uint64_t seed = 0;

    void validate() const;
};

struct LipschitzEstimate {
    double value = 0.0;
    std::vector<double> history;  ///< estimate after each power iteration
};

/// Power-method estimate of ||A^T A||_2 from a seeded uniform random start.
/// Each estimate is ||M x_k|| for the normalized iterate x_k, which is non-decreasing in k.
LipschitzEstimate estimate_lipschitz(const LinearOperator& op, std::size_t iters, std::uint64_t seed);

/// Elementwise sign(v) * max(|v| - t, 0).
std::vector<double> soft_threshold(std::span<const double> v, double threshold);

struct IstaDiagnostics {
    std::vector<double> objective;  ///< F(f_k) for k = 0 (the zero start) .. iterations
    std::size_t iterations = 0;
    bool converged = false;
    double lipschitz = 0.0;
    double step = 0.0;
    double lambda = 0.0;  ///< absolute weight actually used
};

struct IstaResult {
    std::vector<double> solution;
    IstaDiagnostics diagnostics;
};

/// Minimizes ||A f - y||^2 + lambda ||f||_1 by iterative soft thresholding from f = 0:
/// f <- soft_threshold(f - step * 2 A^T (A f - y), step * lambda).
/// Stops when |F_k - F_{k-1}| <= rel_tol * F_k or after max_iters iterations.
/// Throws DivergenceError on a non-finite objective. When `lipschitz` is given it replaces the
/// power-method estimate of ||A^T A||.
IstaResult ista_solve(const LinearOperator& op, std::span<const double> y, const IstaConfig& config,
                      std::optional<double> lipschitz = std::nullopt);

/// ISTA with the Radon operator of `grid` and the geometry of `y`.
std::pair<ImageGrid, IstaDiagnostics> ista_solve(const Sinogram& y, const IstaConfig& config, const GridSpec& grid,
                                                 std::optional<double> lipschitz = std::nullopt);

/// ||2 A^T y||_inf: lambda at or above this value makes zero optimal.
double zero_solution_lambda(const LinearOperator& op, std::span<const double> y);

struct Method2Result {
    GradientField gradient;
    IstaDiagnostics gx_diagnostics;
    IstaDiagnostics gy_diagnostics;
};

/// Sparse gradient recovery: for j = 1, 2 the data are filtered with k_eps weighted by
/// theta_j(phi), then ista_solve recovers the j-th smoothed partial derivative.
/// Both components share one Lipschitz estimate unless `lipschitz` is supplied.
Method2Result method2_gradient(const Sinogram& sino, double epsilon, const IstaConfig& config, const GridSpec& grid,
                               std::optional<double> lipschitz = std::nullopt);

}  // namespace gradtomo
