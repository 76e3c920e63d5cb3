#include <benchmark/benchmark.h>

#include "gradtomo/filters.hpp"
#include "gradtomo/method1.hpp"
#include "gradtomo/method2.hpp"
#include "gradtomo/phantom.hpp"
#include "gradtomo/projector.hpp"

using namespace gradtomo;

namespace {

struct Setup {
    GridSpec grid;
    AngleSet angles;
    DetectorGrid detector;
    ImageGrid image;
    Sinogram sino;

    Setup(std::size_t n, std::size_t n_angles)
        : grid{n, 1.0},
          angles(AngleSet::evenly_distributed(n_angles)),
          detector(DetectorGrid::covering(grid, 1.0)),
          image(shepp_logan(n, 1.0)),
          sino(forward_radon(image, angles, detector)) {}
};

void BM_Forward(benchmark::State& state) {
    const Setup s(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(forward_radon(s.image, s.angles, s.detector));
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0) * state.range(1));
}
BENCHMARK(BM_Forward)->Args({128, 36})->Args({128, 180})->Args({256, 180})->Unit(benchmark::kMillisecond);

void BM_Adjoint(benchmark::State& state) {
    const Setup s(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(adjoint_radon(s.sino, s.grid));
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0) * state.range(1));
}
BENCHMARK(BM_Adjoint)->Args({128, 36})->Args({128, 180})->Args({256, 180})->Unit(benchmark::kMillisecond);

void BM_ConvolveSpatial(benchmark::State& state) {
    const Setup s(128, 180);
    const auto filter = g_detector_kernel(static_cast<double>(state.range(0)), 1.0);
    const auto weights = direction_weights(s.angles, 1);
    for (auto _ : state) benchmark::DoNotOptimize(convolve_s(s.sino, filter, weights));
}
BENCHMARK(BM_ConvolveSpatial)->Arg(2)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_ConvolveFrequency(benchmark::State& state) {
    const Setup s(128, 180);
    const auto filter = w_filter(3.0, filter_fft_size(s.sino.n_s()), 1.0);
    const auto weights = direction_weights(s.angles, 2);
    for (auto _ : state) benchmark::DoNotOptimize(convolve_s(s.sino, filter, weights));
}
BENCHMARK(BM_ConvolveFrequency)->Unit(benchmark::kMillisecond);

void BM_Method1Combined(benchmark::State& state) {
    const Setup s(128, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(method1_gradient_combined(s.sino, 3.0, s.grid));
}
BENCHMARK(BM_Method1Combined)->Arg(36)->Arg(180)->Unit(benchmark::kMillisecond);

void BM_IstaIterations(benchmark::State& state) {
    const Setup s(128, 36);
    IstaConfig config;
    config.lambda = 0.02;
    config.lambda_mode = LambdaMode::relative_to_data;
    config.max_iters = static_cast<std::size_t>(state.range(0));
    config.rel_tol = 0.0;
    const auto op = radon_operator(s.grid, s.angles, s.detector);
    const double lipschitz = estimate_lipschitz(op, config.lipschitz_iters, config.seed).value;
    for (auto _ : state) benchmark::DoNotOptimize(ista_solve(op, s.sino.values(), config, lipschitz));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IstaIterations)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_PowerMethod(benchmark::State& state) {
    const Setup s(128, 180);
    const auto op = radon_operator(s.grid, s.angles, s.detector);
    for (auto _ : state) benchmark::DoNotOptimize(estimate_lipschitz(op, 20, 0));
}
BENCHMARK(BM_PowerMethod)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
