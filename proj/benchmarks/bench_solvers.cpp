// Microbenchmarks for the hot paths: minimum enclosing balls, geometric
// medians, Hausdorff distances, measurement grouping and full reports.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "optrec/average_case.hpp"
#include "optrec/io.hpp"
#include "optrec/metric.hpp"
#include "optrec/worst_case.hpp"

using namespace optrec;

namespace {

std::vector<Point> random_points(std::size_t dim, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Point> pts(n, Point(dim));
    for (auto& p : pts)
        for (double& c : p) c = gauss(rng);
    return pts;
}

Problem random_problem(std::size_t n_model, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t n = 4, m = 2;
    Matrix a(m, Point(n));
    for (auto& row : a)
        for (double& v : row) v = gauss(rng);
    std::vector<Point> model = random_points(n, n_model, seed ^ 1);
    std::vector<Point> noise = random_points(m, 3, seed ^ 2);
    return Problem{MetricSpace::euclidean(n), MetricSpace::euclidean(m),
                   {std::move(model)}, {std::move(noise)},
                   LinearAdditive{std::move(a)}, 1e-9};
}

void bm_enclosing_ball(benchmark::State& state) {
    const auto pts = random_points(state.range(0), state.range(1), 7);
    for (auto _ : state)
        benchmark::DoNotOptimize(chebyshev_center_euclidean(pts));
}
BENCHMARK(bm_enclosing_ball)->Args({2, 16})->Args({3, 64})->Args({4, 256});

void bm_geometric_median(benchmark::State& state) {
    const auto pts = random_points(state.range(0), state.range(1), 11);
    const std::vector<double> w(pts.size(), 1.0 / pts.size());
    for (auto _ : state)
        benchmark::DoNotOptimize(weighted_geometric_median(pts, w));
}
BENCHMARK(bm_geometric_median)->Args({2, 16})->Args({3, 64});

void bm_hausdorff(benchmark::State& state) {
    const auto m = MetricSpace::euclidean(3);
    const auto a = random_points(3, state.range(0), 3);
    const auto b = random_points(3, state.range(0), 4);
    for (auto _ : state)
        benchmark::DoNotOptimize(hausdorff_set_set(m, a, b));
}
BENCHMARK(bm_hausdorff)->Arg(16)->Arg(64)->Arg(256);

void bm_measurement_table(benchmark::State& state) {
    const auto p = random_problem(state.range(0), 5);
    for (auto _ : state)
        benchmark::DoNotOptimize(build_measurement_table(p));
}
BENCHMARK(bm_measurement_table)->Arg(16)->Arg(128);

void bm_worst_case_report(benchmark::State& state) {
    const auto p = random_problem(state.range(0), 9);
    for (auto _ : state)
        benchmark::DoNotOptimize(worst_case_report(p));
}
BENCHMARK(bm_worst_case_report)->Arg(16)->Arg(64);

void bm_average_report(benchmark::State& state) {
    const auto p = random_problem(state.range(0), 13);
    const auto mu = uniform_measure(p.model_class.points.size(),
                                    p.noise_class.points.size());
    for (auto _ : state)
        benchmark::DoNotOptimize(average_report(p, mu, 2.0));
}
BENCHMARK(bm_average_report)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
