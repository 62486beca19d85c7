#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "qpan/continuation.hpp"
#include "qpan/nevanlinna.hpp"
#include "qpan/params.hpp"
#include "qpan/poly.hpp"
#include "qpan/rational.hpp"
#include "qpan/series.hpp"
#include "qpan/solver.hpp"

namespace {

using complexd = std::complex<double>;
using Params = qpan::EquationParams<double>;

Params bench_params() { return Params{{1.0}, {1.0}, {0.3}, {0.7}, {0.5}}; }

qpan::TruncatedSeries<double> dense_series(int order) {
    std::vector<complexd> c(static_cast<std::size_t>(order) + 1);
    for (int n = 0; n <= order; ++n)
        c[static_cast<std::size_t>(n)] =
            complexd{1.0 / (1.0 + n), 0.5 / (2.0 + n)};
    return qpan::TruncatedSeries<double>::taylor(complexd{}, std::move(c));
}

void series_mul(benchmark::State& state) {
    auto a = dense_series(static_cast<int>(state.range(0)));
    auto b = dense_series(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto c = mul(a, b);
        benchmark::DoNotOptimize(c);
    }
}
BENCHMARK(series_mul)->Arg(64)->Arg(256);

void entire_expansion(benchmark::State& state) {
    Params p = bench_params();
    for (auto _ : state) {
        auto sol = qpan::solve_entire(p, complexd{}, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(sol);
    }
}
BENCHMARK(entire_expansion)->Arg(64)->Arg(256);

void origin_pole_expansion(benchmark::State& state) {
    Params p = bench_params();
    for (auto _ : state) {
        auto sol = qpan::solve_laurent_origin(p, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(sol);
    }
}
BENCHMARK(origin_pole_expansion)->Arg(64)->Arg(256);

void proximity_quadrature(benchmark::State& state) {
    qpan::RationalFunction<double> f(
        qpan::Polynomial<double>({complexd{1.0}, complexd{}, complexd{1.0}}),
        qpan::Polynomial<double>({complexd{-3.0}, complexd{1.0}}), true);
    auto poles = qpan::rational_poles(f);
    auto eval = [&f](complexd z) { return evaluate(f, z); };
    for (auto _ : state) {
        double m = qpan::proximity(eval, 50.0, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(m);
    }
}
BENCHMARK(proximity_quadrature)->Arg(1024)->Arg(4096);

void continued_evaluation(benchmark::State& state) {
    Params p = bench_params();
    auto sol = qpan::solve_entire(p, complexd{}, 64);
    const int k = static_cast<int>(state.range(0));
    complexd z = std::polar(sol.radius * (0.9 * (1 << k)), 0.7);
    for (auto _ : state) {
        complexd v = qpan::evaluate_continued(p, sol, z, k);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(continued_evaluation)->Arg(1)->Arg(2);

} // namespace

BENCHMARK_MAIN();
