#include <benchmark/benchmark.h>

#include "pizza/pizza.hpp"

using namespace pizza;

namespace {

struct ExactCase {
    Arrangement arr;
    HalfOpenRegion body;
    ExactCase(const std::string& type, const std::vector<long>& seed, const std::vector<long>& a) : arr(type) {
        const Field& f = arr.field();
        FVector p, t;
        for (long x : seed) p.push_back(AlgebraicNumber(f, Rational(x)));
        for (long x : a) t.push_back(AlgebraicNumber(f, Rational(x, 10)));
        body = transform(orbit_body(arr.group(), p).hrep, FMatrix::identity(f, arr.dim()), t);
    }
};

ExactCase& b3() {
    static ExactCase c("B3", {5, 3, 1}, {2, 1, 1});
    return c;
}

ExactCase& d4() {
    static ExactCase c("D4", {7, 5, 3, 1}, {2, 1, 1, 1});
    return c;
}

void exact_serial_b3(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(exact_pizza_serial(b3().arr, b3().body, Valuation::Volume).total);
}
void exact_parallel_b3(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(exact_pizza_parallel(b3().arr, b3().body, Valuation::Volume).total);
}
void exact_serial_d4(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(exact_pizza_serial(d4().arr, d4().body, Valuation::Volume).total);
}
void exact_parallel_d4(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(exact_pizza_parallel(d4().arr, d4().body, Valuation::Volume).total);
}

struct McCase {
    Arrangement arr{"I2(8)"};
    Body ball = ball_body(arr.field(), AlgebraicNumber(arr.field(), Rational(1)));
    FVector a{AlgebraicNumber(arr.field(), Rational(1, 5)), AlgebraicNumber(arr.field(), Rational(1, 10))};
};

McCase& mc() {
    static McCase c;
    return c;
}

void mc_serial(benchmark::State& st) {
    McConfig cfg;
    cfg.samples = static_cast<std::uint64_t>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(mc_pizza_serial(mc().arr, mc().ball, mc().a, cfg).estimate);
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
void mc_parallel(benchmark::State& st) {
    McConfig cfg;
    cfg.samples = static_cast<std::uint64_t>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(mc_pizza_parallel(mc().arr, mc().ball, mc().a, cfg).estimate);
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

}  // namespace

BENCHMARK(exact_serial_b3)->Unit(benchmark::kMillisecond);
BENCHMARK(exact_parallel_b3)->Unit(benchmark::kMillisecond);
BENCHMARK(exact_serial_d4)->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK(exact_parallel_d4)->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK(mc_serial)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(mc_parallel)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
