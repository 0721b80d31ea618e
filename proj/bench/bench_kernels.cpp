// Serial reference vs OpenMP kernels on D(n, p) chains, d = 3.
// DWALK_THREADS caps the OpenMP side.

#include <benchmark/benchmark.h>

#include <map>

#include "dwalk/chain.hpp"
#include "dwalk/digraph.hpp"
#include "dwalk/kernels.hpp"
#include "dwalk/rng.hpp"

using namespace dwalk;

namespace {

const Chain& chain_for(std::size_t n) {
    static std::map<std::size_t, Chain> cache;
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, chain_from(generate({n, edge_probability(n, 3.0), 7, GenMethod::geometric_jump}))).first;
    return it->second;
}

RowBlock random_rows(std::size_t k, std::size_t n) {
    RowBlock b(k, n);
    Rng rng(99);
    for (std::size_t i = 0; i < k; ++i) {
        double s = 0;
        for (auto& x : b.row(i)) s += (x = rng.uniform());
        for (auto& x : b.row(i)) x /= s;
    }
    return b;
}

template <bool Parallel>
void BM_propagate(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    const auto& c = chain_for(n);
    const auto x = random_rows(1, n);
    std::vector<double> y(n);
    for (auto _ : st) {
        if constexpr (Parallel) kernels::propagate(c, x.row(0), y);
        else kernels::serial::propagate(c, x.row(0), y);
        benchmark::DoNotOptimize(y.data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(c.nnz()));
}

template <bool Parallel>
void BM_propagate_many(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    const auto k = static_cast<std::size_t>(st.range(1));
    const auto& c = chain_for(n);
    const auto x = random_rows(k, n);
    RowBlock y(k, n);
    for (auto _ : st) {
        if constexpr (Parallel) kernels::propagate_many(c, x, y);
        else kernels::serial::propagate_many(c, x, y);
        benchmark::DoNotOptimize(y.data.data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(c.nnz() * k));
}

template <bool Parallel>
void BM_max_pairwise_tv(benchmark::State& st) {
    const auto k = static_cast<std::size_t>(st.range(0));
    const auto n = static_cast<std::size_t>(st.range(1));
    const auto x = random_rows(k, n);
    for (auto _ : st) {
        double v = Parallel ? kernels::max_pairwise_tv(x) : kernels::serial::max_pairwise_tv(x);
        benchmark::DoNotOptimize(v);
    }
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(k * (k - 1) / 2 * n));
}

} // namespace

BENCHMARK(BM_propagate<false>)->Name("propagate/serial")->Arg(2000)->Arg(20000);
BENCHMARK(BM_propagate<true>)->Name("propagate/omp")->Arg(2000)->Arg(20000);
BENCHMARK(BM_propagate_many<false>)->Name("propagate_many/serial")->Args({2000, 256});
BENCHMARK(BM_propagate_many<true>)->Name("propagate_many/omp")->Args({2000, 256});
BENCHMARK(BM_max_pairwise_tv<false>)->Name("max_pairwise_tv/serial")->Args({256, 2000})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_max_pairwise_tv<true>)->Name("max_pairwise_tv/omp")->Args({256, 2000})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
