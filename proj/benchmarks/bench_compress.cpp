#include <benchmark/benchmark.h>

#include "stc/compress.hpp"
#include "stc/rng.hpp"

namespace {

stc::FlatTensor random_tensor(std::size_t n, std::uint64_t seed) {
    stc::Rng rng(seed);
    stc::FlatTensor t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<float>(rng.normal());
    return t;
}

void BM_StcCompress(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    stc::FlatTensor t = random_tensor(n, 11);
    for (auto _ : state) {
        auto u = stc::stc_compress(t, 1.0 / 400.0);
        benchmark::DoNotOptimize(u);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n));
}
BENCHMARK(BM_StcCompress)->Arg(7850)->Arg(100000)->Arg(1000000);

void BM_TopKSparsify(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    stc::FlatTensor t = random_tensor(n, 13);
    for (auto _ : state) {
        auto s = stc::top_k_sparsify(t, 1.0 / 400.0);
        benchmark::DoNotOptimize(s);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n));
}
BENCHMARK(BM_TopKSparsify)->Arg(7850)->Arg(100000)->Arg(1000000);

} // namespace
