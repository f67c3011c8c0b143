#include <benchmark/benchmark.h>

#include "stc/codec.hpp"
#include "stc/rng.hpp"

namespace {

stc::FlatTensor random_tensor(std::size_t n, std::uint64_t seed) {
    stc::Rng rng(seed);
    stc::FlatTensor t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<float>(rng.normal());
    return t;
}

void BM_GolombEncode(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const double p = 1.0 / 400.0;
    stc::SparseTernaryUpdate u = stc_compress(random_tensor(n, 7), p);
    for (auto _ : state) {
        auto e = stc::golomb_encode(u, p);
        benchmark::DoNotOptimize(e);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(u.count()));
}
BENCHMARK(BM_GolombEncode)->Arg(7850)->Arg(100000)->Arg(1000000);

void BM_GolombDecode(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const double p = 1.0 / 400.0;
    auto e = stc::golomb_encode(stc_compress(random_tensor(n, 7), p), p);
    for (auto _ : state) {
        auto u = stc::golomb_decode(e);
        benchmark::DoNotOptimize(u);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(e.count));
}
BENCHMARK(BM_GolombDecode)->Arg(7850)->Arg(100000)->Arg(1000000);

} // namespace
