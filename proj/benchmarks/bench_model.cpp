#include <benchmark/benchmark.h>

#include "stc/data.hpp"
#include "stc/model.hpp"

namespace {

void BM_Grad(benchmark::State& state) {
    const auto batch_size = static_cast<std::uint32_t>(state.range(0));
    stc::Dataset data = stc::synth_blobs(10, 64, 784, 0.3f, 5);
    stc::ModelSpec spec{stc::ModelKind::logreg, data.dim, data.num_classes};
    stc::FlatTensor params = stc::init_params(spec, 1);

    std::vector<std::uint32_t> ids(batch_size);
    for (std::uint32_t i = 0; i < batch_size; ++i) ids[i] = i;
    stc::Batch batch = gather_batch(data, ids, stc::InputTransform::standardize(data));

    for (auto _ : state) {
        auto g = stc::grad(params, spec, batch);
        benchmark::DoNotOptimize(g);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * batch_size);
}
BENCHMARK(BM_Grad)->Arg(1)->Arg(20)->Arg(256);

void BM_MlpGrad(benchmark::State& state) {
    const auto batch_size = static_cast<std::uint32_t>(state.range(0));
    stc::Dataset data = stc::synth_blobs(10, 64, 784, 0.3f, 5);
    stc::ModelSpec spec{stc::ModelKind::mlp, data.dim, data.num_classes, 128};
    stc::FlatTensor params = stc::init_params(spec, 1);

    std::vector<std::uint32_t> ids(batch_size);
    for (std::uint32_t i = 0; i < batch_size; ++i) ids[i] = i;
    stc::Batch batch = gather_batch(data, ids, stc::InputTransform::standardize(data));

    for (auto _ : state) {
        auto g = stc::grad(params, spec, batch);
        benchmark::DoNotOptimize(g);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * batch_size);
}
BENCHMARK(BM_MlpGrad)->Arg(1)->Arg(20);

} // namespace
