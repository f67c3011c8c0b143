#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stc/data.hpp"
#include "stc/rng.hpp"
#include "stc/tensor.hpp"

namespace stc {

enum class ModelKind { logreg, mlp };

struct ModelSpec {
    ModelKind kind = ModelKind::logreg;
    std::uint32_t input_dim = 0;
    std::uint32_t num_classes = 0;
    std::uint32_t hidden_dim = 128; // mlp only

    std::size_t param_count() const {
        std::size_t d = input_dim, k = num_classes, h = hidden_dim;
        if (kind == ModelKind::logreg) return k * d + k;
        return h * d + h + k * h + k;
    }
};

struct OptimConfig {
    float lr = 0.01f;
    float momentum = 0.0f; // in [0, 1)
    std::uint32_t batch_size = 1;
};

struct Batch {
    std::vector<float> inputs; // row-major size() x dim
    std::vector<std::int32_t> labels;
    std::uint32_t dim = 0;

    std::size_t size() const { return labels.size(); }
    const float* row(std::size_t i) const { return inputs.data() + i * dim; }
};

// Copy the given dataset rows into a batch, applying the input transform.
Batch gather_batch(const Dataset& d, std::span<const std::uint32_t> indices,
                   const InputTransform& t);

// Mean softmax cross-entropy over the batch.
double loss(const FlatTensor& params, const ModelSpec& spec, const Batch& batch);

// Gradient of loss w.r.t. params, same length as params.
FlatTensor grad(const FlatTensor& params, const ModelSpec& spec, const Batch& batch);

// Zeros for logreg; Glorot-uniform layer weights (zero biases) for the MLP.
FlatTensor init_params(const ModelSpec& spec, std::uint64_t seed);

// Classical momentum: v <- m*v + g; params <- params - lr*v.
struct SgdState {
    FlatTensor params;
    FlatTensor momentum;
};

void sgd_step(SgdState& state, const OptimConfig& cfg, const ModelSpec& spec, const Batch& batch);

// Epoch-shuffled batch index source (without replacement; the trailing
// partial batch of an epoch is kept).
class EpochSampler {
public:
    EpochSampler() = default;

    bool primed() const { return primed_; }

    void prime(std::size_t n, std::uint64_t seed) {
        order_.resize(n);
        for (std::size_t i = 0; i < n; ++i) order_[i] = static_cast<std::uint32_t>(i);
        rng_.reseed(seed);
        rng_.shuffle(order_);
        cursor_ = 0;
        primed_ = true;
    }

    std::vector<std::uint32_t> next(std::size_t want);

private:
    Rng rng_;
    std::vector<std::uint32_t> order_;
    std::size_t cursor_ = 0;
    bool primed_ = false;
};

struct TrainState {
    SgdState sgd;
    EpochSampler sampler;
};

// Run `iters` SGD steps on batches drawn from the shard (dataset indices);
// returns params_after - params_before. The sampler is primed with `seed` on
// first use and chains across calls, so composing rounds is equivalent to one
// longer round.
FlatTensor local_round(TrainState& state, const OptimConfig& cfg, const ModelSpec& spec,
                       const Dataset& data, std::span<const std::uint32_t> shard,
                       const InputTransform& t, std::uint32_t iters, std::uint64_t seed);

// Top-1 accuracy (argmax ties resolve to the lowest class index).
double evaluate(const FlatTensor& params, const ModelSpec& spec, const Dataset& test,
                const InputTransform& t);

} // namespace stc
