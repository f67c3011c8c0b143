#include "stc/model.hpp"

#include <cmath>

namespace stc {

namespace {

void check_params(const FlatTensor& params, const ModelSpec& spec) {
    if (params.len() != spec.param_count())
        throw ShapeError("model: params length " + std::to_string(params.len()) +
                         " does not match spec parameter count " +
                         std::to_string(spec.param_count()));
}

void check_batch(const ModelSpec& spec, const Batch& batch) {
    if (batch.dim != spec.input_dim) throw ShapeError("model: batch dim mismatch");
    if (batch.inputs.size() != batch.size() * batch.dim)
        throw ShapeError("model: batch rows/labels mismatch");
}

double dot(const float* a, const float* b, std::size_t n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += static_cast<double>(a[i]) * b[i];
        s1 += static_cast<double>(a[i + 1]) * b[i + 1];
        s2 += static_cast<double>(a[i + 2]) * b[i + 2];
        s3 += static_cast<double>(a[i + 3]) * b[i + 3];
    }
    for (; i < n; ++i) s0 += static_cast<double>(a[i]) * b[i];
    return ((s0 + s1) + (s2 + s3));
}

// Scratch for one forward/backward pass; sized for the given spec.
struct Workspace {
    std::vector<double> logits;
    std::vector<double> probs;
    std::vector<double> hidden_pre; // mlp
    std::vector<double> hidden;     // mlp
    std::vector<double> dz;
    std::vector<double> dhidden;    // mlp

    explicit Workspace(const ModelSpec& spec)
        : logits(spec.num_classes),
          probs(spec.num_classes),
          dz(spec.num_classes) {
        if (spec.kind == ModelKind::mlp) {
            hidden_pre.resize(spec.hidden_dim);
            hidden.resize(spec.hidden_dim);
            dhidden.resize(spec.hidden_dim);
        }
    }
};

// Layer offsets into the flat parameter vector.
struct Layout {
    std::size_t w1 = 0, b1 = 0, w2 = 0, b2 = 0;
    explicit Layout(const ModelSpec& spec) {
        std::size_t d = spec.input_dim, k = spec.num_classes, h = spec.hidden_dim;
        if (spec.kind == ModelKind::logreg) {
            w1 = 0;
            b1 = k * d;
        } else {
            w1 = 0;
            b1 = h * d;
            w2 = b1 + h;
            b2 = w2 + k * h;
        }
    }
};

void forward(const FlatTensor& params, const ModelSpec& spec, const float* x, Workspace& ws) {
    const Layout L(spec);
    const float* P = params.data();
    const std::size_t d = spec.input_dim, k = spec.num_classes;
    if (spec.kind == ModelKind::logreg) {
        for (std::size_t c = 0; c < k; ++c)
            ws.logits[c] = dot(P + L.w1 + c * d, x, d) + P[L.b1 + c];
    } else {
        const std::size_t h = spec.hidden_dim;
        for (std::size_t u = 0; u < h; ++u) {
            ws.hidden_pre[u] = dot(P + L.w1 + u * d, x, d) + P[L.b1 + u];
            ws.hidden[u] = ws.hidden_pre[u] > 0.0 ? ws.hidden_pre[u] : 0.0;
        }
        for (std::size_t c = 0; c < k; ++c) {
            const float* w = P + L.w2 + c * h;
            double s = 0.0;
            for (std::size_t u = 0; u < h; ++u) s += static_cast<double>(w[u]) * ws.hidden[u];
            ws.logits[c] = s + P[L.b2 + c];
        }
    }
}

// Stable softmax; returns the log normalizer for the loss.
double softmax(Workspace& ws, std::size_t k) {
    double zmax = ws.logits[0];
    for (std::size_t c = 1; c < k; ++c)
        if (ws.logits[c] > zmax) zmax = ws.logits[c];
    double denom = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        ws.probs[c] = std::exp(ws.logits[c] - zmax);
        denom += ws.probs[c];
    }
    for (std::size_t c = 0; c < k; ++c) ws.probs[c] /= denom;
    return zmax + std::log(denom);
}

// Accumulate weight * (per-sample gradient) into acc (same layout as params).
void backward(const FlatTensor& params, const ModelSpec& spec, const float* x,
              std::int32_t y, double weight, Workspace& ws, double* acc) {
    const Layout L(spec);
    const float* P = params.data();
    const std::size_t d = spec.input_dim, k = spec.num_classes;
    for (std::size_t c = 0; c < k; ++c)
        ws.dz[c] = weight * (ws.probs[c] - (static_cast<std::int32_t>(c) == y ? 1.0 : 0.0));

    if (spec.kind == ModelKind::logreg) {
        for (std::size_t c = 0; c < k; ++c) {
            double g = ws.dz[c];
            double* row = acc + L.w1 + c * d;
            for (std::size_t j = 0; j < d; ++j) row[j] += g * x[j];
            acc[L.b1 + c] += g;
        }
    } else {
        const std::size_t h = spec.hidden_dim;
        for (std::size_t u = 0; u < h; ++u) ws.dhidden[u] = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            double g = ws.dz[c];
            double* row = acc + L.w2 + c * h;
            const float* w = P + L.w2 + c * h;
            for (std::size_t u = 0; u < h; ++u) {
                row[u] += g * ws.hidden[u];
                ws.dhidden[u] += g * static_cast<double>(w[u]);
            }
            acc[L.b2 + c] += g;
        }
        for (std::size_t u = 0; u < h; ++u) {
            if (ws.hidden_pre[u] <= 0.0) continue;
            double g = ws.dhidden[u];
            double* row = acc + L.w1 + u * d;
            for (std::size_t j = 0; j < d; ++j) row[j] += g * x[j];
            acc[L.b1 + u] += g;
        }
    }
}

} // namespace

Batch gather_batch(const Dataset& d, std::span<const std::uint32_t> indices,
                   const InputTransform& t) {
    Batch b;
    b.dim = d.dim;
    b.inputs.resize(indices.size() * d.dim);
    b.labels.resize(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const float* src = d.row(indices[i]);
        float* dst = b.inputs.data() + i * d.dim;
        for (std::uint32_t j = 0; j < d.dim; ++j) dst[j] = t.apply(src[j]);
        b.labels[i] = d.labels[indices[i]];
    }
    return b;
}

double loss(const FlatTensor& params, const ModelSpec& spec, const Batch& batch) {
    check_params(params, spec);
    check_batch(spec, batch);
    if (batch.size() == 0) throw ArgumentError("loss: empty batch");
    Workspace ws(spec);
    double total = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        forward(params, spec, batch.row(i), ws);
        double log_z = softmax(ws, spec.num_classes);
        total += log_z - ws.logits[batch.labels[i]];
    }
    return total / static_cast<double>(batch.size());
}

FlatTensor grad(const FlatTensor& params, const ModelSpec& spec, const Batch& batch) {
    check_params(params, spec);
    check_batch(spec, batch);
    if (batch.size() == 0) throw ArgumentError("grad: empty batch");
    Workspace ws(spec);
    std::vector<double> acc(params.len(), 0.0);
    const double w = 1.0 / static_cast<double>(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        forward(params, spec, batch.row(i), ws);
        softmax(ws, spec.num_classes);
        backward(params, spec, batch.row(i), batch.labels[i], w, ws, acc.data());
    }
    FlatTensor g(params.len());
    for (std::size_t i = 0; i < params.len(); ++i) g[i] = static_cast<float>(acc[i]);
    return g;
}

FlatTensor init_params(const ModelSpec& spec, std::uint64_t seed) {
    FlatTensor params(spec.param_count());
    if (spec.kind == ModelKind::logreg) return params; // zero init
    const Layout L(spec);
    const std::size_t d = spec.input_dim, k = spec.num_classes, h = spec.hidden_dim;
    Rng rng(mix_seed(seed, 0x1217));
    auto glorot = [&](std::size_t offset, std::size_t count, std::size_t fan_in,
                      std::size_t fan_out) {
        float bound = std::sqrt(6.0f / static_cast<float>(fan_in + fan_out));
        for (std::size_t i = 0; i < count; ++i)
            params[offset + i] = bound * (2.0f * static_cast<float>(rng.unit()) - 1.0f);
    };
    glorot(L.w1, h * d, d, h);
    glorot(L.w2, k * h, h, k);
    return params;
}

void sgd_step(SgdState& state, const OptimConfig& cfg, const ModelSpec& spec, const Batch& batch) {
    check_same_len(state.params, state.momentum, "sgd_step");
    FlatTensor g = grad(state.params, spec, batch);
    const float m = cfg.momentum;
    const float lr = cfg.lr;
    for (std::size_t i = 0; i < g.len(); ++i) {
        state.momentum[i] = m * state.momentum[i] + g[i];
        state.params[i] -= lr * state.momentum[i];
    }
}

std::vector<std::uint32_t> EpochSampler::next(std::size_t want) {
    if (!primed_) throw ArgumentError("EpochSampler: not primed");
    if (order_.empty()) throw DataError("EpochSampler: empty shard");
    if (cursor_ >= order_.size()) {
        rng_.shuffle(order_);
        cursor_ = 0;
    }
    std::size_t take = std::min(want, order_.size() - cursor_);
    std::vector<std::uint32_t> out(order_.begin() + static_cast<std::ptrdiff_t>(cursor_),
                                   order_.begin() + static_cast<std::ptrdiff_t>(cursor_ + take));
    cursor_ += take;
    return out;
}

FlatTensor local_round(TrainState& state, const OptimConfig& cfg, const ModelSpec& spec,
                       const Dataset& data, std::span<const std::uint32_t> shard,
                       const InputTransform& t, std::uint32_t iters, std::uint64_t seed) {
    if (iters < 1) throw ArgumentError("local_round: iters must be >= 1");
    if (shard.empty()) throw DataError("local_round: empty shard");
    if (!state.sampler.primed()) state.sampler.prime(shard.size(), seed);

    FlatTensor before = state.sgd.params;
    std::vector<std::uint32_t> ids;
    for (std::uint32_t it = 0; it < iters; ++it) {
        std::vector<std::uint32_t> local = state.sampler.next(cfg.batch_size);
        ids.resize(local.size());
        for (std::size_t i = 0; i < local.size(); ++i) ids[i] = shard[local[i]];
        Batch batch = gather_batch(data, ids, t);
        sgd_step(state.sgd, cfg, spec, batch);
    }
    return sub(state.sgd.params, before);
}

double evaluate(const FlatTensor& params, const ModelSpec& spec, const Dataset& test,
                const InputTransform& t) {
    check_params(params, spec);
    if (test.size() == 0) return 0.0;
    if (test.dim != spec.input_dim) throw ShapeError("evaluate: dataset dim mismatch");
    Workspace ws(spec);
    std::vector<float> x(test.dim);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < test.size(); ++i) {
        const float* src = test.row(i);
        for (std::uint32_t j = 0; j < test.dim; ++j) x[j] = t.apply(src[j]);
        forward(params, spec, x.data(), ws);
        std::size_t best = 0;
        for (std::size_t c = 1; c < spec.num_classes; ++c)
            if (ws.logits[c] > ws.logits[best]) best = c;
        if (static_cast<std::int32_t>(best) == test.labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(test.size());
}

} // namespace stc
