#include "stc/congruence.hpp"

#include <vector>

namespace stc {

namespace {

// Full-data gradient, accumulated chunkwise to avoid one giant batch copy.
std::vector<double> full_gradient(const FlatTensor& params, const ModelSpec& spec,
                                  const Dataset& data, const InputTransform& t) {
    constexpr std::size_t kChunk = 2048;
    std::vector<double> acc(params.len(), 0.0);
    std::vector<std::uint32_t> ids;
    for (std::size_t start = 0; start < data.size(); start += kChunk) {
        std::size_t end = std::min(start + kChunk, data.size());
        ids.resize(end - start);
        for (std::size_t i = start; i < end; ++i)
            ids[i - start] = static_cast<std::uint32_t>(i);
        FlatTensor g = grad(params, spec, gather_batch(data, ids, t));
        double w = static_cast<double>(ids.size());
        for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += w * g[j];
    }
    for (double& x : acc) x /= static_cast<double>(data.size());
    return acc;
}

} // namespace

double congruence_alpha(const FlatTensor& params, const ModelSpec& spec, const Dataset& data,
                        const InputTransform& t, std::uint32_t k, BatchMode mode,
                        std::uint32_t trials, std::uint64_t seed) {
    if (k < 1) throw ArgumentError("congruence_alpha: k must be >= 1");
    if (trials < 1) throw ArgumentError("congruence_alpha: trials must be >= 1");
    if (data.size() < k) throw DataError("congruence_alpha: dataset smaller than batch size");

    std::vector<double> gfull = full_gradient(params, spec, data, t);
    std::vector<std::int8_t> sfull(gfull.size());
    for (std::size_t i = 0; i < gfull.size(); ++i) sfull[i] = gfull[i] >= 0.0 ? 1 : -1;

    std::vector<std::vector<std::uint32_t>> by_class;
    if (mode == BatchMode::single_class) {
        by_class.resize(data.num_classes);
        for (std::uint32_t i = 0; i < data.size(); ++i)
            by_class[static_cast<std::uint32_t>(data.labels[i])].push_back(i);
    }

    Rng rng(mix_seed(seed, 0xa1fa));
    double agree_sum = 0.0;
    std::vector<std::uint32_t> ids;
    for (std::uint32_t trial = 0; trial < trials; ++trial) {
        if (mode == BatchMode::iid) {
            auto picks = rng.sample_without_replacement(static_cast<std::uint32_t>(data.size()), k);
            ids.assign(picks.begin(), picks.end());
        } else {
            const auto& members = by_class[static_cast<std::uint32_t>(rng.below(data.num_classes))];
            if (members.size() < k)
                throw DataError("congruence_alpha: class has fewer than k samples");
            auto picks =
                rng.sample_without_replacement(static_cast<std::uint32_t>(members.size()), k);
            ids.resize(k);
            for (std::uint32_t i = 0; i < k; ++i) ids[i] = members[picks[i]];
        }
        FlatTensor g = grad(params, spec, gather_batch(data, ids, t));
        std::size_t match = 0;
        for (std::size_t j = 0; j < g.len(); ++j) {
            std::int8_t s = g[j] >= 0.0f ? 1 : -1;
            if (s == sfull[j]) ++match;
        }
        agree_sum += static_cast<double>(match) / static_cast<double>(g.len());
    }
    return agree_sum / static_cast<double>(trials);
}

} // namespace stc
