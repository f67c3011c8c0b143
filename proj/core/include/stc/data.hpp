#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stc/errors.hpp"

namespace stc {

// Labeled dataset with row-major inputs in [0, 1].
struct Dataset {
    std::vector<float> inputs; // size() * dim values
    std::vector<std::int32_t> labels;
    std::uint32_t dim = 0;
    std::uint32_t num_classes = 0;

    std::size_t size() const { return labels.size(); }
    const float* row(std::size_t i) const { return inputs.data() + i * dim; }
};

// IDX readers (images magic 0x00000803, labels magic 0x00000801, big-endian
// dimensions, u8 payload scaled by 1/255).
Dataset load_idx(const std::string& images_path, const std::string& labels_path);

// Gaussian clusters around per-class anchor means inside [0, 1]^dim; the
// per-coordinate noise std is spread/sqrt(dim), so `spread` is roughly the
// expected noise radius.
Dataset synth_blobs(std::uint32_t num_classes, std::uint32_t per_class, std::uint32_t dim,
                    float spread, std::uint64_t seed);

// Affine input view applied at batch assembly: x -> (x - shift) * scale.
struct InputTransform {
    float shift = 0.0f;
    float scale = 1.0f;

    static InputTransform identity() { return {}; }
    // Global mean/std standardization fitted on a (training) dataset.
    static InputTransform standardize(const Dataset& d);

    float apply(float x) const { return (x - shift) * scale; }
};

} // namespace stc
