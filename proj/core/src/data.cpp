#include "stc/data.hpp"

#include <cmath>
#include <fstream>

#include "stc/rng.hpp"

namespace stc {

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

std::uint32_t read_u32_be(std::istream& in, const std::string& path) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4))
        throw FormatError("idx: truncated header in " + path);
    return (static_cast<std::uint32_t>(b[0]) << 24) | (static_cast<std::uint32_t>(b[1]) << 16) |
           (static_cast<std::uint32_t>(b[2]) << 8) | static_cast<std::uint32_t>(b[3]);
}

} // namespace

Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
    std::ifstream img(images_path, std::ios::binary);
    if (!img) throw DataError("idx: cannot open " + images_path);
    std::ifstream lbl(labels_path, std::ios::binary);
    if (!lbl) throw DataError("idx: cannot open " + labels_path);

    std::uint32_t magic = read_u32_be(img, images_path);
    if (magic != kImagesMagic)
        throw FormatError("idx: bad images magic in " + images_path);
    std::uint32_t n = read_u32_be(img, images_path);
    std::uint32_t rows = read_u32_be(img, images_path);
    std::uint32_t cols = read_u32_be(img, images_path);

    magic = read_u32_be(lbl, labels_path);
    if (magic != kLabelsMagic)
        throw FormatError("idx: bad labels magic in " + labels_path);
    std::uint32_t n_labels = read_u32_be(lbl, labels_path);
    if (n != n_labels)
        throw FormatError("idx: image/label count mismatch (" + std::to_string(n) + " vs " +
                          std::to_string(n_labels) + ")");

    Dataset d;
    d.dim = rows * cols;
    d.inputs.resize(static_cast<std::size_t>(n) * d.dim);
    d.labels.resize(n);

    std::vector<unsigned char> buf(static_cast<std::size_t>(n) * d.dim);
    if (!img.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size())))
        throw FormatError("idx: truncated image payload in " + images_path);
    for (std::size_t i = 0; i < buf.size(); ++i)
        d.inputs[i] = static_cast<float>(buf[i]) * (1.0f / 255.0f);

    std::vector<unsigned char> lab(n);
    if (!lbl.read(reinterpret_cast<char*>(lab.data()), static_cast<std::streamsize>(lab.size())))
        throw FormatError("idx: truncated label payload in " + labels_path);
    std::int32_t max_label = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        d.labels[i] = static_cast<std::int32_t>(lab[i]);
        if (d.labels[i] > max_label) max_label = d.labels[i];
    }
    d.num_classes = static_cast<std::uint32_t>(max_label) + 1;
    return d;
}

Dataset synth_blobs(std::uint32_t num_classes, std::uint32_t per_class, std::uint32_t dim,
                    float spread, std::uint64_t seed) {
    if (num_classes == 0 || per_class == 0 || dim == 0)
        throw ArgumentError("synth_blobs: sizes must be positive");

    Rng rng(mix_seed(seed, 0xb10b5));

    // Anchor means: one coordinate per class is raised when dim allows,
    // otherwise random corners; either way means are distinct.
    std::vector<float> means(static_cast<std::size_t>(num_classes) * dim, 0.15f);
    for (std::uint32_t c = 0; c < num_classes; ++c) {
        if (dim >= num_classes) {
            means[static_cast<std::size_t>(c) * dim + c] = 0.85f;
        } else {
            for (std::uint32_t j = 0; j < dim; ++j)
                means[static_cast<std::size_t>(c) * dim + j] = rng.unit() > 0.5 ? 0.85f : 0.15f;
        }
    }

    Dataset d;
    d.dim = dim;
    d.num_classes = num_classes;
    d.inputs.resize(static_cast<std::size_t>(num_classes) * per_class * dim);
    d.labels.resize(static_cast<std::size_t>(num_classes) * per_class);

    const float noise_std = spread / std::sqrt(static_cast<float>(dim));
    std::size_t row = 0;
    for (std::uint32_t c = 0; c < num_classes; ++c) {
        for (std::uint32_t s = 0; s < per_class; ++s, ++row) {
            float* out = d.inputs.data() + row * dim;
            const float* m = means.data() + static_cast<std::size_t>(c) * dim;
            for (std::uint32_t j = 0; j < dim; ++j) {
                float x = m[j] + noise_std * static_cast<float>(rng.normal());
                out[j] = x < 0.0f ? 0.0f : (x > 1.0f ? 1.0f : x);
            }
            d.labels[row] = static_cast<std::int32_t>(c);
        }
    }
    return d;
}

InputTransform InputTransform::standardize(const Dataset& d) {
    double sum = 0.0, sum_sq = 0.0;
    for (float x : d.inputs) {
        sum += x;
        sum_sq += static_cast<double>(x) * x;
    }
    double n = static_cast<double>(d.inputs.size());
    double mean = n > 0 ? sum / n : 0.0;
    double var = n > 0 ? sum_sq / n - mean * mean : 1.0;
    double stdev = var > 1e-12 ? std::sqrt(var) : 1.0;
    InputTransform t;
    t.shift = static_cast<float>(mean);
    t.scale = static_cast<float>(1.0 / stdev);
    return t;
}

} // namespace stc
