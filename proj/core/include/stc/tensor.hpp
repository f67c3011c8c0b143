#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "stc/errors.hpp"

namespace stc {

// Flat 32-bit parameter/update vector. Length is fixed at construction;
// operations return new tensors or mutate explicitly owned buffers.
struct FlatTensor {
    std::vector<float> v;

    FlatTensor() = default;
    explicit FlatTensor(std::size_t n, float fill = 0.0f) : v(n, fill) {}
    explicit FlatTensor(std::vector<float> values) : v(std::move(values)) {}

    std::size_t len() const { return v.size(); }
    float& operator[](std::size_t i) { return v[i]; }
    const float& operator[](std::size_t i) const { return v[i]; }
    float* data() { return v.data(); }
    const float* data() const { return v.data(); }

    bool all_finite() const {
        for (float x : v)
            if (!std::isfinite(x)) return false;
        return true;
    }

    bool operator==(const FlatTensor& o) const { return v == o.v; }
};

inline void check_same_len(const FlatTensor& a, const FlatTensor& b, const char* op) {
    if (a.len() != b.len())
        throw ShapeError(std::string(op) + ": length mismatch (" + std::to_string(a.len()) +
                         " vs " + std::to_string(b.len()) + ")");
}

inline FlatTensor add(const FlatTensor& a, const FlatTensor& b) {
    check_same_len(a, b, "add");
    FlatTensor out(a.len());
    for (std::size_t i = 0; i < a.len(); ++i) out.v[i] = a.v[i] + b.v[i];
    return out;
}

inline void add_in_place(FlatTensor& a, const FlatTensor& b) {
    check_same_len(a, b, "add");
    for (std::size_t i = 0; i < a.len(); ++i) a.v[i] += b.v[i];
}

inline FlatTensor sub(const FlatTensor& a, const FlatTensor& b) {
    check_same_len(a, b, "sub");
    FlatTensor out(a.len());
    for (std::size_t i = 0; i < a.len(); ++i) out.v[i] = a.v[i] - b.v[i];
    return out;
}

inline FlatTensor scale(const FlatTensor& a, float c) {
    if (!std::isfinite(c)) throw ArgumentError("scale: factor must be finite");
    FlatTensor out(a.len());
    for (std::size_t i = 0; i < a.len(); ++i) out.v[i] = c * a.v[i];
    return out;
}

// k-th largest magnitude of a. Ties are broken by value only; index-level
// tie resolution is the caller's job.
inline float top_k_threshold(const FlatTensor& a, std::size_t k) {
    if (k < 1 || k > a.len())
        throw ArgumentError("top_k_threshold: k=" + std::to_string(k) + " out of range [1," +
                            std::to_string(a.len()) + "]");
    std::vector<float> mag(a.len());
    for (std::size_t i = 0; i < a.len(); ++i) mag[i] = std::fabs(a.v[i]);
    std::nth_element(mag.begin(), mag.begin() + (k - 1), mag.end(), std::greater<float>());
    return mag[k - 1];
}

} // namespace stc
