#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "stc/tensor.hpp"

namespace stc {

// Sparse ternary update: values are mu * sign at the stored positions and
// zero elsewhere. mu == 0 means the zero tensor regardless of positions.
struct SparseTernaryUpdate {
    std::uint32_t len = 0;
    std::vector<std::uint32_t> positions; // strictly increasing, < len
    std::vector<std::int8_t> signs;       // +1 / -1, parallel to positions
    float mu = 0.0f;

    std::size_t count() const { return positions.size(); }

    FlatTensor densify() const {
        FlatTensor out(len);
        for (std::size_t i = 0; i < positions.size(); ++i)
            out[positions[i]] = signs[i] > 0 ? mu : -mu;
        return out;
    }

    bool operator==(const SparseTernaryUpdate& o) const {
        return len == o.len && positions == o.positions && signs == o.signs && mu == o.mu;
    }
};

// k = max(floor(p * len), 1). Small epsilon compensates for decimal sparsity
// rates that are not exactly representable in binary.
inline std::size_t sparsity_to_k(double p, std::size_t len) {
    if (!(p > 0.0) || p > 1.0) throw ArgumentError("sparsity p must be in (0, 1]");
    auto k = static_cast<std::size_t>(p * static_cast<double>(len) + 1e-9);
    return k < 1 ? 1 : k;
}

// Exactly k indices of largest magnitude, ascending. Among entries equal to
// the threshold magnitude the lowest indices win, so the selection is
// deterministic even with ties.
inline std::vector<std::uint32_t> select_top_k(const FlatTensor& t, std::size_t k) {
    float v = top_k_threshold(t, k);
    std::vector<std::uint32_t> sel;
    sel.reserve(k);
    std::size_t need_eq = k;
    for (std::size_t i = 0; i < t.len(); ++i)
        if (std::fabs(t[i]) > v) --need_eq;
    for (std::size_t i = 0; i < t.len() && sel.size() < k; ++i) {
        float m = std::fabs(t[i]);
        if (m > v) {
            sel.push_back(static_cast<std::uint32_t>(i));
        } else if (m == v && need_eq > 0) {
            sel.push_back(static_cast<std::uint32_t>(i));
            --need_eq;
        }
    }
    std::sort(sel.begin(), sel.end());
    return sel;
}

// Keep the top fraction p of entries (by magnitude) at full precision.
inline FlatTensor top_k_sparsify(const FlatTensor& t, double p) {
    if (t.len() == 0) throw ArgumentError("top_k_sparsify: empty tensor");
    std::size_t k = sparsity_to_k(p, t.len());
    FlatTensor out(t.len());
    for (std::uint32_t i : select_top_k(t, k)) out[i] = t[i];
    return out;
}

// Top-k sparsification followed by ternarization: survivors are replaced by
// mu * sign with mu the mean survivor magnitude (zero-valued survivors count
// toward k but are dropped from the position list).
inline SparseTernaryUpdate stc_compress(const FlatTensor& t, double p) {
    if (t.len() == 0) throw ArgumentError("stc_compress: empty tensor");
    std::size_t k = sparsity_to_k(p, t.len());
    std::vector<std::uint32_t> sel = select_top_k(t, k);

    double mag_sum = 0.0;
    for (std::uint32_t i : sel) mag_sum += std::fabs(static_cast<double>(t[i]));

    SparseTernaryUpdate u;
    u.len = static_cast<std::uint32_t>(t.len());
    u.mu = static_cast<float>(mag_sum / static_cast<double>(k));
    for (std::uint32_t i : sel) {
        if (t[i] == 0.0f) continue;
        u.positions.push_back(i);
        u.signs.push_back(t[i] > 0.0f ? 1 : -1);
    }
    if (u.positions.empty()) u.mu = 0.0f;
    return u;
}

using SignVec = std::vector<std::int8_t>;

// Elementwise sign with sign(0) = +1.
inline SignVec sign_compress(const FlatTensor& t) {
    SignVec s(t.len());
    for (std::size_t i = 0; i < t.len(); ++i) s[i] = t[i] >= 0.0f ? 1 : -1;
    return s;
}

// Coordinatewise sign of the vote sum; exact ties resolve to +1.
inline SignVec majority_vote(const std::vector<SignVec>& votes) {
    if (votes.empty()) throw ArgumentError("majority_vote: no voters");
    std::size_t n = votes[0].size();
    for (const auto& v : votes)
        if (v.size() != n) throw ShapeError("majority_vote: vote length mismatch");
    SignVec out(n);
    for (std::size_t i = 0; i < n; ++i) {
        long sum = 0;
        for (const auto& v : votes) sum += v[i];
        out[i] = sum >= 0 ? 1 : -1;
    }
    return out;
}

// Error feedback: fold the residual into the update, compress, and keep what
// the compressor dropped. `compress` maps a FlatTensor to its densified
// compressed form.
template <typename Compressor>
std::pair<FlatTensor, FlatTensor> residual_apply(const FlatTensor& residual,
                                                 const FlatTensor& delta,
                                                 Compressor&& compress) {
    FlatTensor corrected = add(residual, delta);
    FlatTensor compressed = compress(static_cast<const FlatTensor&>(corrected));
    FlatTensor new_residual = sub(corrected, compressed);
    return {std::move(compressed), std::move(new_residual)};
}

} // namespace stc
