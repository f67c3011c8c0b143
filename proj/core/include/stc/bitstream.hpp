#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "stc/errors.hpp"

namespace stc {

// Append-only bit buffer, MSB-first within each byte (matches the big-endian
// on-disk layout).
class BitStream {
public:
    void push(bool bit) {
        std::size_t byte = nbits_ >> 3;
        if (byte == bytes_.size()) bytes_.push_back(0);
        if (bit) bytes_[byte] |= static_cast<std::uint8_t>(0x80u >> (nbits_ & 7));
        ++nbits_;
    }

    // Low `width` bits of value, most significant first.
    void push_bits(std::uint64_t value, unsigned width) {
        for (unsigned i = width; i-- > 0;) push((value >> i) & 1u);
    }

    void push_run_of_ones(std::uint64_t count) {
        for (std::uint64_t i = 0; i < count; ++i) push(true);
    }

    void append(const BitStream& other) {
        for (std::size_t i = 0; i < other.nbits_; ++i) push(other.bit(i));
    }

    bool bit(std::size_t i) const {
        return (bytes_[i >> 3] >> (7 - (i & 7))) & 1u;
    }

    std::size_t size_bits() const { return nbits_; }
    const std::vector<std::uint8_t>& bytes() const { return bytes_; }

    // Adopt a raw byte buffer holding `nbits` valid bits.
    static BitStream from_bytes(std::vector<std::uint8_t> bytes, std::size_t nbits) {
        BitStream s;
        s.bytes_ = std::move(bytes);
        s.nbits_ = nbits;
        return s;
    }

    bool operator==(const BitStream& o) const {
        if (nbits_ != o.nbits_) return false;
        for (std::size_t i = 0; i < nbits_; ++i)
            if (bit(i) != o.bit(i)) return false;
        return true;
    }

private:
    std::vector<std::uint8_t> bytes_;
    std::size_t nbits_ = 0;
};

class BitReader {
public:
    explicit BitReader(const BitStream& s) : stream_(&s) {}

    bool read_bit() {
        if (pos_ >= stream_->size_bits()) throw DecodeError("bit stream overrun");
        return stream_->bit(pos_++);
    }

    std::uint64_t read_bits(unsigned width) {
        std::uint64_t v = 0;
        for (unsigned i = 0; i < width; ++i) v = (v << 1) | (read_bit() ? 1u : 0u);
        return v;
    }

    std::size_t position() const { return pos_; }
    std::size_t remaining() const { return stream_->size_bits() - pos_; }

private:
    const BitStream* stream_;
    std::size_t pos_ = 0;
};

} // namespace stc
