#pragma once

#include <cstdint>
#include <iosfwd>

#include "stc/bitstream.hpp"
#include "stc/compress.hpp"

namespace stc {

// Wire header of an encoded update: mu (f32) and b* (u8). len and count are
// known to both ends from the model shape and message framing; the STC1 file
// container carries them explicitly so files decode standalone.
inline constexpr std::uint64_t kWireHeaderBits = 40;

// Encoded sparse ternary update. The payload holds the Golomb position code
// followed by one sign bit per nonzero (1 = +mu, 0 = -mu).
struct EncodedUpdate {
    std::uint32_t len = 0;
    std::uint32_t count = 0;
    float mu = 0.0f;
    std::uint8_t bstar = 1;
    BitStream payload;

    std::uint64_t position_bits() const { return payload.size_bits() - count; }
    std::uint64_t total_bits() const { return kWireHeaderBits + payload.size_bits(); }
};

// Optimal Golomb parameter for geometrically distributed position gaps at
// sparsity p: b* = 1 + floor(log2(log(phi - 1) / log(1 - p))), clamped to
// >= 1 since the formula goes nonpositive for large p.
int golomb_param(double p);

EncodedUpdate golomb_encode(const SparseTernaryUpdate& u, double p);
SparseTernaryUpdate golomb_decode(const EncodedUpdate& e);

// Decode count positions + signs from a reader positioned at the start of a
// payload. Exposed separately so container formats can share it.
SparseTernaryUpdate decode_payload(BitReader& reader, std::uint32_t len, std::uint32_t count,
                                   float mu, std::uint8_t bstar);

// Bare Golomb position coding (gap - 1 as unary quotient, zero, b* remainder
// bits; the first gap counts from sentinel position -1). Shared by the
// ternary payload and the sparse-float format.
void golomb_encode_positions(BitStream& out, const std::vector<std::uint32_t>& positions,
                             std::uint8_t bstar);
std::vector<std::uint32_t> golomb_decode_positions(BitReader& reader, std::uint32_t len,
                                                   std::uint32_t count, std::uint8_t bstar);

// Mean Golomb bits per encoded position: b* + 1 / (1 - (1-p)^(2^b*)).
double expected_position_bits(double p);

// Entropy per coordinate of a sparse update with 32-bit survivors vs. a
// sparse ternary update (1 bit per survivor).
double entropy_sparse(double p);
double entropy_stc(double p);

std::uint64_t measure_bits(const EncodedUpdate& e);

// STC1 container: "STC1" magic, u32 len, u32 count, f32 mu, u8 b*
// (big-endian), then the payload zero-padded to a byte boundary.
void write_stc1(std::ostream& out, const EncodedUpdate& e);
EncodedUpdate read_stc1(std::istream& in);

} // namespace stc
