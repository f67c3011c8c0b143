#include "stc/codec.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

namespace stc {

namespace {

constexpr double kGoldenRatioMinusOne = 0.61803398874989484820;

void write_u32_be(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32_be(std::istream& in) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) throw DecodeError("stc1: truncated header");
    return (static_cast<std::uint32_t>(b[0]) << 24) | (static_cast<std::uint32_t>(b[1]) << 16) |
           (static_cast<std::uint32_t>(b[2]) << 8) | static_cast<std::uint32_t>(b[3]);
}

} // namespace

int golomb_param(double p) {
    if (!(p > 0.0 && p < 1.0)) throw ArgumentError("golomb_param: p must be in (0, 1)");
    double ratio = std::log(kGoldenRatioMinusOne) / std::log1p(-p);
    int b = 1 + static_cast<int>(std::floor(std::log2(ratio)));
    return b < 1 ? 1 : b;
}

void golomb_encode_positions(BitStream& out, const std::vector<std::uint32_t>& positions,
                             std::uint8_t bstar) {
    const std::uint64_t base = 1ull << bstar;
    std::int64_t prev = -1;
    for (std::uint32_t pos : positions) {
        std::uint64_t d = static_cast<std::uint64_t>(static_cast<std::int64_t>(pos) - prev);
        std::uint64_t q = (d - 1) / base;
        std::uint64_t r = (d - 1) % base;
        out.push_run_of_ones(q);
        out.push(false);
        out.push_bits(r, bstar);
        prev = pos;
    }
}

std::vector<std::uint32_t> golomb_decode_positions(BitReader& reader, std::uint32_t len,
                                                   std::uint32_t count, std::uint8_t bstar) {
    std::vector<std::uint32_t> positions;
    positions.reserve(count);
    const std::uint64_t base = 1ull << bstar;
    std::int64_t prev = -1;
    for (std::uint32_t i = 0; i < count; ++i) {
        std::uint64_t q = 0;
        while (reader.read_bit()) {
            ++q;
            if (q * base > len) throw DecodeError("golomb: unary run exceeds tensor length");
        }
        std::uint64_t r = reader.read_bits(bstar);
        std::int64_t pos = prev + static_cast<std::int64_t>(q * base + r) + 1;
        if (pos < 0 || pos >= static_cast<std::int64_t>(len))
            throw DecodeError("golomb: decoded position out of range");
        positions.push_back(static_cast<std::uint32_t>(pos));
        prev = pos;
    }
    return positions;
}

EncodedUpdate golomb_encode(const SparseTernaryUpdate& u, double p) {
    EncodedUpdate e;
    e.len = u.len;
    e.count = static_cast<std::uint32_t>(u.count());
    e.mu = u.mu;
    e.bstar = static_cast<std::uint8_t>(p < 1.0 ? golomb_param(p) : 1);
    golomb_encode_positions(e.payload, u.positions, e.bstar);
    for (std::int8_t s : u.signs) e.payload.push(s > 0);
    return e;
}

SparseTernaryUpdate decode_payload(BitReader& reader, std::uint32_t len, std::uint32_t count,
                                   float mu, std::uint8_t bstar) {
    SparseTernaryUpdate u;
    u.len = len;
    u.mu = mu;
    u.positions = golomb_decode_positions(reader, len, count, bstar);
    u.signs.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) u.signs.push_back(reader.read_bit() ? 1 : -1);
    return u;
}

SparseTernaryUpdate golomb_decode(const EncodedUpdate& e) {
    BitReader reader(e.payload);
    SparseTernaryUpdate u = decode_payload(reader, e.len, e.count, e.mu, e.bstar);
    if (reader.remaining() != 0) throw DecodeError("golomb: trailing bits in payload");
    return u;
}

double expected_position_bits(double p) {
    int b = golomb_param(p);
    double pow2b = std::ldexp(1.0, b);
    return static_cast<double>(b) + 1.0 / (1.0 - std::pow(1.0 - p, pow2b));
}

double entropy_sparse(double p) {
    if (!(p > 0.0 && p < 1.0)) throw ArgumentError("entropy_sparse: p must be in (0, 1)");
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p) + 32.0 * p;
}

double entropy_stc(double p) {
    if (!(p > 0.0 && p < 1.0)) throw ArgumentError("entropy_stc: p must be in (0, 1)");
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p) + p;
}

std::uint64_t measure_bits(const EncodedUpdate& e) { return e.total_bits(); }

void write_stc1(std::ostream& out, const EncodedUpdate& e) {
    out.write("STC1", 4);
    write_u32_be(out, e.len);
    write_u32_be(out, e.count);
    write_u32_be(out, std::bit_cast<std::uint32_t>(e.mu));
    out.put(static_cast<char>(e.bstar));
    const auto& bytes = e.payload.bytes();
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

EncodedUpdate read_stc1(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, "STC1", 4) != 0)
        throw DecodeError("stc1: bad magic");
    EncodedUpdate e;
    e.len = read_u32_be(in);
    e.count = read_u32_be(in);
    e.mu = std::bit_cast<float>(read_u32_be(in));
    int b = in.get();
    if (b == std::istream::traits_type::eof()) throw DecodeError("stc1: truncated header");
    e.bstar = static_cast<std::uint8_t>(b);
    if (e.bstar < 1 || e.bstar > 32) throw DecodeError("stc1: invalid b*");
    if (e.count > e.len) throw DecodeError("stc1: count exceeds length");

    std::vector<std::uint8_t> bytes;
    char c;
    while (in.get(c)) bytes.push_back(static_cast<std::uint8_t>(c));
    const std::size_t nbits = bytes.size() * 8;

    // The payload's exact bit length is recovered by decoding; the container
    // only guarantees byte granularity with zero padding.
    BitStream raw = BitStream::from_bytes(std::move(bytes), nbits);
    BitReader reader(raw);
    decode_payload(reader, e.len, e.count, e.mu, e.bstar);
    if (reader.remaining() >= 8) throw DecodeError("stc1: excess payload bytes");
    const std::size_t used = reader.position();
    while (reader.remaining() > 0)
        if (reader.read_bit()) throw DecodeError("stc1: nonzero padding bits");

    for (std::size_t i = 0; i < used; ++i) e.payload.push(raw.bit(i));
    return e;
}

} // namespace stc
