#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bdz {

/// Unpacked binary string: one element per bit, each 0 or 1.
using Bits = std::vector<std::uint8_t>;

/// Parses "0101..." (spaces ignored). Throws DomainError on any other char.
Bits bits_from_string(std::string_view text);
std::string bits_to_string(std::span<const std::uint8_t> bits);

/// MSB-first unpacking of bytes, n = 8 * bytes.size().
Bits bits_from_bytes(std::span<const std::uint8_t> bytes);
/// MSB-first packing, zero-padded to a byte boundary.
std::vector<std::uint8_t> bytes_from_bits(std::span<const std::uint8_t> bits);

/// Smallest k with 2^k >= value (value >= 1).
unsigned ceil_log2(std::uint64_t value);

/// Append-only bit sink, MSB-first within each byte.
class BitWriter {
public:
    void put(bool bit);
    /// Writes the low `width` bits of value, most significant first. width <= 64.
    void put_bits(std::uint64_t value, unsigned width);
    /// `zeros` zeros followed by a one.
    void put_unary(std::uint64_t zeros);
    /// Appends `width` bits from a big-endian byte string whose value fits in width.
    void put_big_endian(std::span<const std::uint8_t> bytes, std::uint64_t width);

    std::uint64_t bit_count() const { return bit_count_; }
    const std::vector<std::uint8_t>& bytes() const { return bytes_; }
    std::vector<std::uint8_t> take() { return std::move(bytes_); }

private:
    std::vector<std::uint8_t> bytes_;
    std::uint64_t bit_count_ = 0;
};

/// Cursor over a byte buffer. Every read past the end throws CorruptInput.
class BitReader {
public:
    explicit BitReader(std::span<const std::uint8_t> bytes, std::uint64_t start_bit = 0);

    bool get();
    std::uint64_t get_bits(unsigned width);
    /// Counts zeros up to the terminating one. More than max_zeros zeros is corrupt.
    std::uint64_t get_unary(std::uint64_t max_zeros);
    /// Reads `width` bits into a big-endian byte string of ceil(width / 8) bytes.
    std::vector<std::uint8_t> get_big_endian(std::uint64_t width);

    std::uint64_t position() const { return pos_; }
    std::uint64_t remaining() const { return limit_ - pos_; }
    /// Throws CorruptInput(`what`) unless at least `count` bits remain.
    void require(std::uint64_t count, const char* what) const;

private:
    std::span<const std::uint8_t> bytes_;
    std::uint64_t pos_;
    std::uint64_t limit_;
};

/// Elias gamma: floor(log2 m) zeros, then m in binary MSB-first. m >= 1.
void write_elias_gamma(BitWriter& out, std::uint64_t m);
std::uint64_t read_elias_gamma(BitReader& in);
Bits elias_gamma(std::uint64_t m);

}  // namespace bdz
