#include "bdz/bits.hpp"

#include <bit>

#include "bdz/error.hpp"

namespace bdz {

Bits bits_from_string(std::string_view text) {
    Bits out;
    out.reserve(text.size());
    for (char ch : text) {
        if (ch == '0' || ch == '1') {
            out.push_back(static_cast<std::uint8_t>(ch - '0'));
        } else if (ch != ' ' && ch != '_') {
            throw DomainError(std::string("not a binary digit: '") + ch + "'");
        }
    }
    return out;
}

std::string bits_to_string(std::span<const std::uint8_t> bits) {
    std::string s(bits.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? '1' : '0';
    return s;
}

Bits bits_from_bytes(std::span<const std::uint8_t> bytes) {
    Bits out(bytes.size() * 8);
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        for (unsigned b = 0; b < 8; ++b) out[i * 8 + b] = (bytes[i] >> (7 - b)) & 1u;
    }
    return out;
}

std::vector<std::uint8_t> bytes_from_bits(std::span<const std::uint8_t> bits) {
    std::vector<std::uint8_t> out((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    }
    return out;
}

unsigned ceil_log2(std::uint64_t value) {
    if (value <= 1) return 0;
    return static_cast<unsigned>(std::bit_width(value - 1));
}

void BitWriter::put(bool bit) {
    if (bit_count_ % 8 == 0) bytes_.push_back(0);
    if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bit_count_ % 8));
    ++bit_count_;
}

void BitWriter::put_bits(std::uint64_t value, unsigned width) {
    for (unsigned i = width; i-- > 0;) put((value >> i) & 1u);
}

void BitWriter::put_unary(std::uint64_t zeros) {
    for (std::uint64_t i = 0; i < zeros; ++i) put(false);
    put(true);
}

void BitWriter::put_big_endian(std::span<const std::uint8_t> bytes, std::uint64_t width) {
    // Leading bits beyond `width` must be zero; they are skipped.
    std::uint64_t total = static_cast<std::uint64_t>(bytes.size()) * 8;
    std::uint64_t skip = total > width ? total - width : 0;
    for (std::uint64_t i = total < width ? total : width; i < width; ++i) put(false);
    if (bit_count_ % 8 == 0 && skip % 8 == 0) {
        // Byte-aligned fast path.
        std::size_t first = static_cast<std::size_t>(skip / 8);
        bytes_.insert(bytes_.end(), bytes.begin() + static_cast<std::ptrdiff_t>(first), bytes.end());
        bit_count_ += total - skip;
        return;
    }
    for (std::uint64_t i = skip; i < total; ++i) put((bytes[i / 8] >> (7 - i % 8)) & 1u);
}

BitReader::BitReader(std::span<const std::uint8_t> bytes, std::uint64_t start_bit)
    : bytes_(bytes), pos_(start_bit), limit_(static_cast<std::uint64_t>(bytes.size()) * 8) {
    if (pos_ > limit_) pos_ = limit_;
}

void BitReader::require(std::uint64_t count, const char* what) const {
    if (remaining() < count) throw CorruptInput(std::string("premature end of stream in ") + what);
}

bool BitReader::get() {
    require(1, "bit read");
    bool bit = (bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1u;
    ++pos_;
    return bit;
}

std::uint64_t BitReader::get_bits(unsigned width) {
    require(width, "fixed-width field");
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i) {
        v = (v << 1) | ((bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1u);
        ++pos_;
    }
    return v;
}

std::uint64_t BitReader::get_unary(std::uint64_t max_zeros) {
    std::uint64_t zeros = 0;
    while (!get()) {
        if (++zeros > max_zeros) throw CorruptInput("unary run too long");
    }
    return zeros;
}

std::vector<std::uint8_t> BitReader::get_big_endian(std::uint64_t width) {
    require(width, "rank field");
    std::vector<std::uint8_t> out(static_cast<std::size_t>((width + 7) / 8), 0);
    std::uint64_t lead = out.size() * 8 - width;
    if (pos_ % 8 == 0 && lead == 0) {
        std::size_t first = static_cast<std::size_t>(pos_ / 8);
        std::copy(bytes_.begin() + static_cast<std::ptrdiff_t>(first),
                  bytes_.begin() + static_cast<std::ptrdiff_t>(first + out.size()), out.begin());
        pos_ += width;
        return out;
    }
    for (std::uint64_t i = 0; i < width; ++i) {
        std::uint64_t dst = lead + i;
        if ((bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1u) {
            out[dst / 8] |= static_cast<std::uint8_t>(0x80u >> (dst % 8));
        }
        ++pos_;
    }
    return out;
}

void write_elias_gamma(BitWriter& out, std::uint64_t m) {
    if (m == 0) throw DomainError("Elias gamma is undefined for 0");
    unsigned width = static_cast<unsigned>(std::bit_width(m));
    for (unsigned i = 1; i < width; ++i) out.put(false);
    out.put_bits(m, width);
}

std::uint64_t read_elias_gamma(BitReader& in) {
    std::uint64_t zeros = 0;
    while (!in.get()) {
        if (++zeros > 63) throw CorruptInput("Elias gamma overflow");
    }
    std::uint64_t rest = in.get_bits(static_cast<unsigned>(zeros));
    return (std::uint64_t{1} << zeros) | rest;
}

Bits elias_gamma(std::uint64_t m) {
    BitWriter w;
    write_elias_gamma(w, m);
    Bits out = bits_from_bytes(w.bytes());
    out.resize(static_cast<std::size_t>(w.bit_count()));
    return out;
}

}  // namespace bdz
