#include <gtest/gtest.h>

#include <fstream>
#include <iterator>
#include <random>

#include "bdz/coder.hpp"
#include "bdz/error.hpp"
#include "bdz/robdd.hpp"

using namespace bdz;

namespace {

const char* kSample64 = "0000000001010101 0011001101110111 0000111101011111 0011111101111111";

std::vector<std::uint8_t> container(std::initializer_list<std::uint8_t> body) {
    std::vector<std::uint8_t> out{'B', 'D', 'Z', '1'};
    for (auto b : body) out.push_back(b);
    return out;
}

std::vector<std::uint8_t> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Bits random_bits(std::mt19937_64& rng, std::size_t n) {
    Bits b(n);
    for (auto& v : b) v = rng() & 1;
    return b;
}

std::string bit_range(std::span<const std::uint8_t> bytes, std::size_t from, std::size_t count) {
    return bits_to_string(bits_from_bytes(bytes)).substr(from, count);
}

}  // namespace

TEST(EncodeLevel, LevelFiveSections) {
    const auto ls = generate_levels(build_robdd(DyadicCore(bits_from_string(kSample64))));
    BitWriter w;
    const auto b = encode_level(ls.at(4), ls.at(5), w);
    EXPECT_EQ(w.bit_count(), 31u);
    const auto bytes = w.take();
    EXPECT_EQ(bit_range(bytes, 0, 12), "010101010001");
    EXPECT_EQ(bit_range(bytes, 12, 8), "01010101");
    EXPECT_EQ(bit_range(bytes, 20, 3), "001");
    EXPECT_EQ(bit_range(bytes, 23, 8), "00000000");
    EXPECT_EQ(b.freq_bits, 12u);
    EXPECT_EQ(b.type_bits, 8u);
    EXPECT_EQ(b.power_bits, 3u);
    EXPECT_EQ(b.rank1_bits, 8u);
    EXPECT_EQ(b.rank2_bits, 0u);
    EXPECT_EQ(b.fa_bits, 0u);
    EXPECT_EQ(b.formula_bits(), 31u);
    EXPECT_EQ(b.actual_bits(), 31u);
}

TEST(DecodeLevel, LevelFiveInverts) {
    const auto ls = generate_levels(build_robdd(DyadicCore(bits_from_string(kSample64))));
    BitWriter w;
    encode_level(ls.at(4), ls.at(5), w);
    const auto bytes = w.take();
    BitReader r(bytes);
    LevelContext ctx{6, 5, 16};
    EXPECT_EQ(decode_level(ls.at(4), r, ctx), ls.at(5));
    EXPECT_EQ(ctx.next_id, 17u);
    EXPECT_EQ(ctx.level, 6u);
    EXPECT_EQ(r.position(), 31u);
}

TEST(SectionBudgets, ExampleLevels) {
    const auto ls = generate_levels(build_robdd(DyadicCore(bits_from_string(kSample64))));
    const auto m = section_budgets(ls);
    ASSERT_EQ(m.size(), 6u);
    EXPECT_EQ(m[3].budget.formula_bits(), 31u);
    std::uint64_t total = 1;
    for (const auto& x : m) total += x.budget.actual_bits();
    CodecTrace trace;
    encode(bits_from_string(kSample64), &trace);
    EXPECT_EQ(trace.sigma_bits, total);
    for (std::size_t i = 0; i < m.size(); ++i) EXPECT_EQ(trace.metrics[i].budget, m[i].budget);
}

TEST(SectionBudgets, SmallestCore) {
    const auto ls = generate_levels(build_robdd(DyadicCore(bits_from_string("01"))));
    const auto m = section_budgets(ls);
    ASSERT_EQ(m.size(), 1u);
    const auto& b = m[0].budget;
    EXPECT_EQ(b.freq_bits, 2u);
    EXPECT_EQ(b.type_bits, 2u);
    EXPECT_EQ(b.power_bits, 2u);
    EXPECT_EQ(b.rank1_bits + b.rank2_bits + b.fa_bits, 0u);
    EXPECT_EQ(b.formula_bits(), 6u);
}

TEST(EncodeLevel, RejectsOutOfOrderNewIds) {
    const LevelString prev{LevelSymbol{1, 1}};
    const LevelString cur{LevelSymbol{3, 1}, LevelSymbol{2, 1}};
    BitWriter w;
    EXPECT_THROW(encode_level(prev, cur, w), DomainError);
}

TEST(Container, HandDerivedLayouts) {
    EXPECT_EQ(encode(bits_from_string("0101")), container({0x22, 0x7E}));
    EXPECT_EQ(encode(bits_from_string("0000")), container({0x23, 0x00}));
    const Bits zeros(512, 0);
    EXPECT_EQ(encode(zeros).size(), 8u);
    EXPECT_EQ(decode(encode(zeros)), zeros);
}

TEST(Container, ReductionAndPadding) {
    const auto r = reduce_input(bits_from_string("011"));
    EXPECT_EQ(r.padded_k, 2u);
    EXPECT_EQ(r.reduction, 0u);
    EXPECT_EQ(bits_to_string(r.core), "0110");
    const auto p = reduce_input(bits_from_string("10101010"));
    EXPECT_EQ(p.reduction, 2u);
    EXPECT_EQ(bits_to_string(p.core), "10");
    const auto one = reduce_input(bits_from_string("1"));
    EXPECT_EQ(one.padded_k, 1u);
    EXPECT_EQ(bits_to_string(one.core), "10");
}

TEST(Container, GoldenSample64) {
    const auto golden = slurp(std::string(BDZ_GOLDEN_DIR) + "/sample64.bdz");
    const auto raw = slurp(std::string(BDZ_GOLDEN_DIR) + "/sample64.bin");
    ASSERT_EQ(golden.size(), 19u);
    const Bits x = bits_from_string(kSample64);
    EXPECT_EQ(bits_from_bytes(raw), x);
    EXPECT_EQ(encode(x), golden);
    EXPECT_EQ(decode(golden), x);
    // Header 32 + gamma(64) 13 + gamma(1) 1 + terminal bit 1, then M_2..M_4 = 49.
    EXPECT_EQ(bit_range(golden, 96, 31), "0101010100010101010100100000000");
}

TEST(Container, ExhaustiveRoundTripShort) {
    for (std::size_t n = 1; n <= 12; ++n) {
        for (std::uint64_t v = 0; v < (1ull << n); ++v) {
            Bits b(n);
            for (std::size_t t = 0; t < n; ++t) b[t] = (v >> (n - 1 - t)) & 1;
            ASSERT_EQ(decode(encode(b)), b) << bits_to_string(b);
        }
    }
}

TEST(Container, RandomRoundTrip) {
    std::mt19937_64 rng(37);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + rng() % 5000;
        const Bits b = random_bits(rng, n);
        ASSERT_EQ(decode(encode(b)), b);
    }
    for (unsigned k = 12; k <= 16; ++k) {
        const Bits b = random_bits(rng, std::size_t{1} << k);
        ASSERT_EQ(decode(encode(b)), b);
    }
}

TEST(Container, SkewedAndStructuredInputs) {
    std::mt19937_64 rng(41);
    for (double p : {0.01, 0.1, 0.9}) {
        Bits b(1 << 14);
        for (auto& v : b) v = static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
        ASSERT_EQ(decode(encode(b)), b);
    }
    Bits period(1 << 12);
    for (std::size_t t = 0; t < period.size(); ++t) period[t] = (t % 3) == 0;
    ASSERT_EQ(decode(encode(period)), period);
}

TEST(Container, RejectsEmptyInput) {
    EXPECT_THROW(encode(Bits{}), DomainError);
}

TEST(Container, CorruptInputsAreDiagnosed) {
    const auto good = encode(bits_from_string(kSample64));
    EXPECT_THROW(decode(std::vector<std::uint8_t>{'B', 'D'}), CorruptInput);
    auto magic = good;
    magic[0] = 'X';
    EXPECT_THROW(decode(magic), CorruptInput);
    auto trailing = good;
    trailing.push_back(0);
    EXPECT_THROW(decode(trailing), CorruptInput);
    for (std::size_t len = 0; len < good.size(); ++len) {
        const std::vector<std::uint8_t> prefix(good.begin(), good.begin() + static_cast<std::ptrdiff_t>(len));
        EXPECT_THROW(decode(prefix), CorruptInput) << len;
    }
    try {
        decode(magic);
    } catch (const CorruptInput& e) {
        EXPECT_NE(std::string(e.what()).find("magic"), std::string::npos);
    }
}

TEST(Container, NonzeroLengthPaddingIsRejected) {
    // The body of "0111" re-labelled with n = 3 puts a 1 in the padding.
    CodecTrace t;
    const auto c = encode(bits_from_string("0111"), &t);
    BitWriter w;
    for (char ch : std::string("BDZ1")) w.put_bits(static_cast<std::uint8_t>(ch), 8);
    write_elias_gamma(w, 3);
    BitReader r(c, t.header_bits);
    for (std::uint64_t i = 0; i < t.body_bits; ++i) w.put(r.get());
    try {
        decode(w.take());
        FAIL() << "padding accepted";
    } catch (const CorruptInput& e) {
        EXPECT_NE(std::string(e.what()).find("padding"), std::string::npos);
    }
}

TEST(Container, DecodeLimitIsEnforced) {
    const Bits b(1000, 1);
    const auto c = encode(b);
    DecodeLimits tight;
    tight.max_bits = 999;
    EXPECT_THROW(decode(c, tight), CorruptInput);
    EXPECT_EQ(decode(c), b);
}

TEST(Container, SingleBitFlipsNeverCrash) {
    std::mt19937_64 rng(43);
    const Bits x = random_bits(rng, 1024);
    const auto good = encode(x);
    std::size_t decoded = 0;
    std::size_t rejected = 0;
    for (std::size_t bit = 0; bit < good.size() * 8; ++bit) {
        auto bad = good;
        bad[bit / 8] ^= static_cast<std::uint8_t>(0x80 >> (bit % 8));
        try {
            decode(bad);
            ++decoded;
        } catch (const CorruptInput&) {
            ++rejected;
        }
    }
    EXPECT_EQ(decoded + rejected, good.size() * 8);
    EXPECT_GT(rejected, 0u);
}

TEST(Container, TraceIsConsistent) {
    std::mt19937_64 rng(47);
    const Bits x = random_bits(rng, 4096);
    CodecTrace t;
    const auto c = encode(x, &t);
    EXPECT_EQ(t.n, 4096u);
    EXPECT_EQ(t.core_k, 12u);
    EXPECT_EQ(t.container_bytes, c.size());
    std::uint64_t sum = 1;
    for (const auto& m : t.metrics) sum += m.budget.actual_bits();
    EXPECT_EQ(t.sigma_bits, sum);
    EXPECT_EQ(c.size(), (t.header_bits + t.body_bits + 7) / 8);
}
