#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "bdz/coder.hpp"
#include "bdz/error.hpp"
#include "bdz/source.hpp"

using namespace bdz;

namespace {

const char* kSample64 = "0000000001010101 0011001101110111 0000111101011111 0011111101111111";

MarkovSource alternating(double p0, double p1) {
    return MarkovSource({{1, 1}, {0, 0}}, {p0, p1});
}

double total_mass(const MarkovSource& src, unsigned n) {
    double sum = 0;
    for (std::uint64_t v = 0; v < (1ull << n); ++v) {
        Bits x(n);
        for (unsigned t = 0; t < n; ++t) x[t] = (v >> t) & 1;
        sum += std::exp2(log_prob(src, x));
    }
    return sum;
}

}  // namespace

TEST(Source, UniformLogProbIsMinusLength) {
    const auto src = MarkovSource::bernoulli(0.5);
    EXPECT_DOUBLE_EQ(log_prob(src, bits_from_string("0110100")), -7.0);
}

TEST(Source, BernoulliClosedForm) {
    const auto src = MarkovSource::bernoulli(0.3);
    const Bits x = bits_from_string("1101000100");
    EXPECT_NEAR(log_prob(src, x), 4 * std::log2(0.3) + 6 * std::log2(0.7), 1e-12);
}

TEST(Source, ZeroProbabilityIsMinusInfinity) {
    const auto src = MarkovSource::bernoulli(1.0);
    EXPECT_TRUE(std::isinf(log_prob(src, bits_from_string("110"))));
    EXPECT_DOUBLE_EQ(log_prob(src, bits_from_string("111")), 0.0);
}

TEST(Source, NormalizesExhaustively) {
    std::istringstream cfg("states 3\ninitial 2\nstate 0 1 2 0.25\nstate 1 0 0 0.9\nstate 2 2 0 0.4\n");
    const std::vector<MarkovSource> sources{
        MarkovSource::bernoulli(0.5), MarkovSource::bernoulli(0.3), MarkovSource::bernoulli(0.0),
        alternating(0.2, 0.7),        MarkovSource::markov(2, {0.1, 0.5, 0.8, 0.35}),
        parse_source_config(cfg).source};
    for (const auto& src : sources) {
        for (unsigned n = 1; n <= 12; ++n) ASSERT_NEAR(total_mass(src, n), 1.0, 1e-12) << n;
    }
}

TEST(Source, AlternatingSourcePath) {
    const auto src = alternating(0.2, 0.7);
    EXPECT_NEAR(log_prob(src, bits_from_string("10")), std::log2(0.2) + std::log2(0.3), 1e-12);
    EXPECT_NEAR(log_prob(src, bits_from_string("01")), std::log2(0.8) + std::log2(0.7), 1e-12);
}

TEST(Source, MarkovStateIsRecentHistory) {
    // Order 1: P(1 | previous 0) = 0.1, P(1 | previous 1) = 0.9; history starts at 0.
    const auto src = MarkovSource::markov(1, {0.1, 0.9});
    EXPECT_NEAR(log_prob(src, bits_from_string("110")), std::log2(0.1) + std::log2(0.9) + std::log2(0.1), 1e-12);
}

TEST(Source, SamplingExtremes) {
    EXPECT_EQ(sample(MarkovSource::bernoulli(1.0), 50, 1), Bits(50, 1));
    EXPECT_EQ(sample(MarkovSource::bernoulli(0.0), 50, 1), Bits(50, 0));
    EXPECT_THROW(sample(MarkovSource::bernoulli(0.5), 0, 1), DomainError);
}

TEST(Source, SamplingFrequencyAndDeterminism) {
    const auto src = MarkovSource::bernoulli(0.3);
    const Bits a = sample(src, 100000, 99);
    double ones = 0;
    for (auto b : a) ones += b;
    EXPECT_NEAR(ones / 1e5, 0.3, 0.01);
    EXPECT_EQ(sample(src, 100000, 99), a);
    EXPECT_NE(sample(src, 100000, 100), a);
}

TEST(Source, PresetParsing) {
    EXPECT_EQ(parse_preset("bernoulli:0.25").states(), 1u);
    EXPECT_EQ(parse_preset("markov:2:0.1,0.2,0.3,0.4").states(), 4u);
    EXPECT_THROW(parse_preset("bernoulli:1.5"), DomainError);
    EXPECT_THROW(parse_preset("bernoulli:x"), DomainError);
    EXPECT_THROW(parse_preset("markov:2:0.1,0.2"), DomainError);
    EXPECT_THROW(parse_preset("gauss:1"), DomainError);
    EXPECT_THROW(parse_preset("bernoulli"), DomainError);
}

TEST(Source, ConfigParsing) {
    std::istringstream good("# two states\nstates 2\nseed 42\nstate 0 1 0 0.5\nstate 1 0 1 0.25 # tail\n");
    const auto cfg = parse_source_config(good);
    EXPECT_EQ(cfg.source.states(), 2u);
    ASSERT_TRUE(cfg.seed.has_value());
    EXPECT_EQ(*cfg.seed, 42u);
    EXPECT_EQ(cfg.source.next(0, 0), 1u);
    EXPECT_DOUBLE_EQ(cfg.source.emit_prob(1), 0.25);

    std::istringstream missing("states 2\nstate 0 1 0 0.5\n");
    EXPECT_THROW(parse_source_config(missing), DomainError);
    std::istringstream range("states 1\nstate 0 3 0 0.5\n");
    EXPECT_THROW(parse_source_config(range), DomainError);
    std::istringstream junk("states 1\nfrobnicate\n");
    EXPECT_THROW(parse_source_config(junk), DomainError);
}

TEST(Redundancy, UniformSourceOnSample64) {
    const Bits x = bits_from_string(kSample64);
    const auto r = measure_redundancy(MarkovSource::bernoulli(0.5), x);
    CodecTrace t;
    encode(x, &t);
    EXPECT_EQ(r.codeword_bits, t.sigma_bits);
    EXPECT_DOUBLE_EQ(r.redundancy, static_cast<double>(t.sigma_bits) - 64.0);
    EXPECT_DOUBLE_EQ(r.per_sample, r.redundancy * 6.0 / 64.0);
    EXPECT_DOUBLE_EQ(r.budget, 16.0);
    EXPECT_FALSE(r.impossible);
}

TEST(Redundancy, DeterministicPathGivesCodewordLength) {
    // A 64-state cycle that emits the Example-3 bits with probability one.
    const Bits x = bits_from_string(kSample64);
    std::vector<std::array<MarkovSource::State, 2>> next(64);
    std::vector<double> probs(64);
    for (MarkovSource::State q = 0; q < 64; ++q) {
        next[q] = {(q + 1) % 64, (q + 1) % 64};
        probs[q] = x[q];
    }
    const MarkovSource src(next, probs);
    const auto r = measure_redundancy(src, x);
    EXPECT_DOUBLE_EQ(r.log2_mu, 0.0);
    EXPECT_DOUBLE_EQ(r.redundancy, static_cast<double>(r.codeword_bits));
    EXPECT_DOUBLE_EQ(r.budget, 16.0 + 4.0 * 6.0);
}

TEST(Redundancy, ConstantInput) {
    const auto r = measure_redundancy(MarkovSource::bernoulli(1.0), bits_from_string("11"));
    EXPECT_EQ(r.codeword_bits, 4u);
    EXPECT_DOUBLE_EQ(r.redundancy, 4.0);
}

TEST(Redundancy, ImpossibleStringIsFlagged) {
    const auto r = measure_redundancy(MarkovSource::bernoulli(1.0), bits_from_string("0110"));
    EXPECT_TRUE(r.impossible);
    EXPECT_TRUE(std::isinf(r.redundancy));
}

TEST(Redundancy, RequiresPowerOfTwo) {
    EXPECT_THROW(measure_redundancy(MarkovSource::bernoulli(0.5), bits_from_string("011")), DomainError);
}

TEST(Redundancy, BatchMeanIsReported) {
    const auto src = MarkovSource::bernoulli(0.5);
    double sum = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) sum += measure_redundancy(src, sample(src, 1 << 16, seed)).per_sample;
    const double mean = sum / 100;
    RecordProperty("mean_per_sample_redundancy", std::to_string(mean));
    EXPECT_TRUE(std::isfinite(mean));
    EXPECT_GT(mean, 0.0);
}
