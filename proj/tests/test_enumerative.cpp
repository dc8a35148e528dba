#include <gtest/gtest.h>

#include <random>
#include <string>

#include "bdz/enumerative.hpp"
#include "bdz/error.hpp"
#include "oracles.hpp"

using namespace bdz;

TEST(Rank, IdentityIsZero) {
    const std::vector<char> u{'a', 'b', 'c', 'd'};
    const auto c = composition_of<char>(u);
    const auto code = rank_multiset_perm<char>(u, c);
    EXPECT_EQ(code.rank, 0);
    EXPECT_EQ(code.width, 8u);
    EXPECT_EQ(to_big_endian(code.rank, code.width), std::vector<std::uint8_t>{0});
}

TEST(Rank, SwapOfLastTwoIsOne) {
    const std::vector<char> order{'a', 'b', 'c', 'd'};
    const std::vector<char> u{'a', 'b', 'd', 'c'};
    const auto code = rank_multiset_perm<char>(u, composition_of<char>(order));
    EXPECT_EQ(code.rank, 1);
    EXPECT_EQ(code.width, 8u);
}

TEST(Rank, MatchesLexicographicEnumeration) {
    const std::vector<std::vector<std::uint64_t>> compositions{
        {1, 1, 1, 1}, {2, 1}, {2, 2, 1}, {3, 1, 2}, {1, 4}, {2, 2, 2}, {1, 1, 1, 1, 1, 1}, {4, 3}, {1, 2, 1, 2}};
    for (const auto& counts : compositions) {
        const auto all = oracle::lex_sequences(counts);
        ASSERT_EQ(mpz_class(oracle::multinomial(counts)), multinomial(counts));
        ASSERT_EQ(all.size(), multinomial(counts).get_ui());
        for (std::size_t r = 0; r < all.size(); ++r) {
            ASSERT_EQ(rank_indices(all[r], counts), r);
            ASSERT_EQ(unrank_indices(mpz_class(static_cast<unsigned long>(r)), counts), all[r]);
        }
    }
}

TEST(Rank, RoundTripsLongRandomSequences) {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 60; ++t) {
        const std::size_t alphabet = 1 + rng() % (t % 3 == 0 ? 3 : 60);
        const std::size_t length = 1 + rng() % 2000;
        std::vector<std::uint32_t> seq(length);
        std::vector<std::uint64_t> counts(alphabet, 0);
        for (auto& s : seq) {
            s = static_cast<std::uint32_t>(rng() % alphabet);
            ++counts[s];
        }
        const mpz_class r = rank_indices(seq, counts);
        ASSERT_LT(r, multinomial(counts));
        ASSERT_EQ(unrank_indices(r, counts), seq);
        const auto width = entropy_width(counts);
        const auto bytes = to_big_endian(r, width);
        ASSERT_EQ(from_big_endian(bytes), r);
    }
}

TEST(Rank, ExtremeRanksRoundTrip) {
    const std::vector<std::uint64_t> counts{700, 500, 300, 200};
    const mpz_class top = multinomial(counts) - 1;
    const auto last = unrank_indices(top, counts);
    EXPECT_TRUE(std::is_sorted(last.rbegin(), last.rend()));
    EXPECT_EQ(rank_indices(last, counts), top);
    const auto first = unrank_indices(mpz_class(0), counts);
    EXPECT_TRUE(std::is_sorted(first.begin(), first.end()));
}

TEST(Rank, OutOfRangeIsCorrupt) {
    const std::vector<std::uint64_t> counts{2, 2};
    EXPECT_THROW(unrank_indices(mpz_class(6), counts), CorruptInput);
    const std::vector<std::uint64_t> big{400, 400, 400};
    EXPECT_THROW(unrank_indices(multinomial(big), big), CorruptInput);
}

TEST(Rank, MismatchedSequenceIsDomainError) {
    const std::vector<std::uint64_t> counts{1, 1};
    const std::vector<std::uint32_t> seq{0, 0};
    EXPECT_THROW(rank_indices(seq, counts), DomainError);
}

TEST(Entropy, DefinitionValues) {
    const std::vector<char> u{'a', 'a', 'b', 'a', 'b', 'c', 'b', 'b', 'c', 'a'};
    EXPECT_EQ(first_strike<char>(u), (std::vector<char>{'a', 'a', 'b', 'b', 'b', 'c', 'a'}));
    const std::vector<std::uint64_t> four{1, 1, 1, 1};
    EXPECT_DOUBLE_EQ(entropy_of_counts(four), 8.0);
    EXPECT_EQ(entropy_width(four), 8u);
    const std::vector<std::uint64_t> one{5};
    EXPECT_EQ(entropy_width(one), 0u);
    EXPECT_EQ(entropy_width(std::vector<std::uint64_t>{}), 0u);
}

TEST(Entropy, WidthMatchesExactOracle) {
    std::mt19937_64 rng(29);
    for (int t = 0; t < 300; ++t) {
        std::vector<std::uint64_t> counts(1 + rng() % 6);
        for (auto& c : counts) c = 1 + rng() % (t % 2 ? 4 : 40);
        ASSERT_EQ(entropy_width(counts), oracle::entropy_width(counts));
    }
    // Integer-valued H: powers of two with equal counts.
    for (std::uint64_t c : {1u, 2u, 4u, 8u}) {
        for (std::size_t a : {2u, 4u, 8u}) {
            const std::vector<std::uint64_t> counts(a, c);
            ASSERT_EQ(entropy_width(counts), oracle::entropy_width(counts));
        }
    }
}

TEST(Entropy, WidthCoversMultinomial) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 100; ++t) {
        std::vector<std::uint64_t> counts(2 + rng() % 5);
        for (auto& c : counts) c = 1 + rng() % 100;
        const auto w = entropy_width(counts);
        ASSERT_LE(mpz_sizeinbase(mpz_class(multinomial(counts) - 1).get_mpz_t(), 2), w);
    }
}
