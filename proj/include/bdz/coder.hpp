#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bdz/bits.hpp"
#include "bdz/level_strings.hpp"

namespace bdz {

/// Bits spent by one level transition S_{i-1} -> S_i, per section.
struct SectionBudget {
    std::uint64_t freq_bits = 0;   // |S_i|
    std::uint64_t type_bits = 0;   // |S^_i|
    std::uint64_t power_bits = 0;  // Q_i
    std::uint64_t rank1_bits = 0;  // ceil(H(pi^1))
    std::uint64_t fa_bits = 0;     // |pi^2| when first-appearance flags are sent, else 0
    std::uint64_t rank2_bits = 0;  // ceil(H(tilde pi^2)), 0 when pi^2 is forced

    /// M_i = |S_i| + |S^_i| + Q_i + ceil(H(pi^1)) + ceil(H(tilde pi^2)).
    std::uint64_t formula_bits() const { return freq_bits + type_bits + power_bits + rank1_bits + rank2_bits; }
    std::uint64_t actual_bits() const { return formula_bits() + fa_bits; }

    friend bool operator==(const SectionBudget&, const SectionBudget&) = default;
};

/// Budget plus the real-valued entropies behind the two rank widths.
struct LevelMetrics {
    SectionBudget budget;
    double h_pi1 = 0;        // H(pi^1)
    double h_pi2_tilde = 0;  // H(tilde pi^2)
};

LevelMetrics level_metrics(const LevelString& prev, const LevelString& cur);

/// Emits the five sections for S_{i-1} -> S_i:
///  1. frequency runs: (count-1) zeros then a one for every distinct symbol of
///     S_i; known symbols first (skeleton order), then new symbols by index;
///  2. type flags for S^_i, 0 = Type I, 1 = Type II;
///  3. unary powers of the new symbols, (q-1) zeros then a one;
///  4. rank of pi^1 in ceil(H(pi^1)) bits;
///  5. unless pi^2 is forced, |pi^2| first-appearance flags and the rank of
///     tilde pi^2 in ceil(H(tilde pi^2)) bits.
/// New symbols must carry consecutive ids in first-appearance order (see
/// relabel_by_appearance); throws DomainError otherwise.
SectionBudget encode_level(const LevelString& prev, const LevelString& cur, BitWriter& out);

/// Decoder-side state that survives from one level to the next.
struct LevelContext {
    unsigned k = 0;           // depth of the core
    unsigned level = 2;       // i of the level being decoded
    VertexId next_id = 2;     // first id not yet used
};

/// Inverse of encode_level. Advances ctx. Throws CorruptInput.
LevelString decode_level(const LevelString& prev, BitReader& in, LevelContext& ctx);

/// Per-level budgets for i = 2..k+1 (index 0 is level 2).
std::vector<LevelMetrics> section_budgets(const LevelStrings& ls);

/// Everything the encoder produced, for diagnostics and benchmarks.
struct CodecTrace {
    std::uint64_t n = 0;           // input length in bits
    unsigned padded_k = 0;         // padded length is 2^padded_k
    unsigned reduction = 0;        // e: halvings of a repeated string
    unsigned core_k = 0;           // core length is 2^core_k
    bool literal = false;          // core is a single bit
    int terminal_bit = 0;
    LevelStrings levels;           // wire numbering
    std::vector<LevelMetrics> metrics;  // levels 2..core_k+1
    std::uint64_t header_bits = 0;      // magic + gamma(n)
    std::uint64_t sigma_bits = 0;       // |sigma| of the core (1 + sections, or the literal bit)
    std::uint64_t body_bits = 0;        // gamma(e+1) + sigma
    std::uint64_t container_bytes = 0;
};

/// Container: "BDZ1", gamma(n), gamma(e+1), then either the literal bit or
/// the terminal bit and level sections 2..k+1; zero-padded to a byte.
/// Throws DomainError for an empty input.
std::vector<std::uint8_t> encode(std::span<const std::uint8_t> bits, CodecTrace* trace = nullptr);

struct DecodeLimits {
    std::uint64_t max_bits = std::uint64_t{1} << 32;
};

/// Throws CorruptInput naming the failing section.
Bits decode(std::span<const std::uint8_t> bytes, const DecodeLimits& limits = {});

/// The core after padding and periodic reduction.
struct ReducedInput {
    Bits core;
    unsigned padded_k = 0;
    unsigned reduction = 0;
};
ReducedInput reduce_input(std::span<const std::uint8_t> bits);

}  // namespace bdz
