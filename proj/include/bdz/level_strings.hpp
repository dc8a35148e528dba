#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "bdz/bits.hpp"
#include "bdz/robdd.hpp"

namespace bdz {

/// A_m^q: vertex m written with power q. Inside S_i, q = L(A_m) - i + 1.
struct LevelSymbol {
    VertexId m = kNoVertex;
    std::uint32_t q = 1;

    friend auto operator<=>(const LevelSymbol&, const LevelSymbol&) = default;
};

using LevelString = std::vector<LevelSymbol>;

/// S_1 ... S_{k+1}.
struct LevelStrings {
    unsigned k = 0;
    std::vector<LevelString> levels;  // levels[i - 1] is S_i

    const LevelString& at(unsigned i) const { return levels.at(i - 1); }
    friend bool operator==(const LevelStrings&, const LevelStrings&) = default;
};

/// Distinct symbols of a level string, in first-appearance order.
LevelString distinct_symbols(const LevelString& s);

/// What the decoder knows about S_i before reading any of its section bits.
/// Walking U = distinct(S_{i-1}): a powered symbol A^q (q > 1) contributes
/// one known entry A^(q-1); a bare symbol contributes a hole of two entries.
struct LevelSkeleton {
    LevelString u;        // distinct(S_{i-1})
    LevelString known;    // reduced powers and repeat entries, pairwise distinct
    std::size_t length = 0;      // |S_i|
    std::size_t hat_length = 0;  // |S^_i|

    /// Interleaves the known entries with `hat` (2 entries per bare symbol).
    LevelString assemble(const LevelString& hat) const;
};

LevelSkeleton level_skeleton(const LevelString& prev);

/// Steps (i)-(iv) applied level by level from S_1 = (A_1).
LevelStrings generate_levels(const Robdd& g);

enum class EntryType : std::uint8_t { typeI = 0, typeII = 1 };

struct LevelDecomposition {
    LevelString hat;                 // S^_i: child entries of the bare symbols
    std::vector<EntryType> types;    // aligned with hat
    LevelString pi1;                 // Type I entries
    LevelString pi2;                 // Type II entries
    std::uint64_t q_sum = 0;         // Q_i: powers summed over distinct Type II symbols
};

/// Splits S_i against S_{i-1}. Throws StructuralError if cur was not
/// generated from prev.
LevelDecomposition decompose_level(const LevelString& prev, const LevelString& cur);

/// Renumbers vertices in order of first appearance across S_1 S_2 ... S_{k+1}.
/// In this numbering every level's new vertices take the next free ids in
/// the order they first appear, which is what the decoder relies on.
LevelStrings relabel_by_appearance(const LevelStrings& ls);

/// Rebuilds the diagram from level strings, then canonicalizes it. Of the two
/// terminals, the one with the smaller id in `ls` is T0 when terminal_bit == 0.
/// Throws StructuralError on malformed strings.
Robdd rebuild_graph(const LevelStrings& ls, int terminal_bit);

/// v_i entry: a substring of x plus where it sits in x.
struct VEntry {
    Bits content;
    std::size_t offset = 0;
};

/// v_2 ... v_{k+1} (index 0 is v_2): partition x into blocks of length
/// 2^(k-i+2), keep the distinct blocks in first-appearance order, and split
/// each into halves (or keep one half when both halves are equal).
/// Offsets refer to the first occurrence of each block.
std::vector<std::vector<VEntry>> build_v_sequences(const DyadicCore& x);

}  // namespace bdz
