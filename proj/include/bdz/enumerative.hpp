#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "bdz/error.hpp"

namespace bdz {

/// H(u) = sum_j -log2(n(u_j) / J), from the symbol counts of u.
double entropy_of_counts(std::span<const std::uint64_t> counts);

/// Exact ceil(H) for the given counts (zero counts are ignored).
std::uint64_t entropy_width(std::span<const std::uint64_t> counts);

/// J! / prod(c!).
mpz_class multinomial(std::span<const std::uint64_t> counts);

/// Lexicographic rank of `seq` among all sequences with symbol counts
/// `counts`. Symbols are indices into `counts`; smaller index sorts first.
/// Throws DomainError if seq does not have exactly these counts.
mpz_class rank_indices(std::span<const std::uint32_t> seq, std::span<const std::uint64_t> counts);

/// Inverse of rank_indices. Throws CorruptInput if rank >= multinomial(counts).
std::vector<std::uint32_t> unrank_indices(const mpz_class& rank, std::span<const std::uint64_t> counts);

/// Big-endian bytes holding `value` in exactly ceil(width / 8) bytes.
std::vector<std::uint8_t> to_big_endian(const mpz_class& value, std::uint64_t width);
mpz_class from_big_endian(std::span<const std::uint8_t> bytes);

/// Ordered (symbol, count) runs. The order is the symbol order used for ranking.
template <class T>
struct Composition {
    std::vector<std::pair<T, std::uint64_t>> runs;

    std::vector<std::uint64_t> counts() const {
        std::vector<std::uint64_t> c;
        c.reserve(runs.size());
        for (const auto& [sym, n] : runs) c.push_back(n);
        return c;
    }
};

/// Counts of u with symbols in first-appearance order.
template <class T>
Composition<T> composition_of(std::span<const T> u) {
    Composition<T> c;
    std::map<T, std::size_t> index;
    for (const T& sym : u) {
        auto [it, fresh] = index.try_emplace(sym, c.runs.size());
        if (fresh) c.runs.emplace_back(sym, 0);
        ++c.runs[it->second].second;
    }
    return c;
}

template <class T>
double entropy_H(std::span<const T> u) {
    return entropy_of_counts(composition_of(u).counts());
}

/// u with each symbol's first left-to-right appearance removed.
template <class T>
std::vector<T> first_strike(std::span<const T> u) {
    std::vector<T> out;
    std::map<T, bool> seen;
    for (const T& sym : u) {
        if (!seen.try_emplace(sym, true).second) out.push_back(sym);
    }
    return out;
}

struct RankCode {
    mpz_class rank;
    std::uint64_t width = 0;  // ceil(H(u)) bits
};

template <class T>
RankCode rank_multiset_perm(std::span<const T> u, const Composition<T>& c) {
    std::map<T, std::uint32_t> index;
    for (std::size_t i = 0; i < c.runs.size(); ++i) index.emplace(c.runs[i].first, static_cast<std::uint32_t>(i));
    std::vector<std::uint32_t> seq;
    seq.reserve(u.size());
    for (const T& sym : u) {
        auto it = index.find(sym);
        if (it == index.end()) throw DomainError("symbol missing from the composition");
        seq.push_back(it->second);
    }
    const auto counts = c.counts();
    return RankCode{rank_indices(seq, counts), entropy_width(counts)};
}

template <class T>
std::vector<T> unrank_multiset_perm(const mpz_class& rank, const Composition<T>& c) {
    const auto seq = unrank_indices(rank, c.counts());
    std::vector<T> out;
    out.reserve(seq.size());
    for (std::uint32_t i : seq) out.push_back(c.runs[i].first);
    return out;
}

}  // namespace bdz
