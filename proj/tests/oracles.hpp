#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bdz/level_strings.hpp"
#include "bdz/robdd.hpp"

// Brute-force reference implementations, written against strings only so
// they share no code path with the library.
namespace oracle {

std::string text(std::span<const std::uint8_t> bits);

/// Distinct aligned blocks (every size 1..2^k) whose halves differ, plus the
/// distinct single bits: the ROBDD vertex count.
std::size_t primitive_block_count(const std::string& x);

/// Distinct aligned blocks of every size: the quasi-reduced vertex count.
std::size_t aligned_block_count(const std::string& x);

/// (id, power) per entry of S_1..S_{k+1}, ids from the canonical ordering.
using Level = std::vector<std::pair<std::uint64_t, unsigned>>;
std::vector<Level> levels(const std::string& x);

/// phi of every vertex, by canonical id (index 0 unused).
std::vector<std::string> phi_by_id(const std::string& x);

/// All sequences with the given composition, in lexicographic order.
std::vector<std::vector<std::uint32_t>> lex_sequences(const std::vector<std::uint64_t>& counts);

/// Smallest w with 2^w >= multinomial-entropy bound, i.e. 2^w * prod c^c >= J^J.
std::uint64_t entropy_width(const std::vector<std::uint64_t>& counts);

/// J! / prod c!, as a decimal string.
std::string multinomial(const std::vector<std::uint64_t>& counts);

/// Length, bijection and interval checks of the v_i sequences against S_i. Empty string when all hold.
std::string check_v_properties(const bdz::DyadicCore& x, const bdz::LevelStrings& ls);

/// H(pi^1) + H(tilde pi^2) <= H(tilde S_i) via multiset containment of
/// pi^1 and tilde pi^2 in tilde S_i. Empty string when it holds.
std::string check_containment(const bdz::LevelString& prev, const bdz::LevelString& cur);

}  // namespace oracle
