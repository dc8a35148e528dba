#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bdz/bits.hpp"

namespace bdz {

/// Unifilar finite-state binary source: the state after each bit is a
/// function of the state and the bit, so mu(x) follows a single path.
class MarkovSource {
public:
    using State = std::uint32_t;

    /// next_state[q] = {successor on 0, successor on 1}; emit_prob[q] = P(1 | q).
    MarkovSource(std::vector<std::array<State, 2>> next_state, std::vector<double> emit_prob, State initial = 0);

    static MarkovSource bernoulli(double theta);

    /// Order-r Markov chain; the state is the last r bits (oldest bit most
    /// significant), starting from all zeros. probs has 2^r entries.
    static MarkovSource markov(unsigned order, std::vector<double> probs);

    std::size_t states() const { return emit_prob_.size(); }
    State initial() const { return initial_; }
    State next(State q, int bit) const { return next_state_[q][bit ? 1 : 0]; }
    double emit_prob(State q) const { return emit_prob_[q]; }

private:
    std::vector<std::array<State, 2>> next_state_;
    std::vector<double> emit_prob_;
    State initial_;
};

/// "bernoulli:THETA" or "markov:R:P0,P1,...". Throws DomainError.
MarkovSource parse_preset(std::string_view text);

struct SourceConfig {
    MarkovSource source;
    std::optional<std::uint64_t> seed;
};

/// Line format, '#' starts a comment:
///   states S
///   initial Q          (optional, default 0)
///   seed N             (optional)
///   state Q NEXT0 NEXT1 P1
/// Every state needs exactly one "state" line. Throws DomainError.
SourceConfig parse_source_config(std::istream& in);

/// log2 mu(x); -infinity when some step has probability zero.
double log_prob(const MarkovSource& src, std::span<const std::uint8_t> x);

/// Deterministic in (src, n, seed).
Bits sample(const MarkovSource& src, std::uint64_t n, std::uint64_t seed);

struct RedundancyRecord {
    std::uint64_t n = 0;
    std::uint64_t codeword_bits = 0;   // |sigma(x)|
    double log2_mu = 0;
    double redundancy = 0;             // |sigma(x)| + log2 mu(x)
    double per_sample = 0;             // redundancy * log2(n) / n
    double budget = 0;                 // 16 + 4 log2 s
    bool impossible = false;           // mu(x) = 0, redundancy is +infinity
    std::uint64_t container_bits = 0;  // whole container, for reference
};

/// Requires |x| to be a power of two (DomainError otherwise). For a core that
/// is not periodic, |sigma(x)| is the terminal bit plus the level sections;
/// for a periodic or constant x it also counts gamma(e+1).
RedundancyRecord measure_redundancy(const MarkovSource& src, std::span<const std::uint8_t> x);

}  // namespace bdz
