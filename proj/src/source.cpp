#include "bdz/source.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "bdz/coder.hpp"
#include "bdz/error.hpp"

namespace bdz {

namespace {

double parse_probability(std::string_view text) {
    const std::string s(text);
    std::size_t used = 0;
    double p = 0;
    try {
        p = std::stod(s, &used);
    } catch (const std::exception&) {
        throw DomainError("not a number: '" + s + "'");
    }
    if (used != s.size()) throw DomainError("not a number: '" + s + "'");
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("probability outside [0,1]: " + s);
    return p;
}

std::uint64_t parse_unsigned(std::string_view text) {
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) throw DomainError("not an unsigned integer: '" + std::string(text) + "'");
    return v;
}

}  // namespace

MarkovSource::MarkovSource(std::vector<std::array<State, 2>> next_state, std::vector<double> emit_prob, State initial)
    : next_state_(std::move(next_state)), emit_prob_(std::move(emit_prob)), initial_(initial) {
    if (emit_prob_.empty()) throw DomainError("a source needs at least one state");
    if (next_state_.size() != emit_prob_.size()) throw DomainError("transition table and probabilities differ in size");
    if (initial_ >= states()) throw DomainError("initial state out of range");
    for (double p : emit_prob_) {
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("emission probability outside [0,1]");
    }
    for (const auto& t : next_state_) {
        if (t[0] >= states() || t[1] >= states()) throw DomainError("transition to a nonexistent state");
    }
}

MarkovSource MarkovSource::bernoulli(double theta) {
    return MarkovSource({{0, 0}}, {theta});
}

MarkovSource MarkovSource::markov(unsigned order, std::vector<double> probs) {
    if (order > 20) throw DomainError("markov order above 20");
    const std::size_t s = std::size_t{1} << order;
    if (probs.size() != s) {
        throw DomainError("order-" + std::to_string(order) + " markov source needs " + std::to_string(s) +
                          " probabilities");
    }
    std::vector<std::array<State, 2>> next(s);
    const State mask = static_cast<State>(s - 1);
    for (State q = 0; q < s; ++q) next[q] = {(q << 1) & mask, ((q << 1) | 1) & mask};
    return MarkovSource(std::move(next), std::move(probs));
}

MarkovSource parse_preset(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw DomainError("preset must look like bernoulli:T or markov:R:P0,...");
    const auto kind = text.substr(0, colon);
    const auto rest = text.substr(colon + 1);
    if (kind == "bernoulli") return MarkovSource::bernoulli(parse_probability(rest));
    if (kind == "markov") {
        const auto second = rest.find(':');
        if (second == std::string_view::npos) throw DomainError("markov preset must look like markov:R:P0,P1,...");
        const auto order = parse_unsigned(rest.substr(0, second));
        if (order > 20) throw DomainError("markov order above 20");
        std::vector<double> probs;
        std::string_view list = rest.substr(second + 1);
        while (true) {
            const auto comma = list.find(',');
            probs.push_back(parse_probability(list.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            list.remove_prefix(comma + 1);
        }
        return MarkovSource::markov(static_cast<unsigned>(order), std::move(probs));
    }
    throw DomainError("unknown source kind '" + std::string(kind) + "'");
}

SourceConfig parse_source_config(std::istream& in) {
    std::optional<std::uint64_t> states;
    std::uint64_t initial = 0;
    std::optional<std::uint64_t> seed;
    std::vector<std::array<MarkovSource::State, 2>> next;
    std::vector<double> probs;
    std::vector<bool> seen;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream words(line);
        std::vector<std::string> w;
        for (std::string t; words >> t;) w.push_back(t);
        if (w.empty()) continue;
        const std::string where = "line " + std::to_string(lineno) + ": ";
        try {
            if (w[0] == "states" && w.size() == 2) {
                if (states) throw DomainError("duplicate 'states'");
                states = parse_unsigned(w[1]);
                if (*states == 0 || *states > (1u << 24)) throw DomainError("state count out of range");
                next.assign(*states, {0, 0});
                probs.assign(*states, 0.0);
                seen.assign(*states, false);
            } else if (w[0] == "initial" && w.size() == 2) {
                initial = parse_unsigned(w[1]);
            } else if (w[0] == "seed" && w.size() == 2) {
                seed = parse_unsigned(w[1]);
            } else if (w[0] == "state" && w.size() == 5) {
                if (!states) throw DomainError("'state' before 'states'");
                const auto q = parse_unsigned(w[1]);
                const auto n0 = parse_unsigned(w[2]);
                const auto n1 = parse_unsigned(w[3]);
                if (q >= *states || n0 >= *states || n1 >= *states) throw DomainError("state index out of range");
                if (seen[q]) throw DomainError("state " + w[1] + " defined twice");
                seen[q] = true;
                next[q] = {static_cast<MarkovSource::State>(n0), static_cast<MarkovSource::State>(n1)};
                probs[q] = parse_probability(w[4]);
            } else {
                throw DomainError("unrecognized directive '" + w[0] + "'");
            }
        } catch (const DomainError& e) {
            throw DomainError(where + e.what());
        }
    }
    if (!states) throw DomainError("missing 'states'");
    for (std::size_t q = 0; q < seen.size(); ++q) {
        if (!seen[q]) throw DomainError("state " + std::to_string(q) + " has no definition");
    }
    if (initial >= *states) throw DomainError("initial state out of range");
    return SourceConfig{MarkovSource(std::move(next), std::move(probs), static_cast<MarkovSource::State>(initial)), seed};
}

double log_prob(const MarkovSource& src, std::span<const std::uint8_t> x) {
    double sum = 0;
    auto q = src.initial();
    for (auto b : x) {
        const double p = b ? src.emit_prob(q) : 1.0 - src.emit_prob(q);
        if (p <= 0.0) return -std::numeric_limits<double>::infinity();
        sum += std::log2(p);
        q = src.next(q, b);
    }
    return sum;
}

Bits sample(const MarkovSource& src, std::uint64_t n, std::uint64_t seed) {
    if (n == 0) throw DomainError("sample length must be positive");
    std::mt19937_64 rng(seed);
    Bits out(n);
    auto q = src.initial();
    for (auto& b : out) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        b = u < src.emit_prob(q) ? 1 : 0;
        q = src.next(q, b);
    }
    return out;
}

RedundancyRecord measure_redundancy(const MarkovSource& src, std::span<const std::uint8_t> x) {
    if (x.empty() || (x.size() & (x.size() - 1)) != 0) throw DomainError("redundancy needs a power-of-two length");
    CodecTrace trace;
    const auto container = encode(x, &trace);
    RedundancyRecord r;
    r.n = x.size();
    r.codeword_bits = trace.reduction == 0 ? trace.sigma_bits : trace.body_bits;
    r.container_bits = container.size() * 8;
    r.log2_mu = log_prob(src, x);
    r.budget = 16.0 + 4.0 * std::log2(static_cast<double>(src.states()));
    if (std::isinf(r.log2_mu)) {
        r.impossible = true;
        r.redundancy = std::numeric_limits<double>::infinity();
        r.per_sample = r.redundancy;
        return r;
    }
    r.redundancy = static_cast<double>(r.codeword_bits) + r.log2_mu;
    r.per_sample = r.redundancy * std::log2(static_cast<double>(r.n)) / static_cast<double>(r.n);
    return r;
}

}  // namespace bdz
