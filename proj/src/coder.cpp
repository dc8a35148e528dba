#include "bdz/coder.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "bdz/enumerative.hpp"
#include "bdz/error.hpp"
#include "bdz/robdd.hpp"

namespace bdz {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'B', 'D', 'Z', '1'};

// Everything both encode_level and level_metrics derive from one transition.
struct LevelPlan {
    LevelSkeleton skeleton;
    LevelDecomposition split;
    std::vector<std::uint64_t> known_counts;  // occurrences in S_i of each known symbol
    LevelString fresh;                        // distinct Type II symbols, first-appearance order
    std::vector<std::uint64_t> fresh_counts;
    std::vector<std::uint64_t> pi1_counts;    // composition of pi^1 (known symbols with count > 1)
    std::vector<std::uint32_t> pi1_seq;
    bool forced = true;
    std::vector<std::uint8_t> fa_flags;
    std::vector<std::uint64_t> tilde_counts;  // composition of tilde pi^2, by index
    std::vector<std::uint32_t> tilde_seq;
    LevelMetrics metrics;
};

LevelPlan make_plan(const LevelString& prev, const LevelString& cur) {
    LevelPlan plan;
    plan.split = decompose_level(prev, cur);
    plan.skeleton = level_skeleton(prev);
    const auto& sk = plan.skeleton;

    VertexId top = 0;
    for (const auto& s : cur) top = std::max(top, s.m);
    constexpr std::uint32_t kNone = ~std::uint32_t{0};
    std::vector<std::uint32_t> slot(top + 1, kNone);

    plan.known_counts.assign(sk.known.size(), 1);
    for (std::size_t j = 0; j < sk.known.size(); ++j) slot[sk.known[j].m] = static_cast<std::uint32_t>(j);
    for (const auto& s : plan.split.pi1) ++plan.known_counts[slot[s.m]];

    // pi^1 composition keeps the skeleton order but drops symbols absent from it.
    std::vector<std::uint32_t> compact(sk.known.size(), kNone);
    for (std::size_t j = 0; j < sk.known.size(); ++j) {
        if (plan.known_counts[j] > 1) {
            compact[j] = static_cast<std::uint32_t>(plan.pi1_counts.size());
            plan.pi1_counts.push_back(plan.known_counts[j] - 1);
        }
    }
    plan.pi1_seq.reserve(plan.split.pi1.size());
    for (const auto& s : plan.split.pi1) plan.pi1_seq.push_back(compact[slot[s.m]]);

    std::vector<std::uint32_t> pi2_index;
    pi2_index.reserve(plan.split.pi2.size());
    for (const auto& s : plan.split.pi2) {
        if (slot[s.m] == kNone) {
            slot[s.m] = static_cast<std::uint32_t>(plan.fresh.size());
            plan.fresh.push_back(s);
            plan.fresh_counts.push_back(0);
            plan.fa_flags.push_back(1);
        } else {
            plan.fa_flags.push_back(0);
        }
        ++plan.fresh_counts[slot[s.m]];
        pi2_index.push_back(slot[s.m]);
    }

    std::vector<std::uint32_t> tilde_slot(plan.fresh.size(), kNone);
    for (std::size_t j = 0; j < plan.fresh.size(); ++j) {
        if (plan.fresh_counts[j] > 1) {
            tilde_slot[j] = static_cast<std::uint32_t>(plan.tilde_counts.size());
            plan.tilde_counts.push_back(plan.fresh_counts[j] - 1);
        }
        plan.forced = plan.forced && plan.fresh_counts[j] == 1;
    }
    plan.forced = plan.forced || plan.fresh.size() <= 1;
    for (std::size_t t = 0; t < pi2_index.size(); ++t) {
        if (!plan.fa_flags[t]) plan.tilde_seq.push_back(tilde_slot[pi2_index[t]]);
    }

    SectionBudget& b = plan.metrics.budget;
    b.freq_bits = sk.length;
    b.type_bits = sk.hat_length;
    b.power_bits = plan.split.q_sum;
    b.rank1_bits = entropy_width(plan.pi1_counts);
    b.fa_bits = plan.forced ? 0 : plan.split.pi2.size();
    b.rank2_bits = plan.forced ? 0 : entropy_width(plan.tilde_counts);
    plan.metrics.h_pi1 = entropy_of_counts(plan.pi1_counts);
    plan.metrics.h_pi2_tilde = entropy_of_counts(plan.tilde_counts);
    return plan;
}

void put_rank(BitWriter& out, std::span<const std::uint32_t> seq, std::span<const std::uint64_t> counts,
              std::uint64_t width) {
    if (width == 0) return;
    const mpz_class rank = rank_indices(seq, counts);
    const auto bytes = to_big_endian(rank, width);
    out.put_big_endian(bytes, width);
}

std::vector<std::uint32_t> get_rank(BitReader& in, std::span<const std::uint64_t> counts, const char* section) {
    const std::uint64_t width = entropy_width(counts);
    in.require(width, section);
    const mpz_class rank = from_big_endian(in.get_big_endian(width));
    try {
        return unrank_indices(rank, counts);
    } catch (const CorruptInput&) {
        throw CorruptInput(std::string(section) + ": rank out of range");
    }
}

std::uint64_t read_run(BitReader& in, std::uint64_t room) {
    if (room == 0) throw CorruptInput("frequency runs: counts exceed |S_i|");
    return in.get_unary(room - 1) + 1;
}

SectionBudget write_plan(const LevelPlan& plan, BitWriter& out) {
    for (std::size_t j = 0; j < plan.fresh.size(); ++j) {
        if (plan.fresh[j].m != plan.fresh[0].m + j) {
            throw DomainError("new vertices must take consecutive ids in first-appearance order");
        }
    }
    SectionBudget emitted;

    std::uint64_t mark = out.bit_count();
    for (auto c : plan.known_counts) out.put_unary(c - 1);
    for (auto c : plan.fresh_counts) out.put_unary(c - 1);
    emitted.freq_bits = out.bit_count() - mark;

    mark = out.bit_count();
    for (auto t : plan.split.types) out.put(t == EntryType::typeII);
    emitted.type_bits = out.bit_count() - mark;

    mark = out.bit_count();
    for (const auto& s : plan.fresh) out.put_unary(s.q - 1);
    emitted.power_bits = out.bit_count() - mark;

    mark = out.bit_count();
    put_rank(out, plan.pi1_seq, plan.pi1_counts, plan.metrics.budget.rank1_bits);
    emitted.rank1_bits = out.bit_count() - mark;

    if (!plan.forced) {
        mark = out.bit_count();
        for (auto f : plan.fa_flags) out.put(f != 0);
        emitted.fa_bits = out.bit_count() - mark;
        mark = out.bit_count();
        put_rank(out, plan.tilde_seq, plan.tilde_counts, plan.metrics.budget.rank2_bits);
        emitted.rank2_bits = out.bit_count() - mark;
    }
    return emitted;
}

}  // namespace

LevelMetrics level_metrics(const LevelString& prev, const LevelString& cur) {
    return make_plan(prev, cur).metrics;
}

SectionBudget encode_level(const LevelString& prev, const LevelString& cur, BitWriter& out) {
    return write_plan(make_plan(prev, cur), out);
}

LevelString decode_level(const LevelString& prev, BitReader& in, LevelContext& ctx) {
    const LevelSkeleton sk = level_skeleton(prev);
    const std::uint64_t length = sk.length;
    in.require(length, "frequency runs");

    std::vector<std::uint64_t> known_counts(sk.known.size());
    std::uint64_t sum = 0;
    for (auto& c : known_counts) {
        c = read_run(in, length - sum);
        sum += c;
    }
    std::vector<std::uint64_t> fresh_counts;
    while (sum < length) {
        fresh_counts.push_back(read_run(in, length - sum));
        sum += fresh_counts.back();
    }

    std::uint64_t pi1_len = 0;
    for (auto c : known_counts) pi1_len += c - 1;
    std::uint64_t pi2_len = 0;
    for (auto c : fresh_counts) pi2_len += c;
    if (pi1_len + pi2_len != sk.hat_length) {
        throw CorruptInput("frequency runs: counts inconsistent with |S^_i|");
    }

    in.require(sk.hat_length, "type flags");
    std::vector<std::uint8_t> types(sk.hat_length);
    std::uint64_t type_one = 0;
    for (auto& t : types) {
        t = in.get() ? 1 : 0;
        type_one += t;
    }
    if (sk.hat_length - type_one != pi1_len) throw CorruptInput("type flags: Type I count mismatch");

    // A new vertex in S_i sits at level i - 1 + q <= k + 1.
    const std::uint64_t max_zeros = std::uint64_t{ctx.k} + 1 - ctx.level;
    LevelString fresh;
    fresh.reserve(fresh_counts.size());
    for (std::size_t j = 0; j < fresh_counts.size(); ++j) {
        const std::uint64_t q = in.get_unary(max_zeros) + 1;
        fresh.push_back(LevelSymbol{ctx.next_id + j, static_cast<std::uint32_t>(q)});
    }

    std::vector<std::uint64_t> pi1_counts;
    std::vector<std::uint32_t> pi1_symbol;  // compact index -> skeleton index
    for (std::size_t j = 0; j < known_counts.size(); ++j) {
        if (known_counts[j] > 1) {
            pi1_counts.push_back(known_counts[j] - 1);
            pi1_symbol.push_back(static_cast<std::uint32_t>(j));
        }
    }
    const auto pi1_seq = get_rank(in, pi1_counts, "pi1 rank");

    std::vector<std::uint32_t> pi2_seq;  // indices into fresh
    pi2_seq.reserve(pi2_len);
    const bool all_single = std::all_of(fresh_counts.begin(), fresh_counts.end(), [](auto c) { return c == 1; });
    if (fresh.size() == 1) {
        pi2_seq.assign(fresh_counts[0], 0);
    } else if (all_single) {
        for (std::uint32_t j = 0; j < fresh.size(); ++j) pi2_seq.push_back(j);
    } else {
        in.require(pi2_len, "first-appearance flags");
        std::vector<std::uint8_t> flags(pi2_len);
        std::uint64_t ones = 0;
        for (auto& f : flags) {
            f = in.get() ? 1 : 0;
            ones += f;
        }
        if (ones != fresh.size() || !flags[0]) throw CorruptInput("first-appearance flags: wrong pattern");
        std::vector<std::uint64_t> tilde_counts;
        std::vector<std::uint32_t> tilde_symbol;
        for (std::size_t j = 0; j < fresh_counts.size(); ++j) {
            if (fresh_counts[j] > 1) {
                tilde_counts.push_back(fresh_counts[j] - 1);
                tilde_symbol.push_back(static_cast<std::uint32_t>(j));
            }
        }
        const auto tilde_seq = get_rank(in, tilde_counts, "pi2 rank");
        std::uint32_t introduced = 0;
        std::size_t next_tilde = 0;
        for (auto f : flags) {
            if (f) {
                pi2_seq.push_back(introduced++);
                continue;
            }
            const std::uint32_t j = tilde_symbol[tilde_seq[next_tilde++]];
            if (j >= introduced) throw CorruptInput("pi2 rank: symbol used before its first appearance");
            pi2_seq.push_back(j);
        }
    }

    LevelString hat;
    hat.reserve(sk.hat_length);
    std::size_t a = 0;
    std::size_t b = 0;
    for (auto t : types) {
        if (t) {
            hat.push_back(fresh[pi2_seq[b++]]);
        } else {
            hat.push_back(sk.known[pi1_symbol[pi1_seq[a++]]]);
        }
    }
    ctx.next_id += fresh.size();
    ++ctx.level;
    return sk.assemble(hat);
}

std::vector<LevelMetrics> section_budgets(const LevelStrings& ls) {
    std::vector<LevelMetrics> out;
    for (unsigned i = 2; i <= ls.k + 1; ++i) out.push_back(level_metrics(ls.at(i - 1), ls.at(i)));
    return out;
}

ReducedInput reduce_input(std::span<const std::uint8_t> bits) {
    if (bits.empty()) throw DomainError("cannot encode an empty string");
    ReducedInput r;
    r.padded_k = ceil_log2(std::max<std::uint64_t>(bits.size(), 2));
    r.core.assign(bits.begin(), bits.end());
    r.core.resize(std::size_t{1} << r.padded_k, 0);
    std::size_t len = r.core.size();
    while (len > 1 && std::equal(r.core.begin(), r.core.begin() + static_cast<std::ptrdiff_t>(len / 2),
                                 r.core.begin() + static_cast<std::ptrdiff_t>(len / 2))) {
        len /= 2;
        ++r.reduction;
    }
    r.core.resize(len);
    return r;
}

std::vector<std::uint8_t> encode(std::span<const std::uint8_t> bits, CodecTrace* trace) {
    ReducedInput red = reduce_input(bits);
    CodecTrace local;
    CodecTrace& tr = trace ? *trace : local;
    tr = CodecTrace{};
    tr.n = bits.size();
    tr.padded_k = red.padded_k;
    tr.reduction = red.reduction;

    BitWriter out;
    for (auto byte : kMagic) out.put_bits(byte, 8);
    write_elias_gamma(out, tr.n);
    tr.header_bits = out.bit_count();
    write_elias_gamma(out, std::uint64_t{red.reduction} + 1);
    const std::uint64_t sigma_start = out.bit_count();

    if (red.core.size() == 1) {
        tr.literal = true;
        out.put(red.core[0] != 0);
    } else {
        const DyadicCore core(std::move(red.core));
        tr.core_k = core.k();
        const Robdd g = build_robdd(core);
        const LevelStrings ls = generate_levels(g);
        tr.levels = relabel_by_appearance(ls);

        // The terminal with the smaller wire id decides the bit.
        const LevelString& last = ls.at(core.k() + 1);
        const LevelString& last_wire = tr.levels.at(core.k() + 1);
        VertexId smallest = 0;
        VertexId original = 0;
        for (std::size_t p = 0; p < last.size(); ++p) {
            if (smallest == 0 || last_wire[p].m < smallest) {
                smallest = last_wire[p].m;
                original = last[p].m;
            }
        }
        tr.terminal_bit = g.vertex(original).value;
        out.put(tr.terminal_bit != 0);

        for (unsigned i = 2; i <= core.k() + 1; ++i) {
            const LevelPlan plan = make_plan(tr.levels.at(i - 1), tr.levels.at(i));
            LevelMetrics m = plan.metrics;
            m.budget = write_plan(plan, out);
            tr.metrics.push_back(m);
        }
    }
    tr.sigma_bits = out.bit_count() - sigma_start;
    tr.body_bits = out.bit_count() - tr.header_bits;
    auto bytes = out.take();
    tr.container_bytes = bytes.size();
    return bytes;
}

Bits decode(std::span<const std::uint8_t> bytes, const DecodeLimits& limits) {
    if (bytes.size() < kMagic.size() || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
        throw CorruptInput("container: bad magic");
    }
    BitReader in(bytes, kMagic.size() * 8);
    std::uint64_t n = 0;
    std::uint64_t e = 0;
    try {
        n = read_elias_gamma(in);
        e = read_elias_gamma(in) - 1;
    } catch (const CorruptInput& err) {
        throw CorruptInput(std::string("container header: ") + err.what());
    }
    if (n > limits.max_bits) throw CorruptInput("container header: declared length exceeds the decoder limit");
    const unsigned padded_k = ceil_log2(std::max<std::uint64_t>(n, 2));
    if (e > padded_k) throw CorruptInput("container header: reduction exponent exceeds the padded length");
    const auto core_k = static_cast<unsigned>(padded_k - e);

    Bits core;
    if (core_k == 0) {
        try {
            core.push_back(in.get() ? 1 : 0);
        } catch (const CorruptInput&) {
            throw CorruptInput("container: missing literal bit");
        }
        if (in.remaining() >= 8) throw CorruptInput("container: trailing data");
    } else {
        int terminal_bit = 0;
        LevelStrings ls;
        ls.k = core_k;
        ls.levels.push_back(LevelString{LevelSymbol{1, 1}});
        LevelContext ctx{core_k, 2, 2};
        try {
            terminal_bit = in.get() ? 1 : 0;
            for (unsigned i = 2; i <= core_k + 1; ++i) ls.levels.push_back(decode_level(ls.levels.back(), in, ctx));
        } catch (const CorruptInput& err) {
            throw CorruptInput("level " + std::to_string(ctx.level) + ": " + err.what());
        } catch (const StructuralError& err) {
            throw CorruptInput("level " + std::to_string(ctx.level) + ": " + err.what());
        }
        if (in.remaining() >= 8) throw CorruptInput("container: trailing data");
        try {
            core = expand(rebuild_graph(ls, terminal_bit), 1);
        } catch (const StructuralError& err) {
            throw CorruptInput(std::string("graph: ") + err.what());
        }
    }
    while (in.remaining() > 0) {
        if (in.get()) throw CorruptInput("container: nonzero byte padding");
    }

    const std::size_t padded = std::size_t{1} << padded_k;
    Bits out;
    out.reserve(padded);
    while (out.size() < padded) out.insert(out.end(), core.begin(), core.end());
    if (std::any_of(out.begin() + static_cast<std::ptrdiff_t>(n), out.end(), [](auto b) { return b != 0; })) {
        throw CorruptInput("container: nonzero length padding");
    }
    out.resize(static_cast<std::size_t>(n));
    return out;
}

}  // namespace bdz
