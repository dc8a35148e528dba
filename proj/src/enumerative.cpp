#include "bdz/enumerative.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace bdz {

namespace {

// Prefix sums over mutable symbol counts.
class Fenwick {
public:
    explicit Fenwick(std::span<const std::uint64_t> counts) : tree_(counts.size() + 1, 0) {
        for (std::size_t i = 0; i < counts.size(); ++i) {
            tree_[i + 1] += counts[i];
            std::size_t parent = (i + 1) + ((i + 1) & (~(i + 1) + 1));
            if (parent < tree_.size()) tree_[parent] += tree_[i + 1];
        }
        top_ = tree_.size() > 1 ? std::bit_floor(tree_.size() - 1) : 0;
    }

    void add(std::size_t i, std::int64_t delta) {
        for (++i; i < tree_.size(); i += i & (~i + 1)) tree_[i] += static_cast<std::uint64_t>(delta);
    }

    // Sum of counts[0, i).
    std::uint64_t prefix(std::size_t i) const {
        std::uint64_t s = 0;
        for (; i > 0; i -= i & (~i + 1)) s += tree_[i];
        return s;
    }

    // Smallest s with prefix(s + 1) > d. Requires d < total.
    std::size_t find(std::uint64_t d) const {
        std::size_t pos = 0;
        for (std::size_t step = top_; step > 0; step >>= 1) {
            if (pos + step < tree_.size() && tree_[pos + step] <= d) {
                pos += step;
                d -= tree_[pos];
            }
        }
        return pos;
    }

private:
    std::vector<std::uint64_t> tree_;
    std::size_t top_ = 0;
};

constexpr std::size_t kSplitLeaf = 32;

struct Products {
    mpz_class t;  // sum of a_t * prod(p before t) * prod(q after t)
    mpz_class p;
    mpz_class q;
};

// Binary splitting over positions [lo, hi).
Products split(std::span<const std::uint64_t> a, std::span<const std::uint64_t> p,
               std::span<const std::uint64_t> q, std::size_t lo, std::size_t hi) {
    if (hi - lo <= kSplitLeaf) {
        Products run{mpz_class(0), mpz_class(1), mpz_class(1)};
        mpz_class term;
        for (std::size_t t = lo; t < hi; ++t) {
            mpz_mul_ui(run.t.get_mpz_t(), run.t.get_mpz_t(), q[t]);
            mpz_mul_ui(term.get_mpz_t(), run.p.get_mpz_t(), a[t]);
            run.t += term;
            mpz_mul_ui(run.p.get_mpz_t(), run.p.get_mpz_t(), p[t]);
            mpz_mul_ui(run.q.get_mpz_t(), run.q.get_mpz_t(), q[t]);
        }
        return run;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    Products l = split(a, p, q, lo, mid);
    Products r = split(a, p, q, mid, hi);
    Products out;
    out.t = l.t * r.q + l.p * r.t;
    out.p = l.p * r.p;
    out.q = l.q * r.q;
    return out;
}

Products split_all(std::span<const std::uint64_t> a, std::span<const std::uint64_t> p,
                   std::span<const std::uint64_t> q) {
    if (a.empty()) return Products{mpz_class(0), mpz_class(1), mpz_class(1)};
    return split(a, p, q, 0, a.size());
}

std::size_t bit_length(const mpz_class& v) {
    return mpz_sgn(v.get_mpz_t()) == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2);
}

Products merge(Products l, Products r) {
    Products out;
    out.t = l.t * r.q + l.p * r.t;
    out.p = l.p * r.p;
    out.q = l.q * r.q;
    return out;
}

// Decoder state for lexicographic unranking.
class Unranker {
public:
    Unranker(std::span<const std::uint64_t> counts, std::uint64_t total)
        : counts_(counts.begin(), counts.end()), fenwick_(counts), remaining_(total), out_(total) {}

    // Decodes the next m symbols. On entry r/M is the position inside the
    // remaining enumeration; on exit it is the position after those m symbols.
    // Exact mode keeps r, M exact. Approximate mode works on truncated values
    // and only produces a guess. With want set, returns the exact products of
    // the decoded segment.
    Products decode(mpz_class& r, mpz_class& M, std::uint64_t m, bool exact, bool want) {
        const std::size_t bits = bit_length(M);
        if (m <= kLeaf || bits <= kSmallBits) return leaf(r, M, m, exact, want);
        const std::uint64_t h = m / 2;
        // Estimated information in the first h symbols, with headroom.
        std::size_t keep = static_cast<std::size_t>(static_cast<double>(bits) * static_cast<double>(h) /
                                                    static_cast<double>(m) * 1.125) + kGuard;
        Products left;
        bool done = false;
        while (keep < bits) {
            const std::size_t shift = bits - keep;
            mpz_class rt = r >> shift;
            mpz_class mt = M >> shift;
            const std::uint64_t start = cursor_;
            left = decode(rt, mt, h, false, true);
            if (apply(r, M, left, exact)) {
                done = true;
                break;
            }
            rewind(start);
            keep *= 4;  // guess drifted off its interval; retry with more precision
        }
        if (!done) left = decode(r, M, h, exact, true);
        Products right = decode(r, M, m - h, exact, want);
        if (!want) return {};
        return merge(std::move(left), std::move(right));
    }

    std::vector<std::uint32_t> take_output() { return std::move(out_); }

private:
    static constexpr std::uint64_t kLeaf = 16;
    static constexpr std::size_t kSmallBits = 1024;
    static constexpr std::size_t kGuard = 128;

    Products leaf(mpz_class& r, mpz_class& M, std::uint64_t m, bool exact, bool want) {
        a_.clear();
        p_.clear();
        q_.clear();
        if (bit_length(M) <= 62) {
            std::uint64_t r64 = mpz_sgn(r.get_mpz_t()) < 0 ? 0 : mpz_get_ui(r.get_mpz_t());
            std::uint64_t m64 = mpz_get_ui(M.get_mpz_t());
            for (std::uint64_t i = 0; i < m; ++i) step_small(r64, m64, exact, want);
            r = r64;
            M = m64;
        } else {
            for (std::uint64_t i = 0; i < m; ++i) step(r, M, exact, want);
        }
        if (!want) return {};
        return split_all(a_, p_, q_);
    }

    void take(std::uint32_t s, std::uint64_t below, bool want) {
        if (want) {
            a_.push_back(below);
            p_.push_back(counts_[s]);
            q_.push_back(remaining_);
        }
        --counts_[s];
        fenwick_.add(s, -1);
        --remaining_;
        out_[cursor_++] = s;
    }

    void rewind(std::uint64_t to) {
        while (cursor_ > to) {
            const std::uint32_t s = out_[--cursor_];
            ++counts_[s];
            fenwick_.add(s, 1);
            ++remaining_;
        }
    }

    void step(mpz_class& r, mpz_class& M, bool exact, bool want) {
        const std::uint64_t rem = remaining_;
        if (rem == 0) throw CorruptInput("rank decoder ran past the sequence end");
        if (mpz_sgn(M.get_mpz_t()) <= 0) M = 1;
        mpz_mul_ui(t_.get_mpz_t(), r.get_mpz_t(), rem);
        mpz_fdiv_q(t_.get_mpz_t(), t_.get_mpz_t(), M.get_mpz_t());
        std::uint64_t d = 0;
        if (mpz_sgn(t_.get_mpz_t()) > 0) d = mpz_fits_ulong_p(t_.get_mpz_t()) ? mpz_get_ui(t_.get_mpz_t()) : rem;
        if (d >= rem) {
            if (exact) throw CorruptInput("rank out of range");
            d = rem - 1;
        }
        const auto s = static_cast<std::uint32_t>(fenwick_.find(d));
        const std::uint64_t below = fenwick_.prefix(s);
        const std::uint64_t c = counts_[s];
        mpz_mul_ui(t_.get_mpz_t(), M.get_mpz_t(), below);
        mpz_fdiv_q_ui(t_.get_mpz_t(), t_.get_mpz_t(), rem);
        r -= t_;
        mpz_mul_ui(M.get_mpz_t(), M.get_mpz_t(), c);
        mpz_fdiv_q_ui(M.get_mpz_t(), M.get_mpz_t(), rem);
        if (!exact) clamp(r, M);
        take(s, below, want);
    }

    // step() on machine words; valid while M < 2^62.
    void step_small(std::uint64_t& r, std::uint64_t& M, bool exact, bool want) {
        __extension__ using u128 = unsigned __int128;
        const std::uint64_t rem = remaining_;
        if (rem == 0) throw CorruptInput("rank decoder ran past the sequence end");
        if (M == 0) M = 1;
        std::uint64_t d = static_cast<std::uint64_t>(static_cast<u128>(r) * rem / M);
        if (d >= rem) {
            if (exact) throw CorruptInput("rank out of range");
            d = rem - 1;
        }
        const auto s = static_cast<std::uint32_t>(fenwick_.find(d));
        const std::uint64_t below = fenwick_.prefix(s);
        const std::uint64_t c = counts_[s];
        const auto offset = static_cast<std::uint64_t>(static_cast<u128>(M) * below / rem);
        if (offset > r) {
            if (exact) throw CorruptInput("rank out of range");
            r = 0;
        } else {
            r -= offset;
        }
        M = static_cast<std::uint64_t>(static_cast<u128>(M) * c / rem);
        if (!exact) {
            if (M == 0) M = 1;
            if (r >= M) r = M - 1;
        }
        take(s, below, want);
    }

    // Moves (r, M) past a decoded prefix with products prod. In exact mode the
    // prefix is accepted only if r lands inside its interval.
    static bool apply(mpz_class& r, mpz_class& M, const Products& prod, bool exact) {
        mpz_class offset = M * prod.t;
        mpz_fdiv_q(offset.get_mpz_t(), offset.get_mpz_t(), prod.q.get_mpz_t());
        mpz_class next_m = M * prod.p;
        mpz_fdiv_q(next_m.get_mpz_t(), next_m.get_mpz_t(), prod.q.get_mpz_t());
        mpz_class next_r = r - offset;
        if (exact) {
            if (mpz_sgn(next_r.get_mpz_t()) < 0 || next_r >= next_m) return false;
        } else {
            clamp(next_r, next_m);
        }
        r = std::move(next_r);
        M = std::move(next_m);
        return true;
    }

    static void clamp(mpz_class& r, mpz_class& M) {
        if (mpz_sgn(M.get_mpz_t()) <= 0) M = 1;
        if (mpz_sgn(r.get_mpz_t()) < 0) r = 0;
        if (r >= M) r = M - 1;
    }

    std::vector<std::uint64_t> counts_;
    Fenwick fenwick_;
    std::uint64_t remaining_;
    std::vector<std::uint32_t> out_;
    std::uint64_t cursor_ = 0;
    std::vector<std::uint64_t> a_, p_, q_;
    mpz_class t_;
};

}  // namespace

double entropy_of_counts(std::span<const std::uint64_t> counts) {
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    long double h = 0;
    for (auto c : counts) {
        if (c == 0) continue;
        h += static_cast<long double>(c) * std::log2(static_cast<long double>(total) / static_cast<long double>(c));
    }
    return static_cast<double>(h);
}

std::uint64_t entropy_width(std::span<const std::uint64_t> counts) {
    std::uint64_t total = 0;
    std::size_t distinct = 0;
    for (auto c : counts) {
        total += c;
        distinct += c > 0;
    }
    if (distinct <= 1) return 0;
    long double h = 0;
    for (auto c : counts) {
        if (c == 0) continue;
        h += static_cast<long double>(c) * std::log2(static_cast<long double>(total) / static_cast<long double>(c));
    }
    const long double nearest = std::round(h);
    if (std::fabs(h - nearest) > 1e-6L) return static_cast<std::uint64_t>(std::ceil(h));

    // H is within rounding noise of an integer w: decide exactly whether
    // 2^w * prod(c^c) >= J^J.
    const auto w = static_cast<std::uint64_t>(nearest);
    std::map<std::uint64_t, std::uint64_t> groups;
    for (auto c : counts) {
        if (c > 1) groups[c] += c;
    }
    mpz_class lhs = 1;
    mpz_class term;
    for (const auto& [value, exponent] : groups) {
        mpz_ui_pow_ui(term.get_mpz_t(), value, exponent);
        lhs *= term;
    }
    lhs <<= w;
    mpz_class rhs;
    mpz_ui_pow_ui(rhs.get_mpz_t(), total, total);
    return lhs >= rhs ? w : w + 1;
}

mpz_class multinomial(std::span<const std::uint64_t> counts) {
    std::uint64_t total = 0;
    std::map<std::uint64_t, std::uint64_t> groups;
    for (auto c : counts) {
        total += c;
        if (c > 1) ++groups[c];
    }
    mpz_class numerator;
    mpz_fac_ui(numerator.get_mpz_t(), total);
    mpz_class denominator = 1;
    mpz_class term;
    for (const auto& [value, multiplicity] : groups) {
        mpz_fac_ui(term.get_mpz_t(), value);
        mpz_pow_ui(term.get_mpz_t(), term.get_mpz_t(), multiplicity);
        denominator *= term;
    }
    mpz_divexact(numerator.get_mpz_t(), numerator.get_mpz_t(), denominator.get_mpz_t());
    return numerator;
}

mpz_class rank_indices(std::span<const std::uint32_t> seq, std::span<const std::uint64_t> counts) {
    std::vector<std::uint64_t> left(counts.begin(), counts.end());
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    if (seq.size() != total) throw DomainError("sequence length does not match the composition");

    Fenwick fenwick(counts);
    std::vector<std::uint64_t> a(seq.size()), p(seq.size()), q(seq.size());
    std::uint64_t remaining = total;
    for (std::size_t t = 0; t < seq.size(); ++t) {
        const std::uint32_t s = seq[t];
        if (s >= left.size() || left[s] == 0) throw DomainError("sequence does not match the composition");
        a[t] = fenwick.prefix(s);
        p[t] = left[s];
        q[t] = remaining;
        --left[s];
        fenwick.add(s, -1);
        --remaining;
    }
    Products prod = split_all(a, p, q);
    mpz_divexact(prod.t.get_mpz_t(), prod.t.get_mpz_t(), prod.p.get_mpz_t());
    return prod.t;
}

std::vector<std::uint32_t> unrank_indices(const mpz_class& rank, std::span<const std::uint64_t> counts) {
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    mpz_class bound = multinomial(counts);
    if (mpz_sgn(rank.get_mpz_t()) < 0 || rank >= bound) throw CorruptInput("rank out of range");
    Unranker decoder(counts, total);
    mpz_class r = rank;
    decoder.decode(r, bound, total, true, false);
    return decoder.take_output();
}

std::vector<std::uint8_t> to_big_endian(const mpz_class& value, std::uint64_t width) {
    std::vector<std::uint8_t> out(static_cast<std::size_t>((width + 7) / 8), 0);
    if (mpz_sgn(value.get_mpz_t()) == 0) return out;
    const std::size_t needed = (mpz_sizeinbase(value.get_mpz_t(), 2) + 7) / 8;
    if (needed > out.size()) throw DomainError("value does not fit the field width");
    std::size_t written = 0;
    mpz_export(out.data() + (out.size() - needed), &written, 1, 1, 1, 0, value.get_mpz_t());
    return out;
}

mpz_class from_big_endian(std::span<const std::uint8_t> bytes) {
    mpz_class v;
    if (!bytes.empty()) mpz_import(v.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
    return v;
}

}  // namespace bdz
