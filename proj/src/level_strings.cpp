#include "bdz/level_strings.hpp"

#include <algorithm>
#include <cstring>
#include <string>
#include <string_view>
#include <unordered_set>

#include "bdz/error.hpp"

namespace bdz {

namespace {

VertexId max_id(const LevelString& s) {
    VertexId top = 0;
    for (const auto& sym : s) top = std::max(top, sym.m);
    return top;
}

std::string describe(const LevelSymbol& s) {
    return "A_" + std::to_string(s.m) + "^" + std::to_string(s.q);
}

}  // namespace

LevelString distinct_symbols(const LevelString& s) {
    // Within one level string a vertex has a single power, so symbols are
    // deduplicated by vertex.
    std::vector<bool> seen(max_id(s) + 1, false);
    LevelString out;
    for (const auto& sym : s) {
        if (!seen[sym.m]) {
            seen[sym.m] = true;
            out.push_back(sym);
        }
    }
    return out;
}

LevelSkeleton level_skeleton(const LevelString& prev) {
    LevelSkeleton sk;
    sk.u = distinct_symbols(prev);
    for (const auto& sym : sk.u) {
        if (sym.q > 1) {
            sk.known.push_back(LevelSymbol{sym.m, sym.q - 1});
            sk.length += 1;
        } else {
            sk.length += 2;
            sk.hat_length += 2;
        }
    }
    return sk;
}

LevelString LevelSkeleton::assemble(const LevelString& hat) const {
    if (hat.size() != hat_length) throw StructuralError("substituted part has the wrong length");
    LevelString out;
    out.reserve(length);
    std::size_t next_known = 0;
    std::size_t next_hat = 0;
    for (const auto& sym : u) {
        if (sym.q > 1) {
            out.push_back(known[next_known++]);
        } else {
            out.push_back(hat[next_hat++]);
            out.push_back(hat[next_hat++]);
        }
    }
    return out;
}

LevelStrings generate_levels(const Robdd& g) {
    LevelStrings ls;
    ls.k = g.k();
    ls.levels.reserve(g.k() + 1);
    ls.levels.push_back(LevelString{LevelSymbol{g.root(), 1}});
    for (unsigned i = 2; i <= g.k() + 1; ++i) {
        const LevelString u = distinct_symbols(ls.levels.back());
        LevelString cur;
        cur.reserve(u.size() * 2);
        for (const auto& sym : u) {
            if (sym.q > 1) {
                cur.push_back(LevelSymbol{sym.m, sym.q - 1});
                continue;
            }
            const Vertex& v = g.vertex(sym.m);
            const Vertex& lo = g.vertex(v.lo);
            const Vertex& hi = g.vertex(v.hi);
            cur.push_back(LevelSymbol{v.lo, lo.level - v.level});
            cur.push_back(LevelSymbol{v.hi, hi.level - v.level});
        }
        ls.levels.push_back(std::move(cur));
    }
    return ls;
}

LevelDecomposition decompose_level(const LevelString& prev, const LevelString& cur) {
    const LevelSkeleton sk = level_skeleton(prev);
    if (cur.size() != sk.length) {
        throw StructuralError("level length " + std::to_string(cur.size()) + " does not match the expected " +
                              std::to_string(sk.length));
    }
    LevelDecomposition d;
    d.hat.reserve(sk.hat_length);
    std::size_t pos = 0;
    for (const auto& sym : sk.u) {
        if (sym.q > 1) {
            if (cur[pos] != LevelSymbol{sym.m, sym.q - 1}) {
                throw StructuralError("expected " + describe(LevelSymbol{sym.m, sym.q - 1}) + " at position " +
                                      std::to_string(pos));
            }
            ++pos;
        } else {
            d.hat.push_back(cur[pos]);
            d.hat.push_back(cur[pos + 1]);
            pos += 2;
        }
    }

    const VertexId top = std::max(max_id(prev), max_id(cur));
    std::vector<std::uint32_t> prev_power(top + 1, 0);
    for (const auto& sym : prev) prev_power[sym.m] = sym.q;
    std::vector<bool> counted(top + 1, false);

    d.types.reserve(d.hat.size());
    for (const auto& sym : d.hat) {
        const std::uint32_t before = prev_power[sym.m];
        if (before == 0) {
            d.types.push_back(EntryType::typeII);
            d.pi2.push_back(sym);
            if (!counted[sym.m]) {
                counted[sym.m] = true;
                d.q_sum += sym.q;
            }
        } else if (before == sym.q + 1) {
            d.types.push_back(EntryType::typeI);
            d.pi1.push_back(sym);
        } else {
            throw StructuralError(describe(sym) + " conflicts with power " + std::to_string(before) +
                                  " in the previous level");
        }
    }
    return d;
}

LevelStrings relabel_by_appearance(const LevelStrings& ls) {
    VertexId top = 0;
    for (const auto& s : ls.levels) top = std::max(top, max_id(s));
    std::vector<VertexId> fresh(top + 1, kNoVertex);
    VertexId next = 1;
    LevelStrings out;
    out.k = ls.k;
    out.levels.reserve(ls.levels.size());
    for (const auto& s : ls.levels) {
        LevelString t;
        t.reserve(s.size());
        for (const auto& sym : s) {
            if (fresh[sym.m] == kNoVertex) fresh[sym.m] = next++;
            t.push_back(LevelSymbol{fresh[sym.m], sym.q});
        }
        out.levels.push_back(std::move(t));
    }
    return out;
}

Robdd rebuild_graph(const LevelStrings& ls, int terminal_bit) {
    const unsigned k = ls.k;
    if (k < 1 || ls.levels.size() != k + 1) throw StructuralError("expected k+1 level strings");
    if (ls.levels[0] != LevelString{LevelSymbol{1, 1}}) throw StructuralError("S_1 must be (A_1)");

    VertexId top = 0;
    std::size_t entries = 0;
    for (const auto& s : ls.levels) {
        top = std::max(top, max_id(s));
        entries += s.size();
    }
    if (top > entries) throw StructuralError("vertex ids are not dense");
    std::vector<Vertex> vertices(top);

    // A symbol A_m^q inside S_i pins L(A_m) = i - 1 + q.
    for (unsigned i = 1; i <= k + 1; ++i) {
        for (const auto& sym : ls.levels[i - 1]) {
            if (sym.m == kNoVertex || sym.q == 0) throw StructuralError("malformed symbol " + describe(sym));
            const std::uint64_t level = std::uint64_t{i} - 1 + sym.q;
            if (level > k + 1) throw StructuralError(describe(sym) + " lies below the terminal level");
            auto& v = vertices[sym.m - 1];
            if (v.level == 0) {
                v.level = static_cast<std::uint32_t>(level);
            } else if (v.level != level) {
                throw StructuralError("level conflict for vertex " + std::to_string(sym.m));
            }
        }
    }
    for (VertexId id = 1; id <= top; ++id) {
        if (vertices[id - 1].level == 0) throw StructuralError("vertex " + std::to_string(id) + " never appears");
    }

    // Edges: the two entries written under each bare symbol.
    for (unsigned i = 2; i <= k + 1; ++i) {
        const LevelString& prev = ls.levels[i - 2];
        const LevelString& cur = ls.levels[i - 1];
        const LevelString u = distinct_symbols(prev);
        std::size_t pos = 0;
        for (const auto& sym : u) {
            const std::size_t need = sym.q > 1 ? 1 : 2;
            if (pos + need > cur.size()) throw StructuralError("S_" + std::to_string(i) + " is too short");
            if (sym.q > 1) {
                if (cur[pos] != LevelSymbol{sym.m, sym.q - 1}) {
                    throw StructuralError("S_" + std::to_string(i) + " does not carry " + describe(sym) + " down");
                }
            } else {
                auto& v = vertices[sym.m - 1];
                v.lo = cur[pos].m;
                v.hi = cur[pos + 1].m;
            }
            pos += need;
        }
        if (pos != cur.size()) throw StructuralError("S_" + std::to_string(i) + " is too long");
    }

    std::vector<VertexId> terminals;
    for (VertexId id = 1; id <= top; ++id) {
        if (vertices[id - 1].level == k + 1) terminals.push_back(id);
    }
    if (terminals.size() != 2) {
        throw StructuralError("expected two terminals, found " + std::to_string(terminals.size()));
    }
    vertices[terminals[0] - 1].value = terminal_bit ? 1 : 0;
    vertices[terminals[1] - 1].value = terminal_bit ? 0 : 1;

    return canonicalize(Robdd::assemble(k, std::move(vertices)));
}

std::vector<std::vector<VEntry>> build_v_sequences(const DyadicCore& x) {
    const auto bits = x.bits();
    const char* base = reinterpret_cast<const char*>(bits.data());
    const unsigned k = x.k();
    std::vector<std::vector<VEntry>> out;
    for (unsigned i = 2; i <= k + 1; ++i) {
        const std::size_t block = std::size_t{1} << (k - i + 2);
        const std::size_t half = block / 2;
        std::unordered_set<std::string_view> seen;
        std::vector<VEntry> v;
        for (std::size_t off = 0; off < bits.size(); off += block) {
            if (!seen.insert(std::string_view(base + off, block)).second) continue;
            auto left = bits.subspan(off, half);
            auto right = bits.subspan(off + half, half);
            v.push_back(VEntry{Bits(left.begin(), left.end()), off});
            if (!std::equal(left.begin(), left.end(), right.begin())) {
                v.push_back(VEntry{Bits(right.begin(), right.end()), off + half});
            }
        }
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace bdz
