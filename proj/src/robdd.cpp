#include "bdz/robdd.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <string>

#include "bdz/error.hpp"
#include "pair_table.hpp"

namespace bdz {

namespace {

bool halves_differ(std::span<const std::uint8_t> bits) {
    std::size_t half = bits.size() / 2;
    return std::memcmp(bits.data(), bits.data() + half, half) != 0;
}

// Property (ii) realized as a queue scan: vertices are numbered in the order
// they are first reached as lo/hi targets of already-numbered nonterminals.
std::vector<VertexId> scan_order(std::span<const Vertex> vertices, VertexId root) {
    std::vector<VertexId> order;
    order.reserve(vertices.size());
    std::vector<bool> seen(vertices.size() + 1, false);
    order.push_back(root);
    seen[root] = true;
    for (std::size_t head = 0; head < order.size(); ++head) {
        const Vertex& v = vertices[order[head] - 1];
        if (v.terminal()) continue;
        for (VertexId child : {v.lo, v.hi}) {
            if (!seen[child]) {
                seen[child] = true;
                order.push_back(child);
            }
        }
    }
    return order;
}

std::vector<Vertex> renumber(std::span<const Vertex> vertices, std::span<const VertexId> order) {
    std::vector<VertexId> new_id(vertices.size() + 1, kNoVertex);
    for (std::size_t i = 0; i < order.size(); ++i) new_id[order[i]] = i + 1;
    std::vector<Vertex> out(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        Vertex v = vertices[order[i] - 1];
        if (!v.terminal()) {
            v.lo = new_id[v.lo];
            v.hi = new_id[v.hi];
        }
        out[i] = v;
    }
    return out;
}

}  // namespace

bool is_dyadic(std::span<const std::uint8_t> bits) {
    if (bits.size() < 2 || !std::has_single_bit(bits.size())) return false;
    return halves_differ(bits);
}

DyadicCore::DyadicCore(Bits bits) : bits_(std::move(bits)) {
    if (!is_dyadic(bits_)) {
        throw DomainError("string of length " + std::to_string(bits_.size()) +
                          " is not dyadic (length 2^k, k >= 1, halves differ)");
    }
    k_ = static_cast<unsigned>(std::countr_zero(bits_.size()));
}

Robdd Robdd::assemble(unsigned k, std::vector<Vertex> vertices) {
    if (k < 1) throw StructuralError("diagram depth must be at least 1");
    if (vertices.size() < 3) throw StructuralError("a diagram needs a root and two terminals");
    Robdd g;
    g.k_ = k;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vertex& v = vertices[i];
        const VertexId id = i + 1;
        if (v.terminal()) {
            if (v.hi != kNoVertex) throw StructuralError("vertex " + std::to_string(id) + " has a single edge");
            if (v.level != k + 1) throw StructuralError("terminal " + std::to_string(id) + " is not at level k+1");
            VertexId& slot = v.value ? g.terminal1_ : g.terminal0_;
            if (v.value > 1 || slot != kNoVertex) throw StructuralError("terminals must be exactly one 0 and one 1");
            slot = id;
            continue;
        }
        if (v.hi == kNoVertex || v.lo > n || v.hi > n) {
            throw StructuralError("vertex " + std::to_string(id) + " has a dangling edge");
        }
        if (v.lo == v.hi) throw StructuralError("vertex " + std::to_string(id) + " has a multiple edge");
        if (v.level < 1 || v.level > k) throw StructuralError("nonterminal " + std::to_string(id) + " level out of range");
        if (vertices[v.lo - 1].level <= v.level || vertices[v.hi - 1].level <= v.level) {
            throw StructuralError("levels must increase along edges at vertex " + std::to_string(id));
        }
    }
    if (g.terminal0_ == kNoVertex || g.terminal1_ == kNoVertex) throw StructuralError("missing terminal");
    if (vertices[0].terminal() || vertices[0].level != 1) throw StructuralError("vertex 1 must be a level-1 root");
    if (scan_order(vertices, 1).size() != n) throw StructuralError("some vertex is unreachable from the root");
    g.vertices_ = std::move(vertices);
    return g;
}

const Vertex& Robdd::vertex(VertexId id) const {
    if (id == kNoVertex || id > vertices_.size()) {
        throw DomainError("invalid vertex id " + std::to_string(id));
    }
    return vertices_[id - 1];
}

Robdd build_robdd(const DyadicCore& x) {
    const unsigned k = x.k();
    const auto bits = x.bits();

    // Provisional numbering: 1 = "0", 2 = "1", then vertices in creation order.
    std::vector<Vertex> vertices;
    vertices.push_back(Vertex{k + 1, kNoVertex, kNoVertex, 0});
    vertices.push_back(Vertex{k + 1, kNoVertex, kNoVertex, 1});

    // ids[b] is the vertex of block b at the current block size. A block whose
    // halves are equal takes its half's vertex, which is the level skip.
    std::vector<VertexId> ids(bits.size() / 2);
    detail::PairTable table;
    table.reset(4);
    for (std::size_t b = 0; b < ids.size(); ++b) {
        VertexId lo = bits[2 * b] + 1u;
        VertexId hi = bits[2 * b + 1] + 1u;
        if (lo == hi) {
            ids[b] = lo;
            continue;
        }
        bool inserted = false;
        ids[b] = table.find_or_insert(lo, hi, vertices.size() + 1, inserted);
        if (inserted) vertices.push_back(Vertex{k, lo, hi, 0});
    }
    for (unsigned j = 2; j <= k; ++j) {
        const std::size_t blocks = ids.size() / 2;
        table.reset(blocks);
        for (std::size_t b = 0; b < blocks; ++b) {
            VertexId lo = ids[2 * b];
            VertexId hi = ids[2 * b + 1];
            if (lo == hi) {
                ids[b] = lo;
                continue;
            }
            bool inserted = false;
            ids[b] = table.find_or_insert(lo, hi, vertices.size() + 1, inserted);
            if (inserted) vertices.push_back(Vertex{k + 1 - j, lo, hi, 0});
        }
        ids.resize(blocks);
    }

    const VertexId root = ids.front();
    auto order = scan_order(vertices, root);
    return Robdd::assemble(k, renumber(vertices, order));
}

Bits expand(const Robdd& g, VertexId v) {
    const std::uint32_t level = g.vertex(v).level;
    const unsigned k = g.k();
    auto length_of = [k](std::uint32_t lvl) { return std::size_t{1} << (k + 1 - lvl); };

    Bits out(length_of(level));
    constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> first(g.size() + 1, kUnset);

    // Writes phi(u) at pos, copying from an earlier occurrence when there is one.
    auto write = [&](auto&& self, VertexId u, std::size_t pos) -> void {
        const Vertex& vx = g.vertices()[u - 1];
        const std::size_t len = length_of(vx.level);
        if (first[u] != kUnset) {
            std::memcpy(out.data() + pos, out.data() + first[u], len);
            return;
        }
        if (vx.terminal()) {
            out[pos] = vx.value;
        } else {
            const std::size_t half = len / 2;
            for (std::size_t side = 0; side < 2; ++side) {
                const VertexId child = side == 0 ? vx.lo : vx.hi;
                const std::size_t base = pos + side * half;
                const std::size_t child_len = length_of(g.vertices()[child - 1].level);
                self(self, child, base);
                for (std::size_t filled = child_len; filled < half; filled *= 2) {
                    std::memcpy(out.data() + base + filled, out.data() + base, std::min(filled, half - filled));
                }
            }
        }
        first[u] = pos;
    };
    write(write, v, 0);
    return out;
}

std::vector<VertexId> canonical_order(const Robdd& g) {
    return scan_order(g.vertices(), g.root());
}

Robdd relabel(const Robdd& g, std::span<const VertexId> order) {
    if (order.size() != g.size()) throw DomainError("relabel order has the wrong length");
    std::vector<bool> seen(g.size() + 1, false);
    for (VertexId id : order) {
        if (id == kNoVertex || id > g.size() || seen[id]) throw DomainError("relabel order is not a permutation");
        seen[id] = true;
    }
    return Robdd::assemble(g.k(), renumber(g.vertices(), order));
}

Robdd canonicalize(const Robdd& g) {
    auto order = canonical_order(g);
    return relabel(g, order);
}

std::size_t quasi_reduced_vertex_count(const DyadicCore& x) {
    const auto bits = x.bits();
    std::size_t total = 2;  // both terminals occur in a dyadic string
    std::vector<std::uint64_t> ids(bits.begin(), bits.end());
    detail::PairTable table;
    std::uint64_t next = 2;
    while (ids.size() > 1) {
        const std::size_t blocks = ids.size() / 2;
        table.reset(blocks);
        std::size_t distinct = 0;
        for (std::size_t b = 0; b < blocks; ++b) {
            bool inserted = false;
            ids[b] = table.find_or_insert(ids[2 * b], ids[2 * b + 1], next, inserted);
            if (inserted) {
                ++next;
                ++distinct;
            }
        }
        ids.resize(blocks);
        total += distinct;
    }
    return total;
}

}  // namespace bdz
