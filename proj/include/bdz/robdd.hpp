#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bdz/bits.hpp"

namespace bdz {

/// Vertex index. Canonical ids are 1-based; 0 means "no vertex".
using VertexId = std::uint64_t;
inline constexpr VertexId kNoVertex = 0;

/// A binary string of length 2^k (k >= 1) whose halves differ.
class DyadicCore {
public:
    /// Throws DomainError unless `bits` is in the dyadic domain.
    explicit DyadicCore(Bits bits);

    std::span<const std::uint8_t> bits() const { return bits_; }
    unsigned k() const { return k_; }
    std::size_t size() const { return bits_.size(); }

private:
    Bits bits_;
    unsigned k_ = 0;
};

/// True iff the length is 2^k with k >= 1 and the two halves differ.
bool is_dyadic(std::span<const std::uint8_t> bits);

struct Vertex {
    std::uint32_t level = 0;
    VertexId lo = kNoVertex;  // edge 0
    VertexId hi = kNoVertex;  // edge 1
    std::uint8_t value = 0;   // terminals only

    bool terminal() const { return lo == kNoVertex; }

    friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// Reduced ordered BDD of a dyadic string. Vertex i (1-based) is vertices()[i-1].
/// The root is id 1; terminals sit at level k+1. Immutable once built.
class Robdd {
public:
    /// Validates levels, edges, terminals and reachability; throws StructuralError.
    /// Does not reorder ids.
    static Robdd assemble(unsigned k, std::vector<Vertex> vertices);

    unsigned k() const { return k_; }
    std::size_t size() const { return vertices_.size(); }
    VertexId root() const { return 1; }
    VertexId terminal0() const { return terminal0_; }
    VertexId terminal1() const { return terminal1_; }

    /// Throws DomainError on an invalid id.
    const Vertex& vertex(VertexId id) const;
    std::span<const Vertex> vertices() const { return vertices_; }

    friend bool operator==(const Robdd&, const Robdd&) = default;

private:
    Robdd() = default;

    unsigned k_ = 0;
    std::vector<Vertex> vertices_;
    VertexId terminal0_ = kNoVertex;
    VertexId terminal1_ = kNoVertex;
};

/// Builds G_x. The result carries canonical ids.
Robdd build_robdd(const DyadicCore& x);

/// phi(v): the string of length 2^(k+1-L(v)) represented by v.
Bits expand(const Robdd& g, VertexId v);

/// order[i] is the current id of the vertex whose canonical id is i+1.
/// Root first; then the distinct (lo, hi) targets of nonterminals, taken in
/// increasing canonical index, in first-appearance order.
std::vector<VertexId> canonical_order(const Robdd& g);

/// Renumbers g so that `order[i]` becomes id i+1.
Robdd relabel(const Robdd& g, std::span<const VertexId> order);
Robdd canonicalize(const Robdd& g);

/// |V(G')| for the quasi-reduced diagram: number of distinct strings among the
/// partitions of x into blocks of length 1, 2, ..., 2^k.
std::size_t quasi_reduced_vertex_count(const DyadicCore& x);

}  // namespace bdz
