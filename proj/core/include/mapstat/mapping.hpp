#pragma once
// Functional digraphs of mappings T:[n]->[n] and their per-mapping statistics.
//
// The graph of a mapping has one out-edge per vertex, so every weakly
// connected component consists of exactly one directed cycle with trees
// hanging off the cyclic vertices.  decompose() recovers that structure in
// O(n); stats() condenses it into the scalar statistics tracked by the
// simulator and the exact enumerator.

#include <cstdint>
#include <vector>

namespace mapstat {

using Vertex = std::int32_t;

/// A mapping T:[n]->[n], stored 0-based.  All constructors and accessors
/// that mention vertex labels speak 1-based; `next` is the raw 0-based
/// target array used by the algorithms.
struct Mapping {
    std::vector<Vertex> next;

    Vertex size() const { return static_cast<Vertex>(next.size()); }

    /// Builds from a 1-based target array (entry i holds T(i+1) in [1..n]).
    /// Throws std::invalid_argument on an empty array or out-of-range target.
    static Mapping from_one_based(const std::vector<Vertex>& targets);

    /// T(i) for a 1-based vertex i, returned 1-based.
    Vertex target_one_based(Vertex i) const { return next[i - 1] + 1; }
};

struct ComponentInfo {
    std::int64_t size = 0;
    std::int64_t cycle_len = 0;
    Vertex min_label = 0;  // smallest vertex label in the component, 1-based
    // Tree sizes rooted at the cyclic vertices of this component (root
    // included), ordered by ascending root label.  Sums to `size`.
    std::vector<std::int64_t> tree_sizes;
};

/// Component/cycle structure of one mapping.  Components are indexed in
/// ascending order of their minimum vertex label, which makes every
/// consumer's tie-breaking deterministic.
struct Decomposition {
    std::vector<std::int32_t> component_id;  // per 0-based vertex
    std::vector<std::uint8_t> is_cyclic;     // per 0-based vertex
    std::vector<ComponentInfo> components;
};

/// Scalar statistics of one mapping.
///
/// Ties are resolved by the smallest minimum vertex label: among components
/// of maximal size for `mu`/`nu`, and among components of maximal cycle
/// length for `richest_size`.  `tau_in_largest` is true iff some tree of
/// maximal size lives in the largest component.
struct MappingStats {
    std::int64_t lambda = 0;        // number of cyclic vertices
    std::int64_t mu = 0;            // size of the largest component
    std::int64_t nu = 0;            // cycle length of the largest component
    std::int64_t kappa = 0;         // longest cycle length over all components
    std::int64_t tau = 0;           // largest tree size (root counted)
    std::int64_t richest_size = 0;  // size of the component holding the longest cycle
    bool richest_is_largest = false;
    bool tau_in_largest = false;
};

/// Reusable scratch arrays for decompose(); lets the simulator run millions
/// of replicates without reallocating.
struct DecomposeBuffers {
    std::vector<std::int32_t> indegree;
    std::vector<std::int32_t> stack;
    std::vector<std::int32_t> parent;
    std::vector<std::int32_t> pred_pos;
    std::vector<std::int32_t> pred;
};

/// Decomposes the functional digraph of `m`: cyclic vertices by in-degree
/// peeling, components by union-find over the edges (i, T(i)), tree sizes by
/// reverse traversal from each cyclic vertex.  Pure and deterministic.
void decompose(const Mapping& m, Decomposition& out, DecomposeBuffers& buf);
Decomposition decompose(const Mapping& m);

/// Scalar statistics of a decomposition (see MappingStats for conventions).
MappingStats stats(const Decomposition& d);

/// decompose + stats in one call.
MappingStats mapping_stats(const Mapping& m);

/// Test oracle: vertex i is cyclic iff iterating T at most n times from i
/// returns to i.  Quadratic; rejects n > 10^4.
std::vector<std::uint8_t> cyclic_vertices_bruteforce(const Mapping& m);

}  // namespace mapstat
