#include "mapstat/mapping.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace mapstat {

Mapping Mapping::from_one_based(const std::vector<Vertex>& targets) {
    const auto n = static_cast<Vertex>(targets.size());
    if (n < 1) throw std::invalid_argument("Mapping: need at least one vertex");
    Mapping m;
    m.next.resize(targets.size());
    for (Vertex i = 0; i < n; ++i) {
        if (targets[i] < 1 || targets[i] > n)
            throw std::invalid_argument("Mapping: target " + std::to_string(targets[i]) +
                                        " at vertex " + std::to_string(i + 1) +
                                        " outside [1," + std::to_string(n) + "]");
        m.next[i] = targets[i] - 1;
    }
    return m;
}

namespace {

// Union-find with path halving.  Roots are kept at the smallest vertex of
// their set, so the root label doubles as the component's min label.
inline std::int32_t find_root(std::vector<std::int32_t>& parent, std::int32_t x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

}  // namespace

void decompose(const Mapping& m, Decomposition& out, DecomposeBuffers& buf) {
    const std::int32_t n = m.size();
    const auto& next = m.next;

    // Cyclic vertices: peel in-degree-0 vertices; survivors lie on cycles.
    buf.indegree.assign(n, 0);
    for (std::int32_t v = 0; v < n; ++v) ++buf.indegree[next[v]];
    buf.stack.clear();
    for (std::int32_t v = 0; v < n; ++v)
        if (buf.indegree[v] == 0) buf.stack.push_back(v);
    out.is_cyclic.assign(n, 1);
    while (!buf.stack.empty()) {
        const std::int32_t v = buf.stack.back();
        buf.stack.pop_back();
        out.is_cyclic[v] = 0;
        if (--buf.indegree[next[v]] == 0) buf.stack.push_back(next[v]);
    }

    // Components over edges (v, T(v)); attach the larger root under the
    // smaller one so each root is its component's minimum label.
    buf.parent.resize(n);
    std::iota(buf.parent.begin(), buf.parent.end(), 0);
    for (std::int32_t v = 0; v < n; ++v) {
        std::int32_t a = find_root(buf.parent, v);
        std::int32_t b = find_root(buf.parent, next[v]);
        if (a != b) {
            if (a < b)
                buf.parent[b] = a;
            else
                buf.parent[a] = b;
        }
    }

    out.component_id.assign(n, -1);
    out.components.clear();
    for (std::int32_t v = 0; v < n; ++v) {
        const std::int32_t r = find_root(buf.parent, v);
        std::int32_t c = out.component_id[r];
        if (c < 0) {
            // First visit in ascending vertex order, so v == r == min label.
            c = static_cast<std::int32_t>(out.components.size());
            out.component_id[r] = c;
            out.components.push_back(ComponentInfo{});
            out.components[c].min_label = r + 1;
        }
        out.component_id[v] = c;
        ++out.components[c].size;
        out.components[c].cycle_len += out.is_cyclic[v];
    }

    // Tree sizes: reverse-traverse non-cyclic predecessors from each cyclic
    // vertex.  CSR predecessor lists restricted to non-cyclic sources keep
    // the walk off the cycle edges.
    buf.pred_pos.assign(n + 1, 0);
    for (std::int32_t v = 0; v < n; ++v)
        if (!out.is_cyclic[v]) ++buf.pred_pos[next[v] + 1];
    for (std::int32_t v = 0; v < n; ++v) buf.pred_pos[v + 1] += buf.pred_pos[v];
    buf.pred.resize(buf.pred_pos[n]);
    {
        // pred_pos is consumed as a cursor and restored afterwards.
        for (std::int32_t v = 0; v < n; ++v)
            if (!out.is_cyclic[v]) buf.pred[buf.pred_pos[next[v]]++] = v;
        for (std::int32_t v = n; v > 0; --v) buf.pred_pos[v] = buf.pred_pos[v - 1];
        buf.pred_pos[0] = 0;
    }
    for (std::int32_t v = 0; v < n; ++v) {
        if (!out.is_cyclic[v]) continue;
        std::int64_t tree = 0;
        buf.stack.clear();
        buf.stack.push_back(v);
        while (!buf.stack.empty()) {
            const std::int32_t u = buf.stack.back();
            buf.stack.pop_back();
            ++tree;
            for (std::int32_t e = buf.pred_pos[u]; e < buf.pred_pos[u + 1]; ++e)
                buf.stack.push_back(buf.pred[e]);
        }
        out.components[out.component_id[v]].tree_sizes.push_back(tree);
    }
}

Decomposition decompose(const Mapping& m) {
    Decomposition d;
    DecomposeBuffers buf;
    decompose(m, d, buf);
    return d;
}

MappingStats stats(const Decomposition& d) {
    MappingStats s;
    std::size_t largest = 0;
    std::size_t richest = 0;
    for (std::size_t c = 0; c < d.components.size(); ++c) {
        const ComponentInfo& comp = d.components[c];
        s.lambda += comp.cycle_len;
        if (comp.size > d.components[largest].size) largest = c;
        if (comp.cycle_len > d.components[richest].cycle_len) richest = c;
        for (const std::int64_t t : comp.tree_sizes)
            if (t > s.tau) s.tau = t;
    }
    // Components are ordered by min label, so the first maximum wins ties.
    s.mu = d.components[largest].size;
    s.nu = d.components[largest].cycle_len;
    s.kappa = d.components[richest].cycle_len;
    s.richest_size = d.components[richest].size;
    s.richest_is_largest = (richest == largest);
    std::int64_t tau_in_largest = 0;
    for (const std::int64_t t : d.components[largest].tree_sizes)
        if (t > tau_in_largest) tau_in_largest = t;
    s.tau_in_largest = (tau_in_largest == s.tau);
    return s;
}

MappingStats mapping_stats(const Mapping& m) { return stats(decompose(m)); }

std::vector<std::uint8_t> cyclic_vertices_bruteforce(const Mapping& m) {
    const std::int32_t n = m.size();
    if (n > 10000)
        throw std::invalid_argument("cyclic_vertices_bruteforce: n > 10^4 (quadratic guard)");
    std::vector<std::uint8_t> cyclic(n, 0);
    for (std::int32_t i = 0; i < n; ++i) {
        std::int32_t j = i;
        for (std::int32_t step = 0; step < n; ++step) {
            j = m.next[j];
            if (j == i) {
                cyclic[i] = 1;
                break;
            }
        }
    }
    return cyclic;
}

}  // namespace mapstat
