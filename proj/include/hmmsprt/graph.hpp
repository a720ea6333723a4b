#pragma once

#include <cstddef>
#include <vector>

namespace hmmsprt {

struct Digraph {
    std::size_t n = 0;
    std::vector<std::vector<int>> adj;

    explicit Digraph(std::size_t nodes = 0) : n(nodes), adj(nodes) {}
    void add_edge(int from, int to) { adj[from].push_back(to); }
};

struct SccDecomposition {
    // components[i] is sorted; components are in reverse topological
    // order of the condensation (successors first).
    std::vector<std::vector<int>> components;
    std::vector<int> component_of;
    std::vector<std::vector<int>> condensation;  // deduplicated edges
    std::vector<int> bottom;                     // condensation sinks

    bool is_bottom(int comp) const;
};

SccDecomposition scc_decompose(const Digraph& g);

// Forward-reachable closure, including the seed set.
std::vector<bool> reachable(const Digraph& g, const std::vector<int>& from);

}  // namespace hmmsprt
