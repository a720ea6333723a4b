#include "hmmsprt/graph.hpp"

#include <algorithm>
#include <set>

namespace hmmsprt {

bool SccDecomposition::is_bottom(int comp) const {
    return std::find(bottom.begin(), bottom.end(), comp) != bottom.end();
}

namespace {

// Iterative Tarjan; recursion depth would be a liability on support
// chains with ~1e5 nodes.
struct TarjanState {
    const Digraph& g;
    std::vector<int> index, lowlink, on_stack;
    std::vector<int> stack;
    int next_index = 0;
    std::vector<std::vector<int>> components;
    std::vector<int> component_of;

    explicit TarjanState(const Digraph& g)
        : g(g),
          index(g.n, -1),
          lowlink(g.n, 0),
          on_stack(g.n, 0),
          component_of(g.n, -1) {}

    void run(int root) {
        struct Frame {
            int v;
            std::size_t edge = 0;
        };
        std::vector<Frame> frames{{root}};
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            int v = f.v;
            if (f.edge < g.adj[v].size()) {
                int w = g.adj[v][f.edge++];
                if (index[w] == -1) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    frames.push_back({w});
                } else if (on_stack[w]) {
                    lowlink[v] = std::min(lowlink[v], index[w]);
                }
            } else {
                if (lowlink[v] == index[v]) {
                    std::vector<int> comp;
                    int w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        component_of[w] = static_cast<int>(components.size());
                        comp.push_back(w);
                    } while (w != v);
                    std::sort(comp.begin(), comp.end());
                    components.push_back(std::move(comp));
                }
                frames.pop_back();
                if (!frames.empty()) {
                    int parent = frames.back().v;
                    lowlink[parent] = std::min(lowlink[parent], lowlink[v]);
                }
            }
        }
    }
};

}  // namespace

SccDecomposition scc_decompose(const Digraph& g) {
    TarjanState t(g);
    for (std::size_t v = 0; v < g.n; ++v)
        if (t.index[v] == -1) t.run(static_cast<int>(v));

    SccDecomposition out;
    out.components = std::move(t.components);
    out.component_of = std::move(t.component_of);
    std::size_t k = out.components.size();
    out.condensation.assign(k, {});
    std::vector<std::set<int>> edges(k);
    for (std::size_t v = 0; v < g.n; ++v) {
        int cv = out.component_of[v];
        for (int w : g.adj[v]) {
            int cw = out.component_of[w];
            if (cv != cw) edges[cv].insert(cw);
        }
    }
    for (std::size_t c = 0; c < k; ++c) {
        out.condensation[c].assign(edges[c].begin(), edges[c].end());
        if (edges[c].empty()) out.bottom.push_back(static_cast<int>(c));
    }
    return out;
}

std::vector<bool> reachable(const Digraph& g, const std::vector<int>& from) {
    std::vector<bool> seen(g.n, false);
    std::vector<int> queue;
    for (int v : from)
        if (!seen[v]) {
            seen[v] = true;
            queue.push_back(v);
        }
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        for (int w : g.adj[v])
            if (!seen[w]) {
                seen[w] = true;
                queue.push_back(w);
            }
    }
    return seen;
}

}  // namespace hmmsprt
