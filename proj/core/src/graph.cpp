#include "ltp/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ltp {

Graph Graph::from_edges(NodeId node_count, std::vector<Edge> edges) {
    for (auto& [u, v] : edges) {
        if (u >= node_count || v >= node_count) {
            throw std::invalid_argument("Graph::from_edges: endpoint " +
                                        std::to_string(std::max(u, v)) +
                                        " out of range for node_count " +
                                        std::to_string(node_count));
        }
        if (u > v) std::swap(u, v);
    }
    std::erase_if(edges, [](const Edge& e) { return e.first == e.second; });
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    Graph g;
    g.node_count_ = node_count;
    g.edges_ = std::move(edges);

    std::vector<std::size_t> deg(node_count, 0);
    for (const auto& [u, v] : g.edges_) {
        ++deg[u];
        ++deg[v];
    }
    g.offsets_.assign(node_count + 1, 0);
    for (NodeId v = 0; v < node_count; ++v) g.offsets_[v + 1] = g.offsets_[v] + deg[v];
    g.adjacency_.resize(2 * g.edges_.size());
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& [u, v] : g.edges_) {
        g.adjacency_[cursor[u]++] = v;
        g.adjacency_[cursor[v]++] = u;
    }
    // each list receives ids from both edge roles, so sort per list
    for (NodeId v = 0; v < node_count; ++v) {
        std::sort(g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]),
                  g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]));
    }
    return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::size_t Graph::edge_index(NodeId u, NodeId v) const {
    if (u > v) std::swap(u, v);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{u, v});
    if (it == edges_.end() || *it != Edge{u, v}) return npos;
    return static_cast<std::size_t>(it - edges_.begin());
}

bool Graph::check_invariants() const {
    if (offsets_.size() != node_count_ + 1u || offsets_.front() != 0 ||
        offsets_.back() != adjacency_.size()) {
        return false;
    }
    if (adjacency_.size() != 2 * edges_.size()) return false;
    for (NodeId v = 0; v < node_count_; ++v) {
        auto nb = neighbors(v);
        for (std::size_t i = 0; i < nb.size(); ++i) {
            if (nb[i] >= node_count_ || nb[i] == v) return false;
            if (i > 0 && nb[i] <= nb[i - 1]) return false;  // sorted, no dups
            if (!has_edge(nb[i], v)) return false;          // symmetry
        }
    }
    if (!std::is_sorted(edges_.begin(), edges_.end())) return false;
    for (const auto& [u, v] : edges_) {
        if (u >= v || v >= node_count_) return false;
        if (!has_edge(u, v)) return false;
    }
    return true;
}

}  // namespace ltp
