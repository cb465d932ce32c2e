#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace ltp {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

// Immutable undirected simple graph in compressed adjacency form.
// Neighbor lists are sorted ascending; the canonical edge list keeps
// u < v and is sorted lexicographically. Self-loops and duplicate edges
// are removed at construction.
class Graph {
  public:
    Graph() = default;

    // Normalizing factory: drops self-loops, merges duplicates (including
    // directed duplicates (u,v)/(v,u)), sorts adjacency. Throws
    // std::invalid_argument on an endpoint >= node_count.
    static Graph from_edges(NodeId node_count, std::vector<Edge> edges);

    NodeId node_count() const { return node_count_; }
    std::size_t edge_count() const { return edges_.size(); }

    std::span<const NodeId> neighbors(NodeId v) const {
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }
    NodeId degree(NodeId v) const {
        return static_cast<NodeId>(offsets_[v + 1] - offsets_[v]);
    }
    bool has_edge(NodeId u, NodeId v) const;

    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::size_t>& offsets() const { return offsets_; }
    const std::vector<NodeId>& adjacency() const { return adjacency_; }

    // Index of canonical edge (min(u,v), max(u,v)), or npos if absent.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t edge_index(NodeId u, NodeId v) const;

    bool operator==(const Graph& other) const = default;

    // Exhaustive invariant check (symmetry, sortedness, simplicity,
    // degree sum). Used by tests; cheap enough for fixtures.
    bool check_invariants() const;

  private:
    NodeId node_count_ = 0;
    std::vector<std::size_t> offsets_{0};  // size node_count_ + 1
    std::vector<NodeId> adjacency_;        // size 2 * |edges_|
    std::vector<Edge> edges_;              // canonical, sorted
};

}  // namespace ltp
