#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ltp/graph.hpp"

namespace ltp {

// Ordered collection of graphs with contiguous integer class labels.
struct Dataset {
    std::string name;
    std::vector<Graph> graphs;
    std::vector<int> labels;  // one per graph, in [0, num_classes)
    int num_classes = 0;

    std::size_t size() const { return graphs.size(); }
    double average_node_count() const;
    double average_edge_count() const;

    bool operator==(const Dataset& other) const = default;
};

// Reads `<name>_A.txt` (comma-separated 1-indexed edge pairs),
// `<name>_graph_indicator.txt` (graph id per node, 1-indexed) and
// `<name>_graph_labels.txt` (one raw label per graph). Nodes are renumbered
// 0-based per graph, directed duplicate edges are merged, self-loops
// dropped, and raw labels remapped to [0, num_classes) by ascending raw
// value. Node/edge attribute files are ignored.
//
// Throws std::runtime_error on a missing file, an edge whose endpoints lie
// in different graphs, a node id out of range, or a label count that does
// not match the graph count.
Dataset parse_tudataset(const std::filesystem::path& directory,
                        const std::string& name);

// Emits the same three files, listing both directions of every edge.
// Raw labels written are the contiguous class indices, so a write/parse
// round trip reproduces the dataset exactly.
void write_tudataset(const Dataset& dataset,
                     const std::filesystem::path& directory);

}  // namespace ltp
