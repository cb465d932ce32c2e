#include "ltp/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <stdexcept>

namespace ltp {
namespace {

std::runtime_error parse_error(const std::filesystem::path& file,
                               std::size_t line_no, const std::string& what) {
    return std::runtime_error(file.string() + ":" + std::to_string(line_no) + ": " +
                              what);
}

std::vector<std::string> read_lines(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

long parse_long(std::string_view token, const std::filesystem::path& file,
                std::size_t line_no) {
    std::size_t b = token.find_first_not_of(" \t");
    std::size_t e = token.find_last_not_of(" \t");
    if (b == std::string_view::npos) throw parse_error(file, line_no, "empty field");
    token = token.substr(b, e - b + 1);
    long value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw parse_error(file, line_no, "not an integer: '" + std::string(token) + "'");
    }
    return value;
}

}  // namespace

double Dataset::average_node_count() const {
    if (graphs.empty()) return 0.0;
    double total = 0.0;
    for (const auto& g : graphs) total += g.node_count();
    return total / static_cast<double>(graphs.size());
}

double Dataset::average_edge_count() const {
    if (graphs.empty()) return 0.0;
    double total = 0.0;
    for (const auto& g : graphs) total += static_cast<double>(g.edge_count());
    return total / static_cast<double>(graphs.size());
}

Dataset parse_tudataset(const std::filesystem::path& directory,
                        const std::string& name) {
    const auto adjacency_file = directory / (name + "_A.txt");
    const auto indicator_file = directory / (name + "_graph_indicator.txt");
    const auto labels_file = directory / (name + "_graph_labels.txt");

    const auto label_lines = read_lines(labels_file);
    const auto indicator_lines = read_lines(indicator_file);

    const std::size_t graph_count = label_lines.size();
    const std::size_t node_count = indicator_lines.size();

    // graph id and local 0-based id per global node (both 0-based here)
    std::vector<std::size_t> node_graph(node_count);
    std::vector<NodeId> node_local(node_count);
    std::vector<NodeId> graph_sizes(graph_count, 0);
    for (std::size_t i = 0; i < node_count; ++i) {
        long gid = parse_long(indicator_lines[i], indicator_file, i + 1);
        if (gid < 1 || static_cast<std::size_t>(gid) > graph_count) {
            throw parse_error(indicator_file, i + 1,
                              "graph id " + std::to_string(gid) +
                                  " outside [1, " + std::to_string(graph_count) +
                                  "]; label count does not match graph count");
        }
        node_graph[i] = static_cast<std::size_t>(gid - 1);
        node_local[i] = graph_sizes[node_graph[i]]++;
    }

    // the adjacency file dominates the input size, so it is streamed
    std::vector<std::vector<Edge>> graph_edges(graph_count);
    std::ifstream adjacency_in(adjacency_file);
    if (!adjacency_in) {
        throw std::runtime_error("cannot open " + adjacency_file.string());
    }
    std::string line;
    for (std::size_t i = 0; std::getline(adjacency_in, line);) {
        ++i;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::size_t comma = line.find(',');
        if (comma == std::string::npos) {
            throw parse_error(adjacency_file, i, "expected 'i, j'");
        }
        long a = parse_long(std::string_view(line).substr(0, comma), adjacency_file, i);
        long b = parse_long(std::string_view(line).substr(comma + 1), adjacency_file, i);
        if (a < 1 || b < 1 || static_cast<std::size_t>(a) > node_count ||
            static_cast<std::size_t>(b) > node_count) {
            throw parse_error(adjacency_file, i,
                              "node id outside [1, " + std::to_string(node_count) + "]");
        }
        const std::size_t u = static_cast<std::size_t>(a - 1);
        const std::size_t v = static_cast<std::size_t>(b - 1);
        if (node_graph[u] != node_graph[v]) {
            throw parse_error(adjacency_file, i,
                              "edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                  ") crosses graphs " +
                                  std::to_string(node_graph[u] + 1) + " and " +
                                  std::to_string(node_graph[v] + 1));
        }
        graph_edges[node_graph[u]].emplace_back(node_local[u], node_local[v]);
    }

    // Remap raw labels to [0, num_classes) by ascending raw value.
    std::vector<long> raw_labels(graph_count);
    std::map<long, int> class_of;
    for (std::size_t i = 0; i < graph_count; ++i) {
        raw_labels[i] = parse_long(label_lines[i], labels_file, i + 1);
        class_of.emplace(raw_labels[i], 0);
    }
    int next_class = 0;
    for (auto& [raw, cls] : class_of) cls = next_class++;

    Dataset d;
    d.name = name;
    d.num_classes = next_class;
    d.graphs.reserve(graph_count);
    d.labels.reserve(graph_count);
    for (std::size_t g = 0; g < graph_count; ++g) {
        d.graphs.push_back(Graph::from_edges(graph_sizes[g], std::move(graph_edges[g])));
        d.labels.push_back(class_of.at(raw_labels[g]));
    }
    return d;
}

void write_tudataset(const Dataset& dataset,
                     const std::filesystem::path& directory) {
    std::filesystem::create_directories(directory);
    std::ofstream adj(directory / (dataset.name + "_A.txt"));
    std::ofstream ind(directory / (dataset.name + "_graph_indicator.txt"));
    std::ofstream lab(directory / (dataset.name + "_graph_labels.txt"));
    if (!adj || !ind || !lab) {
        throw std::runtime_error("cannot write TUDataset files under " +
                                 directory.string());
    }
    std::size_t offset = 0;
    for (std::size_t g = 0; g < dataset.graphs.size(); ++g) {
        const Graph& graph = dataset.graphs[g];
        for (NodeId v = 0; v < graph.node_count(); ++v) ind << (g + 1) << '\n';
        for (const auto& [u, v] : graph.edges()) {
            adj << (offset + u + 1) << ", " << (offset + v + 1) << '\n';
            adj << (offset + v + 1) << ", " << (offset + u + 1) << '\n';
        }
        lab << dataset.labels[g] << '\n';
        offset += graph.node_count();
    }
}

}  // namespace ltp
