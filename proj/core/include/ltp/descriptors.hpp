#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include "ltp/graph.hpp"

namespace ltp {

// Canonical feature order. Embeddings concatenate per-feature blocks in
// exactly this order, so serialized vectors are reproducible.
enum class Feature : int {
    degree = 0,
    dn_min = 1,
    dn_max = 2,
    dn_mean = 3,
    dn_std = 4,
    sp = 5,
    ebc = 6,
    ji = 7,
    lds = 8,
};
inline constexpr int kFeatureCount = 9;
inline constexpr std::array<Feature, kFeatureCount> kAllFeatures = {
    Feature::degree, Feature::dn_min, Feature::dn_max,
    Feature::dn_mean, Feature::dn_std, Feature::sp,
    Feature::ebc,    Feature::ji,     Feature::lds,
};

const char* feature_name(Feature f);

// Raw descriptor values for one graph. Lists are per node (degree, dn_*),
// per canonical edge (ebc, ji, lds) or per connected node pair (sp).
struct DescriptorMatrix {
    std::array<std::vector<double>, kFeatureCount> values;
    std::array<bool, kFeatureCount> computed{};

    const std::vector<double>& of(Feature f) const {
        return values[static_cast<int>(f)];
    }
    bool has(Feature f) const { return computed[static_cast<int>(f)]; }
};

// Five per-node degree statistics: degree(v) and min/max/mean/population-std
// of the multiset of neighbor degrees. An isolated node yields all zeros.
struct LdpNodeFeatures {
    std::vector<double> degree, dn_min, dn_max, dn_mean, dn_std;
};
LdpNodeFeatures ldp_node_features(const Graph& g);

// Edge betweenness centrality over unordered node pairs, with the pair
// formed by the edge's own endpoints excluded. Disconnected pairs
// contribute nothing. One value per canonical edge.
//
// Brandes per-source accumulation; sources are processed in fixed-size
// blocks whose partial sums are merged in block order, so the result is
// bit-identical for every worker count.
std::vector<double> edge_betweenness(const Graph& g, unsigned workers = 1);

// |N(u) ∩ N(v)| / |N(u) ∪ N(v)| over open neighborhoods, per canonical edge.
std::vector<double> jaccard_index(const Graph& g);

// Sparsification score favoring edges incident to local hubs. rank(v, u) is
// the 1-based position of u among v's neighbors sorted by degree descending
// (ties by ascending node id); the side term from v is
// 1 - ln(rank(v, u)) / ln(degree(v)), defined as 1 when degree(v) == 1, and
// the edge score is the larger of the two side terms. Values lie in [0, 1].
std::vector<double> local_degree_score(const Graph& g);

// Multiset of finite shortest-path lengths over unordered node pairs,
// ordered by (source, target) so output is deterministic.
std::vector<double> shortest_path_multiset(const Graph& g, unsigned workers = 1);

// Computes exactly the requested features (requesting any of the five LDP
// statistics computes all five at once).
DescriptorMatrix compute_descriptors(const Graph& g, std::span<const Feature> features,
                                     unsigned workers = 1);

// Debug dump: one column per computed feature in canonical order, rows
// padded with empty cells where a column runs out of values.
void write_descriptor_csv(const DescriptorMatrix& m, std::ostream& out);

}  // namespace ltp
