#include "ltp/descriptors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>

#include "ltp/parallel.hpp"

namespace ltp {
namespace {

// Sources are processed in fixed blocks whose partial sums merge in block
// order, making parallel results independent of scheduling and worker
// count. The block count is capped so per-block buffers stay small on very
// large graphs.
constexpr std::size_t kMinSourceBlock = 64;
constexpr std::size_t kMaxBlocks = 256;

std::size_t source_block_size(NodeId n) {
    return std::max(kMinSourceBlock, (static_cast<std::size_t>(n) + kMaxBlocks - 1) /
                                         kMaxBlocks);
}

// Maps each CSR adjacency slot (v, j) to the canonical edge index of
// (v, adjacency[j]). Shared by the per-edge descriptors.
std::vector<std::size_t> adjacency_edge_ids(const Graph& g) {
    std::vector<std::size_t> ids(g.adjacency().size());
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        const auto [u, v] = g.edges()[e];
        for (NodeId side : {u, v}) {
            const NodeId other = side == u ? v : u;
            auto nb = g.neighbors(side);
            const std::size_t pos = static_cast<std::size_t>(
                std::lower_bound(nb.begin(), nb.end(), other) - nb.begin());
            ids[g.offsets()[side] + pos] = e;
        }
    }
    return ids;
}

struct BrandesWorkspace {
    std::vector<std::int64_t> dist;
    std::vector<double> sigma;
    std::vector<double> delta;
    std::vector<NodeId> order;

    explicit BrandesWorkspace(NodeId n)
        : dist(n), sigma(n), delta(n) {
        order.reserve(n);
    }
};

void accumulate_from_source(const Graph& g, const std::vector<std::size_t>& edge_ids,
                            NodeId s, BrandesWorkspace& ws, std::vector<double>& acc) {
    std::fill(ws.dist.begin(), ws.dist.end(), -1);
    std::fill(ws.sigma.begin(), ws.sigma.end(), 0.0);
    std::fill(ws.delta.begin(), ws.delta.end(), 0.0);
    ws.order.clear();

    ws.dist[s] = 0;
    ws.sigma[s] = 1.0;
    ws.order.push_back(s);
    for (std::size_t head = 0; head < ws.order.size(); ++head) {
        const NodeId v = ws.order[head];
        for (NodeId w : g.neighbors(v)) {
            if (ws.dist[w] < 0) {
                ws.dist[w] = ws.dist[v] + 1;
                ws.order.push_back(w);
            }
            if (ws.dist[w] == ws.dist[v] + 1) ws.sigma[w] += ws.sigma[v];
        }
    }
    for (std::size_t i = ws.order.size(); i-- > 1;) {
        const NodeId w = ws.order[i];
        const double coeff = (1.0 + ws.delta[w]) / ws.sigma[w];
        const std::size_t begin = g.offsets()[w];
        auto nb = g.neighbors(w);
        for (std::size_t j = 0; j < nb.size(); ++j) {
            const NodeId v = nb[j];
            if (ws.dist[v] + 1 == ws.dist[w]) {
                const double c = ws.sigma[v] * coeff;
                acc[edge_ids[begin + j]] += c;
                ws.delta[v] += c;
            }
        }
    }
}

}  // namespace

const char* feature_name(Feature f) {
    switch (f) {
        case Feature::degree: return "degree";
        case Feature::dn_min: return "dn_min";
        case Feature::dn_max: return "dn_max";
        case Feature::dn_mean: return "dn_mean";
        case Feature::dn_std: return "dn_std";
        case Feature::sp: return "sp";
        case Feature::ebc: return "ebc";
        case Feature::ji: return "ji";
        case Feature::lds: return "lds";
    }
    return "?";
}

LdpNodeFeatures ldp_node_features(const Graph& g) {
    const NodeId n = g.node_count();
    LdpNodeFeatures f;
    f.degree.resize(n);
    f.dn_min.resize(n);
    f.dn_max.resize(n);
    f.dn_mean.resize(n);
    f.dn_std.resize(n);
    for (NodeId v = 0; v < n; ++v) {
        auto nb = g.neighbors(v);
        f.degree[v] = static_cast<double>(nb.size());
        if (nb.empty()) {
            f.dn_min[v] = f.dn_max[v] = f.dn_mean[v] = f.dn_std[v] = 0.0;
            continue;
        }
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        double sum = 0.0;
        for (NodeId u : nb) {
            const double d = static_cast<double>(g.degree(u));
            lo = std::min(lo, d);
            hi = std::max(hi, d);
            sum += d;
        }
        const double mean = sum / static_cast<double>(nb.size());
        double varsum = 0.0;
        for (NodeId u : nb) {
            const double d = static_cast<double>(g.degree(u)) - mean;
            varsum += d * d;
        }
        f.dn_min[v] = lo;
        f.dn_max[v] = hi;
        f.dn_mean[v] = mean;
        f.dn_std[v] = std::sqrt(varsum / static_cast<double>(nb.size()));
    }
    return f;
}

std::vector<double> edge_betweenness(const Graph& g, unsigned workers) {
    const std::size_t m = g.edge_count();
    if (m == 0) return {};
    const NodeId n = g.node_count();
    const auto edge_ids = adjacency_edge_ids(g);

    const std::size_t block = source_block_size(n);
    const std::size_t n_blocks = (n + block - 1) / block;
    std::vector<std::vector<double>> partials(n_blocks);
    parallel_for(n_blocks, workers, [&](std::size_t b) {
        std::vector<double> acc(m, 0.0);
        BrandesWorkspace ws(n);
        const NodeId begin = static_cast<NodeId>(b * block);
        const NodeId end =
            static_cast<NodeId>(std::min<std::size_t>(n, (b + 1) * block));
        for (NodeId s = begin; s < end; ++s) {
            accumulate_from_source(g, edge_ids, s, ws, acc);
        }
        partials[b] = std::move(acc);
    });

    std::vector<double> result(m, 0.0);
    for (const auto& partial : partials) {
        for (std::size_t e = 0; e < m; ++e) result[e] += partial[e];
    }
    // Ordered-pair sums count every unordered pair twice; the endpoint pair
    // of each edge contributes exactly 1 and is excluded by definition.
    for (double& x : result) x = x / 2.0 - 1.0;
    return result;
}

std::vector<double> jaccard_index(const Graph& g) {
    std::vector<double> result;
    result.reserve(g.edge_count());
    for (const auto& [u, v] : g.edges()) {
        auto nu = g.neighbors(u);
        auto nv = g.neighbors(v);
        std::size_t inter = 0;
        std::size_t i = 0, j = 0;
        while (i < nu.size() && j < nv.size()) {
            if (nu[i] < nv[j]) {
                ++i;
            } else if (nu[i] > nv[j]) {
                ++j;
            } else {
                ++inter;
                ++i;
                ++j;
            }
        }
        const std::size_t uni = nu.size() + nv.size() - inter;
        result.push_back(static_cast<double>(inter) / static_cast<double>(uni));
    }
    return result;
}

std::vector<double> local_degree_score(const Graph& g) {
    const std::size_t m = g.edge_count();
    std::vector<double> result(m, 0.0);
    if (m == 0) return result;
    const auto edge_ids = adjacency_edge_ids(g);

    std::vector<std::size_t> by_rank;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        auto nb = g.neighbors(v);
        if (nb.empty()) continue;
        const double deg_v = static_cast<double>(nb.size());
        by_rank.resize(nb.size());
        std::iota(by_rank.begin(), by_rank.end(), std::size_t{0});
        std::sort(by_rank.begin(), by_rank.end(), [&](std::size_t a, std::size_t b) {
            const NodeId da = g.degree(nb[a]);
            const NodeId db = g.degree(nb[b]);
            if (da != db) return da > db;
            return nb[a] < nb[b];
        });
        for (std::size_t r = 0; r < by_rank.size(); ++r) {
            const std::size_t slot = g.offsets()[v] + by_rank[r];
            double side;
            if (nb.size() == 1) {
                side = 1.0;  // a leaf's sole edge is maximally important
            } else {
                side = 1.0 - std::log(static_cast<double>(r + 1)) / std::log(deg_v);
            }
            side = std::clamp(side, 0.0, 1.0);
            result[edge_ids[slot]] = std::max(result[edge_ids[slot]], side);
        }
    }
    return result;
}

std::vector<double> shortest_path_multiset(const Graph& g, unsigned workers) {
    const NodeId n = g.node_count();
    if (n < 2) return {};
    const std::size_t block = source_block_size(n);
    const std::size_t n_blocks = (n + block - 1) / block;
    std::vector<std::vector<double>> partials(n_blocks);
    parallel_for(n_blocks, workers, [&](std::size_t b) {
        std::vector<double> lengths;
        std::vector<std::int64_t> dist(n);
        std::vector<NodeId> queue;
        queue.reserve(n);
        const NodeId begin = static_cast<NodeId>(b * block);
        const NodeId end =
            static_cast<NodeId>(std::min<std::size_t>(n, (b + 1) * block));
        for (NodeId s = begin; s < end; ++s) {
            std::fill(dist.begin(), dist.end(), -1);
            queue.clear();
            dist[s] = 0;
            queue.push_back(s);
            for (std::size_t head = 0; head < queue.size(); ++head) {
                const NodeId v = queue[head];
                for (NodeId w : g.neighbors(v)) {
                    if (dist[w] < 0) {
                        dist[w] = dist[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
            // unordered pairs: record targets above the source only
            for (NodeId t = s + 1; t < n; ++t) {
                if (dist[t] > 0) lengths.push_back(static_cast<double>(dist[t]));
            }
        }
        partials[b] = std::move(lengths);
    });
    std::vector<double> result;
    for (auto& partial : partials) {
        result.insert(result.end(), partial.begin(), partial.end());
    }
    return result;
}

DescriptorMatrix compute_descriptors(const Graph& g, std::span<const Feature> features,
                                     unsigned workers) {
    DescriptorMatrix m;
    bool want_ldp = false;
    for (Feature f : features) {
        switch (f) {
            case Feature::degree:
            case Feature::dn_min:
            case Feature::dn_max:
            case Feature::dn_mean:
            case Feature::dn_std:
                want_ldp = true;
                break;
            case Feature::sp:
                m.values[static_cast<int>(f)] = shortest_path_multiset(g, workers);
                m.computed[static_cast<int>(f)] = true;
                break;
            case Feature::ebc:
                m.values[static_cast<int>(f)] = edge_betweenness(g, workers);
                m.computed[static_cast<int>(f)] = true;
                break;
            case Feature::ji:
                m.values[static_cast<int>(f)] = jaccard_index(g);
                m.computed[static_cast<int>(f)] = true;
                break;
            case Feature::lds:
                m.values[static_cast<int>(f)] = local_degree_score(g);
                m.computed[static_cast<int>(f)] = true;
                break;
        }
    }
    if (want_ldp) {
        auto ldp = ldp_node_features(g);
        m.values[static_cast<int>(Feature::degree)] = std::move(ldp.degree);
        m.values[static_cast<int>(Feature::dn_min)] = std::move(ldp.dn_min);
        m.values[static_cast<int>(Feature::dn_max)] = std::move(ldp.dn_max);
        m.values[static_cast<int>(Feature::dn_mean)] = std::move(ldp.dn_mean);
        m.values[static_cast<int>(Feature::dn_std)] = std::move(ldp.dn_std);
        for (Feature f : {Feature::degree, Feature::dn_min, Feature::dn_max,
                          Feature::dn_mean, Feature::dn_std}) {
            m.computed[static_cast<int>(f)] = true;
        }
    }
    return m;
}

void write_descriptor_csv(const DescriptorMatrix& m, std::ostream& out) {
    std::vector<int> cols;
    std::size_t rows = 0;
    for (int i = 0; i < kFeatureCount; ++i) {
        if (m.computed[i]) {
            cols.push_back(i);
            rows = std::max(rows, m.values[i].size());
        }
    }
    for (std::size_t c = 0; c < cols.size(); ++c) {
        out << (c ? "," : "") << feature_name(static_cast<Feature>(cols[c]));
    }
    out << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (c) out << ',';
            if (r < m.values[cols[c]].size()) out << m.values[cols[c]][r];
        }
        out << '\n';
    }
}

}  // namespace ltp
