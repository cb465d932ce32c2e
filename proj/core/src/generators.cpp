#include "ltp/generators.hpp"

#include <stdexcept>

#include "ltp/rng.hpp"

namespace ltp {

Graph generate_synthetic(GraphKind kind, const SyntheticParams& params,
                         std::uint64_t seed) {
    const NodeId n = params.size;
    if (n == 0) throw std::invalid_argument("generate_synthetic: size must be >= 1");

    std::vector<Edge> edges;
    switch (kind) {
        case GraphKind::path:
            for (NodeId i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
            break;
        case GraphKind::cycle:
            for (NodeId i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
            if (n >= 3) edges.emplace_back(0, n - 1);
            break;
        case GraphKind::star:
            for (NodeId i = 1; i < n; ++i) edges.emplace_back(0, i);
            break;
        case GraphKind::complete:
            for (NodeId u = 0; u < n; ++u)
                for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
            break;
        case GraphKind::erdos_renyi: {
            const double p = params.probability;
            if (p < 0.0 || p > 1.0) {
                throw std::invalid_argument(
                    "generate_synthetic: probability must lie in [0, 1]");
            }
            Rng rng(derive_seed(seed, n));
            for (NodeId u = 0; u < n; ++u)
                for (NodeId v = u + 1; v < n; ++v)
                    if (rng.next_double() < p) edges.emplace_back(u, v);
            break;
        }
    }
    return Graph::from_edges(n, std::move(edges));
}

Graph make_path(NodeId n) { return generate_synthetic(GraphKind::path, {.size = n}); }
Graph make_cycle(NodeId n) { return generate_synthetic(GraphKind::cycle, {.size = n}); }
Graph make_star(NodeId n) { return generate_synthetic(GraphKind::star, {.size = n}); }
Graph make_complete(NodeId n) {
    return generate_synthetic(GraphKind::complete, {.size = n});
}
Graph make_erdos_renyi(NodeId n, double p, std::uint64_t seed) {
    return generate_synthetic(GraphKind::erdos_renyi, {.size = n, .probability = p},
                              seed);
}

}  // namespace ltp
