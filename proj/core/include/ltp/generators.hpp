#pragma once

#include <cstdint>

#include "ltp/graph.hpp"

namespace ltp {

enum class GraphKind { path, cycle, star, complete, erdos_renyi };

struct SyntheticParams {
    NodeId size = 1;           // total node count
    double probability = 0.5;  // erdos_renyi only
};

// Deterministic for fixed (kind, params, seed). The seed only matters for
// erdos_renyi. Throws std::invalid_argument on size == 0 or probability
// outside [0, 1].
Graph generate_synthetic(GraphKind kind, const SyntheticParams& params,
                         std::uint64_t seed = 0);

// Conveniences for fixtures.
Graph make_path(NodeId n);
Graph make_cycle(NodeId n);
Graph make_star(NodeId n);  // node 0 is the center, n - 1 leaves
Graph make_complete(NodeId n);
Graph make_erdos_renyi(NodeId n, double p, std::uint64_t seed);

}  // namespace ltp
