#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace ltp {

// Row-major read-only view, decouples the classifier from the embedding
// containers.
struct MatrixView {
    const double* data = nullptr;
    std::size_t rows = 0;
    std::size_t cols = 0;

    std::span<const double> row(std::size_t r) const { return {data + r * cols, cols}; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct ForestConfig {
    int n_trees = 500;
    std::uint64_t seed = 0;
    // Fixed policy, no knobs: ceil(sqrt(d)) candidate features resampled at
    // every node, bootstrap of n rows with replacement, Gini criterion,
    // midpoint thresholds, grown until pure or no positive-gain split.

    bool operator==(const ForestConfig&) const = default;
};

// 1 - sum(p_c^2). Throws std::invalid_argument when all counts are zero.
double gini_impurity(std::span<const std::uint64_t> class_counts);

struct TreeNode {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;     // rows with x[feature] <= threshold go left
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::vector<std::uint64_t> counts;  // leaf only: training class counts
};

struct Tree {
    std::vector<TreeNode> nodes;  // preorder, root at 0

    int leaf_majority(std::size_t node) const;  // ties to lowest class index
    int predict(std::span<const double> x) const;
};

struct Forest {
    std::vector<Tree> trees;
    int n_classes = 0;
    std::size_t n_features = 0;
    ForestConfig config;
};

// Trains config.n_trees trees, each seeded with derive_seed(config.seed,
// tree_index), so the forest is bit-identical for any worker count. Throws
// std::invalid_argument on fewer than two rows, a label/row count mismatch,
// or single-class input.
Forest fit(const MatrixView& X, std::span<const int> y, const ForestConfig& config,
           unsigned workers = 0);

// Majority vote over trees; ties broken toward the lowest class index.
// Throws std::invalid_argument when X.cols != forest.n_features.
std::vector<int> predict(const Forest& forest, const MatrixView& X,
                         unsigned workers = 0);

// Versioned binary round trip (bit-exact).
void save_forest(const Forest& forest, std::ostream& out);
Forest load_forest(std::istream& in);

}  // namespace ltp
