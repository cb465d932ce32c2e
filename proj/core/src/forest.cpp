#include "ltp/forest.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "ltp/parallel.hpp"
#include "ltp/rng.hpp"

namespace ltp {
namespace {

constexpr double kMinGain = 1e-12;

double gini_of(std::span<const std::uint64_t> counts, double total) {
    double sum_sq = 0.0;
    for (std::uint64_t c : counts) {
        const double p = static_cast<double>(c) / total;
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

class TreeBuilder {
  public:
    TreeBuilder(const MatrixView& X, std::span<const int> y, int n_classes,
                std::size_t max_features, std::uint64_t seed)
        : X_(X), y_(y), n_classes_(n_classes), max_features_(max_features), rng_(seed) {
        feature_pool_.resize(X.cols);
        std::iota(feature_pool_.begin(), feature_pool_.end(), std::uint32_t{0});
    }

    Tree build() {
        const std::size_t n = X_.rows;
        std::vector<std::uint32_t> rows(n);
        for (auto& r : rows) {
            r = static_cast<std::uint32_t>(rng_.next_below(n));
        }
        Tree tree;
        grow(tree, rows, 0, rows.size());
        return tree;
    }

  private:
    struct Split {
        double gain = 0.0;
        std::int32_t feature = -1;
        double threshold = 0.0;
    };

    // Builds the subtree over rows[begin, end) in preorder.
    std::int32_t grow(Tree& tree, std::vector<std::uint32_t>& rows, std::size_t begin,
                      std::size_t end) {
        const std::size_t m = end - begin;
        std::vector<std::uint64_t> counts(static_cast<std::size_t>(n_classes_), 0);
        for (std::size_t i = begin; i < end; ++i) ++counts[static_cast<std::size_t>(y_[rows[i]])];
        const double impurity = gini_of(counts, static_cast<double>(m));

        const std::int32_t id = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();

        Split best;
        if (m >= 2 && impurity > 0.0) best = find_split(rows, begin, end, impurity);
        if (best.feature < 0) {
            tree.nodes[id].counts = std::move(counts);
            return id;
        }

        // Stable partition keeps row order deterministic inside each side.
        scratch_.assign(rows.begin() + static_cast<std::ptrdiff_t>(begin),
                        rows.begin() + static_cast<std::ptrdiff_t>(end));
        std::size_t lo = begin;
        for (std::uint32_t r : scratch_) {
            if (X_.at(r, static_cast<std::size_t>(best.feature)) <= best.threshold) {
                rows[lo++] = r;
            }
        }
        const std::size_t mid = lo;
        for (std::uint32_t r : scratch_) {
            if (!(X_.at(r, static_cast<std::size_t>(best.feature)) <= best.threshold)) {
                rows[lo++] = r;
            }
        }

        tree.nodes[id].feature = best.feature;
        tree.nodes[id].threshold = best.threshold;
        const std::int32_t left = grow(tree, rows, begin, mid);
        const std::int32_t right = grow(tree, rows, mid, end);
        tree.nodes[id].left = left;
        tree.nodes[id].right = right;
        return id;
    }

    Split find_split(const std::vector<std::uint32_t>& rows, std::size_t begin,
                     std::size_t end, double parent_impurity) {
        const std::size_t m = end - begin;
        sample_features();
        Split best;

        // Inspect max_features candidates; if none of them admits a
        // positive-gain split, keep drawing further features until one does
        // or the pool is exhausted (scikit-learn splitter semantics).
        for (std::size_t fi = 0; fi < feature_pool_.size(); ++fi) {
            if (fi >= max_features_ && best.feature >= 0) break;
            const std::uint32_t f = feature_pool_[fi];
            sorted_.clear();
            for (std::size_t i = begin; i < end; ++i) {
                sorted_.emplace_back(X_.at(rows[i], f), rows[i]);
            }
            std::sort(sorted_.begin(), sorted_.end());

            left_counts_.assign(static_cast<std::size_t>(n_classes_), 0);
            right_counts_.assign(static_cast<std::size_t>(n_classes_), 0);
            for (std::size_t i = begin; i < end; ++i) {
                ++right_counts_[static_cast<std::size_t>(y_[rows[i]])];
            }

            for (std::size_t i = 1; i < m; ++i) {
                const auto cls = static_cast<std::size_t>(y_[sorted_[i - 1].second]);
                ++left_counts_[cls];
                --right_counts_[cls];
                const double prev = sorted_[i - 1].first;
                const double next = sorted_[i].first;
                if (prev == next) continue;

                // The fp midpoint may round up to `next`; pull it back so
                // the x <= threshold rule reproduces the counted partition.
                double threshold = (prev + next) / 2.0;
                if (!(threshold < next)) threshold = prev;

                const double nl = static_cast<double>(i);
                const double nr = static_cast<double>(m - i);
                const double gain = parent_impurity -
                                    (nl / static_cast<double>(m)) * gini_of(left_counts_, nl) -
                                    (nr / static_cast<double>(m)) * gini_of(right_counts_, nr);
                if (gain > best.gain + kMinGain) {
                    best = Split{gain, static_cast<std::int32_t>(f), threshold};
                }
            }
        }
        return best;
    }

    // Fisher-Yates over the whole pool: the first max_features_ entries are
    // this node's candidates and the tail is the fallback inspection order.
    void sample_features() {
        const std::size_t d = feature_pool_.size();
        for (std::size_t i = 0; i + 1 < d; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng_.next_below(d - i));
            std::swap(feature_pool_[i], feature_pool_[j]);
        }
    }

    const MatrixView& X_;
    std::span<const int> y_;
    int n_classes_;
    std::size_t max_features_;
    Rng rng_;
    std::vector<std::uint32_t> feature_pool_;
    std::vector<std::uint32_t> scratch_;
    std::vector<std::pair<double, std::uint32_t>> sorted_;
    std::vector<std::uint64_t> left_counts_;
    std::vector<std::uint64_t> right_counts_;
};

template <typename T>
void write_pod(std::ostream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw std::runtime_error("forest file: unexpected end of stream");
    return value;
}

constexpr char kMagic[4] = {'L', 'T', 'P', 'F'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

double gini_impurity(std::span<const std::uint64_t> class_counts) {
    std::uint64_t total = 0;
    for (std::uint64_t c : class_counts) total += c;
    if (total == 0) {
        throw std::invalid_argument("gini_impurity: all class counts are zero");
    }
    return gini_of(class_counts, static_cast<double>(total));
}

int Tree::leaf_majority(std::size_t node) const {
    const auto& counts = nodes[node].counts;
    std::size_t best = 0;
    for (std::size_t c = 1; c < counts.size(); ++c) {
        if (counts[c] > counts[best]) best = c;
    }
    return static_cast<int>(best);
}

int Tree::predict(std::span<const double> x) const {
    std::size_t node = 0;
    while (nodes[node].feature >= 0) {
        const auto& nd = nodes[node];
        node = static_cast<std::size_t>(
            x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right);
    }
    return leaf_majority(node);
}

Forest fit(const MatrixView& X, std::span<const int> y, const ForestConfig& config,
           unsigned workers) {
    if (X.rows != y.size()) {
        throw std::invalid_argument("fit: row count " + std::to_string(X.rows) +
                                    " does not match label count " +
                                    std::to_string(y.size()));
    }
    if (X.rows < 2) throw std::invalid_argument("fit: need at least two rows");
    if (X.cols == 0) throw std::invalid_argument("fit: matrix has no columns");
    if (config.n_trees < 1) throw std::invalid_argument("fit: n_trees must be >= 1");

    int n_classes = 0;
    for (int label : y) {
        if (label < 0) throw std::invalid_argument("fit: negative class label");
        n_classes = std::max(n_classes, label + 1);
    }
    std::vector<std::uint64_t> present(static_cast<std::size_t>(n_classes), 0);
    for (int label : y) ++present[static_cast<std::size_t>(label)];
    if (std::count_if(present.begin(), present.end(),
                      [](std::uint64_t c) { return c > 0; }) < 2) {
        throw std::invalid_argument("fit: training data holds a single class");
    }

    const auto max_features = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(X.cols)))), 1,
        X.cols);

    Forest forest;
    forest.n_classes = n_classes;
    forest.n_features = X.cols;
    forest.config = config;
    forest.trees.resize(static_cast<std::size_t>(config.n_trees));
    parallel_for(forest.trees.size(), workers, [&](std::size_t t) {
        TreeBuilder builder(X, y, n_classes, max_features,
                            derive_seed(config.seed, t));
        forest.trees[t] = builder.build();
    });
    return forest;
}

std::vector<int> predict(const Forest& forest, const MatrixView& X, unsigned workers) {
    if (X.cols != forest.n_features) {
        throw std::invalid_argument("predict: expected " +
                                    std::to_string(forest.n_features) +
                                    " columns, got " + std::to_string(X.cols));
    }
    std::vector<int> out(X.rows, 0);
    parallel_for(X.rows, workers, [&](std::size_t r) {
        std::vector<std::uint32_t> votes(static_cast<std::size_t>(forest.n_classes), 0);
        auto x = X.row(r);
        for (const Tree& tree : forest.trees) {
            ++votes[static_cast<std::size_t>(tree.predict(x))];
        }
        std::size_t best = 0;
        for (std::size_t c = 1; c < votes.size(); ++c) {
            if (votes[c] > votes[best]) best = c;
        }
        out[r] = static_cast<int>(best);
    });
    return out;
}

void save_forest(const Forest& forest, std::ostream& out) {
    out.write(kMagic, sizeof(kMagic));
    write_pod(out, kVersion);
    write_pod(out, static_cast<std::uint32_t>(forest.trees.size()));
    write_pod(out, static_cast<std::uint64_t>(forest.n_features));
    write_pod(out, static_cast<std::uint32_t>(forest.n_classes));
    write_pod(out, static_cast<std::int32_t>(forest.config.n_trees));
    write_pod(out, forest.config.seed);
    for (const Tree& tree : forest.trees) {
        write_pod(out, static_cast<std::uint32_t>(tree.nodes.size()));
        for (const TreeNode& node : tree.nodes) {
            write_pod(out, node.feature);
            write_pod(out, node.threshold);
            write_pod(out, node.left);
            write_pod(out, node.right);
            write_pod(out, static_cast<std::uint32_t>(node.counts.size()));
            for (std::uint64_t c : node.counts) write_pod(out, c);
        }
    }
}

Forest load_forest(std::istream& in) {
    char magic[4] = {};
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw std::runtime_error("forest file: bad magic");
    }
    const auto version = read_pod<std::uint32_t>(in);
    if (version != kVersion) {
        throw std::runtime_error("forest file: unsupported version " +
                                 std::to_string(version));
    }
    Forest forest;
    const auto n_trees = read_pod<std::uint32_t>(in);
    forest.n_features = read_pod<std::uint64_t>(in);
    forest.n_classes = static_cast<int>(read_pod<std::uint32_t>(in));
    forest.config.n_trees = read_pod<std::int32_t>(in);
    forest.config.seed = read_pod<std::uint64_t>(in);
    forest.trees.resize(n_trees);
    for (Tree& tree : forest.trees) {
        const auto n_nodes = read_pod<std::uint32_t>(in);
        tree.nodes.resize(n_nodes);
        for (TreeNode& node : tree.nodes) {
            node.feature = read_pod<std::int32_t>(in);
            node.threshold = read_pod<double>(in);
            node.left = read_pod<std::int32_t>(in);
            node.right = read_pod<std::int32_t>(in);
            const auto n_counts = read_pod<std::uint32_t>(in);
            node.counts.resize(n_counts);
            for (std::uint64_t& c : node.counts) c = read_pod<std::uint64_t>(in);
        }
        // structural sanity so a corrupt stream cannot send predict() out
        // of bounds
        const auto n = static_cast<std::int32_t>(tree.nodes.size());
        for (std::int32_t i = 0; i < n; ++i) {
            const TreeNode& node = tree.nodes[static_cast<std::size_t>(i)];
            if (node.feature < 0) continue;
            const bool ok = node.left > i && node.left < n && node.right > node.left &&
                            node.right < n &&
                            node.feature < static_cast<std::int32_t>(forest.n_features);
            if (!ok) throw std::runtime_error("forest file: malformed tree structure");
        }
    }
    return forest;
}

}  // namespace ltp
