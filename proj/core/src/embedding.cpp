#include "ltp/embedding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "ltp/parallel.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary embedding layout assumes a little-endian host");

namespace ltp {
namespace {

double max_or_zero(std::span<const double> values) {
    double mx = 0.0;
    for (double v : values) mx = std::max(mx, v);
    return mx;
}

std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return idx;
}

}  // namespace

std::string to_string(Aggregation a) {
    return a == Aggregation::histogram ? "histogram" : "edf";
}

std::string to_string(Normalization n) {
    switch (n) {
        case Normalization::none: return "none";
        case Normalization::graph: return "graph";
        case Normalization::dataset: return "dataset";
    }
    return "?";
}

Aggregation parse_aggregation(const std::string& s) {
    if (s == "histogram") return Aggregation::histogram;
    if (s == "edf") return Aggregation::edf;
    throw std::invalid_argument("aggregation must be 'histogram' or 'edf', got '" + s +
                                "'");
}

Normalization parse_normalization(const std::string& s) {
    if (s == "none") return Normalization::none;
    if (s == "graph") return Normalization::graph;
    if (s == "dataset") return Normalization::dataset;
    throw std::invalid_argument(
        "normalization must be 'none', 'graph' or 'dataset', got '" + s + "'");
}

std::string to_string(const FeatureSelection& f) {
    std::string out;
    auto add = [&](const char* name) {
        if (!out.empty()) out += '+';
        out += name;
    };
    if (f.ldp5) add("ldp5");
    if (f.sp) add("sp");
    if (f.ebc) add("ebc");
    if (f.ji) add("ji");
    if (f.lds) add("lds");
    return out;
}

FeatureSelection parse_feature_selection(const std::string& s) {
    if (s == "ldp") return FeatureSelection::ldp();
    if (s == "ltp") return FeatureSelection::ltp();
    FeatureSelection sel{.ldp5 = false};
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t next = s.find('+', pos);
        if (next == std::string::npos) next = s.size();
        const std::string token = s.substr(pos, next - pos);
        if (token == "ldp5" || token == "ldp") {
            sel.ldp5 = true;
        } else if (token == "sp") {
            sel.sp = true;
        } else if (token == "ebc") {
            sel.ebc = true;
        } else if (token == "ji") {
            sel.ji = true;
        } else if (token == "lds") {
            sel.lds = true;
        } else {
            throw std::invalid_argument("unknown feature token '" + token +
                                        "' (expected ldp, ltp, ldp5, sp, ebc, ji, lds)");
        }
        pos = next + 1;
        if (next == s.size()) break;
    }
    return sel;
}

std::vector<Feature> EmbeddingConfig::expanded_features() const {
    std::vector<Feature> out;
    if (features.ldp5) {
        out.insert(out.end(), {Feature::degree, Feature::dn_min, Feature::dn_max,
                               Feature::dn_mean, Feature::dn_std});
    }
    if (features.sp) out.push_back(Feature::sp);
    if (features.ebc) out.push_back(Feature::ebc);
    if (features.ji) out.push_back(Feature::ji);
    if (features.lds) out.push_back(Feature::lds);
    return out;
}

std::size_t EmbeddingConfig::dimension() const {
    return expanded_features().size() * static_cast<std::size_t>(bins);
}

void EmbeddingConfig::validate() const {
    if (bins < 1) {
        throw std::invalid_argument("bins must be >= 1, got " + std::to_string(bins));
    }
    if (!features.any()) {
        throw std::invalid_argument("features: at least one descriptor group required");
    }
}

std::vector<double> aggregate_feature(std::span<const double> values, int bins,
                                      Aggregation aggregation, double lo, double hi) {
    if (bins < 1) {
        throw std::invalid_argument("bins must be >= 1, got " + std::to_string(bins));
    }
    if (lo > hi) throw std::invalid_argument("aggregate_feature: lo > hi");
    std::vector<double> block(static_cast<std::size_t>(bins), 0.0);
    if (values.empty()) return block;

    const double width = hi - lo;
    const double unit = 1.0 / static_cast<double>(values.size());
    for (double v : values) {
        if (std::isnan(v)) {
            throw std::invalid_argument("aggregate_feature: NaN value");
        }
        std::size_t idx = 0;
        if (width > 0.0) {
            const double t = (v - lo) / width * static_cast<double>(bins);
            idx = static_cast<std::size_t>(
                std::clamp(std::floor(t), 0.0, static_cast<double>(bins - 1)));
        }
        block[idx] += unit;
    }
    if (aggregation == Aggregation::edf) {
        double running = 0.0;
        for (double& b : block) {
            running += b;
            b = running;
        }
    }
    return block;
}

std::vector<double> embed_feature_block(std::vector<double> values,
                                        const EmbeddingConfig& config,
                                        std::optional<double> dataset_max) {
    if (config.log_scale) {
        for (double& v : values) v = std::log1p(v);
    }
    double lo = 0.0;
    double hi = 1.0;
    switch (config.normalization) {
        case Normalization::graph: {
            const double mx = max_or_zero(values);
            if (mx > 0.0) {
                for (double& v : values) v /= mx;
            }
            break;
        }
        case Normalization::dataset: {
            if (!dataset_max) {
                throw std::invalid_argument(
                    "dataset normalization requires dataset statistics");
            }
            if (*dataset_max > 0.0) {
                for (double& v : values) v /= *dataset_max;
            }
            break;
        }
        case Normalization::none: {
            if (values.empty()) {
                lo = hi = 0.0;
            } else {
                auto [mn, mx] = std::minmax_element(values.begin(), values.end());
                lo = *mn;
                hi = *mx;
            }
            break;
        }
    }
    return aggregate_feature(values, config.bins, config.aggregation, lo, hi);
}

EmbeddingVector embed_graph(const Graph& g, const EmbeddingConfig& config,
                            const DatasetStats* stats,
                            const DescriptorMatrix* precomputed) {
    config.validate();
    if (config.normalization == Normalization::dataset && stats == nullptr) {
        throw std::invalid_argument(
            "dataset normalization requires dataset statistics");
    }
    const auto features = config.expanded_features();
    DescriptorMatrix local;
    if (precomputed == nullptr) {
        local = compute_descriptors(g, features);
        precomputed = &local;
    }
    EmbeddingVector out;
    out.config = config;
    out.values.reserve(config.dimension());
    for (Feature f : features) {
        std::optional<double> dataset_max;
        if (config.normalization == Normalization::dataset) {
            dataset_max = stats->max_value[static_cast<int>(f)];
        }
        auto block = embed_feature_block(precomputed->of(f), config, dataset_max);
        out.values.insert(out.values.end(), block.begin(), block.end());
    }
    return out;
}

DescriptorCache build_descriptor_cache(const Dataset& d, std::span<const Feature> features,
                                       unsigned workers) {
    DescriptorCache cache(d.size());
    std::vector<Feature> wanted(features.begin(), features.end());
    parallel_for(d.size(), workers, [&](std::size_t i) {
        cache[i] = compute_descriptors(d.graphs[i], wanted);
    });
    return cache;
}

DatasetStats collect_dataset_stats(const Dataset& d, std::span<const std::size_t> indices,
                                   const EmbeddingConfig& config,
                                   const DescriptorCache* cache, unsigned workers) {
    config.validate();
    const auto features = config.expanded_features();
    std::vector<DatasetStats> partial(indices.size());
    parallel_for(indices.size(), workers, [&](std::size_t i) {
        const std::size_t gi = indices[i];
        DescriptorMatrix local;
        const DescriptorMatrix* m;
        if (cache != nullptr) {
            m = &(*cache)[gi];
        } else {
            local = compute_descriptors(d.graphs[gi], features);
            m = &local;
        }
        for (Feature f : features) {
            double mx = max_or_zero(m->of(f));
            if (config.log_scale) mx = std::log1p(mx);
            partial[i].max_value[static_cast<int>(f)] = mx;
        }
    });
    DatasetStats stats;
    for (const auto& p : partial) {
        for (int i = 0; i < kFeatureCount; ++i) {
            stats.max_value[i] = std::max(stats.max_value[i], p.max_value[i]);
        }
    }
    return stats;
}

EmbeddingMatrix embed_subset(const Dataset& d, std::span<const std::size_t> indices,
                             const EmbeddingConfig& config, const DatasetStats* stats,
                             const DescriptorCache* cache, unsigned workers) {
    config.validate();
    EmbeddingMatrix m;
    m.config = config;
    m.rows = indices.size();
    m.cols = config.dimension();
    m.data.assign(m.rows * m.cols, 0.0);
    parallel_for(indices.size(), workers, [&](std::size_t i) {
        const std::size_t gi = indices[i];
        const DescriptorMatrix* pre = cache != nullptr ? &(*cache)[gi] : nullptr;
        auto vec = embed_graph(d.graphs[gi], config, stats, pre);
        std::copy(vec.values.begin(), vec.values.end(),
                  m.data.begin() + static_cast<std::ptrdiff_t>(i * m.cols));
    });
    return m;
}

EmbeddingMatrix embed_dataset(const Dataset& d, const EmbeddingConfig& config,
                              unsigned workers) {
    const auto indices = all_indices(d.size());
    if (config.normalization == Normalization::dataset) {
        const auto stats = collect_dataset_stats(d, indices, config, nullptr, workers);
        return embed_subset(d, indices, config, &stats, nullptr, workers);
    }
    return embed_subset(d, indices, config, nullptr, nullptr, workers);
}

void write_embedding_csv(const EmbeddingMatrix& m, std::ostream& out) {
    const auto features = m.config.expanded_features();
    bool first = true;
    for (Feature f : features) {
        for (int b = 0; b < m.config.bins; ++b) {
            if (!first) out << ',';
            out << feature_name(f) << ':' << b;
            first = false;
        }
    }
    out << '\n';
    const auto old_precision = out.precision(17);
    for (std::size_t r = 0; r < m.rows; ++r) {
        auto row = m.row(r);
        for (std::size_t c = 0; c < m.cols; ++c) {
            if (c) out << ',';
            out << row[c];
        }
        out << '\n';
    }
    out.precision(old_precision);
}

void write_embedding_binary(const EmbeddingMatrix& m, std::ostream& out) {
    const std::uint64_t dims[2] = {m.rows, m.cols};
    out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
    out.write(reinterpret_cast<const char*>(m.data.data()),
              static_cast<std::streamsize>(m.data.size() * sizeof(double)));
}

EmbeddingMatrix read_embedding_binary(std::istream& in) {
    std::uint64_t dims[2] = {0, 0};
    in.read(reinterpret_cast<char*>(dims), sizeof(dims));
    if (!in) throw std::runtime_error("embedding binary: truncated header");
    EmbeddingMatrix m;
    m.rows = dims[0];
    m.cols = dims[1];
    m.data.resize(m.rows * m.cols);
    in.read(reinterpret_cast<char*>(m.data.data()),
            static_cast<std::streamsize>(m.data.size() * sizeof(double)));
    if (!in) throw std::runtime_error("embedding binary: truncated payload");
    return m;
}

}  // namespace ltp
