#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ltp/dataset.hpp"
#include "ltp/descriptors.hpp"
#include "ltp/graph.hpp"

namespace ltp {

enum class Aggregation { histogram, edf };
enum class Normalization { none, graph, dataset };

std::string to_string(Aggregation a);
std::string to_string(Normalization n);
Aggregation parse_aggregation(const std::string& s);
Normalization parse_normalization(const std::string& s);

// Which descriptor groups feed the embedding. ldp5 expands to the five
// node features in canonical order; LDP = ldp5 alone, LTP = ldp5 + the
// three edge descriptors.
struct FeatureSelection {
    bool ldp5 = true;
    bool sp = false;
    bool ebc = false;
    bool ji = false;
    bool lds = false;

    bool any() const { return ldp5 || sp || ebc || ji || lds; }
    bool operator==(const FeatureSelection&) const = default;

    static FeatureSelection ldp() { return {}; }
    static FeatureSelection ltp() {
        return {.ldp5 = true, .sp = false, .ebc = true, .ji = true, .lds = true};
    }
};

std::string to_string(const FeatureSelection& f);
// Accepts "ldp", "ltp" or '+'-joined tokens from {ldp5, sp, ebc, ji, lds}.
FeatureSelection parse_feature_selection(const std::string& s);

struct EmbeddingConfig {
    int bins = 50;
    Aggregation aggregation = Aggregation::histogram;
    Normalization normalization = Normalization::none;
    bool log_scale = false;
    FeatureSelection features;

    std::vector<Feature> expanded_features() const;
    std::size_t dimension() const;
    // Throws std::invalid_argument naming the offending field.
    void validate() const;

    bool operator==(const EmbeddingConfig&) const = default;
};

struct EmbeddingVector {
    std::vector<double> values;
    EmbeddingConfig config;  // provenance
};

// Per-feature maximum of transformed values across a set of graphs; the
// global pass behind normalization = dataset.
struct DatasetStats {
    std::array<double, kFeatureCount> max_value{};
};

// Equal-width histogram over [lo, hi] with a right-inclusive last bin,
// counts divided by |values| (density), or its cumulative sum for EDF.
// Values outside [lo, hi] land in the nearest edge bin (arises for test
// graphs normalized with train-only statistics). Empty input gives a zero
// vector; lo == hi puts all mass in the first bin. Throws on bins < 1 or
// NaN input.
std::vector<double> aggregate_feature(std::span<const double> values, int bins,
                                      Aggregation aggregation, double lo, double hi);

// Transform (log scale, normalization) and aggregate one feature's raw
// values. dataset_max must be given exactly when normalization = dataset.
std::vector<double> embed_feature_block(std::vector<double> values,
                                        const EmbeddingConfig& config,
                                        std::optional<double> dataset_max);

// stats required iff config.normalization == dataset. precomputed, when
// given, must hold raw values of every feature the config expands to.
EmbeddingVector embed_graph(const Graph& g, const EmbeddingConfig& config,
                            const DatasetStats* stats = nullptr,
                            const DescriptorMatrix* precomputed = nullptr);

struct EmbeddingMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // row-major
    EmbeddingConfig config;

    std::span<const double> row(std::size_t r) const {
        return {data.data() + r * cols, cols};
    }
};

using DescriptorCache = std::vector<DescriptorMatrix>;

// Raw descriptors for every graph, computed once and shared across
// configurations (ablations, CV folds). Covers the requested features.
DescriptorCache build_descriptor_cache(const Dataset& d, std::span<const Feature> features,
                                       unsigned workers = 0);

DatasetStats collect_dataset_stats(const Dataset& d, std::span<const std::size_t> indices,
                                   const EmbeddingConfig& config,
                                   const DescriptorCache* cache = nullptr,
                                   unsigned workers = 0);

EmbeddingMatrix embed_subset(const Dataset& d, std::span<const std::size_t> indices,
                             const EmbeddingConfig& config,
                             const DatasetStats* stats = nullptr,
                             const DescriptorCache* cache = nullptr,
                             unsigned workers = 0);

// Whole dataset in graph order; runs the two-phase pass itself when
// normalization = dataset.
EmbeddingMatrix embed_dataset(const Dataset& d, const EmbeddingConfig& config,
                              unsigned workers = 0);

// CSV: header cells `<feature>:<bin>`, one row per graph.
void write_embedding_csv(const EmbeddingMatrix& m, std::ostream& out);
// Binary: little-endian u64 rows, u64 cols, then row-major f64 values.
void write_embedding_binary(const EmbeddingMatrix& m, std::ostream& out);
EmbeddingMatrix read_embedding_binary(std::istream& in);

}  // namespace ltp
