#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ltp/dataset.hpp"
#include "ltp/embedding.hpp"
#include "ltp/forest.hpp"

namespace ltp {

struct FoldPlan {
    int k = 0;
    std::vector<int> assignments;  // fold index per sample
    std::uint64_t seed = 0;
    std::string source = "seeded";  // or the external file the plan came from
    std::vector<std::string> warnings;

    std::vector<std::size_t> test_indices(int fold) const;
    std::vector<std::size_t> train_indices(int fold) const;
};

// Per class: seeded shuffle, then round-robin dealing across folds, so every
// fold's per-class count is within 1 of perfect stratification. A class with
// fewer than k members produces a recorded warning, not an error.
FoldPlan stratified_kfold(std::span<const int> labels, int k, std::uint64_t seed);

// External split source: JSON list of {"fold": int, "indices": [int]}.
FoldPlan load_fold_plan(const std::filesystem::path& file, std::size_t n_samples);
void save_fold_plan(const FoldPlan& plan, std::ostream& out);

struct CVReport {
    std::string dataset;
    EmbeddingConfig embedding;
    ForestConfig forest;
    int folds = 0;
    std::uint64_t seed = 0;  // fold-plan seed
    std::string fold_source = "seeded";
    std::vector<double> fold_accuracies;
    double mean = 0.0;
    double std_dev = 0.0;  // population
    double extract_seconds = 0.0;
    double train_seconds = 0.0;
    unsigned workers = 1;
    std::vector<std::string> warnings;
    // Per-fold winning configuration, present only when a tuning grid ran.
    std::vector<EmbeddingConfig> fold_configs;

    void recompute_aggregates();
};

struct CVOptions {
    unsigned workers = 0;  // 0 = all hardware threads
    // Non-empty engages inner stratified k-fold selection per outer fold.
    std::vector<EmbeddingConfig> tuning_grid;
    int inner_folds = 5;
    // Raw descriptors shared across folds/configs; built internally if null.
    const DescriptorCache* cache = nullptr;
};

// Outer CV: per fold, embeddings (and the dataset-normalization maxima, when
// used) are computed from the training portion only; the forest is re-seeded
// per fold with derive_seed(forest_seed, fold).
CVReport run_cv(const Dataset& d, const EmbeddingConfig& ec, const ForestConfig& fc,
                const FoldPlan& folds, const CVOptions& options = {});

// ----- single-hyperparameter sweep -----

struct SweepGrids {
    std::vector<int> bins = {30, 50, 70, 100};
    std::vector<Aggregation> aggregations = {Aggregation::histogram, Aggregation::edf};
    std::vector<Normalization> normalizations = {Normalization::none,
                                                 Normalization::graph,
                                                 Normalization::dataset};
    std::vector<bool> log_scales = {false, true};
};

struct SweepRow {
    std::string hyperparameter;
    std::string value;
    std::vector<double> dataset_means;  // aligned with SweepTable::datasets
    int wins = 0;
    double abs_avg_diff = 0.0;
};

struct SweepTable {
    std::vector<std::string> datasets;
    std::vector<SweepRow> rows;
    // provenance: the configuration each varied value was centered on
    EmbeddingConfig defaults;
    ForestConfig forest;
    int folds = 0;
    std::uint64_t seed = 0;
};

struct SweepStat {
    int wins = 0;
    double abs_avg_diff = 0.0;
};

// Counting core: accuracies[value][dataset] for one hyperparameter. A tie
// for best on a dataset awards each tying value a win; the per-dataset best
// contributes zero to its own average difference.
std::vector<SweepStat> sweep_statistics(
    const std::vector<std::vector<double>>& value_by_dataset);

// Varies one hyperparameter at a time around `defaults`, evaluating each
// setting with seeded stratified folds per dataset.
SweepTable sweep_single_hyperparameter(std::span<const Dataset> datasets,
                                       const EmbeddingConfig& defaults,
                                       const ForestConfig& fc, const SweepGrids& grids,
                                       int k, std::uint64_t seed, unsigned workers = 0);

// ----- descriptor ablation -----

// Variants LDP, LDP+SP, LDP+EBC, LDP+JI, LDP+LDS, LTP evaluated on one
// shared fold plan (paired comparison).
std::vector<std::pair<std::string, CVReport>> ablation(const Dataset& d,
                                                       const EmbeddingConfig& defaults,
                                                       const ForestConfig& fc,
                                                       const FoldPlan& folds,
                                                       unsigned workers = 0);

// ----- model ranking -----

enum class TiePolicy {
    average,  // tied models share the average of their positions
    dense,    // tied models share one position; next value takes the next
};

struct AccuracyTable {
    std::vector<std::string> models;
    std::vector<std::string> datasets;
    // accuracy[model][dataset]; nullopt marks an out-of-resources cell,
    // ranked last within its dataset.
    std::vector<std::vector<std::optional<double>>> accuracy;
};

// ranks[model][dataset]
std::vector<std::vector<double>> rank_matrix(const AccuracyTable& table,
                                             TiePolicy policy = TiePolicy::average);
std::vector<double> average_rank(const AccuracyTable& table,
                                 TiePolicy policy = TiePolicy::average);

// Header `model,<dataset>,...`; cells numeric, or OOR/NA/empty for missing.
AccuracyTable read_accuracy_csv(std::istream& in);

// ----- serialization -----

void write_cv_report_json(const CVReport& report, std::ostream& out);
CVReport read_cv_report_json(std::istream& in);
void write_cv_report_csv(const CVReport& report, std::ostream& out);

void write_sweep_json(const SweepTable& table, std::ostream& out);
void write_sweep_csv(const SweepTable& table, std::ostream& out);

void write_ablation_json(const std::string& dataset,
                         const std::vector<std::pair<std::string, CVReport>>& variants,
                         std::ostream& out);
void write_ablation_csv(const std::vector<std::pair<std::string, CVReport>>& variants,
                        std::ostream& out);

void write_ranks_json(const AccuracyTable& table, std::span<const double> ranks,
                      TiePolicy policy, std::ostream& out);
void write_ranks_csv(const AccuracyTable& table, std::span<const double> ranks,
                     std::ostream& out);

}  // namespace ltp
