#include "ltp/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ltp/parallel.hpp"
#include "ltp/rng.hpp"

namespace ltp {
namespace {

using ordered_json = nlohmann::ordered_json;

double elapsed_seconds(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - since)
        .count();
}

ordered_json embedding_config_to_json(const EmbeddingConfig& ec) {
    return ordered_json{{"bins", ec.bins},
                        {"aggregation", to_string(ec.aggregation)},
                        {"normalization", to_string(ec.normalization)},
                        {"log_scale", ec.log_scale},
                        {"features", to_string(ec.features)}};
}

EmbeddingConfig embedding_config_from_json(const ordered_json& j) {
    EmbeddingConfig ec;
    ec.bins = j.at("bins").get<int>();
    ec.aggregation = parse_aggregation(j.at("aggregation").get<std::string>());
    ec.normalization = parse_normalization(j.at("normalization").get<std::string>());
    ec.log_scale = j.at("log_scale").get<bool>();
    ec.features = parse_feature_selection(j.at("features").get<std::string>());
    return ec;
}

std::vector<int> subset_labels(const Dataset& d, std::span<const std::size_t> indices) {
    std::vector<int> y;
    y.reserve(indices.size());
    for (std::size_t i : indices) y.push_back(d.labels[i]);
    return y;
}

double accuracy_of(std::span<const int> predicted, std::span<const int> expected) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i] == expected[i]) ++hits;
    }
    return predicted.empty() ? 0.0
                             : static_cast<double>(hits) /
                                   static_cast<double>(predicted.size());
}

// Train on `train`, score on `test`, leaking nothing from the test split.
double fit_and_score(const Dataset& d, std::span<const std::size_t> train,
                     std::span<const std::size_t> test, const EmbeddingConfig& ec,
                     const ForestConfig& fc, const DescriptorCache* cache,
                     unsigned workers, double* extract_seconds,
                     double* train_seconds) {
    auto t0 = std::chrono::steady_clock::now();
    DatasetStats stats;
    const DatasetStats* stats_ptr = nullptr;
    if (ec.normalization == Normalization::dataset) {
        stats = collect_dataset_stats(d, train, ec, cache, workers);
        stats_ptr = &stats;
    }
    const auto x_train = embed_subset(d, train, ec, stats_ptr, cache, workers);
    const auto x_test = embed_subset(d, test, ec, stats_ptr, cache, workers);
    if (extract_seconds != nullptr) *extract_seconds += elapsed_seconds(t0);

    auto t1 = std::chrono::steady_clock::now();
    const auto y_train = subset_labels(d, train);
    const auto y_test = subset_labels(d, test);
    const auto forest = fit({x_train.data.data(), x_train.rows, x_train.cols}, y_train,
                            fc, workers);
    const auto predicted =
        predict(forest, {x_test.data.data(), x_test.rows, x_test.cols}, workers);
    if (train_seconds != nullptr) *train_seconds += elapsed_seconds(t1);
    return accuracy_of(predicted, y_test);
}

std::vector<Feature> union_features(const EmbeddingConfig& ec,
                                    std::span<const EmbeddingConfig> grid) {
    FeatureSelection sel = ec.features;
    for (const auto& candidate : grid) {
        sel.ldp5 = sel.ldp5 || candidate.features.ldp5;
        sel.sp = sel.sp || candidate.features.sp;
        sel.ebc = sel.ebc || candidate.features.ebc;
        sel.ji = sel.ji || candidate.features.ji;
        sel.lds = sel.lds || candidate.features.lds;
    }
    EmbeddingConfig probe = ec;
    probe.features = sel;
    return probe.expanded_features();
}

}  // namespace

std::vector<std::size_t> FoldPlan::test_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (assignments[i] == fold) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> FoldPlan::train_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (assignments[i] != fold) out.push_back(i);
    }
    return out;
}

FoldPlan stratified_kfold(std::span<const int> labels, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("stratified_kfold: k must be >= 2");
    if (labels.empty()) throw std::invalid_argument("stratified_kfold: empty labels");

    int n_classes = 0;
    for (int label : labels) n_classes = std::max(n_classes, label + 1);

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignments.assign(labels.size(), -1);

    for (int cls = 0; cls < n_classes; ++cls) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == cls) members.push_back(i);
        }
        if (members.empty()) continue;
        if (members.size() < static_cast<std::size_t>(k)) {
            plan.warnings.push_back("class " + std::to_string(cls) + " has only " +
                                    std::to_string(members.size()) +
                                    " samples for k=" + std::to_string(k));
        }
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(cls)));
        rng.shuffle(members);
        for (std::size_t i = 0; i < members.size(); ++i) {
            plan.assignments[members[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
        }
    }
    return plan;
}

FoldPlan load_fold_plan(const std::filesystem::path& file, std::size_t n_samples) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open fold file " + file.string());
    ordered_json j = ordered_json::parse(in);
    if (!j.is_array()) throw std::runtime_error("fold file: expected a JSON list");

    FoldPlan plan;
    plan.source = file.string();
    plan.assignments.assign(n_samples, -1);
    int max_fold = -1;
    for (const auto& entry : j) {
        const int fold = entry.at("fold").get<int>();
        if (fold < 0) throw std::runtime_error("fold file: negative fold index");
        max_fold = std::max(max_fold, fold);
        for (const auto& idx : entry.at("indices")) {
            const auto i = idx.get<std::int64_t>();
            if (i < 0 || static_cast<std::size_t>(i) >= n_samples) {
                throw std::runtime_error("fold file: sample index " + std::to_string(i) +
                                         " outside [0, " + std::to_string(n_samples) +
                                         ")");
            }
            if (plan.assignments[static_cast<std::size_t>(i)] != -1) {
                throw std::runtime_error("fold file: sample " + std::to_string(i) +
                                         " assigned twice");
            }
            plan.assignments[static_cast<std::size_t>(i)] = fold;
        }
    }
    for (std::size_t i = 0; i < n_samples; ++i) {
        if (plan.assignments[i] == -1) {
            throw std::runtime_error("fold file: sample " + std::to_string(i) +
                                     " is unassigned");
        }
    }
    plan.k = max_fold + 1;
    if (plan.k < 2) throw std::runtime_error("fold file: fewer than two folds");
    return plan;
}

void save_fold_plan(const FoldPlan& plan, std::ostream& out) {
    ordered_json j = ordered_json::array();
    for (int fold = 0; fold < plan.k; ++fold) {
        ordered_json entry;
        entry["fold"] = fold;
        entry["indices"] = plan.test_indices(fold);
        j.push_back(std::move(entry));
    }
    out << j.dump(2) << '\n';
}

void CVReport::recompute_aggregates() {
    if (fold_accuracies.empty()) {
        mean = std_dev = 0.0;
        return;
    }
    const double n = static_cast<double>(fold_accuracies.size());
    mean = std::accumulate(fold_accuracies.begin(), fold_accuracies.end(), 0.0) / n;
    double varsum = 0.0;
    for (double a : fold_accuracies) varsum += (a - mean) * (a - mean);
    std_dev = std::sqrt(varsum / n);
}

CVReport run_cv(const Dataset& d, const EmbeddingConfig& ec, const ForestConfig& fc,
                const FoldPlan& folds, const CVOptions& options) {
    ec.validate();
    if (folds.assignments.size() != d.size()) {
        throw std::invalid_argument("run_cv: fold plan covers " +
                                    std::to_string(folds.assignments.size()) +
                                    " samples, dataset has " + std::to_string(d.size()));
    }
    for (int assignment : folds.assignments) {
        if (assignment < 0 || assignment >= folds.k) {
            throw std::invalid_argument("run_cv: fold assignment " +
                                        std::to_string(assignment) +
                                        " outside [0, " + std::to_string(folds.k) + ")");
        }
    }

    CVReport report;
    report.dataset = d.name;
    report.embedding = ec;
    report.forest = fc;
    report.folds = folds.k;
    report.seed = folds.seed;
    report.fold_source = folds.source;
    report.workers = resolve_workers(options.workers);
    report.warnings = folds.warnings;

    DescriptorCache local_cache;
    const DescriptorCache* cache = options.cache;
    if (cache == nullptr) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto features = union_features(ec, options.tuning_grid);
        local_cache = build_descriptor_cache(d, features, options.workers);
        cache = &local_cache;
        // descriptor computation dominates extraction; charge it here (a
        // caller-provided cache is amortized across reports instead)
        report.extract_seconds += elapsed_seconds(t0);
    }

    for (int fold = 0; fold < folds.k; ++fold) {
        const auto train = folds.train_indices(fold);
        const auto test = folds.test_indices(fold);
        if (test.empty()) {
            throw std::invalid_argument("run_cv: fold " + std::to_string(fold) +
                                        " has no test samples");
        }

        EmbeddingConfig fold_ec = ec;
        if (!options.tuning_grid.empty()) {
            const auto y_train = subset_labels(d, train);
            const auto inner = stratified_kfold(
                y_train, options.inner_folds,
                derive_seed(folds.seed, 0x1000u + static_cast<unsigned>(fold)));
            double best_score = -1.0;
            for (const auto& candidate : options.tuning_grid) {
                double score_sum = 0.0;
                for (int ifold = 0; ifold < inner.k; ++ifold) {
                    std::vector<std::size_t> inner_train, inner_val;
                    for (std::size_t i = 0; i < train.size(); ++i) {
                        (inner.assignments[i] == ifold ? inner_val : inner_train)
                            .push_back(train[i]);
                    }
                    ForestConfig inner_fc = fc;
                    inner_fc.seed = derive_seed(
                        fc.seed,
                        0x2000u + static_cast<std::uint64_t>(fold) * 1024 +
                            static_cast<std::uint64_t>(ifold));
                    score_sum += fit_and_score(d, inner_train, inner_val, candidate,
                                               inner_fc, cache, options.workers,
                                               nullptr, nullptr);
                }
                const double score = score_sum / static_cast<double>(inner.k);
                if (score > best_score) {  // ties keep the earliest grid entry
                    best_score = score;
                    fold_ec = candidate;
                }
            }
            report.fold_configs.push_back(fold_ec);
        }

        ForestConfig fold_fc = fc;
        fold_fc.seed = derive_seed(fc.seed, static_cast<std::uint64_t>(fold));
        const double acc =
            fit_and_score(d, train, test, fold_ec, fold_fc, cache, options.workers,
                          &report.extract_seconds, &report.train_seconds);
        report.fold_accuracies.push_back(acc);
    }
    report.recompute_aggregates();
    return report;
}

std::vector<SweepStat> sweep_statistics(
    const std::vector<std::vector<double>>& value_by_dataset) {
    if (value_by_dataset.empty()) {
        throw std::invalid_argument("sweep_statistics: empty grid");
    }
    const std::size_t n_values = value_by_dataset.size();
    const std::size_t n_datasets = value_by_dataset.front().size();
    for (const auto& row : value_by_dataset) {
        if (row.size() != n_datasets) {
            throw std::invalid_argument("sweep_statistics: ragged accuracy table");
        }
    }
    std::vector<SweepStat> stats(n_values);
    for (std::size_t ds = 0; ds < n_datasets; ++ds) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t v = 0; v < n_values; ++v) {
            best = std::max(best, value_by_dataset[v][ds]);
        }
        for (std::size_t v = 0; v < n_values; ++v) {
            if (value_by_dataset[v][ds] == best) ++stats[v].wins;
            stats[v].abs_avg_diff += best - value_by_dataset[v][ds];
        }
    }
    if (n_datasets > 0) {
        for (auto& s : stats) s.abs_avg_diff /= static_cast<double>(n_datasets);
    }
    return stats;
}

SweepTable sweep_single_hyperparameter(std::span<const Dataset> datasets,
                                       const EmbeddingConfig& defaults,
                                       const ForestConfig& fc, const SweepGrids& grids,
                                       int k, std::uint64_t seed, unsigned workers) {
    if (grids.bins.empty() || grids.aggregations.empty() ||
        grids.normalizations.empty() || grids.log_scales.empty()) {
        throw std::invalid_argument("sweep: every hyperparameter grid must be non-empty");
    }

    SweepTable table;
    table.defaults = defaults;
    table.forest = fc;
    table.folds = k;
    table.seed = seed;
    for (const auto& d : datasets) table.datasets.push_back(d.name);

    // One fold plan and one descriptor cache per dataset, shared by every
    // hyperparameter setting.
    std::vector<FoldPlan> plans;
    std::vector<DescriptorCache> caches;
    const auto features = defaults.expanded_features();
    for (const auto& d : datasets) {
        plans.push_back(stratified_kfold(d.labels, k, seed));
        caches.push_back(build_descriptor_cache(d, features, workers));
    }

    auto evaluate = [&](const EmbeddingConfig& ec) {
        std::vector<double> means;
        for (std::size_t i = 0; i < datasets.size(); ++i) {
            CVOptions options;
            options.workers = workers;
            options.cache = &caches[i];
            means.push_back(run_cv(datasets[i], ec, fc, plans[i], options).mean);
        }
        return means;
    };

    auto emit = [&](const std::string& hyperparameter,
                    const std::vector<std::string>& names,
                    const std::vector<std::vector<double>>& accuracy) {
        const auto stats = sweep_statistics(accuracy);
        for (std::size_t v = 0; v < names.size(); ++v) {
            table.rows.push_back(SweepRow{hyperparameter, names[v], accuracy[v],
                                          stats[v].wins, stats[v].abs_avg_diff});
        }
    };

    {
        std::vector<std::string> names;
        std::vector<std::vector<double>> acc;
        for (int bins : grids.bins) {
            EmbeddingConfig ec = defaults;
            ec.bins = bins;
            names.push_back(std::to_string(bins));
            acc.push_back(evaluate(ec));
        }
        emit("bins", names, acc);
    }
    {
        std::vector<std::string> names;
        std::vector<std::vector<double>> acc;
        for (Aggregation a : grids.aggregations) {
            EmbeddingConfig ec = defaults;
            ec.aggregation = a;
            names.push_back(to_string(a));
            acc.push_back(evaluate(ec));
        }
        emit("aggregation", names, acc);
    }
    {
        std::vector<std::string> names;
        std::vector<std::vector<double>> acc;
        for (Normalization n : grids.normalizations) {
            EmbeddingConfig ec = defaults;
            ec.normalization = n;
            names.push_back(to_string(n));
            acc.push_back(evaluate(ec));
        }
        emit("normalization", names, acc);
    }
    {
        std::vector<std::string> names;
        std::vector<std::vector<double>> acc;
        for (bool log_scale : grids.log_scales) {
            EmbeddingConfig ec = defaults;
            ec.log_scale = log_scale;
            names.push_back(log_scale ? "log" : "linear");
            acc.push_back(evaluate(ec));
        }
        emit("scale", names, acc);
    }
    return table;
}

std::vector<std::pair<std::string, CVReport>> ablation(const Dataset& d,
                                                       const EmbeddingConfig& defaults,
                                                       const ForestConfig& fc,
                                                       const FoldPlan& folds,
                                                       unsigned workers) {
    const std::vector<std::pair<std::string, FeatureSelection>> variants = {
        {"ldp", FeatureSelection::ldp()},
        {"ldp+sp", {.ldp5 = true, .sp = true}},
        {"ldp+ebc", {.ldp5 = true, .ebc = true}},
        {"ldp+ji", {.ldp5 = true, .ji = true}},
        {"ldp+lds", {.ldp5 = true, .lds = true}},
        {"ltp", FeatureSelection::ltp()},
    };
    const auto cache = build_descriptor_cache(d, kAllFeatures, workers);

    std::vector<std::pair<std::string, CVReport>> out;
    for (const auto& [name, selection] : variants) {
        EmbeddingConfig ec = defaults;
        ec.features = selection;
        CVOptions options;
        options.workers = workers;
        options.cache = &cache;
        out.emplace_back(name, run_cv(d, ec, fc, folds, options));
    }
    return out;
}

std::vector<std::vector<double>> rank_matrix(const AccuracyTable& table,
                                             TiePolicy policy) {
    const std::size_t n_models = table.models.size();
    const std::size_t n_datasets = table.datasets.size();
    if (n_models == 0 || n_datasets == 0) {
        throw std::invalid_argument("rank_matrix: empty accuracy table");
    }
    std::vector<std::vector<double>> ranks(n_models,
                                           std::vector<double>(n_datasets, 0.0));
    for (std::size_t ds = 0; ds < n_datasets; ++ds) {
        // Missing cells sort below every real accuracy, i.e. rank last.
        std::vector<std::pair<double, std::size_t>> order;
        for (std::size_t m = 0; m < n_models; ++m) {
            const auto& cell = table.accuracy[m][ds];
            order.emplace_back(cell ? *cell : -std::numeric_limits<double>::infinity(),
                               m);
        }
        std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        std::size_t i = 0;
        std::size_t group = 0;
        while (i < order.size()) {
            std::size_t j = i;
            while (j < order.size() && order[j].first == order[i].first) ++j;
            double rank;
            if (policy == TiePolicy::average) {
                // positions i+1 .. j share their average
                rank = static_cast<double>(i + 1 + j) / 2.0;
            } else {
                rank = static_cast<double>(group + 1);
            }
            for (std::size_t t = i; t < j; ++t) ranks[order[t].second][ds] = rank;
            i = j;
            ++group;
        }
    }
    return ranks;
}

std::vector<double> average_rank(const AccuracyTable& table, TiePolicy policy) {
    const auto ranks = rank_matrix(table, policy);
    std::vector<double> out;
    out.reserve(ranks.size());
    for (const auto& row : ranks) {
        out.push_back(std::accumulate(row.begin(), row.end(), 0.0) /
                      static_cast<double>(row.size()));
    }
    return out;
}

AccuracyTable read_accuracy_csv(std::istream& in) {
    AccuracyTable table;
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("accuracy table: empty input");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::stringstream header(line);
    std::string cell;
    bool first = true;
    while (std::getline(header, cell, ',')) {
        if (!first) table.datasets.push_back(cell);
        first = false;
    }
    if (table.datasets.empty()) {
        throw std::runtime_error("accuracy table: header names no datasets");
    }
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream row(line);
        std::getline(row, cell, ',');
        table.models.push_back(cell);
        std::vector<std::optional<double>> values;
        while (std::getline(row, cell, ',')) {
            std::string trimmed;
            for (char c : cell) {
                if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
            }
            std::string upper;
            for (char c : trimmed) upper += static_cast<char>(std::toupper(c));
            if (trimmed.empty() || upper == "OOR" || upper == "NA") {
                values.push_back(std::nullopt);
            } else {
                values.push_back(std::stod(trimmed));
            }
        }
        if (values.size() != table.datasets.size()) {
            throw std::runtime_error("accuracy table: row '" + table.models.back() +
                                     "' has " + std::to_string(values.size()) +
                                     " cells, expected " +
                                     std::to_string(table.datasets.size()));
        }
        table.accuracy.push_back(std::move(values));
    }
    if (table.models.empty()) {
        throw std::runtime_error("accuracy table: no model rows");
    }
    return table;
}

namespace {

ordered_json cv_report_to_json(const CVReport& report) {
    ordered_json j;
    j["schema_version"] = 1;
    j["dataset"] = report.dataset;
    j["config"] = ordered_json{
        {"embedding", embedding_config_to_json(report.embedding)},
        {"forest",
         ordered_json{{"n_trees", report.forest.n_trees}, {"seed", report.forest.seed}}},
        {"protocol", ordered_json{{"folds", report.folds},
                                  {"seed", report.seed},
                                  {"fold_source", report.fold_source}}},
    };
    j["fold_accuracies"] = report.fold_accuracies;
    j["mean"] = report.mean;
    j["std"] = report.std_dev;
    j["extract_seconds"] = report.extract_seconds;
    j["train_seconds"] = report.train_seconds;
    j["workers"] = report.workers;
    j["warnings"] = report.warnings;
    if (!report.fold_configs.empty()) {
        ordered_json configs = ordered_json::array();
        for (const auto& ec : report.fold_configs) {
            configs.push_back(embedding_config_to_json(ec));
        }
        j["fold_configs"] = std::move(configs);
    }
    return j;
}

}  // namespace

void write_cv_report_json(const CVReport& report, std::ostream& out) {
    out << cv_report_to_json(report).dump(2) << '\n';
}

CVReport read_cv_report_json(std::istream& in) {
    ordered_json j = ordered_json::parse(in);
    CVReport report;
    report.dataset = j.at("dataset").get<std::string>();
    const auto& config = j.at("config");
    report.embedding = embedding_config_from_json(config.at("embedding"));
    report.forest.n_trees = config.at("forest").at("n_trees").get<int>();
    report.forest.seed = config.at("forest").at("seed").get<std::uint64_t>();
    report.folds = config.at("protocol").at("folds").get<int>();
    report.seed = config.at("protocol").at("seed").get<std::uint64_t>();
    report.fold_source = config.at("protocol").at("fold_source").get<std::string>();
    report.fold_accuracies = j.at("fold_accuracies").get<std::vector<double>>();
    report.mean = j.at("mean").get<double>();
    report.std_dev = j.at("std").get<double>();
    report.extract_seconds = j.at("extract_seconds").get<double>();
    report.train_seconds = j.at("train_seconds").get<double>();
    report.workers = j.at("workers").get<unsigned>();
    report.warnings = j.at("warnings").get<std::vector<std::string>>();
    if (j.contains("fold_configs")) {
        for (const auto& entry : j.at("fold_configs")) {
            report.fold_configs.push_back(embedding_config_from_json(entry));
        }
    }
    return report;
}

void write_cv_report_csv(const CVReport& report, std::ostream& out) {
    out << "dataset,features,bins,aggregation,normalization,scale,trees,folds,seed,"
           "mean,std";
    for (std::size_t i = 0; i < report.fold_accuracies.size(); ++i) {
        out << ",fold_" << i;
    }
    out << '\n';
    const auto old_precision = out.precision(17);
    out << report.dataset << ',' << to_string(report.embedding.features) << ','
        << report.embedding.bins << ',' << to_string(report.embedding.aggregation)
        << ',' << to_string(report.embedding.normalization) << ','
        << (report.embedding.log_scale ? "log" : "linear") << ','
        << report.forest.n_trees << ',' << report.folds << ',' << report.seed << ','
        << report.mean << ',' << report.std_dev;
    for (double acc : report.fold_accuracies) out << ',' << acc;
    out << '\n';
    out.precision(old_precision);
}

void write_sweep_json(const SweepTable& table, std::ostream& out) {
    ordered_json j;
    j["schema_version"] = 1;
    j["config"] = ordered_json{
        {"defaults", embedding_config_to_json(table.defaults)},
        {"forest", ordered_json{{"n_trees", table.forest.n_trees},
                                {"seed", table.forest.seed}}},
        {"protocol", ordered_json{{"folds", table.folds}, {"seed", table.seed}}},
    };
    j["datasets"] = table.datasets;
    ordered_json rows = ordered_json::array();
    for (const auto& row : table.rows) {
        rows.push_back(ordered_json{{"hyperparameter", row.hyperparameter},
                                    {"value", row.value},
                                    {"wins", row.wins},
                                    {"abs_avg_diff", row.abs_avg_diff},
                                    {"dataset_means", row.dataset_means}});
    }
    j["rows"] = std::move(rows);
    out << j.dump(2) << '\n';
}

void write_sweep_csv(const SweepTable& table, std::ostream& out) {
    out << "hyperparameter,value,wins,abs_avg_diff";
    for (const auto& ds : table.datasets) out << ',' << ds;
    out << '\n';
    const auto old_precision = out.precision(17);
    for (const auto& row : table.rows) {
        out << row.hyperparameter << ',' << row.value << ',' << row.wins << ','
            << row.abs_avg_diff;
        for (double mean : row.dataset_means) out << ',' << mean;
        out << '\n';
    }
    out.precision(old_precision);
}

void write_ablation_json(const std::string& dataset,
                         const std::vector<std::pair<std::string, CVReport>>& variants,
                         std::ostream& out) {
    ordered_json j;
    j["schema_version"] = 1;
    j["dataset"] = dataset;
    ordered_json entries = ordered_json::array();
    for (const auto& [name, report] : variants) {
        entries.push_back(
            ordered_json{{"variant", name}, {"report", cv_report_to_json(report)}});
    }
    j["variants"] = std::move(entries);
    out << j.dump(2) << '\n';
}

void write_ablation_csv(const std::vector<std::pair<std::string, CVReport>>& variants,
                        std::ostream& out) {
    out << "variant,mean,std";
    if (!variants.empty()) {
        for (std::size_t i = 0; i < variants.front().second.fold_accuracies.size();
             ++i) {
            out << ",fold_" << i;
        }
    }
    out << '\n';
    const auto old_precision = out.precision(17);
    for (const auto& [name, report] : variants) {
        out << name << ',' << report.mean << ',' << report.std_dev;
        for (double acc : report.fold_accuracies) out << ',' << acc;
        out << '\n';
    }
    out.precision(old_precision);
}

void write_ranks_json(const AccuracyTable& table, std::span<const double> ranks,
                      TiePolicy policy, std::ostream& out) {
    ordered_json j;
    j["schema_version"] = 1;
    j["tie_policy"] = policy == TiePolicy::average ? "average" : "dense";
    j["datasets"] = table.datasets;
    ordered_json models = ordered_json::array();
    for (std::size_t m = 0; m < table.models.size(); ++m) {
        models.push_back(
            ordered_json{{"model", table.models[m]}, {"average_rank", ranks[m]}});
    }
    j["models"] = std::move(models);
    out << j.dump(2) << '\n';
}

void write_ranks_csv(const AccuracyTable& table, std::span<const double> ranks,
                     std::ostream& out) {
    out << "model,average_rank\n";
    const auto old_precision = out.precision(17);
    for (std::size_t m = 0; m < table.models.size(); ++m) {
        out << table.models[m] << ',' << ranks[m] << '\n';
    }
    out.precision(old_precision);
}

}  // namespace ltp
