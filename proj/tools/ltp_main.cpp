// Command line front end: dataset ingestion, embedding extraction, CV
// evaluation, hyperparameter sweeps, descriptor ablations and model ranking.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ltp/dataset.hpp"
#include "ltp/embedding.hpp"
#include "ltp/evaluation.hpp"
#include "ltp/forest.hpp"
#include "ltp/parallel.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

// Tracks files written by the current command; on failure everything is
// removed so no partial outputs survive.
class OutputSet {
  public:
    std::ofstream create(const fs::path& path) {
        fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        written_.push_back(path);
        return out;
    }
    void discard_all() {
        for (const auto& path : written_) {
            std::error_code ec;
            fs::remove(path, ec);
        }
    }

  private:
    std::vector<fs::path> written_;
};

std::uint64_t fnv1a_file(const fs::path& path, std::uint64_t hash) {
    std::ifstream in(path, std::ios::binary);
    char buffer[1 << 16];
    while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(buffer[i]);
            hash *= 0x100000001b3ULL;
        }
    }
    return hash;
}

struct DatasetArgs {
    std::vector<std::string> paths;
    std::string name_override;
};

fs::path resolve_dataset_dir(const std::string& arg) {
    fs::path direct(arg);
    if (fs::is_directory(direct)) return direct;
    if (const char* root = std::getenv("LTP_DATA_ROOT"); root != nullptr) {
        fs::path under_root = fs::path(root) / arg;
        if (fs::is_directory(under_root)) return under_root;
    }
    throw std::runtime_error("dataset directory not found: " + arg +
                             " (also tried under $LTP_DATA_ROOT)");
}

ltp::Dataset load_dataset(const std::string& arg, const std::string& name_override) {
    const fs::path dir = resolve_dataset_dir(arg);
    const std::string name =
        name_override.empty() ? dir.filename().string() : name_override;
    return ltp::parse_tudataset(dir, name);
}

struct EmbeddingFlags {
    int bins = 50;
    std::string aggregation = "histogram";
    std::string normalization = "none";
    bool log_scale = false;
    std::string features = "ltp";

    ltp::EmbeddingConfig config() const {
        ltp::EmbeddingConfig ec;
        ec.bins = bins;
        ec.aggregation = ltp::parse_aggregation(aggregation);
        ec.normalization = ltp::parse_normalization(normalization);
        ec.log_scale = log_scale;
        ec.features = ltp::parse_feature_selection(features);
        ec.validate();
        return ec;
    }
};

void add_embedding_flags(CLI::App* cmd, EmbeddingFlags& flags) {
    cmd->add_option("--bins", flags.bins, "Histogram/EDF bins per feature")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--aggregation", flags.aggregation, "histogram or edf")
        ->check(CLI::IsMember({"histogram", "edf"}))
        ->capture_default_str();
    cmd->add_option("--normalization", flags.normalization, "none, graph or dataset")
        ->check(CLI::IsMember({"none", "graph", "dataset"}))
        ->capture_default_str();
    cmd->add_flag("--log-scale", flags.log_scale, "Aggregate ln(1+x) instead of x");
    cmd->add_option("--features", flags.features,
                    "ldp, ltp or '+'-joined groups (ldp5, sp, ebc, ji, lds)")
        ->capture_default_str();
}

ordered_json embedding_json(const ltp::EmbeddingConfig& ec) {
    return ordered_json{{"bins", ec.bins},
                        {"aggregation", ltp::to_string(ec.aggregation)},
                        {"normalization", ltp::to_string(ec.normalization)},
                        {"log_scale", ec.log_scale},
                        {"features", ltp::to_string(ec.features)}};
}

std::string percent(double accuracy) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.1f", accuracy * 100.0);
    return buffer;
}

int run_extract(const DatasetArgs& data, const EmbeddingFlags& flags,
                const std::string& output, unsigned workers) {
    const auto ec = flags.config();
    OutputSet outputs;
    try {
        const auto dataset = load_dataset(data.paths.front(), data.name_override);
        const fs::path dir = resolve_dataset_dir(data.paths.front());
        const auto matrix = ltp::embed_dataset(dataset, ec, workers);

        const fs::path out_dir(output);
        {
            auto out = outputs.create(out_dir / (dataset.name + "_embedding.csv"));
            ltp::write_embedding_csv(matrix, out);
        }
        {
            auto out = outputs.create(out_dir / (dataset.name + "_embedding.bin"));
            ltp::write_embedding_binary(matrix, out);
        }
        {
            auto out = outputs.create(out_dir / (dataset.name + "_labels.txt"));
            for (int label : dataset.labels) out << label << '\n';
        }
        {
            std::uint64_t hash = 0xcbf29ce484222325ULL;
            for (const char* suffix :
                 {"_A.txt", "_graph_indicator.txt", "_graph_labels.txt"}) {
                hash = fnv1a_file(dir / (dataset.name + suffix), hash);
            }
            ordered_json manifest;
            manifest["schema_version"] = 1;
            manifest["dataset"] = dataset.name;
            manifest["dataset_dir"] = dir.string();
            manifest["input_fnv1a64"] = hash;
            manifest["graphs"] = dataset.size();
            manifest["classes"] = dataset.num_classes;
            manifest["embedding"] = embedding_json(ec);
            manifest["rows"] = matrix.rows;
            manifest["cols"] = matrix.cols;
            manifest["workers"] = ltp::resolve_workers(workers);
            auto out = outputs.create(out_dir / (dataset.name + "_manifest.json"));
            out << manifest.dump(2) << '\n';
        }
        std::cout << dataset.name << ": " << matrix.rows << " x " << matrix.cols
                  << " embedding written to " << out_dir.string() << "\n";
        return 0;
    } catch (...) {
        outputs.discard_all();
        throw;
    }
}

ltp::FoldPlan make_fold_plan(const ltp::Dataset& dataset, int folds,
                             std::uint64_t seed, const std::string& external_folds) {
    if (!external_folds.empty()) {
        return ltp::load_fold_plan(external_folds, dataset.size());
    }
    return ltp::stratified_kfold(dataset.labels, folds, seed);
}

void write_report_files(const ltp::CVReport& report, const fs::path& out_dir,
                        const std::string& stem, const std::string& format,
                        OutputSet& outputs) {
    if (format == "json" || format == "both") {
        auto out = outputs.create(out_dir / (stem + ".json"));
        ltp::write_cv_report_json(report, out);
    }
    if (format == "csv" || format == "both") {
        auto out = outputs.create(out_dir / (stem + ".csv"));
        ltp::write_cv_report_csv(report, out);
    }
}

int run_eval(const DatasetArgs& data, const EmbeddingFlags& flags, int trees,
             std::uint64_t seed, int folds, int inner_folds, bool tune,
             const std::string& external_folds, const std::string& output,
             const std::string& format, unsigned workers) {
    const auto ec = flags.config();
    OutputSet outputs;
    try {
        const auto dataset = load_dataset(data.paths.front(), data.name_override);
        const auto plan = make_fold_plan(dataset, folds, seed, external_folds);

        ltp::ForestConfig fc;
        fc.n_trees = trees;
        fc.seed = seed;

        ltp::CVOptions options;
        options.workers = workers;
        options.inner_folds = inner_folds;
        if (tune) {
            ltp::SweepGrids grids;
            for (int bins : grids.bins) {
                for (auto aggregation : grids.aggregations) {
                    for (auto normalization : grids.normalizations) {
                        for (bool log_scale : grids.log_scales) {
                            ltp::EmbeddingConfig candidate = ec;
                            candidate.bins = bins;
                            candidate.aggregation = aggregation;
                            candidate.normalization = normalization;
                            candidate.log_scale = log_scale;
                            options.tuning_grid.push_back(candidate);
                        }
                    }
                }
            }
        }

        const auto report = ltp::run_cv(dataset, ec, fc, plan, options);
        write_report_files(report, output, dataset.name + "_cv", format, outputs);
        std::cout << dataset.name << ": " << percent(report.mean) << " ± "
                  << percent(report.std_dev) << "\n";
        return 0;
    } catch (...) {
        outputs.discard_all();
        throw;
    }
}

int run_sweep(const DatasetArgs& data, const EmbeddingFlags& flags, int trees,
              std::uint64_t seed, int folds, const std::string& output,
              const std::string& format, unsigned workers) {
    const auto ec = flags.config();
    OutputSet outputs;
    try {
        std::vector<ltp::Dataset> datasets;
        for (const auto& path : data.paths) {
            datasets.push_back(load_dataset(path, ""));
        }
        ltp::ForestConfig fc;
        fc.n_trees = trees;
        fc.seed = seed;
        const auto table = ltp::sweep_single_hyperparameter(
            datasets, ec, fc, ltp::SweepGrids{}, folds, seed, workers);

        const fs::path out_dir(output);
        if (format == "json" || format == "both") {
            auto out = outputs.create(out_dir / "sweep.json");
            ltp::write_sweep_json(table, out);
        }
        if (format == "csv" || format == "both") {
            auto out = outputs.create(out_dir / "sweep.csv");
            ltp::write_sweep_csv(table, out);
        }
        for (const auto& row : table.rows) {
            std::cout << row.hyperparameter << "=" << row.value << ": wins=" << row.wins
                      << " abs_avg_diff=" << percent(row.abs_avg_diff) << "\n";
        }
        return 0;
    } catch (...) {
        outputs.discard_all();
        throw;
    }
}

int run_ablate(const DatasetArgs& data, const EmbeddingFlags& flags, int trees,
               std::uint64_t seed, int folds, const std::string& external_folds,
               const std::string& output, const std::string& format,
               unsigned workers) {
    const auto ec = flags.config();
    OutputSet outputs;
    try {
        const auto dataset = load_dataset(data.paths.front(), data.name_override);
        const auto plan = make_fold_plan(dataset, folds, seed, external_folds);
        ltp::ForestConfig fc;
        fc.n_trees = trees;
        fc.seed = seed;
        const auto variants = ltp::ablation(dataset, ec, fc, plan, workers);

        const fs::path out_dir(output);
        if (format == "json" || format == "both") {
            auto out = outputs.create(out_dir / (dataset.name + "_ablation.json"));
            ltp::write_ablation_json(dataset.name, variants, out);
        }
        if (format == "csv" || format == "both") {
            auto out = outputs.create(out_dir / (dataset.name + "_ablation.csv"));
            ltp::write_ablation_csv(variants, out);
        }
        for (const auto& [name, report] : variants) {
            std::cout << dataset.name << " " << name << ": " << percent(report.mean)
                      << " ± " << percent(report.std_dev) << "\n";
        }
        return 0;
    } catch (...) {
        outputs.discard_all();
        throw;
    }
}

int run_rank(const std::string& table_path, const std::string& ties,
             const std::string& output, const std::string& format) {
    OutputSet outputs;
    try {
        std::ifstream in(table_path);
        if (!in) throw std::runtime_error("cannot open accuracy table " + table_path);
        const auto table = ltp::read_accuracy_csv(in);
        const auto policy =
            ties == "dense" ? ltp::TiePolicy::dense : ltp::TiePolicy::average;
        const auto ranks = ltp::average_rank(table, policy);

        const fs::path out_dir(output);
        if (format == "json" || format == "both") {
            auto out = outputs.create(out_dir / "ranks.json");
            ltp::write_ranks_json(table, ranks, policy, out);
        }
        if (format == "csv" || format == "both") {
            auto out = outputs.create(out_dir / "ranks.csv");
            ltp::write_ranks_csv(table, ranks, out);
        }
        for (std::size_t m = 0; m < table.models.size(); ++m) {
            char buffer[32];
            std::snprintf(buffer, sizeof(buffer), "%.1f", ranks[m]);
            std::cout << table.models[m] << ": " << buffer << "\n";
        }
        return 0;
    } catch (...) {
        outputs.discard_all();
        throw;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Structural graph classification with LDP/LTP embeddings and a random "
        "forest"};
    app.require_subcommand(1);

    DatasetArgs data;
    EmbeddingFlags flags;
    std::string output = "results";
    std::string format = "both";
    unsigned workers = 0;
    int trees = 500;
    std::uint64_t seed = 0;
    int folds = 10;
    int inner_folds = 5;
    bool tune = false;
    std::string external_folds;
    std::string table_path;
    std::string ties = "average";

    auto add_common = [&](CLI::App* cmd, bool multi_dataset) {
        auto* opt = cmd->add_option("--dataset", data.paths,
                                    "TUDataset directory (or name under "
                                    "$LTP_DATA_ROOT)");
        opt->required();
        if (!multi_dataset) opt->expected(1);
        cmd->add_option("--name", data.name_override,
                        "Dataset name override (defaults to directory name)");
        cmd->add_option("--output,-o", output, "Output directory")
            ->capture_default_str();
        cmd->add_option("--workers", workers, "Worker threads (0 = all cores)")
            ->capture_default_str();
    };

    auto* extract = app.add_subcommand("extract", "Embed a dataset to matrix files");
    add_common(extract, false);
    add_embedding_flags(extract, flags);

    auto* eval = app.add_subcommand("eval", "Cross-validated accuracy report");
    add_common(eval, false);
    add_embedding_flags(eval, flags);
    eval->add_option("--trees", trees, "Number of forest trees")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    eval->add_option("--seed", seed, "Protocol seed")->capture_default_str();
    eval->add_option("--folds", folds, "Outer CV folds")
        ->check(CLI::Range(2, 1000))
        ->capture_default_str();
    eval->add_option("--inner-folds", inner_folds, "Inner CV folds (with --tune)")
        ->check(CLI::Range(2, 1000))
        ->capture_default_str();
    eval->add_flag("--tune", tune,
                   "Select embedding hyperparameters by inner CV per outer fold");
    eval->add_option("--external-folds", external_folds,
                     "JSON fold assignments to use instead of seeded folds");
    eval->add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"json", "csv", "both"}))
        ->capture_default_str();

    auto* sweep = app.add_subcommand(
        "sweep", "Vary one embedding hyperparameter at a time across datasets");
    add_common(sweep, true);
    add_embedding_flags(sweep, flags);
    sweep->add_option("--trees", trees, "Number of forest trees")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sweep->add_option("--seed", seed, "Protocol seed")->capture_default_str();
    sweep->add_option("--folds", folds, "Outer CV folds")
        ->check(CLI::Range(2, 1000))
        ->capture_default_str();
    sweep->add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"json", "csv", "both"}))
        ->capture_default_str();

    auto* ablate = app.add_subcommand(
        "ablate", "Evaluate LDP, LDP+one-descriptor and LTP on shared folds");
    add_common(ablate, false);
    add_embedding_flags(ablate, flags);
    ablate->add_option("--trees", trees, "Number of forest trees")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    ablate->add_option("--seed", seed, "Protocol seed")->capture_default_str();
    ablate->add_option("--folds", folds, "Outer CV folds")
        ->check(CLI::Range(2, 1000))
        ->capture_default_str();
    ablate->add_option("--external-folds", external_folds,
                       "JSON fold assignments to use instead of seeded folds");
    ablate->add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"json", "csv", "both"}))
        ->capture_default_str();

    auto* rank = app.add_subcommand("rank", "Average model ranks from an accuracy CSV");
    rank->add_option("--table", table_path, "models x datasets accuracy CSV")
        ->required()
        ->check(CLI::ExistingFile);
    rank->add_option("--ties", ties, "Tie policy: average or dense")
        ->check(CLI::IsMember({"average", "dense"}))
        ->capture_default_str();
    rank->add_option("--output,-o", output, "Output directory")->capture_default_str();
    rank->add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"json", "csv", "both"}))
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (extract->parsed()) return run_extract(data, flags, output, workers);
        if (eval->parsed()) {
            return run_eval(data, flags, trees, seed, folds, inner_folds, tune,
                            external_folds, output, format, workers);
        }
        if (sweep->parsed()) {
            return run_sweep(data, flags, trees, seed, folds, output, format, workers);
        }
        if (ablate->parsed()) {
            return run_ablate(data, flags, trees, seed, folds, external_folds, output,
                              format, workers);
        }
        if (rank->parsed()) return run_rank(table_path, ties, output, format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
