#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ltp/evaluation.hpp"
#include "ltp/generators.hpp"
#include "ltp/rng.hpp"
#include "oracles.hpp"

using namespace ltp;
namespace ts = ltp::testsupport;

namespace {

// 50 stars vs 50 cliques with 5-10 nodes: degree statistics alone separate
// the two families perfectly.
Dataset stars_vs_cliques() {
    Dataset d;
    d.name = "stars_vs_cliques";
    d.num_classes = 2;
    for (int i = 0; i < 50; ++i) {
        d.graphs.push_back(make_star(static_cast<NodeId>(5 + i % 6)));
        d.labels.push_back(0);
    }
    for (int i = 0; i < 50; ++i) {
        d.graphs.push_back(make_complete(static_cast<NodeId>(5 + i % 6)));
        d.labels.push_back(1);
    }
    return d;
}

EmbeddingConfig ldp_defaults() {
    EmbeddingConfig ec;  // 50 bins, histogram, no normalization, linear scale
    ec.features = FeatureSelection::ldp();
    return ec;
}

}  // namespace

TEST_CASE("stratified folds spread every class evenly") {
    const std::vector<int> labels{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
    const auto plan = stratified_kfold(labels, 5, 3);
    REQUIRE(plan.k == 5);
    for (int fold = 0; fold < 5; ++fold) {
        const auto test = plan.test_indices(fold);
        REQUIRE(test.size() == 2);
        CHECK(labels[test[0]] + labels[test[1]] == 1);  // one of each class
    }
    CHECK(plan.warnings.empty());
}

TEST_CASE("stratified folds are deterministic in the seed") {
    std::vector<int> labels;
    for (int i = 0; i < 97; ++i) labels.push_back(i % 3);
    const auto a = stratified_kfold(labels, 10, 42);
    const auto b = stratified_kfold(labels, 10, 42);
    CHECK(a.assignments == b.assignments);
    const auto c = stratified_kfold(labels, 10, 43);
    CHECK(a.assignments != c.assignments);
}

TEST_CASE("per-class fold counts stay within 1 of perfect stratification") {
    std::vector<int> labels;
    for (int i = 0; i < 123; ++i) labels.push_back(i % 4);
    const int k = 7;
    const auto plan = stratified_kfold(labels, k, 9);
    for (int cls = 0; cls < 4; ++cls) {
        std::vector<int> counts(k, 0);
        std::size_t total = 0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == cls) {
                ++counts[static_cast<std::size_t>(plan.assignments[i])];
                ++total;
            }
        }
        const auto lo = total / static_cast<std::size_t>(k);
        for (int fold = 0; fold < k; ++fold) {
            CHECK(counts[fold] >= static_cast<int>(lo));
            CHECK(counts[fold] <= static_cast<int>(lo) + 1);
        }
    }
}

TEST_CASE("sparse class records a warning and never doubles up") {
    std::vector<int> labels(40, 0);
    labels[3] = labels[17] = labels[31] = 1;  // class 1 has three members
    const auto plan = stratified_kfold(labels, 10, 0);
    REQUIRE(plan.warnings.size() == 1);
    CHECK(plan.warnings[0].find("class 1") != std::string::npos);
    for (int fold = 0; fold < 10; ++fold) {
        int count = 0;
        for (std::size_t i : plan.test_indices(fold)) count += labels[i];
        CHECK(count <= 1);
    }
}

TEST_CASE("stratified_kfold argument validation") {
    CHECK_THROWS_AS(stratified_kfold(std::vector<int>{0, 1}, 1, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(stratified_kfold(std::vector<int>{}, 2, 0), std::invalid_argument);
}

TEST_CASE("fold plans round trip through the external JSON format") {
    std::vector<int> labels;
    for (int i = 0; i < 31; ++i) labels.push_back(i % 2);
    const auto plan = stratified_kfold(labels, 4, 5);

    ts::TempDir tmp;
    const auto file = tmp.path() / "folds.json";
    {
        std::ofstream out(file);
        save_fold_plan(plan, out);
    }
    const auto loaded = load_fold_plan(file, labels.size());
    CHECK(loaded.k == plan.k);
    CHECK(loaded.assignments == plan.assignments);
    CHECK(loaded.source == file.string());

    CHECK_THROWS_WITH_AS(load_fold_plan(file, 40), doctest::Contains("unassigned"),
                         std::runtime_error);
    CHECK_THROWS_AS(load_fold_plan(tmp.path() / "absent.json", 31),
                    std::runtime_error);
}

TEST_CASE("run_cv separates stars from cliques perfectly") {
    const Dataset d = stars_vs_cliques();
    const auto plan = stratified_kfold(d.labels, 10, 0);
    ForestConfig fc;
    fc.n_trees = 60;
    fc.seed = 0;
    CVOptions options;
    options.workers = 2;
    const auto report = run_cv(d, ldp_defaults(), fc, plan, options);

    REQUIRE(report.fold_accuracies.size() == 10);
    CHECK(report.mean == doctest::Approx(1.0));
    for (double acc : report.fold_accuracies) CHECK(acc == 1.0);
    CHECK(report.dataset == "stars_vs_cliques");
    CHECK(report.extract_seconds >= 0.0);
    CHECK(report.train_seconds > 0.0);
}

TEST_CASE("report aggregates are recomputable from the fold list") {
    const Dataset d = stars_vs_cliques();
    const auto plan = stratified_kfold(d.labels, 5, 11);
    ForestConfig fc;
    fc.n_trees = 20;
    const auto report = run_cv(d, ldp_defaults(), fc, plan, {});

    const double n = static_cast<double>(report.fold_accuracies.size());
    const double mean =
        std::accumulate(report.fold_accuracies.begin(), report.fold_accuracies.end(),
                        0.0) /
        n;
    double varsum = 0.0;
    for (double a : report.fold_accuracies) varsum += (a - mean) * (a - mean);
    CHECK(std::fabs(report.mean - mean) <= 1e-12);
    CHECK(std::fabs(report.std_dev - std::sqrt(varsum / n)) <= 1e-12);
    CHECK(report.mean >= 0.0);
    CHECK(report.mean <= 1.0);
}

TEST_CASE("run_cv results are reproducible and fold/label mismatch rejected") {
    const Dataset d = stars_vs_cliques();
    const auto plan = stratified_kfold(d.labels, 4, 3);
    ForestConfig fc;
    fc.n_trees = 10;
    const auto a = run_cv(d, ldp_defaults(), fc, plan, {});
    const auto b = run_cv(d, ldp_defaults(), fc, plan, {});
    CHECK(a.fold_accuracies == b.fold_accuracies);  // bit-identical

    FoldPlan wrong = plan;
    wrong.assignments.pop_back();
    CHECK_THROWS_WITH_AS(run_cv(d, ldp_defaults(), fc, wrong, {}),
                         doctest::Contains("fold plan"), std::invalid_argument);
}

TEST_CASE("dataset-normalization statistics never leak from the test fold") {
    Dataset base;
    base.name = "leak";
    base.num_classes = 2;
    for (int i = 0; i < 12; ++i) {
        base.graphs.push_back(make_erdos_renyi(6, 0.5, static_cast<std::uint64_t>(i)));
        base.labels.push_back(i % 2);
    }
    // train on the first 9, test on the last 3
    std::vector<std::size_t> train{0, 1, 2, 3, 4, 5, 6, 7, 8};
    std::vector<std::size_t> test{9, 10, 11};

    Dataset poisoned = base;
    poisoned.graphs[10] = make_star(60);  // planted outlier in the test fold

    EmbeddingConfig ec;
    ec.normalization = Normalization::dataset;
    ec.features = FeatureSelection::ldp();
    ec.bins = 10;

    const auto stats_base = collect_dataset_stats(base, train, ec);
    const auto stats_poisoned = collect_dataset_stats(poisoned, train, ec);
    CHECK(stats_base.max_value == stats_poisoned.max_value);

    const auto train_base = embed_subset(base, train, ec, &stats_base);
    const auto train_poisoned = embed_subset(poisoned, train, ec, &stats_poisoned);
    CHECK(train_base.data == train_poisoned.data);  // bit-identical

    // test rows other than the outlier embed identically too, since the
    // normalization maxima came from the training portion alone
    const std::vector<std::size_t> untouched{9, 11};
    const auto test_base = embed_subset(base, untouched, ec, &stats_base);
    const auto test_poisoned = embed_subset(poisoned, untouched, ec, &stats_poisoned);
    CHECK(test_base.data == test_poisoned.data);

    // the outlier itself lands in the clamped top bin instead of rescaling
    // anything: its degree exceeds every training maximum
    const auto outlier = embed_subset(poisoned, std::vector<std::size_t>{10}, ec,
                                      &stats_poisoned);
    const auto degree_block = outlier.row(0).subspan(0, 10);
    CHECK(degree_block[9] > 0.0);
}

TEST_CASE("inner tuning grid picks the better configuration") {
    const Dataset d = stars_vs_cliques();
    const auto plan = stratified_kfold(d.labels, 3, 1);

    EmbeddingConfig degenerate = ldp_defaults();
    degenerate.bins = 1;  // every histogram collapses to a single bin
    EmbeddingConfig useful = ldp_defaults();
    useful.bins = 20;

    ForestConfig fc;
    fc.n_trees = 12;
    CVOptions options;
    options.tuning_grid = {degenerate, useful};
    options.inner_folds = 3;
    const auto report = run_cv(d, degenerate, fc, plan, options);

    REQUIRE(report.fold_configs.size() == 3);
    for (const auto& chosen : report.fold_configs) CHECK(chosen.bins == 20);
    CHECK(report.mean == doctest::Approx(1.0));
}

TEST_CASE("sweep statistics counting rules") {
    // two values over three datasets; value 0 best on ds0/ds2, tie on ds1
    const std::vector<std::vector<double>> acc{{0.9, 0.8, 0.7}, {0.5, 0.8, 0.6}};
    const auto stats = sweep_statistics(acc);
    REQUIRE(stats.size() == 2);
    CHECK(stats[0].wins == 3);
    CHECK(stats[1].wins == 1);  // the tie still awards a win
    CHECK(stats[0].wins + stats[1].wins >= 3);
    CHECK(stats[0].abs_avg_diff == doctest::Approx(0.0));  // best contributes 0
    CHECK(stats[1].abs_avg_diff == doctest::Approx((0.4 + 0.0 + 0.1) / 3.0));

    CHECK_THROWS_AS(sweep_statistics({}), std::invalid_argument);
}

TEST_CASE("sweep varies one hyperparameter at a time") {
    Dataset small;
    small.name = "sweep_small";
    small.num_classes = 2;
    for (int i = 0; i < 12; ++i) {
        small.graphs.push_back(make_star(static_cast<NodeId>(4 + i % 3)));
        small.labels.push_back(0);
        small.graphs.push_back(make_complete(static_cast<NodeId>(4 + i % 3)));
        small.labels.push_back(1);
    }
    const Dataset datasets[] = {small};

    SweepGrids grids;
    grids.bins = {2, 4};
    grids.aggregations = {Aggregation::histogram};
    grids.normalizations = {Normalization::none, Normalization::dataset};
    grids.log_scales = {false};

    ForestConfig fc;
    fc.n_trees = 10;
    const auto table =
        sweep_single_hyperparameter(datasets, ldp_defaults(), fc, grids, 3, 0, 2);

    REQUIRE(table.datasets == std::vector<std::string>{"sweep_small"});
    REQUIRE(table.rows.size() == 2 + 1 + 2 + 1);
    CHECK(table.rows[0].hyperparameter == "bins");
    CHECK(table.rows[0].value == "2");
    CHECK(table.rows[2].hyperparameter == "aggregation");
    CHECK(table.rows[3].hyperparameter == "normalization");
    CHECK(table.rows[5].hyperparameter == "scale");

    // per hyperparameter, wins over D=1 datasets sum to >= 1
    CHECK(table.rows[0].wins + table.rows[1].wins >= 1);
    for (const auto& row : table.rows) {
        REQUIRE(row.dataset_means.size() == 1);
        CHECK(row.dataset_means[0] >= 0.0);
        CHECK(row.dataset_means[0] <= 1.0);
        CHECK(row.abs_avg_diff >= 0.0);
    }
}

TEST_CASE("ablation shares one fold plan across all six variants") {
    const Dataset d = stars_vs_cliques();
    const auto plan = stratified_kfold(d.labels, 3, 7);
    ForestConfig fc;
    fc.n_trees = 10;
    const auto variants = ablation(d, ldp_defaults(), fc, plan, 2);

    REQUIRE(variants.size() == 6);
    CHECK(variants[0].first == "ldp");
    CHECK(variants[1].first == "ldp+sp");
    CHECK(variants[2].first == "ldp+ebc");
    CHECK(variants[3].first == "ldp+ji");
    CHECK(variants[4].first == "ldp+lds");
    CHECK(variants[5].first == "ltp");

    for (const auto& [name, report] : variants) {
        CAPTURE(name);
        CHECK(report.folds == 3);
        CHECK(report.seed == 7);                     // same plan everywhere
        CHECK(report.fold_accuracies.size() == 3);   // paired index-by-index
        CHECK(report.mean == doctest::Approx(1.0));  // separable either way
    }
    CHECK(variants[5].second.embedding.features == FeatureSelection::ltp());
}

TEST_CASE("average rank symmetry and degenerate cases") {
    AccuracyTable table;
    table.models = {"a", "b"};
    table.datasets = {"d1", "d2"};
    table.accuracy = {{0.9, 0.8}, {0.8, 0.9}};
    const auto ranks = average_rank(table);
    CHECK(ranks[0] == doctest::Approx(1.5));
    CHECK(ranks[1] == doctest::Approx(1.5));

    AccuracyTable solo;
    solo.models = {"only"};
    solo.datasets = {"d1", "d2", "d3"};
    solo.accuracy = {{0.4, 0.9, 0.1}};
    CHECK(average_rank(solo) == std::vector<double>{1.0});

    AccuracyTable empty;
    CHECK_THROWS_AS(average_rank(empty), std::invalid_argument);
}

TEST_CASE("tie policies and missing cells in ranking") {
    AccuracyTable table;
    table.models = {"a", "b", "c", "d"};
    table.datasets = {"d1"};
    table.accuracy = {{0.9}, {0.7}, {0.7}, {std::nullopt}};

    const auto avg = rank_matrix(table, TiePolicy::average);
    CHECK(avg[0][0] == 1.0);
    CHECK(avg[1][0] == 2.5);  // tied for positions 2 and 3
    CHECK(avg[2][0] == 2.5);
    CHECK(avg[3][0] == 4.0);  // missing ranks last

    // average policy keeps the per-dataset rank sum at m(m+1)/2
    double sum = 0.0;
    for (const auto& row : avg) sum += row[0];
    CHECK(sum == doctest::Approx(4.0 * 5.0 / 2.0));

    const auto dense = rank_matrix(table, TiePolicy::dense);
    CHECK(dense[0][0] == 1.0);
    CHECK(dense[1][0] == 2.0);
    CHECK(dense[2][0] == 2.0);
    CHECK(dense[3][0] == 3.0);
}

TEST_CASE("rank sums hold across random tables under the average policy") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        AccuracyTable table;
        const std::size_t m = 2 + rng.next_below(6);
        const std::size_t d = 1 + rng.next_below(5);
        for (std::size_t i = 0; i < m; ++i) {
            table.models.push_back("m" + std::to_string(i));
        }
        for (std::size_t j = 0; j < d; ++j) {
            table.datasets.push_back("d" + std::to_string(j));
        }
        table.accuracy.assign(m, std::vector<std::optional<double>>(d));
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                // quantized so ties actually happen
                table.accuracy[i][j] = std::floor(rng.next_double() * 5.0) / 5.0;
            }
        }
        const auto ranks = rank_matrix(table, TiePolicy::average);
        for (std::size_t j = 0; j < d; ++j) {
            double sum = 0.0;
            for (std::size_t i = 0; i < m; ++i) sum += ranks[i][j];
            CHECK(sum == doctest::Approx(static_cast<double>(m * (m + 1)) / 2.0));
        }
    }
}

TEST_CASE("accuracy csv parses oor cells and rejects ragged rows") {
    std::istringstream good("model,d1,d2\nalpha,0.5,OOR\nbeta,0.25,0.75\n");
    const auto table = read_accuracy_csv(good);
    REQUIRE(table.models == std::vector<std::string>{"alpha", "beta"});
    REQUIRE(table.datasets == std::vector<std::string>{"d1", "d2"});
    CHECK_FALSE(table.accuracy[0][1].has_value());
    CHECK(table.accuracy[1][1] == 0.75);

    std::istringstream ragged("model,d1,d2\nalpha,0.5\n");
    CHECK_THROWS_WITH_AS(read_accuracy_csv(ragged), doctest::Contains("alpha"),
                         std::runtime_error);
}

TEST_CASE("cv report json round trips") {
    const Dataset d = stars_vs_cliques();
    const auto plan = stratified_kfold(d.labels, 3, 2);
    ForestConfig fc;
    fc.n_trees = 8;
    fc.seed = 4;
    auto report = run_cv(d, ldp_defaults(), fc, plan, {});

    std::stringstream buffer;
    write_cv_report_json(report, buffer);
    const auto loaded = read_cv_report_json(buffer);
    CHECK(loaded.dataset == report.dataset);
    CHECK(loaded.embedding == report.embedding);
    CHECK(loaded.forest == report.forest);
    CHECK(loaded.fold_accuracies == report.fold_accuracies);
    CHECK(loaded.mean == report.mean);
    CHECK(loaded.std_dev == report.std_dev);
    CHECK(loaded.workers == report.workers);

    std::ostringstream csv;
    write_cv_report_csv(report, csv);
    CHECK(csv.str().find("stars_vs_cliques") != std::string::npos);
    CHECK(csv.str().find("fold_2") != std::string::npos);
}
