#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "marketcast/preprocess.hpp"
#include "marketcast/report.hpp"
#include "marketcast/rng.hpp"
#include "test_support.hpp"

using namespace marketcast;

namespace {

std::filesystem::path temp_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "marketcast_report_test";
    std::filesystem::create_directories(dir);
    return dir;
}

// Random-walk asset over 2018 weekdays, written as a Yahoo-style CSV.
std::filesystem::path write_walk_csv(const std::string& asset, std::uint64_t seed,
                                     double start_price = 1000.0, int days = 260) {
    Rng rng(seed);
    std::ostringstream out;
    out << "Date,Open,High,Low,Close,Adj Close,Volume\n";
    Date d{2018, 1, 1};
    double price = start_price;
    const double step_sigma = start_price * 0.005;
    int written = 0;
    while (written < days) {
        if (!d.is_weekend()) {
            char line[160];
            std::snprintf(line, sizeof(line), "%s,%.4f,%.4f,%.4f,%.4f,%.4f,1000\n",
                          d.to_string().c_str(), price, price, price, price, price);
            out << line;
            price += rng.normal(0.0, step_sigma);  // arithmetic walk, stays positive here
            ++written;
        }
        d = next_day(d);
    }
    const auto path = temp_dir() / (asset + ".csv");
    std::ofstream file(path);
    file << out.str();
    return path;
}

RunConfig walk_config(std::uint64_t seed = 7) {
    RunConfig config;
    config.data = {{"AAA", write_walk_csv("AAA", 12)}, {"BBB", write_walk_csv("BBB", 22, 50.0)}};
    config.period_labels = {"2018"};
    config.model_names = {"arima"};
    config.seed = seed;
    config.out_dir = temp_dir() / "out";
    return config;
}

}  // namespace

TEST_CASE("describe emits one row per asset and period") {
    RunConfig config = walk_config();
    const DescribeTable table = cmd_describe(config);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.all_ok());
    for (const auto& row : table.rows) {
        CHECK(row.report.n > 200);
        CHECK(row.report.min <= row.report.mean);
        CHECK(row.report.mean <= row.report.max);
    }

    SUBCASE("written csv round-trips by line count") {
        const auto path = write_describe(table, config);
        std::ifstream file(path);
        std::string line;
        int lines = 0;
        while (std::getline(file, line)) ++lines;
        CHECK(lines == 3);  // header + 2 rows
    }
}

TEST_CASE("describe records per-row failures without aborting") {
    RunConfig config = walk_config();
    config.data.emplace_back("MISSING", temp_dir() / "absent.csv");
    const DescribeTable table = cmd_describe(config);
    REQUIRE(table.rows.size() == 3);
    CHECK_FALSE(table.all_ok());
    CHECK_FALSE(table.rows[2].ok);
    CHECK(!table.rows[2].error.empty());
}

TEST_CASE("corr matrix passes through correlation_matrix") {
    RunConfig config = walk_config();
    const CorrTable table = cmd_corr(config);
    REQUIRE(table.assets.size() == 2);
    CHECK(table.matrix[0][0] == 1.0);
    CHECK(table.matrix[1][1] == 1.0);
    CHECK(table.matrix[0][1] == table.matrix[1][0]);

    const auto path = write_corr(table, config);
    CHECK(std::filesystem::exists(path));
}

TEST_CASE("adf table rejects the unit root on returns") {
    RunConfig config = walk_config();
    const AdfTable table = cmd_adf(config);
    REQUIRE(table.rows.size() == 2);
    for (const auto& row : table.rows) {
        REQUIRE(row.ok);
        CHECK(row.result.statistic < row.result.critical_values.at(0.01));
    }
}

TEST_CASE("arima-only benchmark pins every relative MAE at one") {
    RunConfig config = walk_config();
    BenchmarkConfig bench;
    bench.periods = {period_by_label("2018")};
    bench.models = {ModelKind::arima};
    bench.arima_search.max_p = 1;
    bench.arima_search.max_q = 1;
    const std::vector<PriceSeries> assets = load_assets(config);
    const BenchmarkGrid grid = run_benchmark(assets, bench);
    REQUIRE(grid.cells.size() == 2);
    for (const auto& cell : grid.cells) {
        REQUIRE(cell.ok);
        REQUIRE(cell.rel_mae.has_value());
        CHECK(*cell.rel_mae == 1.0);
    }
    for (const auto& pooled : grid.pooled_rel_mae) CHECK(pooled.value == doctest::Approx(1.0));
}

TEST_CASE("random-walk asset selects d=1 and forecasts flat") {
    RunConfig config = walk_config();
    BenchmarkConfig bench;
    bench.periods = {period_by_label("2018")};
    bench.models = {ModelKind::arima};
    bench.arima_search.max_p = 1;
    bench.arima_search.max_q = 1;
    const std::vector<PriceSeries> assets = load_assets(config);
    const BenchmarkGrid grid = run_benchmark(assets, bench);
    const BenchmarkCell* cell = grid.find("arima", "AAA", "2018");
    REQUIRE(cell != nullptr);
    REQUIRE(cell->ok);
    const auto& model = std::get<ArimaModel>(*cell->model);
    CHECK(model.order.d == 1);
    if (model.order.p == 0 && model.order.q == 0) {
        // closed-form oracle: flat forecast at the last training value
        const PriceSeries slice = slice_period(assets[0], period_by_label("2018"));
        const TrainTestSplit split = split_train_test(slice, 0.8);
        const double last_train = split.train.closes().back();
        double direct_mae = 0.0;
        for (double actual : split.test.closes()) direct_mae += std::abs(actual - last_train);
        direct_mae /= static_cast<double>(split.test.size());
        CHECK(cell->eval.forecasts.front() == doctest::Approx(last_train));
        CHECK(cell->eval.forecasts.back() == doctest::Approx(last_train));
        CHECK(cell->eval.mae == doctest::Approx(direct_mae).epsilon(1e-12));
    }
}

TEST_CASE("metrics are computed strictly on held-out data") {
    RunConfig config = walk_config();
    std::vector<PriceSeries> assets = load_assets(config);
    BenchmarkConfig bench;
    bench.periods = {period_by_label("2018")};
    bench.models = {ModelKind::arima};
    bench.arima_search.max_p = 0;
    bench.arima_search.max_q = 0;
    const BenchmarkGrid before = run_benchmark(assets, bench);

    // mutate one training close of asset AAA (train = first 80% of 2018)
    std::vector<double> closes = assets[0].closes();
    closes[10] *= 1.5;
    assets[0] = PriceSeries(assets[0].asset_id(), assets[0].dates(), closes);
    const BenchmarkGrid after = run_benchmark(assets, bench);

    const auto* cell_before = before.find("arima", "AAA", "2018");
    const auto* cell_after = after.find("arima", "AAA", "2018");
    REQUIRE(cell_before != nullptr);
    REQUIRE(cell_after != nullptr);
    CHECK(cell_before->eval.actuals == cell_after->eval.actuals);
}

TEST_CASE("failed cells are recorded, not thrown") {
    RunConfig config = walk_config();
    BenchmarkConfig bench;
    bench.periods = {period_by_label("2021")};  // outside the data range
    bench.models = {ModelKind::arima};
    const std::vector<PriceSeries> assets = load_assets(config);
    const BenchmarkGrid grid = run_benchmark(assets, bench);
    REQUIRE(grid.cells.size() == 2);
    for (const auto& cell : grid.cells) {
        CHECK_FALSE(cell.ok);
        CHECK(!cell.error.empty());
    }
    CHECK_FALSE(grid.all_ok());
}

TEST_CASE("benchmark artifacts reproduce from the manifest") {
    RunConfig config = walk_config(99);
    config.model_names = {"arima", "knn"};
    const BenchmarkArtifacts first = cmd_benchmark(config);
    const auto paths = write_benchmark(first, config);
    CHECK(paths.size() >= 4);  // grid, pooled, >= 1 model, manifest

    const RunConfig replay = config_from_manifest(first.manifest);
    const BenchmarkArtifacts second = cmd_benchmark(replay);
    CHECK(grid_hash(first.grid) == grid_hash(second.grid));
    CHECK(first.manifest.at("grid_hash") == second.manifest.at("grid_hash"));
}

TEST_CASE("rolling mode produces one-step-ahead forecasts") {
    RunConfig config = walk_config();
    config.mode = EvalMode::rolling_one_step;
    BenchmarkConfig bench;
    bench.periods = {period_by_label("2018")};
    bench.models = {ModelKind::arima};
    bench.mode = EvalMode::rolling_one_step;
    bench.arima_search.max_p = 0;
    bench.arima_search.max_q = 0;
    const std::vector<PriceSeries> assets = load_assets(config);
    const BenchmarkGrid grid = run_benchmark(assets, bench);
    const auto* cell = grid.find("arima", "AAA", "2018");
    REQUIRE(cell != nullptr);
    REQUIRE(cell->ok);
    const auto& model = std::get<ArimaModel>(*cell->model);
    if (model.order.d == 1 && model.order.p == 0 && model.order.q == 0) {
        // rolling random-walk forecast = previous actual
        const auto& actuals = cell->eval.actuals;
        const auto& forecasts = cell->eval.forecasts;
        for (std::size_t t = 1; t < actuals.size(); ++t) {
            CHECK(forecasts[t] == doctest::Approx(actuals[t - 1]));
        }
    }
    // rolling errors should be far smaller than static multi-step errors
    const BenchmarkGrid static_grid = [&] {
        BenchmarkConfig s = bench;
        s.mode = EvalMode::static_multi_step;
        return run_benchmark(assets, s);
    }();
    CHECK(cell->eval.mae <= static_grid.find("arima", "AAA", "2018")->eval.mae + 1e-9);
}

TEST_CASE("export-plotdata round-trips through the ingester") {
    RunConfig config = walk_config();
    const auto paths = cmd_export_plotdata(config);
    REQUIRE(paths.size() == 2);

    const std::vector<PriceSeries> assets = load_assets(config);
    const IngestResult re = ingest_csv(paths[0], "AAA");
    CHECK(re.series.dates() == assets[0].dates());
    for (std::size_t i = 0; i < re.series.size(); ++i) {
        CHECK(re.series.closes()[i] == doctest::Approx(assets[0].closes()[i]).epsilon(1e-9));
    }

    // returns column equals log_returns output; row count = length (prices)
    std::ifstream file(paths[0]);
    std::string line;
    std::getline(file, line);  // header
    const auto returns = log_returns(assets[0]);
    std::size_t row = 0;
    std::size_t return_count = 0;
    while (std::getline(file, line)) {
        const auto last_comma = line.find_last_of(',');
        const std::string return_text = line.substr(last_comma + 1);
        if (row == 0) {
            CHECK(return_text.empty());
        } else {
            ++return_count;
            CHECK(std::stod(return_text) == doctest::Approx(returns[row - 1]).epsilon(1e-9));
        }
        ++row;
    }
    CHECK(row == assets[0].size());
    CHECK(return_count == returns.size());
}

#ifdef MARKETCAST_CLI_PATH
TEST_CASE("cli exit codes: 0 ok, 1 partial, 2 config error") {
    const auto out = (temp_dir() / "cli_out").string();
    const std::string aaa = (temp_dir() / "AAA.csv").string();
    write_walk_csv("AAA", 12);

    const std::string base = std::string(MARKETCAST_CLI_PATH);
    auto run = [](const std::string& cmd) {
        const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(status);
    };
    CHECK(run(base + " describe --data AAA=" + aaa + " --periods 2018 --out " + out) == 0);
    // period with no data -> per-row failure -> exit 1
    CHECK(run(base + " describe --data AAA=" + aaa + " --periods 2021 --out " + out) == 1);
    // missing file -> configuration error -> exit 2
    CHECK(run(base + " describe --data NOPE=/nonexistent.csv --out " + out) == 2);
    CHECK(run(base + " describe --bogus-flag") == 2);
}
#endif
