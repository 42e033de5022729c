#include "marketcast/report.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "marketcast/preprocess.hpp"
#include "marketcast/rng.hpp"
#include "marketcast/serialize.hpp"

namespace marketcast {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.10g", value);
    return buffer;
}

std::string sanitize_filename(std::string name) {
    for (char& c : name) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
    }
    return name;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot write " + path.string());
    file << content;
}

BenchmarkConfig to_benchmark_config(const RunConfig& config) {
    BenchmarkConfig bench;
    bench.periods.clear();
    for (const std::string& label : config.period_labels) {
        bench.periods.push_back(period_by_label(label));
    }
    bench.models.clear();
    for (const std::string& name : config.model_names) {
        bench.models.push_back(model_kind_from_string(name));
    }
    bench.split_ratio = config.split_ratio;
    bench.mode = config.mode;
    bench.seed = config.seed;
    return bench;
}

}  // namespace

bool DescribeTable::all_ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const DescribeRow& r) { return r.ok; });
}

bool AdfTable::all_ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const AdfRow& r) { return r.ok; });
}

std::vector<PriceSeries> load_assets(const RunConfig& config) {
    if (config.data.empty()) {
        throw std::invalid_argument("no data files configured");
    }
    std::vector<PriceSeries> assets;
    assets.reserve(config.data.size());
    for (const auto& [asset_id, path] : config.data) {
        IngestOptions options;
        options.use_adj_close = config.use_adj_close;
        assets.push_back(ingest_csv(path, asset_id, options).series);
    }
    return assets;
}

DescribeTable cmd_describe(const RunConfig& config) {
    DescribeTable table;
    for (const auto& [asset_id, path] : config.data) {
        std::optional<PriceSeries> series;
        std::string load_error;
        try {
            IngestOptions options;
            options.use_adj_close = config.use_adj_close;
            series = ingest_csv(path, asset_id, options).series;
        } catch (const std::exception& e) {
            load_error = e.what();
        }
        for (const std::string& label : config.period_labels) {
            DescribeRow row;
            row.asset_id = asset_id;
            row.period_label = label;
            if (!series.has_value()) {
                row.error = load_error;
            } else {
                try {
                    const PriceSeries slice = slice_period(*series, period_by_label(label));
                    const std::vector<double> returns = log_returns(slice);
                    row.report = describe(returns, config.risk_free);
                    row.ok = true;
                } catch (const std::exception& e) {
                    row.error = e.what();
                }
            }
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

CorrTable cmd_corr(const RunConfig& config) {
    const std::vector<PriceSeries> assets = load_assets(config);
    if (assets.size() < 2) {
        throw std::invalid_argument("correlation needs at least 2 assets");
    }
    const std::vector<PriceSeries> aligned = align_series(assets);
    std::vector<std::vector<double>> returns;
    returns.reserve(aligned.size());
    for (const PriceSeries& s : aligned) returns.push_back(log_returns(s));
    CorrTable table;
    for (const PriceSeries& s : aligned) table.assets.push_back(s.asset_id());
    table.aligned_days = aligned.front().size();
    table.matrix = correlation_matrix(returns);
    return table;
}

AdfTable cmd_adf(const RunConfig& config) {
    AdfTable table;
    for (const auto& [asset_id, path] : config.data) {
        std::optional<PriceSeries> series;
        std::string load_error;
        try {
            IngestOptions options;
            options.use_adj_close = config.use_adj_close;
            series = ingest_csv(path, asset_id, options).series;
        } catch (const std::exception& e) {
            load_error = e.what();
        }
        for (const std::string& label : config.period_labels) {
            AdfRow row;
            row.asset_id = asset_id;
            row.period_label = label;
            if (!series.has_value()) {
                row.error = load_error;
            } else {
                try {
                    const PriceSeries slice = slice_period(*series, period_by_label(label));
                    row.result = adf_test(log_returns(slice));
                    row.ok = true;
                } catch (const std::exception& e) {
                    row.error = e.what();
                }
            }
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

BenchmarkArtifacts cmd_benchmark(const RunConfig& config) {
    std::vector<PriceSeries> assets = load_assets(config);
    if (config.align_calendars) {
        assets = align_series(assets);
    }
    BenchmarkArtifacts artifacts;
    artifacts.grid = run_benchmark(assets, to_benchmark_config(config));

    json data_entries = json::array();
    for (const auto& [asset_id, path] : config.data) {
        data_entries.push_back(json{{"asset", asset_id}, {"path", path.string()}});
    }
    artifacts.manifest = json{
        {"tool", "marketcast"},
        {"version", kVersion},
        {"command", "benchmark"},
        {"seed", config.seed},
        {"split_ratio", config.split_ratio},
        {"mode", to_string(config.mode)},
        {"periods", config.period_labels},
        {"models", config.model_names},
        {"risk_free", config.risk_free},
        {"format", config.format},
        {"use_adj_close", config.use_adj_close},
        {"align_calendars", config.align_calendars},
        {"data", std::move(data_entries)},
        {"grid_hash", grid_hash(artifacts.grid)},
    };
    return artifacts;
}

std::vector<std::filesystem::path> cmd_export_plotdata(const RunConfig& config) {
    const std::vector<PriceSeries> assets = load_assets(config);
    std::vector<std::filesystem::path> written;
    for (const PriceSeries& series : assets) {
        const std::vector<double> returns = log_returns(series);
        std::ostringstream out;
        out << "Date,Close,LogReturn\n";
        for (std::size_t i = 0; i < series.size(); ++i) {
            out << series.dates()[i].to_string() << ',' << format_double(series.closes()[i]) << ',';
            if (i > 0) out << format_double(returns[i - 1]);
            out << '\n';
        }
        const std::filesystem::path path =
            config.out_dir / (sanitize_filename(series.asset_id()) + "_plotdata.csv");
        write_text(path, out.str());
        written.push_back(path);
    }
    return written;
}

// ---- emission --------------------------------------------------------------

namespace {

std::string describe_to_csv(const DescribeTable& table) {
    std::ostringstream out;
    out << "asset,period,mean,std_dev,min,max,sr,se,adf_stat,jb_stat,adf_reject,jb_p_value,n,status,error\n";
    for (const DescribeRow& row : table.rows) {
        out << row.asset_id << ',' << row.period_label << ',';
        if (row.ok) {
            const DescriptiveReport& r = row.report;
            out << format_double(r.mean) << ',' << format_double(r.std_dev) << ','
                << format_double(r.min) << ',' << format_double(r.max) << ','
                << format_double(r.sharpe) << ',' << format_double(r.std_err) << ','
                << format_double(r.adf.statistic) << ',' << format_double(r.jb.statistic) << ','
                << to_string(r.adf.reject_at) << ',' << format_double(r.jb.p_value) << ',' << r.n
                << ",ok,\n";
        } else {
            out << ",,,,,,,,,,,failed," << row.error << '\n';
        }
    }
    return out.str();
}

std::string describe_to_md(const DescribeTable& table) {
    std::ostringstream out;
    out << "| Asset | Period | Mean | Std Dev | Min | Max | SR | SE | ADF Stat | JB-Stat |\n";
    out << "|---|---|---|---|---|---|---|---|---|---|\n";
    char buffer[64];
    auto cell = [&](double v, const char* fmt = "%.4f") {
        std::snprintf(buffer, sizeof(buffer), fmt, v);
        return std::string(buffer);
    };
    for (const DescribeRow& row : table.rows) {
        if (!row.ok) {
            out << "| " << row.asset_id << " | " << row.period_label << " | failed: " << row.error
                << " | | | | | | | |\n";
            continue;
        }
        const DescriptiveReport& r = row.report;
        std::string stars;
        if (r.adf.reject_at == Significance::p001) stars = " ***";
        else if (r.adf.reject_at == Significance::p01) stars = " **";
        else if (r.adf.reject_at == Significance::p05) stars = " *";
        out << "| " << row.asset_id << " | " << row.period_label << " | " << cell(r.mean) << " | "
            << cell(r.std_dev) << " | " << cell(r.min) << " | " << cell(r.max) << " | "
            << cell(r.sharpe) << " | " << cell(r.std_err) << " | " << cell(r.adf.statistic, "%.2f")
            << stars << " | " << cell(r.jb.statistic, "%.2f") << " |\n";
    }
    return out.str();
}

json describe_to_json_doc(const DescribeTable& table) {
    json rows = json::array();
    for (const DescribeRow& row : table.rows) {
        json entry{{"asset", row.asset_id}, {"period", row.period_label}, {"status", row.ok ? "ok" : "failed"}};
        if (row.ok) {
            entry["report"] = report_to_json(row.report);
        } else {
            entry["error"] = row.error;
        }
        rows.push_back(std::move(entry));
    }
    return json{{"rows", std::move(rows)}};
}

std::string corr_to_csv(const CorrTable& table) {
    std::ostringstream out;
    out << "asset";
    for (const std::string& a : table.assets) out << ',' << a;
    out << '\n';
    for (std::size_t i = 0; i < table.assets.size(); ++i) {
        out << table.assets[i];
        for (std::size_t j = 0; j < table.assets.size(); ++j) {
            out << ',';
            if (j <= i) out << format_double(table.matrix[i][j]);  // lower triangle
        }
        out << '\n';
    }
    return out.str();
}

std::string corr_to_md(const CorrTable& table) {
    std::ostringstream out;
    out << "| |";
    for (const std::string& a : table.assets) out << ' ' << a << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < table.assets.size(); ++i) out << "---|";
    out << '\n';
    char buffer[32];
    for (std::size_t i = 0; i < table.assets.size(); ++i) {
        out << "| " << table.assets[i] << " |";
        for (std::size_t j = 0; j < table.assets.size(); ++j) {
            if (j <= i) {
                std::snprintf(buffer, sizeof(buffer), " %.3f |", table.matrix[i][j]);
                out << buffer;
            } else {
                out << " |";
            }
        }
        out << '\n';
    }
    return out.str();
}

std::string adf_to_csv(const AdfTable& table) {
    std::ostringstream out;
    out << "asset,period,statistic,lags,reject_at,cv_0.10,cv_0.05,cv_0.01,cv_0.001,status,error\n";
    for (const AdfRow& row : table.rows) {
        out << row.asset_id << ',' << row.period_label << ',';
        if (row.ok) {
            out << format_double(row.result.statistic) << ',' << row.result.lags_used << ','
                << to_string(row.result.reject_at) << ','
                << format_double(row.result.critical_values.at(0.10)) << ','
                << format_double(row.result.critical_values.at(0.05)) << ','
                << format_double(row.result.critical_values.at(0.01)) << ','
                << format_double(row.result.critical_values.at(0.001)) << ",ok,\n";
        } else {
            out << ",,,,,,,failed," << row.error << '\n';
        }
    }
    return out.str();
}

// Externally published model specifications for the six benchmark instruments
// over these exact windows (ARIMA orders and kNN neighbor counts). Reports
// print them beside this artifact's own selections; matching is not expected
// since the estimators and data snapshots differ.
struct ReferenceSpec {
    const char* asset;
    const char* period;
    const char* arima;
    int knn_k;
};

constexpr ReferenceSpec kReferenceSpecs[] = {
    {"BTC-USD", "full", "(4;1;1)", 26}, {"BTC-USD", "2018", "(2;1;2)", 27},
    {"BTC-USD", "2019", "(1;0;5)", 26}, {"BTC-USD", "2020", "(4;1;4)", 9},
    {"BTC-USD", "2021", "(3;0;3)", 27}, {"GDAXI", "full", "(1;1;1)", 19},
    {"GDAXI", "2018", "(3;1;2)", 27},   {"GDAXI", "2019", "(1;1;5)", 18},
    {"GDAXI", "2020", "(3;0;4)", 21},   {"GDAXI", "2021", "(1;1;4)", 18},
    {"FTSE", "full", "(4;1;3)", 25},    {"FTSE", "2018", "(5;0;2)", 27},
    {"FTSE", "2019", "(5;1;1)", 27},    {"FTSE", "2020", "(3;0;5)", 16},
    {"FTSE", "2021", "(2;1;4)", 25},    {"N100", "full", "(5;1;0)", 27},
    {"N100", "2018", "(3;1;2)", 20},    {"N100", "2019", "(2;1;1)", 23},
    {"N100", "2020", "(1;0;0)", 27},    {"N100", "2021", "(1;1;5)", 21},
    {"FCHI", "full", "(5;1;4)", 14},    {"FCHI", "2018", "(3;0;4)", 24},
    {"FCHI", "2019", "(2;1;2)", 20},    {"FCHI", "2020", "(3;0;2)", 6},
    {"FCHI", "2021", "(1;1;4)", 18},    {"SSMI", "full", "(1;1;5)", 27},
    {"SSMI", "2018", "(2;1;5)", 22},    {"SSMI", "2019", "(5;1;0)", 15},
    {"SSMI", "2020", "(4;0;2)", 14},    {"SSMI", "2021", "(4;1;5)", 27},
};

std::string reference_spec_for(const std::string& model, const std::string& asset,
                               const std::string& period) {
    for (const ReferenceSpec& ref : kReferenceSpecs) {
        if (asset == ref.asset && period == ref.period) {
            if (model == "arima") return ref.arima;
            if (model == "knn") return "k=" + std::to_string(ref.knn_k);
            return "";
        }
    }
    return "";
}

std::string selected_spec_for(const BenchmarkCell& cell) {
    if (!cell.model.has_value()) return "";
    return std::visit(
        [](const auto& fitted) -> std::string {
            using T = std::decay_t<decltype(fitted)>;
            if constexpr (std::is_same_v<T, ArimaModel>) {
                std::string order = fitted.order.to_string();
                std::replace(order.begin(), order.end(), ',', ';');  // keep the CSV intact
                return order;
            } else if constexpr (std::is_same_v<T, KnnModel>) {
                return "k=" + std::to_string(fitted.config.k) + ";m=" +
                       std::to_string(fitted.config.embed);
            } else if constexpr (std::is_same_v<T, EtsModel>) {
                return "ETS(A;Ad;N)";
            } else {
                return "ETS(A;Ad;N)+LSTM(" +
                       std::to_string(fitted.nonlinear.config().hidden_units) + ")";
            }
        },
        *cell.model);
}

std::string pooled_to_csv(const BenchmarkGrid& grid) {
    std::ostringstream out;
    out << "model,period,avg_rel_mae,series_count\n";
    for (const PooledRelMae& row : grid.pooled_rel_mae) {
        out << row.model_name << ',' << row.period_label << ',' << format_double(row.value) << ','
            << row.series_count << '\n';
    }
    return out.str();
}

}  // namespace

std::string grid_to_csv(const BenchmarkGrid& grid) {
    std::ostringstream out;
    out << "model,asset,period,mode,mae,rmse,mape,avg_rel_mae,status,error,selected_spec,"
           "reference_spec\n";
    for (const BenchmarkCell& cell : grid.cells) {
        out << cell.model_name << ',' << cell.asset_id << ',' << cell.period_label << ','
            << to_string(grid.mode) << ',';
        const std::string reference =
            reference_spec_for(cell.model_name, cell.asset_id, cell.period_label);
        if (cell.ok) {
            out << format_double(cell.eval.mae) << ',' << format_double(cell.eval.rmse) << ','
                << format_double(cell.eval.mape) << ',';
            if (cell.rel_mae.has_value()) out << format_double(*cell.rel_mae);
            out << ",ok,," << selected_spec_for(cell) << ',' << reference << '\n';
        } else {
            out << ",,,,failed," << cell.error << ",," << reference << '\n';
        }
    }
    return out.str();
}

std::uint64_t grid_hash(const BenchmarkGrid& grid) { return fnv1a(grid_to_csv(grid)); }

std::filesystem::path write_describe(const DescribeTable& table, const RunConfig& config) {
    std::filesystem::path path = config.out_dir / ("describe." + config.format);
    if (config.format == "json") {
        write_text(path, describe_to_json_doc(table).dump(2) + "\n");
    } else if (config.format == "md") {
        write_text(path, describe_to_md(table));
    } else {
        write_text(path, describe_to_csv(table));
    }
    return path;
}

std::filesystem::path write_corr(const CorrTable& table, const RunConfig& config) {
    std::filesystem::path path = config.out_dir / ("corr." + config.format);
    if (config.format == "json") {
        json doc{{"assets", table.assets}, {"matrix", table.matrix}, {"aligned_days", table.aligned_days}};
        write_text(path, doc.dump(2) + "\n");
    } else if (config.format == "md") {
        write_text(path, corr_to_md(table));
    } else {
        write_text(path, corr_to_csv(table));
    }
    return path;
}

std::filesystem::path write_adf(const AdfTable& table, const RunConfig& config) {
    std::filesystem::path path = config.out_dir / ("adf." + config.format);
    if (config.format == "json") {
        json rows = json::array();
        for (const AdfRow& row : table.rows) {
            json entry{{"asset", row.asset_id}, {"period", row.period_label}, {"status", row.ok ? "ok" : "failed"}};
            if (row.ok) {
                json critical = json::object();
                for (const auto& [level, value] : row.result.critical_values) {
                    critical[format_double(level)] = value;
                }
                entry["statistic"] = row.result.statistic;
                entry["lags"] = row.result.lags_used;
                entry["reject_at"] = to_string(row.result.reject_at);
                entry["critical_values"] = std::move(critical);
            } else {
                entry["error"] = row.error;
            }
            rows.push_back(std::move(entry));
        }
        write_text(path, json{{"rows", std::move(rows)}}.dump(2) + "\n");
    } else {
        write_text(path, adf_to_csv(table));  // csv also covers md for this table
    }
    return path;
}

std::vector<std::filesystem::path> write_benchmark(const BenchmarkArtifacts& artifacts,
                                                   const RunConfig& config) {
    std::vector<std::filesystem::path> written;
    const BenchmarkGrid& grid = artifacts.grid;

    std::filesystem::path grid_path = config.out_dir / ("grid." + (config.format == "md" ? std::string("csv") : config.format));
    if (config.format == "json") {
        write_text(grid_path, grid_to_json(grid).dump(2) + "\n");
    } else {
        write_text(grid_path, grid_to_csv(grid));
    }
    written.push_back(grid_path);

    const std::filesystem::path pooled_path = config.out_dir / "avg_rel_mae.csv";
    write_text(pooled_path, pooled_to_csv(grid));
    written.push_back(pooled_path);

    const std::filesystem::path models_dir = config.out_dir / "models";
    std::filesystem::create_directories(models_dir);
    for (const BenchmarkCell& cell : grid.cells) {
        if (!cell.ok || !cell.model.has_value()) continue;
        const std::filesystem::path model_path =
            models_dir / (sanitize_filename(cell.model_name) + "_" + sanitize_filename(cell.asset_id) +
                          "_" + sanitize_filename(cell.period_label) + ".json");
        write_text(model_path, model_to_json(*cell.model).dump(2) + "\n");
        written.push_back(model_path);
    }

    const std::filesystem::path manifest_path = config.out_dir / "manifest.json";
    write_text(manifest_path, artifacts.manifest.dump(2) + "\n");
    written.push_back(manifest_path);
    return written;
}

RunConfig config_from_manifest(const json& manifest) {
    RunConfig config;
    config.data.clear();
    for (const auto& entry : manifest.at("data")) {
        config.data.emplace_back(entry.at("asset").get<std::string>(),
                                 entry.at("path").get<std::string>());
    }
    config.period_labels = manifest.at("periods").get<std::vector<std::string>>();
    config.model_names = manifest.at("models").get<std::vector<std::string>>();
    config.split_ratio = manifest.at("split_ratio").get<double>();
    config.seed = manifest.at("seed").get<std::uint64_t>();
    config.mode = eval_mode_from_string(manifest.at("mode").get<std::string>());
    config.risk_free = manifest.at("risk_free").get<double>();
    config.format = manifest.at("format").get<std::string>();
    config.use_adj_close = manifest.at("use_adj_close").get<bool>();
    config.align_calendars = manifest.at("align_calendars").get<bool>();
    return config;
}

}  // namespace marketcast
