#include "marketcast/market_data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace marketcast {

PriceSeries::PriceSeries(std::string asset_id, std::vector<Date> dates, std::vector<double> closes)
    : asset_id_(std::move(asset_id)), dates_(std::move(dates)), closes_(std::move(closes)) {
    if (dates_.size() != closes_.size()) {
        throw std::invalid_argument("price series: dates and closes length mismatch");
    }
    if (dates_.size() < 2) {
        throw std::invalid_argument("price series needs at least 2 observations");
    }
    for (std::size_t i = 0; i < dates_.size(); ++i) {
        if (i > 0 && !(dates_[i - 1] < dates_[i])) {
            throw std::invalid_argument("price series dates must be strictly increasing (" +
                                        dates_[i].to_string() + ")");
        }
        if (!std::isfinite(closes_[i]) || closes_[i] <= 0.0) {
            throw std::invalid_argument("price series closes must be positive and finite");
        }
    }
}

std::vector<PeriodSpec> standard_periods() {
    return {
        {"full", Date{2018, 1, 1}, Date{2021, 12, 31}},
        {"2018", Date{2018, 1, 1}, Date{2018, 12, 31}},
        {"2019", Date{2019, 1, 1}, Date{2019, 12, 31}},
        {"2020", Date{2020, 1, 1}, Date{2020, 12, 31}},
        {"2021", Date{2021, 1, 1}, Date{2021, 12, 31}},
    };
}

PeriodSpec period_by_label(const std::string& label) {
    for (auto& p : standard_periods()) {
        if (p.label == label) return p;
    }
    throw std::invalid_argument("unknown period label: '" + label + "'");
}

namespace {

std::string lower_trim(std::string s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream stream(line);
    while (std::getline(stream, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

}  // namespace

IngestResult ingest_csv(const std::filesystem::path& path, const std::string& asset_id,
                        const IngestOptions& options) {
    std::ifstream file(path);
    if (!file) {
        throw std::runtime_error("cannot open data file: " + path.string());
    }

    std::string line;
    if (!std::getline(file, line)) {
        throw std::runtime_error("malformed header in " + path.string() + ": empty file");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = split_csv_line(line);
    int date_col = -1, close_col = -1, adj_close_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string name = lower_trim(header[i]);
        if (name == "date") date_col = static_cast<int>(i);
        if (name == "close") close_col = static_cast<int>(i);
        if (name == "adj close" || name == "adj_close") adj_close_col = static_cast<int>(i);
    }
    if (options.use_adj_close && adj_close_col >= 0) close_col = adj_close_col;
    if (close_col < 0) close_col = adj_close_col;
    if (date_col < 0 || close_col < 0) {
        throw std::runtime_error("malformed header in " + path.string() +
                                 ": need Date and Close (or Adj Close) columns");
    }

    std::vector<std::pair<Date, double>> rows;
    std::size_t dropped = 0;
    while (std::getline(file, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (static_cast<int>(cells.size()) <= std::max(date_col, close_col)) {
            ++dropped;
            continue;
        }
        Date date{};
        try {
            date = Date::parse(lower_trim(cells[static_cast<std::size_t>(date_col)]));
        } catch (const std::invalid_argument&) {
            ++dropped;
            continue;
        }
        const std::string close_text = lower_trim(cells[static_cast<std::size_t>(close_col)]);
        if (close_text.empty() || close_text == "null" || close_text == "nan") {
            ++dropped;
            continue;
        }
        double close = 0.0;
        try {
            std::size_t consumed = 0;
            close = std::stod(close_text, &consumed);
            if (consumed != close_text.size()) throw std::invalid_argument("trailing text");
        } catch (const std::exception&) {
            ++dropped;
            continue;
        }
        if (!std::isfinite(close) || close <= 0.0) {
            ++dropped;
            continue;
        }
        rows.emplace_back(date, close);
    }

    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].first == rows[i - 1].first) {
            throw std::runtime_error("duplicate date " + rows[i].first.to_string() + " in " +
                                     path.string());
        }
    }
    if (rows.size() < 2) {
        throw std::runtime_error("fewer than 2 valid rows in " + path.string());
    }

    std::vector<Date> dates;
    std::vector<double> closes;
    dates.reserve(rows.size());
    closes.reserve(rows.size());
    for (auto& [date, close] : rows) {
        dates.push_back(date);
        closes.push_back(close);
    }
    return IngestResult{PriceSeries(asset_id, std::move(dates), std::move(closes)), dropped};
}

PriceSeries slice_period(const PriceSeries& series, const PeriodSpec& period) {
    if (period.end < period.start) {
        throw std::invalid_argument("period '" + period.label + "' has end before start");
    }
    std::vector<Date> dates;
    std::vector<double> closes;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const Date& d = series.dates()[i];
        if (period.start <= d && d <= period.end) {
            dates.push_back(d);
            closes.push_back(series.closes()[i]);
        }
    }
    if (dates.size() < 2) {
        throw std::invalid_argument("period '" + period.label + "' selects fewer than 2 observations of " +
                                    series.asset_id());
    }
    return PriceSeries(series.asset_id(), std::move(dates), std::move(closes));
}

TrainTestSplit split_train_test(const PriceSeries& series, double ratio) {
    if (!(ratio > 0.0 && ratio < 1.0)) {
        throw std::invalid_argument("split ratio must lie in (0, 1)");
    }
    const std::size_t n = series.size();
    // round half up
    const std::size_t train_n = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n) + 0.5));
    if (train_n < 2 || n - train_n < 2) {
        throw std::invalid_argument("degenerate split: train or test side shorter than 2");
    }
    std::vector<Date> train_dates(series.dates().begin(), series.dates().begin() + static_cast<long>(train_n));
    std::vector<double> train_closes(series.closes().begin(), series.closes().begin() + static_cast<long>(train_n));
    std::vector<Date> test_dates(series.dates().begin() + static_cast<long>(train_n), series.dates().end());
    std::vector<double> test_closes(series.closes().begin() + static_cast<long>(train_n), series.closes().end());
    return TrainTestSplit{PriceSeries(series.asset_id(), std::move(train_dates), std::move(train_closes)),
                          PriceSeries(series.asset_id(), std::move(test_dates), std::move(test_closes)),
                          ratio};
}

std::vector<PriceSeries> align_series(std::span<const PriceSeries> series_list) {
    if (series_list.size() < 2) {
        throw std::invalid_argument("align_series needs at least 2 series");
    }
    std::set<Date> shared(series_list[0].dates().begin(), series_list[0].dates().end());
    for (std::size_t s = 1; s < series_list.size(); ++s) {
        std::set<Date> next;
        for (const Date& d : series_list[s].dates()) {
            if (shared.count(d) > 0) next.insert(d);
        }
        shared = std::move(next);
    }
    if (shared.size() < 2) {
        throw std::invalid_argument("align_series: date intersection has fewer than 2 days");
    }
    std::vector<PriceSeries> aligned;
    aligned.reserve(series_list.size());
    for (const PriceSeries& series : series_list) {
        std::vector<Date> dates;
        std::vector<double> closes;
        dates.reserve(shared.size());
        closes.reserve(shared.size());
        for (std::size_t i = 0; i < series.size(); ++i) {
            if (shared.count(series.dates()[i]) > 0) {
                dates.push_back(series.dates()[i]);
                closes.push_back(series.closes()[i]);
            }
        }
        aligned.emplace_back(series.asset_id(), std::move(dates), std::move(closes));
    }
    return aligned;
}

}  // namespace marketcast
