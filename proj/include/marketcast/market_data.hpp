#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "marketcast/dates.hpp"

namespace marketcast {

/**
 * @brief Date-indexed close-price series for one asset.
 *
 * Invariants (enforced at construction):
 *  - dates strictly increasing,
 *  - closes finite and > 0,
 *  - dates and closes equal length, at least 2 observations.
 */
class PriceSeries {
public:
    PriceSeries(std::string asset_id, std::vector<Date> dates, std::vector<double> closes);

    [[nodiscard]] const std::string& asset_id() const { return asset_id_; }
    [[nodiscard]] const std::vector<Date>& dates() const { return dates_; }
    [[nodiscard]] const std::vector<double>& closes() const { return closes_; }
    [[nodiscard]] std::size_t size() const { return dates_.size(); }

    [[nodiscard]] const Date& front_date() const { return dates_.front(); }
    [[nodiscard]] const Date& back_date() const { return dates_.back(); }

private:
    std::string asset_id_;
    std::vector<Date> dates_;
    std::vector<double> closes_;
};

/// Inclusive date window with a display label.
struct PeriodSpec {
    std::string label;
    Date start;
    Date end;
};

/// The five benchmark windows: the full range plus four calendar years.
std::vector<PeriodSpec> standard_periods();

/// Looks up one of the standard periods by label ("full", "2018", ...).
PeriodSpec period_by_label(const std::string& label);

struct TrainTestSplit {
    PriceSeries train;
    PriceSeries test;
    double ratio;
};

struct IngestOptions {
    /// Prefer the "Adj Close" column even when "Close" is present.
    bool use_adj_close = false;
};

struct IngestResult {
    PriceSeries series;
    /// Rows skipped because the close cell was missing or unparseable.
    std::size_t dropped_rows = 0;
};

/**
 * @brief Reads a Yahoo-style OHLCV CSV into a PriceSeries.
 *
 * Requirements: a header row naming at least Date and Close (case-insensitive;
 * "Adj Close" is used as fallback when "Close" is absent). Extra columns are
 * ignored. Rows whose close is missing or unparseable are dropped and counted.
 * Rows are sorted by date; duplicate dates are an error.
 *
 * @throws std::runtime_error on missing file, malformed header, duplicate
 *         dates, or fewer than 2 valid rows.
 */
IngestResult ingest_csv(const std::filesystem::path& path, const std::string& asset_id,
                        const IngestOptions& options = {});

/**
 * @brief Restricts a series to the observations with start <= date <= end.
 * @throws std::invalid_argument if fewer than 2 observations fall inside.
 */
PriceSeries slice_period(const PriceSeries& series, const PeriodSpec& period);

/**
 * @brief Chronological split with train length = round(ratio * n), half up.
 * @throws std::invalid_argument when either side would have fewer than 2 points.
 */
TrainTestSplit split_train_test(const PriceSeries& series, double ratio);

/**
 * @brief Inner-joins the series on dates (intersection across all inputs).
 *
 * Needed when mixing seven-day crypto calendars with five-day equity
 * calendars. Output order matches the input order; all outputs share the
 * identical date set.
 *
 * @throws std::invalid_argument on fewer than 2 inputs or an empty intersection.
 */
std::vector<PriceSeries> align_series(std::span<const PriceSeries> series_list);

}  // namespace marketcast
