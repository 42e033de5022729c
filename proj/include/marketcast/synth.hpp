#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "marketcast/market_data.hpp"

namespace marketcast::synth {

/// Calibration targets for one asset-year: sample moments of daily log returns.
struct YearTargets {
    int year = 2018;
    double mean = 0.0;
    double std_dev = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Per-asset calibration: start price, calendar, and yearly return targets.
struct AssetProfile {
    std::string asset_id;
    double start_price = 100.0;
    bool trades_weekends = false;  // true for the crypto series
    std::vector<YearTargets> years;
};

/**
 * @brief Reference profiles for the six benchmark instruments, 2018-2021.
 *
 * The numbers approximate the instruments' historical daily-log-return
 * statistics per calendar year (mean, standard deviation, extremes) and are
 * used to synthesize offline stand-ins for the real exchange snapshots.
 */
const std::vector<AssetProfile>& reference_profiles();

/// Target Pearson correlations of the aligned 2018-2021 daily returns,
/// ordered as reference_profiles().
const std::vector<std::vector<double>>& reference_correlation();

struct SynthOptions {
    std::uint64_t seed = 20180101;
    int correlation_sweeps = 12;
    double correlation_tolerance = 0.002;
};

/**
 * @brief Generates the six synthetic price series.
 *
 * Within each asset-year the sample mean and standard deviation match the
 * targets exactly and the extreme returns are injected on fixed market-shock
 * dates shared across assets; the cross-asset correlation of the generator is
 * calibrated iteratively until the aligned-return correlation measured through
 * the library's own pipeline matches the reference matrix.
 */
std::vector<PriceSeries> generate_snapshots(const SynthOptions& options = {});

/// Writes one Yahoo-style CSV per asset (<ASSET>.csv) into dir.
void write_snapshots(const std::filesystem::path& dir, const SynthOptions& options = {});

}  // namespace marketcast::synth
