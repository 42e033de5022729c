#include "marketcast/synth.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include "marketcast/descriptive_stats.hpp"
#include "marketcast/preprocess.hpp"
#include "marketcast/rng.hpp"

namespace marketcast::synth {

namespace {

constexpr Date kStart{2018, 1, 1};
constexpr Date kEnd{2021, 12, 31};

// Market-shock dates (all weekdays) carrying the yearly extreme returns; the
// same dates across assets keep the cross-asset comovement realistic.
struct ShockDates {
    int year;
    Date min_date;
    Date max_date;
};

const ShockDates kShocks[] = {
    {2018, Date{2018, 2, 5}, Date{2018, 2, 6}},
    {2019, Date{2019, 8, 5}, Date{2019, 1, 4}},
    {2020, Date{2020, 3, 12}, Date{2020, 3, 24}},
    {2021, Date{2021, 9, 20}, Date{2021, 2, 8}},
};

const ShockDates& shocks_for(int year) {
    for (const auto& s : kShocks) {
        if (s.year == year) return s;
    }
    throw std::logic_error("no shock dates for year " + std::to_string(year));
}

}  // namespace

const std::vector<AssetProfile>& reference_profiles() {
    static const std::vector<AssetProfile> profiles = {
        {"BTC-USD",
         13657.0,
         true,
         {{2018, -0.0030, 0.0422, -0.1685, 0.1322},
          {2019, 0.0024, 0.0356, -0.1409, 0.1736},
          {2020, 0.0046, 0.0377, -0.3717, 0.1819},
          {2021, 0.0022, 0.0421, -0.1377, 0.1875}}},
        {"FCHI",
         5312.0,
         false,
         {{2018, -0.0003, 0.0073, -0.0332, 0.0262},
          {2019, 0.0007, 0.0070, -0.0357, 0.0272},
          {2020, -0.0001, 0.0171, -0.1228, 0.0839},
          {2021, 0.0007, 0.0074, -0.0475, 0.0291}}},
        {"FTSE",
         7688.0,
         false,
         {{2018, -0.0003, 0.0067, -0.0315, 0.0235},
          {2019, 0.0003, 0.0062, -0.0323, 0.0225},
          {2020, -0.0003, 0.0153, -0.1087, 0.0905},
          {2021, 0.0004, 0.0067, -0.0364, 0.0347}}},
        {"GDAXI",
         12918.0,
         false,
         {{2018, -0.0005, 0.0081, -0.0348, 0.0290},
          {2019, 0.0006, 0.0073, -0.0311, 0.0337},
          {2020, 0.0002, 0.0173, -0.1224, 0.1098},
          {2021, 0.0004, 0.0076, -0.0415, 0.0331}}},
        {"N100",
         1034.0,
         false,
         {{2018, -0.0003, 0.0069, -0.0342, 0.0252},
          {2019, 0.0006, 0.0066, -0.0328, 0.0266},
          {2020, 0.0000, 0.0159, -0.1197, 0.0818},
          {2021, 0.0006, 0.0072, -0.0428, 0.0318}}},
        {"SSMI",
         9382.0,
         false,
         {{2018, -0.0003, 0.0075, -0.0313, 0.0285},
          {2019, 0.0006, 0.0055, -0.0208, 0.0228},
          {2020, 0.0001, 0.0125, -0.0964, 0.0702},
          {2021, 0.0005, 0.0056, -0.0238, 0.0210}}},
    };
    return profiles;
}

const std::vector<std::vector<double>>& reference_correlation() {
    static const std::vector<std::vector<double>> corr = {
        {1.000, 0.276, 0.263, 0.274, 0.284, 0.274},
        {0.276, 1.000, 0.900, 0.944, 0.989, 0.830},
        {0.263, 0.900, 1.000, 0.871, 0.913, 0.816},
        {0.274, 0.944, 0.871, 1.000, 0.948, 0.851},
        {0.284, 0.989, 0.913, 0.948, 1.000, 0.851},
        {0.274, 0.830, 0.816, 0.814, 0.851, 1.000},
    };
    return corr;
}

namespace {

std::vector<Date> build_calendar(bool trades_weekends) {
    std::vector<Date> days;
    for (Date d = kStart; !(kEnd < d); d = next_day(d)) {
        if (trades_weekends || !d.is_weekend()) days.push_back(d);
    }
    return days;
}

// Scales z (already standardized to zero mean, unit sum of squares) so that
// the full block {min, max, scaled z...} has exactly the target sample mean
// and (n-1)-denominator standard deviation.
struct BlockScale {
    double alpha = 0.0;
    double beta = 0.0;
};

BlockScale solve_block_scale(const YearTargets& target, std::size_t block_size) {
    const double n = static_cast<double>(block_size);
    const double a = target.min;
    const double b = target.max;
    const double mu = target.mean;
    const double beta = (n * mu - a - b) / (n - 2.0);
    const double budget = (n - 1.0) * target.std_dev * target.std_dev - (a - mu) * (a - mu) -
                          (b - mu) * (b - mu) - (n - 2.0) * (beta - mu) * (beta - mu);
    if (!(budget > 0.0)) {
        throw std::runtime_error("synthetic targets for year " + std::to_string(target.year) +
                                 " are infeasible");
    }
    return {std::sqrt(budget), beta};
}

struct Generated {
    std::vector<PriceSeries> series;
};

// Daily returns carry mild anti-persistence, like real index returns; it also
// keeps the unit-root rejections decisively inside the 0.1% tail.
constexpr double kReturnAutocorr = -0.25;

Generated build_series(const Eigen::MatrixXd& shocks_by_day, const std::vector<Date>& all_days) {
    const auto& profiles = reference_profiles();
    std::map<std::int64_t, std::size_t> day_index;
    for (std::size_t i = 0; i < all_days.size(); ++i) day_index[all_days[i].serial()] = i;

    Generated out;
    for (std::size_t asset = 0; asset < profiles.size(); ++asset) {
        const AssetProfile& profile = profiles[asset];
        const std::vector<Date> calendar = build_calendar(profile.trades_weekends);
        std::vector<double> filtered(calendar.size(), 0.0);
        double state = 0.0;
        for (std::size_t i = 0; i < calendar.size(); ++i) {
            const double raw = shocks_by_day(
                static_cast<long>(day_index.at(calendar[i].serial())), static_cast<long>(asset));
            state = kReturnAutocorr * state + raw;
            filtered[i] = state;
        }
        std::vector<double> returns(calendar.size(), 0.0);  // step into calendar[i], i >= 1

        for (const YearTargets& target : profile.years) {
            const ShockDates& shock = shocks_for(target.year);
            // Steps fully inside the year: into calendar[i] with both ends in it.
            std::vector<std::size_t> block;
            std::size_t min_pos = 0, max_pos = 0;
            bool found_min = false, found_max = false;
            for (std::size_t i = 1; i < calendar.size(); ++i) {
                if (calendar[i].year != target.year || calendar[i - 1].year != target.year) continue;
                if (calendar[i] == shock.min_date) {
                    min_pos = i;
                    found_min = true;
                } else if (calendar[i] == shock.max_date) {
                    max_pos = i;
                    found_max = true;
                } else {
                    block.push_back(i);
                }
            }
            if (!found_min || !found_max) {
                throw std::logic_error("shock dates missing from the synthetic calendar");
            }
            const std::size_t n = block.size() + 2;
            const BlockScale scale = solve_block_scale(target, n);

            // Standardize the clipped shocks over the non-extreme positions.
            const double filter_scale =
                std::sqrt(1.0 - kReturnAutocorr * kReturnAutocorr);  // unit-variance AR state
            std::vector<double> z(block.size());
            for (std::size_t j = 0; j < block.size(); ++j) {
                z[j] = std::clamp(filtered[block[j]] * filter_scale, -2.8, 2.8);
            }
            double mean = 0.0;
            for (double v : z) mean += v;
            mean /= static_cast<double>(z.size());
            double ss = 0.0;
            for (double& v : z) {
                v -= mean;
                ss += v * v;
            }
            const double norm = std::sqrt(ss);
            for (std::size_t j = 0; j < block.size(); ++j) {
                returns[block[j]] = scale.beta + scale.alpha * z[j] / norm;
            }
            returns[min_pos] = target.min;
            returns[max_pos] = target.max;

            // Year-bridge step (into the year's first trading day).
            for (std::size_t i = 1; i < calendar.size(); ++i) {
                if (calendar[i].year == target.year && calendar[i - 1].year != target.year) {
                    returns[i] = target.mean;
                }
            }
        }

        std::vector<double> closes(calendar.size());
        closes[0] = profile.start_price;
        for (std::size_t i = 1; i < calendar.size(); ++i) {
            closes[i] = closes[i - 1] * std::exp(returns[i]);
        }
        out.series.emplace_back(profile.asset_id, calendar, std::move(closes));
    }
    return out;
}

std::vector<std::vector<double>> measure_correlation(const std::vector<PriceSeries>& series) {
    const std::vector<PriceSeries> aligned = align_series(series);
    std::vector<std::vector<double>> returns;
    returns.reserve(aligned.size());
    for (const PriceSeries& s : aligned) returns.push_back(log_returns(s));
    return correlation_matrix(returns);
}

}  // namespace

std::vector<PriceSeries> generate_snapshots(const SynthOptions& options) {
    const auto& profiles = reference_profiles();
    const std::size_t asset_count = profiles.size();
    const std::vector<Date> all_days = build_calendar(true);

    Rng rng(options.seed);
    Eigen::MatrixXd raw(static_cast<long>(all_days.size()), static_cast<long>(asset_count));
    for (long r = 0; r < raw.rows(); ++r) {
        for (long c = 0; c < raw.cols(); ++c) raw(r, c) = rng.normal();
    }

    Eigen::MatrixXd gen_corr(asset_count, asset_count);
    const auto& target = reference_correlation();
    for (std::size_t i = 0; i < asset_count; ++i) {
        for (std::size_t j = 0; j < asset_count; ++j) gen_corr(i, j) = target[i][j];
    }

    std::vector<PriceSeries> result;
    for (int sweep = 0; sweep < options.correlation_sweeps; ++sweep) {
        // PSD projection with unit diagonal, then correlate the raw shocks.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(gen_corr);
        Eigen::VectorXd values = eigen.eigenvalues().cwiseMax(1e-6);
        Eigen::MatrixXd psd = eigen.eigenvectors() * values.asDiagonal() *
                              eigen.eigenvectors().transpose();
        for (std::size_t i = 0; i < asset_count; ++i) {
            for (std::size_t j = 0; j < asset_count; ++j) {
                psd(i, j) /= std::sqrt(psd(i, i) * psd(j, j));
            }
        }
        const Eigen::MatrixXd chol = Eigen::LLT<Eigen::MatrixXd>(psd).matrixL();
        const Eigen::MatrixXd correlated = raw * chol.transpose();

        Generated generated = build_series(correlated, all_days);
        const auto measured = measure_correlation(generated.series);

        double worst = 0.0;
        for (std::size_t i = 0; i < asset_count; ++i) {
            for (std::size_t j = i + 1; j < asset_count; ++j) {
                const double error = target[i][j] - measured[i][j];
                worst = std::max(worst, std::abs(error));
                const double adjusted = std::clamp(gen_corr(i, j) + 1.2 * error, -0.99, 0.99);
                gen_corr(i, j) = adjusted;
                gen_corr(j, i) = adjusted;
            }
        }
        result = std::move(generated.series);
        if (worst < options.correlation_tolerance) break;
    }
    return result;
}

void write_snapshots(const std::filesystem::path& dir, const SynthOptions& options) {
    std::filesystem::create_directories(dir);
    const std::vector<PriceSeries> series = generate_snapshots(options);
    for (const PriceSeries& s : series) {
        std::ofstream file(dir / (s.asset_id() + ".csv"));
        if (!file) {
            throw std::runtime_error("cannot write snapshot for " + s.asset_id());
        }
        file << "Date,Open,High,Low,Close,Adj Close,Volume\n";
        char buffer[256];
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double close = s.closes()[i];
            const double open = i > 0 ? s.closes()[i - 1] : close;
            const double high = std::max(open, close) * 1.001;
            const double low = std::min(open, close) * 0.999;
            const long volume = 1000000 + static_cast<long>(i) * 37;
            std::snprintf(buffer, sizeof(buffer), "%s,%.6f,%.6f,%.6f,%.6f,%.6f,%ld\n",
                          s.dates()[i].to_string().c_str(), open, high, low, close, close, volume);
            file << buffer;
        }
    }
}

}  // namespace marketcast::synth
