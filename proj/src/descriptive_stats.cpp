#include "marketcast/descriptive_stats.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace marketcast {

std::string to_string(Significance s) {
    switch (s) {
        case Significance::p001: return "0.001";
        case Significance::p01: return "0.01";
        case Significance::p05: return "0.05";
        case Significance::p10: return "0.10";
        case Significance::none: return "none";
    }
    return "none";
}

namespace {

double sample_mean(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// MacKinnon response-surface critical values for the ADF tau statistic,
// constant / no trend, one variable. Levels 1/5/10% from MacKinnon (2010),
// "Critical Values for Cointegration Tests", QED WP 1227, Table 2, with
// cv = b_inf + b1/T + b2/T^2 + b3/T^3. The 0.1% entry is the asymptotic
// quantile implied by the MacKinnon (1994) p-value response surface for the
// same case (no finite-sample surface is published at that level).
struct CriticalSurface {
    double level;
    double b_inf, b1, b2, b3;
};

constexpr CriticalSurface kAdfConstantSurfaces[] = {
    {0.001, -4.0916, 0.0, 0.0, 0.0},
    {0.01, -3.43035, -6.5393, -16.786, -83.133},
    {0.05, -2.86154, -2.8903, -4.234, -40.040},
    {0.10, -2.56677, -1.5384, -2.809, 0.0},
};

}  // namespace

namespace {

struct AdfRegression {
    double t_ratio = 0.0;
    double rss = 0.0;
    long rows = 0;
};

// Fits dx_t = a + b x_{t-1} + sum c_i dx_{t-i} + w_t, t starting after
// start_lag observations (>= k), and returns the t-ratio on b.
AdfRegression adf_regression(std::span<const double> x, int k, int start_lag) {
    const int num_regressors = k + 2;
    const long rows = static_cast<long>(x.size()) - 1 - start_lag;
    if (rows <= num_regressors) {
        throw std::invalid_argument("adf_test: series too short for " + std::to_string(k) + " lags");
    }
    Eigen::MatrixXd design(rows, num_regressors);
    Eigen::VectorXd response(rows);
    for (long r = 0; r < rows; ++r) {
        const std::size_t t = static_cast<std::size_t>(r) + static_cast<std::size_t>(start_lag) + 1;
        response(r) = x[t] - x[t - 1];
        design(r, 0) = 1.0;
        design(r, 1) = x[t - 1];
        for (int i = 1; i <= k; ++i) {
            design(r, 1 + i) = x[t - i] - x[t - i - 1];
        }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < num_regressors) {
        throw std::runtime_error("adf_test: singular regression (constant or collinear input)");
    }
    const Eigen::VectorXd beta = qr.solve(response);
    const Eigen::VectorXd residuals = response - design * beta;
    const double dof = static_cast<double>(rows - num_regressors);
    const double sigma2 = residuals.squaredNorm() / dof;
    const Eigen::MatrixXd xtx_inverse =
        (design.transpose() * design)
            .ldlt()
            .solve(Eigen::MatrixXd::Identity(num_regressors, num_regressors));
    const double se_b = std::sqrt(sigma2 * xtx_inverse(1, 1));
    if (!(se_b > 0.0) || !std::isfinite(se_b)) {
        throw std::runtime_error("adf_test: degenerate standard error");
    }
    AdfRegression out;
    out.t_ratio = beta(1) / se_b;
    out.rss = residuals.squaredNorm();
    out.rows = rows;
    return out;
}

}  // namespace

AdfResult adf_test(std::span<const double> x, std::optional<int> lags) {
    const std::size_t n = x.size();
    if (n < 8) {
        throw std::invalid_argument("adf_test needs at least 8 observations");
    }
    int k = 0;
    if (lags.has_value()) {
        if (*lags < 0) throw std::invalid_argument("adf_test: negative lag order");
        k = *lags;
    } else {
        // Lag order chosen by AIC over k = 0..kmax with kmax from the Schwert
        // rule (clamped to keep residual degrees of freedom on short series).
        // Candidates are compared on the common sample starting after kmax.
        int kmax =
            static_cast<int>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
        kmax = std::max(0, std::min({kmax, static_cast<int>((n - 6) / 2),
                                     static_cast<int>(n) - 8}));
        double best_aic = std::numeric_limits<double>::infinity();
        for (int candidate = 0; candidate <= kmax; ++candidate) {
            AdfRegression fit;
            try {
                fit = adf_regression(x, candidate, kmax);
            } catch (const std::invalid_argument&) {
                break;
            }
            const double t_size = static_cast<double>(fit.rows);
            const double aic = t_size * std::log(std::max(fit.rss / t_size, 1e-300)) +
                               2.0 * static_cast<double>(candidate + 2);
            if (aic < best_aic) {
                best_aic = aic;
                k = candidate;
            }
        }
    }

    const AdfRegression fit = adf_regression(x, k, k);

    AdfResult result;
    result.statistic = fit.t_ratio;
    result.lags_used = k;

    const double t_size = static_cast<double>(fit.rows);
    for (const auto& surface : kAdfConstantSurfaces) {
        const double cv = surface.b_inf + surface.b1 / t_size + surface.b2 / (t_size * t_size) +
                          surface.b3 / (t_size * t_size * t_size);
        result.critical_values[surface.level] = cv;
    }

    result.reject_at = Significance::none;
    if (result.statistic < result.critical_values.at(0.10)) result.reject_at = Significance::p10;
    if (result.statistic < result.critical_values.at(0.05)) result.reject_at = Significance::p05;
    if (result.statistic < result.critical_values.at(0.01)) result.reject_at = Significance::p01;
    if (result.statistic < result.critical_values.at(0.001)) result.reject_at = Significance::p001;
    return result;
}

JbResult jarque_bera(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 8) {
        throw std::invalid_argument("jarque_bera needs at least 8 observations");
    }
    const double mean = sample_mean(x);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    m2 *= inv_n;
    m3 *= inv_n;
    m4 *= inv_n;
    if (!(m2 > 0.0)) {
        throw std::invalid_argument("jarque_bera: constant input");
    }
    JbResult result;
    result.skewness = m3 / std::pow(m2, 1.5);
    const double kurtosis = m4 / (m2 * m2);
    result.excess_kurtosis = kurtosis - 3.0;
    result.statistic = static_cast<double>(n) / 6.0 *
                       (result.skewness * result.skewness +
                        result.excess_kurtosis * result.excess_kurtosis / 4.0);
    // chi-square(2) survival function
    result.p_value = std::exp(-result.statistic / 2.0);
    return result;
}

DescriptiveReport describe(std::span<const double> returns, double risk_free) {
    const std::size_t n = returns.size();
    if (n < 8) {
        throw std::invalid_argument("describe needs at least 8 returns");
    }
    for (double r : returns) {
        if (!std::isfinite(r)) throw std::invalid_argument("describe: non-finite return");
    }
    const auto [lo, hi] = std::minmax_element(returns.begin(), returns.end());
    if (!(*hi > *lo)) {
        throw std::invalid_argument("describe: constant series has undefined Sharpe ratio");
    }
    DescriptiveReport report;
    report.n = n;
    report.mean = sample_mean(returns);
    double ss = 0.0;
    for (double r : returns) {
        const double d = r - report.mean;
        ss += d * d;
    }
    report.std_dev = std::sqrt(ss / static_cast<double>(n - 1));
    report.min = *lo;
    report.max = *hi;
    report.sharpe = (report.mean - risk_free) / report.std_dev;
    report.std_err = report.std_dev / std::sqrt(static_cast<double>(n));
    report.adf = adf_test(returns);
    report.jb = jarque_bera(returns);
    return report;
}

std::vector<std::vector<double>> correlation_matrix(
    const std::vector<std::vector<double>>& aligned_returns) {
    const std::size_t count = aligned_returns.size();
    if (count == 0) {
        throw std::invalid_argument("correlation_matrix: no series");
    }
    const std::size_t n = aligned_returns.front().size();
    if (n < 3) {
        throw std::invalid_argument("correlation_matrix needs series of length >= 3");
    }
    std::vector<double> means(count), scales(count);
    for (std::size_t s = 0; s < count; ++s) {
        if (aligned_returns[s].size() != n) {
            throw std::invalid_argument("correlation_matrix: series lengths differ");
        }
        means[s] = sample_mean(aligned_returns[s]);
        double ss = 0.0;
        for (double v : aligned_returns[s]) {
            const double d = v - means[s];
            ss += d * d;
        }
        if (!(ss > 0.0)) {
            throw std::invalid_argument("correlation_matrix: constant series");
        }
        scales[s] = std::sqrt(ss);
    }
    std::vector<std::vector<double>> corr(count, std::vector<double>(count, 1.0));
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = i + 1; j < count; ++j) {
            double cov = 0.0;
            for (std::size_t t = 0; t < n; ++t) {
                cov += (aligned_returns[i][t] - means[i]) * (aligned_returns[j][t] - means[j]);
            }
            const double rho = cov / (scales[i] * scales[j]);
            corr[i][j] = rho;
            corr[j][i] = rho;
        }
    }
    return corr;
}

}  // namespace marketcast
