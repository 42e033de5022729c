#include "marketcast/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace marketcast {

MinMaxScaler::MinMaxScaler(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(hi > lo)) {
        throw std::invalid_argument("min-max scaler requires hi > lo");
    }
}

std::vector<double> MinMaxScaler::transform(std::span<const double> x) const {
    std::vector<double> out(x.size());
    std::transform(x.begin(), x.end(), out.begin(), [&](double v) { return transform(v); });
    return out;
}

std::vector<double> MinMaxScaler::inverse_transform(std::span<const double> u) const {
    std::vector<double> out(u.size());
    std::transform(u.begin(), u.end(), out.begin(), [&](double v) { return inverse_transform(v); });
    return out;
}

MinMaxScaler fit_scaler(std::span<const double> x) {
    if (x.size() < 2) {
        throw std::invalid_argument("fit_scaler needs at least 2 values");
    }
    const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
    if (!(*hi_it > *lo_it)) {
        throw std::invalid_argument("fit_scaler: constant input has no scale");
    }
    return MinMaxScaler(*lo_it, *hi_it);
}

std::vector<double> log_returns(std::span<const double> closes) {
    if (closes.size() < 2) {
        throw std::invalid_argument("log_returns needs at least 2 prices");
    }
    std::vector<double> out;
    out.reserve(closes.size() - 1);
    for (std::size_t t = 0; t + 1 < closes.size(); ++t) {
        if (!(closes[t] > 0.0) || !(closes[t + 1] > 0.0)) {
            throw std::invalid_argument("log_returns requires strictly positive prices");
        }
        out.push_back(std::log(closes[t + 1] / closes[t]));
    }
    return out;
}

std::vector<double> log_returns(const PriceSeries& series) { return log_returns(series.closes()); }

}  // namespace marketcast
