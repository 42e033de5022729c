#include "marketcast/arima.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "marketcast/descriptive_stats.hpp"
#include "marketcast/nelder_mead.hpp"

namespace marketcast {

std::string ArimaOrder::to_string() const {
    return "(" + std::to_string(p) + "," + std::to_string(d) + "," + std::to_string(q) + ")";
}

std::vector<double> difference(std::span<const double> x, int d) {
    if (d < 0) throw std::invalid_argument("difference: negative order");
    std::vector<double> out(x.begin(), x.end());
    for (int round = 0; round < d; ++round) {
        if (out.size() < 2) throw std::invalid_argument("difference: series exhausted");
        std::vector<double> next;
        next.reserve(out.size() - 1);
        for (std::size_t i = 1; i < out.size(); ++i) next.push_back(out[i] - out[i - 1]);
        out = std::move(next);
    }
    return out;
}

std::vector<double> undifference_once(std::span<const double> diffs, double first_value) {
    std::vector<double> out;
    out.reserve(diffs.size() + 1);
    out.push_back(first_value);
    for (double d : diffs) out.push_back(out.back() + d);
    return out;
}

namespace {

// Schur-Cohn test via the step-down (inverse Levinson) recursion: all roots of
// 1 - sum_i c_i z^i lie outside |z| > margin iff every reflection coefficient
// of {c_i * margin^i} has modulus < 1.
bool roots_outside(std::span<const double> coeffs, double margin) {
    std::vector<double> a;
    a.reserve(coeffs.size());
    double scale = 1.0;
    for (double c : coeffs) {
        scale *= margin;
        a.push_back(c * scale);
    }
    while (!a.empty() && a.back() == 0.0) a.pop_back();
    for (std::size_t k = a.size(); k > 0; --k) {
        const double kappa = a[k - 1];
        if (!(std::abs(kappa) < 1.0)) return false;
        const double denom = 1.0 - kappa * kappa;
        std::vector<double> next(k - 1);
        for (std::size_t i = 0; i + 1 < k; ++i) {
            next[i] = (a[i] + kappa * a[k - 2 - i]) / denom;
        }
        a = std::move(next);
    }
    return true;
}

constexpr double kArStationarityMargin = 1.001;
constexpr double kMaInvertibilityMargin = 1.0 + 1e-9;
constexpr double kInfeasible = 1e100;

struct CssProblem {
    std::span<const double> z;  // differenced series
    int p = 0;
    int q = 0;
    bool estimate_mean = false;
    double fixed_mean = 0.0;

    [[nodiscard]] int dim() const { return p + q + (estimate_mean ? 1 : 0); }

    // Conditional sum of squared innovations; +inf outside the admissible region.
    [[nodiscard]] double operator()(std::span<const double> params) const {
        const std::span<const double> phi = params.subspan(0, static_cast<std::size_t>(p));
        const std::span<const double> theta =
            params.subspan(static_cast<std::size_t>(p), static_cast<std::size_t>(q));
        const double mu = estimate_mean ? params[static_cast<std::size_t>(p + q)] : fixed_mean;
        if (!roots_outside(phi, kArStationarityMargin)) return kInfeasible;
        if (!roots_outside(theta, kMaInvertibilityMargin)) return kInfeasible;
        return sum_of_squares(phi, theta, mu, nullptr);
    }

    double sum_of_squares(std::span<const double> phi, std::span<const double> theta, double mu,
                          std::vector<double>* innovations_out) const {
        const std::size_t n = z.size();
        const std::size_t m = static_cast<std::size_t>(std::max(p, q));
        std::vector<double> eps(n, 0.0);
        double sse = 0.0;
        for (std::size_t t = m; t < n; ++t) {
            double prediction = 0.0;
            for (int i = 0; i < p; ++i) {
                prediction += phi[static_cast<std::size_t>(i)] *
                              (z[t - static_cast<std::size_t>(i) - 1] - mu);
            }
            for (int j = 0; j < q; ++j) {
                prediction += theta[static_cast<std::size_t>(j)] * eps[t - static_cast<std::size_t>(j) - 1];
            }
            const double e = (z[t] - mu) - prediction;
            eps[t] = e;
            sse += e * e;
        }
        if (innovations_out != nullptr) *innovations_out = std::move(eps);
        return sse;
    }
};

// Hannan-Rissanen style start: a long-AR fit supplies innovation proxies, then
// one OLS pass regresses the series on its own lags and the proxies.
std::vector<double> hannan_rissanen_start(std::span<const double> w, int p, int q) {
    const long n = static_cast<long>(w.size());
    std::vector<double> start(static_cast<std::size_t>(p + q), 0.0);

    std::vector<double> proxy(w.size(), 0.0);
    if (q > 0) {
        const long h = std::min<long>({n / 4, 20, std::max<long>(8, p + q + 5)});
        if (h < 1 || n - h <= h + 1) return start;
        Eigen::MatrixXd design(n - h, h);
        Eigen::VectorXd response(n - h);
        for (long r = 0; r < n - h; ++r) {
            const long t = r + h;
            response(r) = w[static_cast<std::size_t>(t)];
            for (long i = 0; i < h; ++i) design(r, i) = w[static_cast<std::size_t>(t - i - 1)];
        }
        const Eigen::VectorXd coeffs = design.colPivHouseholderQr().solve(response);
        for (long t = h; t < n; ++t) {
            double fitted = 0.0;
            for (long i = 0; i < h; ++i) fitted += coeffs(i) * w[static_cast<std::size_t>(t - i - 1)];
            proxy[static_cast<std::size_t>(t)] = w[static_cast<std::size_t>(t)] - fitted;
        }
    }

    const long skip = std::max<long>({p, q > 0 ? std::min<long>({n / 4, 20, std::max<long>(8, p + q + 5)}) + q : 0, 1});
    if (n - skip <= p + q + 1) return start;
    Eigen::MatrixXd design(n - skip, p + q);
    Eigen::VectorXd response(n - skip);
    for (long r = 0; r < n - skip; ++r) {
        const long t = r + skip;
        response(r) = w[static_cast<std::size_t>(t)];
        for (int i = 0; i < p; ++i) design(r, i) = w[static_cast<std::size_t>(t - i - 1)];
        for (int j = 0; j < q; ++j) design(r, p + j) = proxy[static_cast<std::size_t>(t - j - 1)];
    }
    const Eigen::VectorXd estimate = design.colPivHouseholderQr().solve(response);
    for (int i = 0; i < p + q; ++i) {
        const double value = estimate(i);
        start[static_cast<std::size_t>(i)] = std::isfinite(value) ? value : 0.0;
    }
    return start;
}

void shrink_until_feasible(std::vector<double>& params, int p, int q) {
    for (int attempt = 0; attempt < 60; ++attempt) {
        const std::span<const double> phi(params.data(), static_cast<std::size_t>(p));
        const std::span<const double> theta(params.data() + p, static_cast<std::size_t>(q));
        if (roots_outside(phi, kArStationarityMargin) &&
            roots_outside(theta, kMaInvertibilityMargin)) {
            return;
        }
        for (int i = 0; i < p + q; ++i) params[static_cast<std::size_t>(i)] *= 0.9;
    }
    std::fill(params.begin(), params.begin() + (p + q), 0.0);
}

ArimaModel finish_fit(const CssProblem& problem, std::span<const double> y,
                      const ArimaOrder& order, std::span<const double> phi,
                      std::span<const double> theta, double mu) {
    std::vector<double> innovations;
    const double sse = problem.sum_of_squares(phi, theta, mu, &innovations);
    const int n_eff = static_cast<int>(problem.z.size()) - std::max(order.p, order.q);
    if (n_eff <= 0 || !std::isfinite(sse)) {
        throw std::runtime_error("arima fit failed for order " + order.to_string());
    }
    ArimaModel model;
    model.order = order;
    model.ar.assign(phi.begin(), phi.end());
    model.ma.assign(theta.begin(), theta.end());
    model.intercept = mu;
    model.sigma2 = sse / static_cast<double>(n_eff);
    if (!(model.sigma2 > 0.0)) {
        // A perfectly deterministic series; keep a floor so the AIC is defined.
        model.sigma2 = std::numeric_limits<double>::min();
    }
    model.aic = static_cast<double>(n_eff) * std::log(model.sigma2) +
                2.0 * static_cast<double>(order.p + order.q + 2);
    model.n_effective = n_eff;

    const auto& z = problem.z;
    model.diff_tail.resize(static_cast<std::size_t>(order.p));
    for (int i = 0; i < order.p; ++i) {
        model.diff_tail[static_cast<std::size_t>(i)] = z[z.size() - 1 - static_cast<std::size_t>(i)] - mu;
    }
    model.innovation_tail.resize(static_cast<std::size_t>(order.q));
    for (int j = 0; j < order.q; ++j) {
        model.innovation_tail[static_cast<std::size_t>(j)] =
            innovations[innovations.size() - 1 - static_cast<std::size_t>(j)];
    }
    model.last_level = y.back();
    return model;
}

}  // namespace

ArimaModel fit_arima(std::span<const double> y, const ArimaOrder& order) {
    if (order.p < 0 || order.p > 5 || order.q < 0 || order.q > 5 || order.d < 0 || order.d > 1) {
        throw std::invalid_argument("arima order out of supported bounds " + order.to_string());
    }
    for (double v : y) {
        if (!std::isfinite(v)) throw std::invalid_argument("fit_arima: non-finite input");
    }
    if (static_cast<long>(y.size()) - order.d < 10 + order.p + order.q) {
        throw std::invalid_argument("fit_arima: series too short for order " + order.to_string());
    }

    const std::vector<double> z = difference(y, order.d);
    CssProblem problem;
    problem.z = z;
    problem.p = order.p;
    problem.q = order.q;
    problem.estimate_mean = (order.d == 0);  // drift off after differencing
    problem.fixed_mean = 0.0;

    const double z_mean = std::accumulate(z.begin(), z.end(), 0.0) / static_cast<double>(z.size());

    if (order.p == 0 && order.q == 0) {
        const double mu = problem.estimate_mean ? z_mean : 0.0;
        return finish_fit(problem, y, order, {}, {}, mu);
    }

    std::vector<std::vector<double>> starts;
    {
        std::vector<double> zero(static_cast<std::size_t>(problem.dim()), 0.0);
        if (problem.estimate_mean) zero.back() = z_mean;
        starts.push_back(std::move(zero));

        std::vector<double> w(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) w[i] = z[i] - z_mean;
        std::vector<double> hr = hannan_rissanen_start(w, order.p, order.q);
        shrink_until_feasible(hr, order.p, order.q);
        if (problem.estimate_mean) hr.push_back(z_mean);
        if (hr != starts.front()) starts.push_back(std::move(hr));
    }

    NelderMeadOptions options;
    options.max_iterations = 500;
    options.parameter_tolerance = 1e-8;
    options.initial_step = 0.1;

    auto objective = [&problem](std::span<const double> params) { return problem(params); };

    NelderMeadResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (const auto& start : starts) {
        const NelderMeadResult run = nelder_mead(objective, start, options);
        if (run.value < best.value) best = run;
    }
    if (!std::isfinite(best.value) || best.value >= kInfeasible) {
        throw std::runtime_error("fit_arima: no admissible optimum for order " + order.to_string());
    }

    auto ma_at_boundary = [&](const std::vector<double>& params) {
        const std::span<const double> theta(params.data() + order.p, static_cast<std::size_t>(order.q));
        return !roots_outside(theta, 1.0001);
    };

    // Boundary MA optima get one retry from a perturbed start before being reported.
    if (ma_at_boundary(best.x)) {
        std::vector<double> perturbed = best.x;
        for (int j = 0; j < order.q; ++j) perturbed[static_cast<std::size_t>(order.p + j)] *= 0.8;
        const NelderMeadResult retry = nelder_mead(objective, perturbed, options);
        if (retry.value < best.value && !ma_at_boundary(retry.x)) best = retry;
        if (ma_at_boundary(best.x)) {
            throw std::runtime_error("fit_arima: non-invertible MA optimum for order " +
                                     order.to_string());
        }
    }

    const std::span<const double> phi(best.x.data(), static_cast<std::size_t>(order.p));
    const std::span<const double> theta(best.x.data() + order.p, static_cast<std::size_t>(order.q));
    const double mu = problem.estimate_mean ? best.x.back() : 0.0;

    if (!roots_outside(phi, kArStationarityMargin)) {
        throw std::runtime_error("fit_arima: non-stationary AR optimum for order " +
                                 order.to_string());
    }

    return finish_fit(problem, y, order, phi, theta, mu);
}

ArimaModel select_order(std::span<const double> y, const OrderSearch& search) {
    bool have_best = false;
    ArimaModel best;
    double best_score = std::numeric_limits<double>::infinity();
    std::string last_error = "empty search grid";

    std::vector<int> d_choices = search.d_choices;
    const bool pretest = std::find(d_choices.begin(), d_choices.end(), 0) != d_choices.end() &&
                         std::find(d_choices.begin(), d_choices.end(), 1) != d_choices.end();
    if (pretest) {
        int chosen_d = 1;
        try {
            const AdfResult unit_root = adf_test(y);
            if (unit_root.statistic < unit_root.critical_values.at(0.05)) chosen_d = 0;
        } catch (const std::exception&) {
            chosen_d = d_choices.front();  // degenerate input; let fit_arima report it
        }
        d_choices = {chosen_d};
    }

    for (int d : d_choices) {
        for (int p = 0; p <= search.max_p; ++p) {
            for (int q = 0; q <= search.max_q; ++q) {
                ArimaModel candidate;
                try {
                    candidate = fit_arima(y, ArimaOrder{p, d, q});
                } catch (const std::exception& e) {
                    last_error = e.what();
                    continue;
                }
                const double k = static_cast<double>(p + q + 2);
                const double n_eff = static_cast<double>(candidate.n_effective);
                const double score = search.criterion == OrderSearch::Criterion::aic
                                         ? candidate.aic
                                         : n_eff * std::log(candidate.sigma2) + std::log(n_eff) * k;
                const int params = p + q;
                const int best_params = best.order.p + best.order.q;
                const bool better =
                    !have_best || score < best_score ||
                    (score == best_score &&
                     (params < best_params || (params == best_params && q < best.order.q)));
                if (better) {
                    best = std::move(candidate);
                    best_score = score;
                    have_best = true;
                }
            }
        }
    }
    if (!have_best) {
        throw std::runtime_error("select_order: no order converged (last error: " + last_error + ")");
    }
    return best;
}

std::vector<double> forecast_arima(const ArimaModel& model, int horizon) {
    if (horizon < 1) throw std::invalid_argument("forecast horizon must be >= 1");
    const int p = model.order.p;
    const int q = model.order.q;

    // w holds mean-adjusted differenced values, most recent last.
    std::vector<double> w(model.diff_tail.rbegin(), model.diff_tail.rend());
    std::vector<double> eps(model.innovation_tail.rbegin(), model.innovation_tail.rend());

    std::vector<double> diff_forecast;
    diff_forecast.reserve(static_cast<std::size_t>(horizon));
    for (int step = 0; step < horizon; ++step) {
        double w_hat = 0.0;
        for (int i = 0; i < p; ++i) {
            w_hat += model.ar[static_cast<std::size_t>(i)] * w[w.size() - 1 - static_cast<std::size_t>(i)];
        }
        for (int j = 0; j < q; ++j) {
            if (eps.size() > static_cast<std::size_t>(j)) {
                w_hat += model.ma[static_cast<std::size_t>(j)] *
                         eps[eps.size() - 1 - static_cast<std::size_t>(j)];
            }
        }
        w.push_back(w_hat);
        eps.push_back(0.0);  // future innovations at their expectation
        diff_forecast.push_back(w_hat + model.intercept);
    }

    if (model.order.d == 0) return diff_forecast;
    std::vector<double> level;
    level.reserve(diff_forecast.size());
    double current = model.last_level;
    for (double step : diff_forecast) {
        current += step;
        level.push_back(current);
    }
    return level;
}

}  // namespace marketcast
