#include "marketcast/ets.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "marketcast/nelder_mead.hpp"

namespace marketcast {

namespace {

constexpr double kAlphaLo = 1e-4, kAlphaHi = 1.0 - 1e-4;
constexpr double kBetaFracLo = 1e-4, kBetaFracHi = 1.0 - 1e-4;  // beta = frac * alpha
constexpr double kPhiLo = 0.80, kPhiHi = 0.98;

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }

double logit(double s) { return std::log(s / (1.0 - s)); }

struct SmoothingParams {
    double alpha, beta, phi;
};

SmoothingParams decode(std::span<const double> u) {
    const double alpha = kAlphaLo + (kAlphaHi - kAlphaLo) * logistic(u[0]);
    const double frac = kBetaFracLo + (kBetaFracHi - kBetaFracLo) * logistic(u[1]);
    const double phi = kPhiLo + (kPhiHi - kPhiLo) * logistic(u[2]);
    return {alpha, frac * alpha, phi};
}

std::vector<double> encode(double alpha, double beta, double phi) {
    auto clamp01 = [](double s) { return std::min(std::max(s, 1e-9), 1.0 - 1e-9); };
    return {
        logit(clamp01((alpha - kAlphaLo) / (kAlphaHi - kAlphaLo))),
        logit(clamp01((beta / alpha - kBetaFracLo) / (kBetaFracHi - kBetaFracLo))),
        logit(clamp01((phi - kPhiLo) / (kPhiHi - kPhiLo))),
    };
}

// Runs the error recursion, returning e_t. With superpose = true the series is
// treated as zero and (l0, b0) supply a unit impulse, which yields the
// sensitivity of the errors to the initial states.
void run_recursion(std::span<const double> y, const SmoothingParams& params, double l0, double b0,
                   bool zero_series, std::vector<double>& errors, double* final_level,
                   double* final_trend) {
    double level = l0;
    double trend = b0;
    errors.resize(y.size());
    for (std::size_t t = 0; t < y.size(); ++t) {
        const double forecast = level + params.phi * trend;
        const double observation = zero_series ? 0.0 : y[t];
        const double e = observation - forecast;
        errors[t] = e;
        level = forecast + params.alpha * e;
        trend = params.phi * trend + params.beta * e;
    }
    if (final_level != nullptr) *final_level = level;
    if (final_trend != nullptr) *final_trend = trend;
}

struct ProfiledFit {
    double l0 = 0.0, b0 = 0.0;
    double sse = std::numeric_limits<double>::infinity();
};

// The errors are affine in (l0, b0); solve the 2x2 least-squares system exactly.
ProfiledFit profile_initial_states(std::span<const double> y, const SmoothingParams& params,
                                   std::vector<double>& base, std::vector<double>& level_sens,
                                   std::vector<double>& trend_sens) {
    run_recursion(y, params, 0.0, 0.0, false, base, nullptr, nullptr);
    run_recursion(y, params, 1.0, 0.0, true, level_sens, nullptr, nullptr);
    run_recursion(y, params, 0.0, 1.0, true, trend_sens, nullptr, nullptr);

    double a11 = 0.0, a12 = 0.0, a22 = 0.0, r1 = 0.0, r2 = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        a11 += level_sens[t] * level_sens[t];
        a12 += level_sens[t] * trend_sens[t];
        a22 += trend_sens[t] * trend_sens[t];
        r1 -= base[t] * level_sens[t];
        r2 -= base[t] * trend_sens[t];
    }
    const double ridge = 1e-12 * (a11 + a22);
    a11 += ridge;
    a22 += ridge;
    const double det = a11 * a22 - a12 * a12;
    ProfiledFit fit;
    if (!(std::abs(det) > 0.0)) return fit;
    fit.l0 = (r1 * a22 - r2 * a12) / det;
    fit.b0 = (a11 * r2 - a12 * r1) / det;
    double sse = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        const double e = base[t] + fit.l0 * level_sens[t] + fit.b0 * trend_sens[t];
        sse += e * e;
    }
    fit.sse = sse;
    return fit;
}

}  // namespace

EtsModel fit_ets(std::span<const double> y) {
    if (y.size() < 10) {
        throw std::invalid_argument("fit_ets needs at least 10 observations");
    }
    for (double v : y) {
        if (!std::isfinite(v)) throw std::invalid_argument("fit_ets: non-finite input");
    }

    std::vector<double> base, level_sens, trend_sens;
    auto objective = [&](std::span<const double> u) {
        const SmoothingParams params = decode(u);
        return profile_initial_states(y, params, base, level_sens, trend_sens).sse;
    };

    NelderMeadOptions options;
    options.max_iterations = 500;
    options.parameter_tolerance = 1e-8;
    options.initial_step = 0.25;

    NelderMeadResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (double alpha : {0.1, 0.5, 0.9}) {
        for (int beta_mode = 0; beta_mode < 2; ++beta_mode) {
            const double beta = beta_mode == 0 ? std::min(0.01, 0.5 * alpha) : 0.5 * alpha;
            for (double phi : {0.85, 0.95}) {
                const std::vector<double> start = encode(alpha, beta, phi);
                const NelderMeadResult run = nelder_mead(objective, start, options);
                if (run.value < best.value) best = run;
            }
        }
    }
    if (!std::isfinite(best.value)) {
        throw std::runtime_error("fit_ets: optimizer failed to find a finite fit");
    }

    const SmoothingParams params = decode(best.x);
    const ProfiledFit profiled = profile_initial_states(y, params, base, level_sens, trend_sens);

    EtsModel model;
    model.alpha = params.alpha;
    model.beta = params.beta;
    model.phi = params.phi;
    model.initial_level = profiled.l0;
    model.initial_trend = profiled.b0;
    model.sse = profiled.sse;
    model.train_size = y.size();
    std::vector<double> errors;
    run_recursion(y, params, profiled.l0, profiled.b0, false, errors, &model.final_level,
                  &model.final_trend);
    return model;
}

std::vector<double> forecast_ets(const EtsModel& model, int horizon) {
    if (horizon < 1) throw std::invalid_argument("forecast horizon must be >= 1");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(horizon));
    double damping_sum = 0.0;
    double damping_power = 1.0;
    for (int h = 1; h <= horizon; ++h) {
        damping_power *= model.phi;
        damping_sum += damping_power;
        out.push_back(model.final_level + damping_sum * model.final_trend);
    }
    return out;
}

std::vector<double> residuals_ets(const EtsModel& model, std::span<const double> y) {
    if (y.size() != model.train_size) {
        throw std::invalid_argument("residuals_ets: series length differs from the training series");
    }
    std::vector<double> errors;
    run_recursion(y, {model.alpha, model.beta, model.phi}, model.initial_level,
                  model.initial_trend, false, errors, nullptr, nullptr);
    return errors;
}

}  // namespace marketcast
