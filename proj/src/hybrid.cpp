#include "marketcast/hybrid.hpp"

#include <stdexcept>

namespace marketcast {

HybridModel fit_hybrid(std::span<const double> y, const NetConfig& net_config) {
    EtsModel linear = fit_ets(y);
    std::vector<double> residuals = residuals_ets(linear, y);
    ResidualNet nonlinear = train(residuals, net_config);
    return HybridModel{std::move(linear), std::move(nonlinear), std::move(residuals)};
}

std::vector<double> forecast_hybrid(const HybridModel& model, int horizon) {
    if (horizon < 1) throw std::invalid_argument("forecast horizon must be >= 1");
    const int window = model.nonlinear.config().window;
    if (static_cast<int>(model.training_residuals.size()) < window) {
        throw std::runtime_error("forecast_hybrid: too few residuals for the network window");
    }
    std::vector<double> forecast = forecast_ets(model.linear, horizon);
    const std::span<const double> last_window(
        model.training_residuals.data() + model.training_residuals.size() - static_cast<std::size_t>(window),
        static_cast<std::size_t>(window));
    const std::vector<double> residual_part = predict_residuals(model.nonlinear, last_window, horizon);
    for (std::size_t i = 0; i < forecast.size(); ++i) {
        forecast[i] += residual_part[i];
    }
    return forecast;
}

}  // namespace marketcast
