#include "marketcast/residual_net.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "marketcast/rng.hpp"

namespace marketcast {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Flat parameter layout for one LSTM cell (input size 1, hidden size H) plus
// the linear readout. Gate order: input, forget, candidate, output.
struct Layout {
    int hidden = 0;

    [[nodiscard]] std::size_t wx(int gate, int unit) const {
        return static_cast<std::size_t>(gate * hidden + unit);
    }
    [[nodiscard]] std::size_t wh(int gate, int unit, int prev) const {
        return static_cast<std::size_t>(4 * hidden + (gate * hidden + unit) * hidden + prev);
    }
    [[nodiscard]] std::size_t bias(int gate, int unit) const {
        return static_cast<std::size_t>(4 * hidden + 4 * hidden * hidden + gate * hidden + unit);
    }
    [[nodiscard]] std::size_t w_out(int unit) const {
        return static_cast<std::size_t>(4 * hidden + 4 * hidden * hidden + 4 * hidden + unit);
    }
    [[nodiscard]] std::size_t b_out() const {
        return static_cast<std::size_t>(4 * hidden + 4 * hidden * hidden + 5 * hidden);
    }
    [[nodiscard]] std::size_t size() const {
        return static_cast<std::size_t>(4 * hidden + 4 * hidden * hidden + 5 * hidden + 1);
    }
};

// Per-sample forward caches used by backpropagation through time.
struct Trace {
    // step-major, each of length steps * H
    std::vector<double> gate_i, gate_f, gate_g, gate_o, cell, tanh_cell, hidden_prev;
    double output = 0.0;

    void resize(int steps, int hidden) {
        const std::size_t n = static_cast<std::size_t>(steps) * static_cast<std::size_t>(hidden);
        gate_i.resize(n);
        gate_f.resize(n);
        gate_g.resize(n);
        gate_o.resize(n);
        cell.resize(n);
        tanh_cell.resize(n);
        hidden_prev.resize(n);
    }
};

double forward_pass(const Layout& layout, std::span<const double> theta,
                    std::span<const double> window, std::span<const double> dropout_mask,
                    Trace* trace) {
    const int hidden = layout.hidden;
    const int steps = static_cast<int>(window.size());
    std::vector<double> h(static_cast<std::size_t>(hidden), 0.0);
    std::vector<double> c(static_cast<std::size_t>(hidden), 0.0);
    std::vector<double> pre(static_cast<std::size_t>(4 * hidden), 0.0);
    if (trace != nullptr) trace->resize(steps, hidden);

    for (int t = 0; t < steps; ++t) {
        const double x = window[static_cast<std::size_t>(t)];
        for (int gate = 0; gate < 4; ++gate) {
            for (int u = 0; u < hidden; ++u) {
                double acc = theta[layout.wx(gate, u)] * x + theta[layout.bias(gate, u)];
                const double* wh_row = theta.data() + layout.wh(gate, u, 0);
                for (int prev = 0; prev < hidden; ++prev) acc += wh_row[prev] * h[static_cast<std::size_t>(prev)];
                pre[static_cast<std::size_t>(gate * hidden + u)] = acc;
            }
        }
        const std::size_t base = static_cast<std::size_t>(t) * static_cast<std::size_t>(hidden);
        for (int u = 0; u < hidden; ++u) {
            const std::size_t su = static_cast<std::size_t>(u);
            const double gi = sigmoid(pre[su]);
            const double gf = sigmoid(pre[static_cast<std::size_t>(hidden) + su]);
            const double gg = std::tanh(pre[static_cast<std::size_t>(2 * hidden) + su]);
            const double go = sigmoid(pre[static_cast<std::size_t>(3 * hidden) + su]);
            const double c_new = gf * c[su] + gi * gg;
            const double tc = std::tanh(c_new);
            if (trace != nullptr) {
                trace->gate_i[base + su] = gi;
                trace->gate_f[base + su] = gf;
                trace->gate_g[base + su] = gg;
                trace->gate_o[base + su] = go;
                trace->cell[base + su] = c_new;
                trace->tanh_cell[base + su] = tc;
                trace->hidden_prev[base + su] = h[su];
            }
            c[su] = c_new;
            h[su] = go * tc;
        }
    }

    double output = theta[layout.b_out()];
    for (int u = 0; u < hidden; ++u) {
        const double mask = dropout_mask.empty() ? 1.0 : dropout_mask[static_cast<std::size_t>(u)];
        output += theta[layout.w_out(u)] * h[static_cast<std::size_t>(u)] * mask;
    }
    if (trace != nullptr) trace->output = output;
    return output;
}

// Accumulates the gradient of (output_grad * y_hat) into grad.
void backward_pass(const Layout& layout, std::span<const double> theta,
                   std::span<const double> window, std::span<const double> dropout_mask,
                   const Trace& trace, double output_grad, std::span<double> grad) {
    const int hidden = layout.hidden;
    const int steps = static_cast<int>(window.size());
    const std::size_t last = static_cast<std::size_t>(steps - 1) * static_cast<std::size_t>(hidden);

    std::vector<double> dh(static_cast<std::size_t>(hidden), 0.0);
    std::vector<double> dc(static_cast<std::size_t>(hidden), 0.0);

    grad[layout.b_out()] += output_grad;
    for (int u = 0; u < hidden; ++u) {
        const std::size_t su = static_cast<std::size_t>(u);
        const double mask = dropout_mask.empty() ? 1.0 : dropout_mask[su];
        const double h_last = trace.gate_o[last + su] * trace.tanh_cell[last + su];
        grad[layout.w_out(u)] += output_grad * h_last * mask;
        dh[su] = output_grad * theta[layout.w_out(u)] * mask;
    }

    std::vector<double> dpre(static_cast<std::size_t>(4 * hidden), 0.0);
    std::vector<double> dh_prev(static_cast<std::size_t>(hidden), 0.0);
    for (int t = steps - 1; t >= 0; --t) {
        const std::size_t base = static_cast<std::size_t>(t) * static_cast<std::size_t>(hidden);
        const double x = window[static_cast<std::size_t>(t)];
        for (int u = 0; u < hidden; ++u) {
            const std::size_t su = static_cast<std::size_t>(u);
            const double gi = trace.gate_i[base + su];
            const double gf = trace.gate_f[base + su];
            const double gg = trace.gate_g[base + su];
            const double go = trace.gate_o[base + su];
            const double tc = trace.tanh_cell[base + su];
            const double c_prev = t > 0 ? trace.cell[base - static_cast<std::size_t>(hidden) + su] : 0.0;

            const double dout = dh[su] * tc;
            const double dcell = dc[su] + dh[su] * go * (1.0 - tc * tc);
            const double dforget = dcell * c_prev;
            const double dinput = dcell * gg;
            const double dcand = dcell * gi;

            dpre[su] = dinput * gi * (1.0 - gi);
            dpre[static_cast<std::size_t>(hidden) + su] = dforget * gf * (1.0 - gf);
            dpre[static_cast<std::size_t>(2 * hidden) + su] = dcand * (1.0 - gg * gg);
            dpre[static_cast<std::size_t>(3 * hidden) + su] = dout * go * (1.0 - go);

            dc[su] = dcell * gf;
        }
        std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
        for (int gate = 0; gate < 4; ++gate) {
            for (int u = 0; u < hidden; ++u) {
                const double d = dpre[static_cast<std::size_t>(gate * hidden + u)];
                if (d == 0.0) continue;
                grad[layout.wx(gate, u)] += d * x;
                grad[layout.bias(gate, u)] += d;
                double* grad_row = grad.data() + layout.wh(gate, u, 0);
                const double* wh_row = theta.data() + layout.wh(gate, u, 0);
                const double* h_prev_row = trace.hidden_prev.data() + base;
                for (int prev = 0; prev < hidden; ++prev) {
                    grad_row[prev] += d * h_prev_row[prev];
                    dh_prev[static_cast<std::size_t>(prev)] += d * wh_row[prev];
                }
            }
        }
        dh = dh_prev;
    }
}

MinMaxScaler fit_scaler_or_flat(std::span<const double> values) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*hi > *lo) return MinMaxScaler(*lo, *hi);
    // Constant residuals: unit-width identity map keeps the transform defined.
    return MinMaxScaler(*lo, *lo + 1.0);
}

std::vector<double> init_parameters(const Layout& layout, Rng& rng) {
    std::vector<double> theta(layout.size());
    for (double& value : theta) value = rng.uniform(-0.05, 0.05);
    for (int u = 0; u < layout.hidden; ++u) theta[layout.bias(1, u)] = 1.0;  // forget gate
    return theta;
}

}  // namespace

WindowDataset make_windows(std::span<const double> e, int window) {
    if (window < 1) throw std::invalid_argument("make_windows: window must be >= 1");
    if (e.size() <= static_cast<std::size_t>(window)) {
        throw std::invalid_argument("make_windows: need more than window observations");
    }
    WindowDataset dataset;
    const std::size_t count = e.size() - static_cast<std::size_t>(window);
    dataset.inputs.reserve(count);
    dataset.targets.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        dataset.inputs.emplace_back(e.begin() + static_cast<long>(i),
                                    e.begin() + static_cast<long>(i) + window);
        dataset.targets.push_back(e[i + static_cast<std::size_t>(window)]);
    }
    return dataset;
}

ResidualNet::ResidualNet(NetConfig config, std::vector<double> parameters, MinMaxScaler scaler,
                         std::vector<double> loss_trace, bool batch_size_reduced)
    : config_(config),
      parameters_(std::move(parameters)),
      scaler_(scaler),
      loss_trace_(std::move(loss_trace)),
      batch_size_reduced_(batch_size_reduced) {}

double ResidualNet::forward_scaled(std::span<const double> scaled_window) const {
    Layout layout{config_.hidden_units};
    return forward_pass(layout, parameters_, scaled_window, {}, nullptr);
}

ResidualNet train(std::span<const double> residuals, const NetConfig& config) {
    if (config.hidden_units < 1 || config.epochs < 1 || config.batch_size < 1 ||
        config.window < 1 || config.dropout_rate < 0.0 || config.dropout_rate >= 1.0) {
        throw std::invalid_argument("train: invalid network configuration");
    }
    const MinMaxScaler scaler = fit_scaler_or_flat(residuals);
    const std::vector<double> scaled = scaler.transform(residuals);
    const WindowDataset dataset = make_windows(scaled, config.window);
    const std::size_t sample_count = dataset.targets.size();

    int batch_size = config.batch_size;
    bool reduced = false;
    if (sample_count < 2 * static_cast<std::size_t>(config.batch_size)) {
        batch_size = static_cast<int>(sample_count);
        reduced = true;
    }

    const Layout layout{config.hidden_units};
    Rng rng(config.seed);
    std::vector<double> theta = init_parameters(layout, rng);

    std::vector<double> adam_m(layout.size(), 0.0);
    std::vector<double> adam_v(layout.size(), 0.0);
    std::vector<double> grad(layout.size(), 0.0);
    long adam_step = 0;

    std::vector<std::size_t> order(sample_count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> mask(static_cast<std::size_t>(config.hidden_units), 1.0);
    const bool use_dropout = config.dropout_rate > 0.0;

    Trace trace;
    std::vector<double> loss_trace;
    loss_trace.reserve(static_cast<std::size_t>(config.epochs));

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_squared_error = 0.0;
        for (std::size_t begin = 0; begin < sample_count; begin += static_cast<std::size_t>(batch_size)) {
            const std::size_t end = std::min(begin + static_cast<std::size_t>(batch_size), sample_count);
            const double batch_n = static_cast<double>(end - begin);
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t idx = begin; idx < end; ++idx) {
                const std::size_t sample = order[idx];
                if (use_dropout) {
                    const double keep = 1.0 - config.dropout_rate;
                    for (double& m : mask) m = rng.uniform() < keep ? 1.0 / keep : 0.0;
                }
                const std::span<const double> mask_span =
                    use_dropout ? std::span<const double>(mask) : std::span<const double>();
                const double prediction =
                    forward_pass(layout, theta, dataset.inputs[sample], mask_span, &trace);
                const double error = prediction - dataset.targets[sample];
                epoch_squared_error += error * error;
                backward_pass(layout, theta, dataset.inputs[sample], mask_span, trace,
                              2.0 * error / batch_n, grad);
            }
            ++adam_step;
            const double bias1 = 1.0 - std::pow(config.adam_beta1, static_cast<double>(adam_step));
            const double bias2 = 1.0 - std::pow(config.adam_beta2, static_cast<double>(adam_step));
            for (std::size_t i = 0; i < theta.size(); ++i) {
                adam_m[i] = config.adam_beta1 * adam_m[i] + (1.0 - config.adam_beta1) * grad[i];
                adam_v[i] = config.adam_beta2 * adam_v[i] + (1.0 - config.adam_beta2) * grad[i] * grad[i];
                theta[i] -= config.learning_rate * (adam_m[i] / bias1) /
                            (std::sqrt(adam_v[i] / bias2) + config.adam_epsilon);
            }
        }
        const double epoch_loss = epoch_squared_error / static_cast<double>(sample_count);
        if (!std::isfinite(epoch_loss)) {
            throw std::runtime_error("train: loss diverged at epoch " + std::to_string(epoch));
        }
        loss_trace.push_back(epoch_loss);
    }

    return ResidualNet(config, std::move(theta), scaler, std::move(loss_trace), reduced);
}

std::vector<double> predict_residuals(const ResidualNet& net, std::span<const double> last_window,
                                      int horizon) {
    const NetConfig& config = net.config();
    if (static_cast<int>(last_window.size()) != config.window) {
        throw std::invalid_argument("predict_residuals: window length mismatch");
    }
    if (horizon < 1) throw std::invalid_argument("predict_residuals: horizon must be >= 1");

    std::vector<double> window = net.scaler().transform(last_window);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(horizon));
    for (int step = 0; step < horizon; ++step) {
        const double scaled_prediction = net.forward_scaled(window);
        out.push_back(net.scaler().inverse_transform(scaled_prediction));
        window.erase(window.begin());
        window.push_back(scaled_prediction);
    }
    return out;
}

double gradient_check(const NetConfig& config, const std::vector<std::vector<double>>& inputs,
                      std::span<const double> targets) {
    if (inputs.size() != targets.size() || inputs.empty()) {
        throw std::invalid_argument("gradient_check: inputs and targets must align");
    }
    const Layout layout{config.hidden_units};
    Rng rng(config.seed);
    std::vector<double> theta = init_parameters(layout, rng);

    auto batch_loss = [&](std::span<const double> params) {
        double total = 0.0;
        for (std::size_t s = 0; s < inputs.size(); ++s) {
            const double prediction = forward_pass(layout, params, inputs[s], {}, nullptr);
            const double error = prediction - targets[s];
            total += error * error;
        }
        return total / static_cast<double>(inputs.size());
    };

    std::vector<double> analytic(layout.size(), 0.0);
    Trace trace;
    for (std::size_t s = 0; s < inputs.size(); ++s) {
        const double prediction = forward_pass(layout, theta, inputs[s], {}, &trace);
        const double error = prediction - targets[s];
        backward_pass(layout, theta, inputs[s], {}, trace,
                      2.0 * error / static_cast<double>(inputs.size()), analytic);
    }

    constexpr double step = 1e-5;
    double worst = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double saved = theta[i];
        theta[i] = saved + step;
        const double up = batch_loss(theta);
        theta[i] = saved - step;
        const double down = batch_loss(theta);
        theta[i] = saved;
        const double numeric = (up - down) / (2.0 * step);
        const double scale = std::max(std::abs(analytic[i]) + std::abs(numeric), 1e-4);
        worst = std::max(worst, std::abs(analytic[i] - numeric) / scale);
    }
    return worst;
}

double gradient_check(const NetConfig& config) {
    Rng rng(config.seed + 1);
    const int samples = 3;
    std::vector<std::vector<double>> inputs;
    std::vector<double> targets;
    for (int s = 0; s < samples; ++s) {
        std::vector<double> window(static_cast<std::size_t>(config.window));
        for (double& x : window) x = rng.uniform(-1.0, 1.0);
        inputs.push_back(std::move(window));
        targets.push_back(rng.uniform(-1.0, 1.0));
    }
    return gradient_check(config, inputs, targets);
}

}  // namespace marketcast
