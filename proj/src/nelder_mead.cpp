#include "marketcast/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace marketcast {

namespace {

double simplex_diameter(const std::vector<std::vector<double>>& vertices) {
    double diameter = 0.0;
    const auto& best = vertices.front();
    for (std::size_t i = 1; i < vertices.size(); ++i) {
        for (std::size_t j = 0; j < best.size(); ++j) {
            diameter = std::max(diameter, std::abs(vertices[i][j] - best[j]));
        }
    }
    return diameter;
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                             std::span<const double> start, const NelderMeadOptions& options) {
    const std::size_t dim = start.size();
    if (dim == 0) {
        NelderMeadResult r;
        r.x = {};
        r.value = objective({});
        r.converged = true;
        return r;
    }

    constexpr double reflect_coeff = 1.0;
    constexpr double expand_coeff = 2.0;
    constexpr double contract_coeff = 0.5;
    constexpr double shrink_coeff = 0.5;

    std::vector<std::vector<double>> vertices(dim + 1, std::vector<double>(start.begin(), start.end()));
    for (std::size_t i = 0; i < dim; ++i) {
        const double base = vertices[i + 1][i];
        vertices[i + 1][i] = base + std::max(options.initial_step, options.initial_step * std::abs(base));
    }

    std::vector<double> values(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) {
        values[i] = objective(vertices[i]);
    }

    std::vector<std::size_t> order(dim + 1);
    auto sort_vertices = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        std::vector<std::vector<double>> sorted_v(dim + 1);
        std::vector<double> sorted_f(dim + 1);
        for (std::size_t i = 0; i <= dim; ++i) {
            sorted_v[i] = std::move(vertices[order[i]]);
            sorted_f[i] = values[order[i]];
        }
        vertices = std::move(sorted_v);
        values = std::move(sorted_f);
    };
    sort_vertices();

    std::vector<double> centroid(dim), candidate(dim);
    NelderMeadResult result;
    int iteration = 0;
    for (; iteration < options.max_iterations; ++iteration) {
        if (simplex_diameter(vertices) < options.parameter_tolerance) {
            result.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = 0; j < dim; ++j) centroid[j] += vertices[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        auto blend = [&](double coeff) {
            for (std::size_t j = 0; j < dim; ++j) {
                candidate[j] = centroid[j] + coeff * (centroid[j] - vertices[dim][j]);
            }
        };

        blend(reflect_coeff);
        const double reflected = objective(candidate);

        if (reflected < values[0]) {
            std::vector<double> reflected_point = candidate;
            blend(expand_coeff);
            const double expanded = objective(candidate);
            if (expanded < reflected) {
                vertices[dim] = candidate;
                values[dim] = expanded;
            } else {
                vertices[dim] = std::move(reflected_point);
                values[dim] = reflected;
            }
        } else if (reflected < values[dim - 1]) {
            vertices[dim] = candidate;
            values[dim] = reflected;
        } else {
            const bool outside = reflected < values[dim];
            if (outside) {
                blend(contract_coeff);
            } else {
                blend(-contract_coeff);
            }
            const double contracted = objective(candidate);
            const double reference = outside ? reflected : values[dim];
            if (contracted <= reference) {
                vertices[dim] = candidate;
                values[dim] = contracted;
            } else {
                for (std::size_t i = 1; i <= dim; ++i) {
                    for (std::size_t j = 0; j < dim; ++j) {
                        vertices[i][j] = vertices[0][j] + shrink_coeff * (vertices[i][j] - vertices[0][j]);
                    }
                    values[i] = objective(vertices[i]);
                }
            }
        }
        sort_vertices();
    }

    result.x = vertices[0];
    result.value = values[0];
    result.iterations = iteration;
    return result;
}

}  // namespace marketcast
