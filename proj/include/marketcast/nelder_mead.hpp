#pragma once

#include <functional>
#include <span>
#include <vector>

namespace marketcast {

struct NelderMeadOptions {
    int max_iterations = 500;
    double parameter_tolerance = 1e-8;  // stop when the simplex diameter falls below this
    double initial_step = 0.1;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/**
 * @brief Derivative-free simplex minimization (Nelder-Mead).
 *
 * Deterministic: the search path depends only on the starting point and the
 * objective. Objectives may return +infinity to mark infeasible regions.
 */
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                             std::span<const double> start,
                             const NelderMeadOptions& options = {});

}  // namespace marketcast
