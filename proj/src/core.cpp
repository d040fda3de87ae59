#include "onemax/core.hpp"

#include <algorithm>
#include <cmath>

namespace onemax {

Instance make_instance(const ProblemParams& params, std::vector<double> prices) {
    if (prices.empty())
        throw domain_error("Instance: price sequence must be nonempty");
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (!(prices[i] >= 1.0 && prices[i] <= params.theta))
            throw domain_error("Instance: price " + std::to_string(prices[i]) + " at position " +
                               std::to_string(i + 1) + " outside [1, theta]");
    }
    return Instance{std::move(prices)};
}

double max_price(const Instance& instance) {
    if (instance.prices.empty())
        throw domain_error("max_price: empty instance");
    return *std::max_element(instance.prices.begin(), instance.prices.end());
}

Outcome run_threshold(std::span<const double> prices, double threshold,
                      const ProblemParams& params) {
    if (!(threshold >= 1.0 && threshold <= params.theta))
        throw domain_error("run_threshold: threshold " + std::to_string(threshold) +
                           " outside [1, theta]");
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (prices[i] >= threshold)
            return Outcome{prices[i], i + 1};
    }
    return Outcome{1.0, std::nullopt};
}

Outcome run_threshold(const Instance& instance, double threshold, const ProblemParams& params) {
    return run_threshold(std::span<const double>(instance.prices), threshold, params);
}

double multiplicative_error(double p_star, double y, const ProblemParams& params) {
    if (!(p_star >= 1.0 && p_star <= params.theta))
        throw domain_error("multiplicative_error: p* outside [1, theta]");
    if (!(y >= 1.0 && y <= params.theta))
        throw domain_error("multiplicative_error: y outside [1, theta]");
    return std::min(p_star / y, y / p_star);
}

double additive_error(double p_star, double y) {
    return std::abs(p_star - y);
}

Instance worst_case_instance(const ProblemParams& params, std::size_t n, double q) {
    if (n < 2)
        throw domain_error("worst_case_instance: n must be >= 2");
    if (!(q >= 1.0 && q <= params.theta))
        throw domain_error("worst_case_instance: q outside [1, theta]");
    const double step = (params.theta - 1.0) / static_cast<double>(n - 1);
    std::vector<double> prices(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double grid = 1.0 + step * static_cast<double>(i);
        prices[i] = grid <= q ? grid : 1.0;
    }
    return Instance{std::move(prices)};
}

double instance_grid_step(const ProblemParams& params, std::size_t n) {
    if (n < 2)
        throw domain_error("instance_grid_step: n must be >= 2");
    return (params.theta - 1.0) / static_cast<double>(n - 1);
}

} // namespace onemax
