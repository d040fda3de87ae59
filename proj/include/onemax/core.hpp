#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace onemax {

/// Precondition violation on a documented input domain.
class domain_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical guarantee that should always hold failed at runtime.
class invariant_violation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Global environment of every computation: prices live in [1, theta].
struct ProblemParams {
    double theta;

    explicit ProblemParams(double theta_) : theta(theta_) {
        if (!(theta > 1.0))
            throw domain_error("ProblemParams: theta must be > 1, got " + std::to_string(theta_));
    }
};

/// A finite price sequence in [1, theta].
struct Instance {
    std::vector<double> prices;
};

/// Builds an Instance, checking every price against [1, theta].
Instance make_instance(const ProblemParams& params, std::vector<double> prices);

/// Result of running a threshold rule on an instance. `accepted_index` is
/// 1-based; when absent the payoff defaulted to 1.
struct Outcome {
    double payoff = 1.0;
    std::optional<std::size_t> accepted_index;
};

/// Maximum price p* of the sequence.
double max_price(const Instance& instance);

/// Accepts the first price >= threshold (closed comparison); payoff defaults
/// to 1 when no price reaches the threshold.
Outcome run_threshold(const Instance& instance, double threshold, const ProblemParams& params);

/// Same rule on a borrowed window of a larger series.
Outcome run_threshold(std::span<const double> prices, double threshold,
                      const ProblemParams& params);

/// Multiplicative error min(p*/y, y/p*) in [1/theta, 1]; 1 iff y == p*.
double multiplicative_error(double p_star, double y, const ProblemParams& params);

/// Additive error |p* - y|.
double additive_error(double p_star, double y);

/// Rising-grid instance that climbs from 1 toward theta in steps of
/// (theta-1)/(n-1) while the grid price stays <= q, then drops to 1.
/// Its maximum is the largest grid point <= q.
Instance worst_case_instance(const ProblemParams& params, std::size_t n, double q);

/// Grid step (theta-1)/(n-1) of worst_case_instance; the discretization slack
/// used throughout the bound verifications.
double instance_grid_step(const ProblemParams& params, std::size_t n);

} // namespace onemax
