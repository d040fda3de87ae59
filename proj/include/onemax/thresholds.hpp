#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "onemax/core.hpp"

namespace onemax {

/// One member of the threshold family: robustness target r in
/// [1/theta, theta^(-1/2)] and interpolation knob rho in [0, 1].
struct ThresholdSpec {
    double r;
    double rho;
    ProblemParams params;

    ThresholdSpec(double r_, double rho_, ProblemParams params_);

    double r_theta() const { return r * params.theta; }      // consistency anchor r*theta
    double inv_r() const { return 1.0 / r; }                 // robustness anchor 1/r
    double consistency() const { return 1.0 / (r * params.theta); }
};

/// Trust parametrization r = theta^-(1 - lambda/2); lambda=0 is full
/// robustness (r = 1/theta), lambda=1 is full consistency (r = theta^-1/2).
double lambda_to_r(double lambda, const ProblemParams& params);

/// Inverse of lambda_to_r.
double r_to_lambda(double r, const ProblemParams& params);

/// The line through (r*theta, r*theta) and (theta, 1/r).
double varphi(const ThresholdSpec& spec, double z);

/// Threshold value for prediction y. Four pieces, intervals closed on the
/// left: r*theta on [1, r*theta), varphi on [r*theta, 1/r), a linear ramp from
/// varphi(1/r) up to 1/r on [1/r, 1/r + rho*(theta - 1/r)), then flat 1/r.
/// For rho = 0 the ramp is empty and the threshold jumps at 1/r.
double phi_rho(const ThresholdSpec& spec, double y);

/// Uniformly samples phi_rho on a grid of `count` points spanning [1, theta].
std::vector<std::pair<double, double>> sample_threshold(const ThresholdSpec& spec,
                                                        std::size_t count);

enum class ParetoConstraint {
    below_robust_floor,   // Phi(z) < r*theta
    above_consistency_cap, // Phi(z) > 1/r
    below_ratio_line,     // Phi(z) < z/(r*theta) for z in [r*theta, theta]
    above_identity,       // Phi(z) > z for z in [r*theta, theta]
};

const char* to_string(ParetoConstraint c);

struct ParetoViolation {
    double z;
    double phi_value;
    ParetoConstraint constraint;
};

struct ParetoCheckResult {
    bool optimal = true;
    std::optional<ParetoViolation> violation; // first violating grid point
};

/// Checks a sampled threshold against the two constraint pairs that
/// characterize robustness r together with consistency 1/(r*theta). The grid
/// must cover [1, theta] with at least two increasing points.
ParetoCheckResult is_pareto_optimal_threshold(std::span<const std::pair<double, double>> samples,
                                              const ThresholdSpec& spec, double tol);

} // namespace onemax
