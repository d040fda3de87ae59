#pragma once

#include <cstddef>

#include "onemax/core.hpp"
#include "onemax/thresholds.hpp"

namespace onemax {

/// Derived guarantee constants of one family member: the smoothness exponent
/// s_rho (+infinity when rho = 0 and the threshold is brittle) and the
/// additive smoothness slope beta*.
struct GuaranteeParams {
    ThresholdSpec spec;
    double s_rho;
    double beta_star;
};

GuaranteeParams make_guarantee_params(const ThresholdSpec& spec);

/// s_rho = max(1, (1/rho) * (ln theta / ln(r*theta) - 2)); rho = 0 yields
/// +infinity when the log ratio exceeds 2 and 1 otherwise.
double smoothness_exponent(const ThresholdSpec& spec);

/// Exponent s_1 of the rho = 1 member, the one used by all stochastic bounds.
double smoothness_exponent_rho1(const ThresholdSpec& spec);

/// Best exponent any algorithm with this consistency/robustness pair can
/// guarantee: ln theta / ln(r*theta) - 2 (may be below 1).
double lower_bound_exponent(const ThresholdSpec& spec);

/// Guaranteed ratio max(r, err^s_rho / (r*theta)) for a multiplicative error
/// level err in [1/theta, 1]. With the +infinity sentinel this is r for
/// err < 1 and the consistency 1/(r*theta) at err = 1.
double multiplicative_bound(const GuaranteeParams& gp, double err);

/// beta* = ((1 - r^2*theta)/(r*theta)) * max(1/(1-r), 1/(r*theta - 1)).
double additive_beta_star(const ThresholdSpec& spec);

/// Guaranteed ratio max(r, 1/(r*theta) - beta* * eta / p*) for additive error
/// eta >= 0 (valid for the rho = 1 member).
double additive_bound(const GuaranteeParams& gp, double eta, double p_star);

/// Realized ratios of the rho = 0 and rho = 1 members on the rising-grid
/// instance with maximum just below 1/r and prediction just above it. The
/// flat threshold forfeits every price while the ramped one still accepts.
struct BrittlenessRatios {
    double ratio_rho0;
    double ratio_rho1;
    double p_star;    // realized maximum of the instance
    double prediction;
};

BrittlenessRatios brittleness_witness(const ThresholdSpec& spec, double delta, std::size_t n);

/// Worst cell of an empirical bound-verification sweep. `min_slack` is the
/// minimum over the grid of (realized ratio - bound + grid step): a negative
/// value beyond float noise means the guarantee failed.
struct SlackReport {
    double min_slack;
    double worst_q;
    double worst_y;
    double worst_ratio;
    double worst_bound;
};

/// Sweeps (q, y) over uniform grids on [1, theta]^2, running the algorithm on
/// the rising-grid instance of length n and comparing the realized ratio with
/// the multiplicative guarantee at the realized error.
SlackReport verify_multiplicative_bound(const ThresholdSpec& spec, std::size_t n,
                                        std::size_t grid_q, std::size_t grid_y);

/// Same sweep against the additive guarantee (rho = 1 member).
SlackReport verify_additive_bound(const ThresholdSpec& spec, std::size_t n, std::size_t grid_q,
                                  std::size_t grid_y);

namespace serial {
/// Plain-loop reference kernels kept for testing the parallel versions.
SlackReport verify_multiplicative_bound(const ThresholdSpec& spec, std::size_t n,
                                        std::size_t grid_q, std::size_t grid_y);
SlackReport verify_additive_bound(const ThresholdSpec& spec, std::size_t n, std::size_t grid_q,
                                  std::size_t grid_y);
} // namespace serial

/// Published comparison values of the earlier randomized smooth family. The
/// printed factor (1 - e^rho)/rho is negative, so the magnitude is computed
/// as written; `exp_negative` evaluates the (1 - e^-rho)/rho reading instead.
enum class PriorBoundVariant {
    as_printed_magnitude,
    exp_negative,
};

struct PriorRandomizedBounds {
    double consistency;     // factor^2 / (r*theta)
    double max_robustness;  // factor * theta^(-1/2)
    double deviation_factor; // factor^2, the multiplicative distance from the front
};

PriorRandomizedBounds prior_randomized_bounds(double rho, double r, const ProblemParams& params,
                                              PriorBoundVariant variant);

/// Empirical slopes of the two adversarial constructions behind beta*: the
/// near-miss at 1/r with prediction theta, and the full-range miss with
/// prediction r*theta. Their maximum approaches beta* as eps -> 0, n -> inf.
struct AdditiveSlopeWitnesses {
    double slope_high_prediction; // y = theta, q = (1/r)/(1+eps)
    double slope_low_prediction;  // y = r*theta, q = theta
};

AdditiveSlopeWitnesses additive_slope_witnesses(const ThresholdSpec& spec, double eps,
                                                std::size_t n);

} // namespace onemax
