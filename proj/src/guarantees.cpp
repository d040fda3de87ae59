#include "onemax/guarantees.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "onemax/parallel.hpp"

namespace onemax {

namespace {

double log_ratio(const ThresholdSpec& spec) {
    const double rt = spec.r_theta();
    if (!(rt > 1.0))
        throw domain_error("smoothness exponent: requires r*theta > 1");
    return std::log(spec.params.theta) / std::log(rt);
}

} // namespace

double smoothness_exponent(const ThresholdSpec& spec) {
    const double excess = log_ratio(spec) - 2.0;
    if (spec.rho == 0.0)
        return excess > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
    return std::max(1.0, excess / spec.rho);
}

double smoothness_exponent_rho1(const ThresholdSpec& spec) {
    return std::max(1.0, log_ratio(spec) - 2.0);
}

double lower_bound_exponent(const ThresholdSpec& spec) {
    return log_ratio(spec) - 2.0;
}

double additive_beta_star(const ThresholdSpec& spec) {
    const double rt = spec.r_theta();
    if (!(spec.r < 1.0))
        throw domain_error("additive_beta_star: requires r < 1");
    if (!(rt > 1.0))
        throw domain_error("additive_beta_star: requires r*theta > 1");
    return (1.0 - spec.r * rt) / rt * std::max(1.0 / (1.0 - spec.r), 1.0 / (rt - 1.0));
}

GuaranteeParams make_guarantee_params(const ThresholdSpec& spec) {
    return GuaranteeParams{spec, smoothness_exponent(spec), additive_beta_star(spec)};
}

double multiplicative_bound(const GuaranteeParams& gp, double err) {
    const double theta = gp.spec.params.theta;
    constexpr double slack = 1e-12;
    if (!(err >= 1.0 / theta - slack && err <= 1.0 + slack))
        throw domain_error("multiplicative_bound: err outside [1/theta, 1]");
    err = std::clamp(err, 1.0 / theta, 1.0);
    const double consistency = gp.spec.consistency();
    if (std::isinf(gp.s_rho))
        return err < 1.0 ? gp.spec.r : consistency;
    return std::max(gp.spec.r, std::pow(err, gp.s_rho) * consistency);
}

double additive_bound(const GuaranteeParams& gp, double eta, double p_star) {
    if (!(eta >= 0.0))
        throw domain_error("additive_bound: eta must be >= 0");
    if (!(p_star >= 1.0 && p_star <= gp.spec.params.theta))
        throw domain_error("additive_bound: p* outside [1, theta]");
    return std::max(gp.spec.r, gp.spec.consistency() - gp.beta_star * eta / p_star);
}

BrittlenessRatios brittleness_witness(const ThresholdSpec& spec, double delta, std::size_t n) {
    const double ir = spec.inv_r();
    if (!(delta > 0.0))
        throw domain_error("brittleness_witness: delta must be > 0");
    if (!(ir - delta > spec.r_theta()))
        throw domain_error("brittleness_witness: delta too large, 1/r - delta must exceed r*theta");
    if (!(ir + delta <= spec.params.theta))
        throw domain_error("brittleness_witness: 1/r + delta exceeds theta");

    const double q = ir - delta;
    const double y = ir + delta;
    const Instance instance = worst_case_instance(spec.params, n, q);
    const double p_star = max_price(instance);

    const ThresholdSpec flat(spec.r, 0.0, spec.params);
    const ThresholdSpec ramped(spec.r, 1.0, spec.params);
    const double ratio0 = run_threshold(instance, phi_rho(flat, y), spec.params).payoff / p_star;
    const double ratio1 = run_threshold(instance, phi_rho(ramped, y), spec.params).payoff / p_star;
    return BrittlenessRatios{ratio0, ratio1, p_star, y};
}

namespace {

enum class BoundKind { multiplicative, additive };

// Shared sweep body: one row = one q value (one instance), all y cells.
SlackReport sweep_row(const ThresholdSpec& spec, const GuaranteeParams& gp, BoundKind kind,
                      std::size_t n, double q, std::size_t grid_y, double step) {
    const double theta = spec.params.theta;
    const Instance instance = worst_case_instance(spec.params, n, q);
    const double p_star = max_price(instance);
    SlackReport row{std::numeric_limits<double>::infinity(), q, 0.0, 0.0, 0.0};
    for (std::size_t j = 0; j < grid_y; ++j) {
        const double y = 1.0 + (theta - 1.0) * static_cast<double>(j) /
                                   static_cast<double>(grid_y - 1);
        const double ratio = run_threshold(instance, phi_rho(spec, y), spec.params).payoff / p_star;
        const double bound = kind == BoundKind::multiplicative
                                 ? multiplicative_bound(gp, multiplicative_error(p_star, y, spec.params))
                                 : additive_bound(gp, additive_error(p_star, y), p_star);
        const double slack = ratio - bound + step;
        if (slack < row.min_slack)
            row = SlackReport{slack, q, y, ratio, bound};
    }
    return row;
}

SlackReport run_sweep(const ThresholdSpec& spec, BoundKind kind, std::size_t n, std::size_t grid_q,
                      std::size_t grid_y, bool parallel) {
    if (n < 2)
        throw domain_error("bound verification: n must be >= 2");
    if (grid_q < 2 || grid_y < 2)
        throw domain_error("bound verification: grids need at least 2 points");
    if (kind == BoundKind::additive && spec.rho != 1.0)
        throw domain_error("verify_additive_bound: additive guarantee holds for the rho = 1 member");
    const GuaranteeParams gp = make_guarantee_params(spec);
    const double theta = spec.params.theta;
    const double step = instance_grid_step(spec.params, n);

    std::vector<SlackReport> rows(grid_q);
    auto body = [&](std::size_t i) {
        const double q = 1.0 + (theta - 1.0) * static_cast<double>(i) /
                                   static_cast<double>(grid_q - 1);
        rows[i] = sweep_row(spec, gp, kind, n, q, grid_y, step);
    };
    if (parallel) {
        parallel_for(grid_q, body);
    } else {
        for (std::size_t i = 0; i < grid_q; ++i)
            body(i);
    }

    SlackReport worst = rows.front();
    for (const SlackReport& row : rows)
        if (row.min_slack < worst.min_slack)
            worst = row;
    return worst;
}

} // namespace

SlackReport verify_multiplicative_bound(const ThresholdSpec& spec, std::size_t n,
                                        std::size_t grid_q, std::size_t grid_y) {
    return run_sweep(spec, BoundKind::multiplicative, n, grid_q, grid_y, true);
}

SlackReport verify_additive_bound(const ThresholdSpec& spec, std::size_t n, std::size_t grid_q,
                                  std::size_t grid_y) {
    return run_sweep(spec, BoundKind::additive, n, grid_q, grid_y, true);
}

namespace serial {

SlackReport verify_multiplicative_bound(const ThresholdSpec& spec, std::size_t n,
                                        std::size_t grid_q, std::size_t grid_y) {
    return run_sweep(spec, BoundKind::multiplicative, n, grid_q, grid_y, false);
}

SlackReport verify_additive_bound(const ThresholdSpec& spec, std::size_t n, std::size_t grid_q,
                                  std::size_t grid_y) {
    return run_sweep(spec, BoundKind::additive, n, grid_q, grid_y, false);
}

} // namespace serial

PriorRandomizedBounds prior_randomized_bounds(double rho, double r, const ProblemParams& params,
                                              PriorBoundVariant variant) {
    if (!(rho > 0.0 && rho <= 1.0))
        throw domain_error("prior_randomized_bounds: rho must be in (0, 1]");
    const double factor = variant == PriorBoundVariant::as_printed_magnitude
                              ? std::abs(1.0 - std::exp(rho)) / rho
                              : (1.0 - std::exp(-rho)) / rho;
    return PriorRandomizedBounds{factor * factor / (r * params.theta),
                                 factor * std::pow(params.theta, -0.5), factor * factor};
}

AdditiveSlopeWitnesses additive_slope_witnesses(const ThresholdSpec& spec, double eps,
                                                std::size_t n) {
    if (!(eps > 0.0))
        throw domain_error("additive_slope_witnesses: eps must be > 0");
    const ThresholdSpec ramped(spec.r, 1.0, spec.params);
    const double theta = spec.params.theta;
    const double ir = ramped.inv_r();
    const double consistency = ramped.consistency();

    // Near miss: prediction theta forces threshold 1/r, the instance peaks
    // just below it and the algorithm walks away with payoff 1.
    const double q1 = ir / (1.0 + eps);
    const Instance inst1 = worst_case_instance(spec.params, n, q1);
    const double p1 = max_price(inst1);
    const double ratio1 = run_threshold(inst1, phi_rho(ramped, theta), spec.params).payoff / p1;
    const double slope1 = (consistency - ratio1) * p1 / (theta - p1);

    // Full-range miss: prediction r*theta keeps the threshold at the floor
    // while the instance climbs all the way to theta.
    const Instance inst2 = worst_case_instance(spec.params, n, theta);
    const double p2 = max_price(inst2);
    const double ratio2 =
        run_threshold(inst2, phi_rho(ramped, ramped.r_theta()), spec.params).payoff / p2;
    const double slope2 = (consistency - ratio2) * p2 / (p2 - ramped.r_theta());

    return AdditiveSlopeWitnesses{slope1, slope2};
}

} // namespace onemax
