#include "onemax/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace onemax {

namespace {
constexpr double kRangeSlack = 1e-12;
}

ThresholdSpec::ThresholdSpec(double r_, double rho_, ProblemParams params_)
    : r(r_), rho(rho_), params(params_) {
    const double lo = 1.0 / params.theta;
    const double hi = std::pow(params.theta, -0.5);
    if (!(r >= lo * (1.0 - kRangeSlack) && r <= hi * (1.0 + kRangeSlack)))
        throw domain_error("ThresholdSpec: r = " + std::to_string(r_) +
                           " outside [1/theta, theta^(-1/2)]");
    if (!(rho >= 0.0 && rho <= 1.0))
        throw domain_error("ThresholdSpec: rho outside [0, 1]");
}

double lambda_to_r(double lambda, const ProblemParams& params) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw domain_error("lambda_to_r: lambda outside [0, 1]");
    return std::pow(params.theta, -(1.0 - lambda / 2.0));
}

double r_to_lambda(double r, const ProblemParams& params) {
    // r = theta^-(1 - lambda/2)  =>  lambda = 2*(1 + ln r / ln theta)
    return 2.0 * (1.0 + std::log(r) / std::log(params.theta));
}

double varphi(const ThresholdSpec& spec, double z) {
    if (spec.r >= 1.0)
        throw domain_error("varphi: requires r < 1");
    const double theta = spec.params.theta;
    const double rt = spec.r * theta;
    return (rt - 1.0) / (1.0 - spec.r) +
           (1.0 - spec.r * rt) / (1.0 - spec.r) * (z / rt);
}

double phi_rho(const ThresholdSpec& spec, double y) {
    const double theta = spec.params.theta;
    if (!(y >= 1.0 && y <= theta))
        throw domain_error("phi_rho: y outside [1, theta]");
    const double rt = spec.r_theta();
    const double ir = spec.inv_r();
    if (y < rt)
        return rt;
    if (y < ir)
        return varphi(spec, y);
    if (spec.rho > 0.0) {
        const double ramp_end = ir + spec.rho * (theta - ir);
        if (y < ramp_end) {
            // Linear ramp from (1/r, varphi(1/r)) to (ramp_end, 1/r). At
            // rho = 1 both endpoints lie on varphi, so the ramp equals it.
            const double base = varphi(spec, ir);
            return base + (ir - base) * (y - ir) / (spec.rho * (theta - ir));
        }
    }
    return ir;
}

std::vector<std::pair<double, double>> sample_threshold(const ThresholdSpec& spec,
                                                        std::size_t count) {
    if (count < 2)
        throw domain_error("sample_threshold: need at least 2 grid points");
    std::vector<std::pair<double, double>> out(count);
    const double theta = spec.params.theta;
    for (std::size_t i = 0; i < count; ++i) {
        const double z = 1.0 + (theta - 1.0) * static_cast<double>(i) /
                                   static_cast<double>(count - 1);
        out[i] = {z, phi_rho(spec, z)};
    }
    return out;
}

const char* to_string(ParetoConstraint c) {
    switch (c) {
    case ParetoConstraint::below_robust_floor: return "Phi(z) < r*theta";
    case ParetoConstraint::above_consistency_cap: return "Phi(z) > 1/r";
    case ParetoConstraint::below_ratio_line: return "Phi(z) < z/(r*theta)";
    case ParetoConstraint::above_identity: return "Phi(z) > z";
    }
    return "?";
}

ParetoCheckResult is_pareto_optimal_threshold(std::span<const std::pair<double, double>> samples,
                                              const ThresholdSpec& spec, double tol) {
    if (samples.empty())
        throw domain_error("is_pareto_optimal_threshold: empty grid");
    if (samples.size() < 2)
        throw domain_error("is_pareto_optimal_threshold: need at least 2 grid points");
    if (tol < 0.0)
        throw domain_error("is_pareto_optimal_threshold: tol must be >= 0");
    const double theta = spec.params.theta;
    const double cover_slack = 1e-6 * theta;
    if (samples.front().first > 1.0 + cover_slack || samples.back().first < theta - cover_slack)
        throw domain_error("is_pareto_optimal_threshold: grid does not cover [1, theta]");

    const double rt = spec.r_theta();
    const double ir = spec.inv_r();
    for (const auto& [z, phi] : samples) {
        if (phi < rt - tol)
            return {false, ParetoViolation{z, phi, ParetoConstraint::below_robust_floor}};
        if (phi > ir + tol)
            return {false, ParetoViolation{z, phi, ParetoConstraint::above_consistency_cap}};
        if (z >= rt) {
            if (phi < z / rt - tol)
                return {false, ParetoViolation{z, phi, ParetoConstraint::below_ratio_line}};
            if (phi > z + tol)
                return {false, ParetoViolation{z, phi, ParetoConstraint::above_identity}};
        }
    }
    return {true, std::nullopt};
}

} // namespace onemax
