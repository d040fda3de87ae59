#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "onemax/core.hpp"
#include "onemax/thresholds.hpp"
#include "onemax/transport.hpp"

namespace onemax {

struct Dirac {
    double point;
};

struct UniformInterval {
    double lo;
    double hi;
};

struct UniformMixture {
    std::vector<double> weights;
    std::vector<UniformInterval> intervals; // sorted, pairwise disjoint
};

struct Empirical {
    std::vector<double> samples;
};

/// A price or prediction law supported on [1, theta].
using DistributionSpec = std::variant<Dirac, UniformInterval, UniformMixture, Empirical>;

/// Throws domain_error unless the spec satisfies its invariants.
void validate_distribution(const DistributionSpec& spec, const ProblemParams& params);

/// Mean of the distribution.
double distribution_mean(const DistributionSpec& spec);

/// Interior points where densities jump (interval ends, atoms); quadratures
/// against this law split there.
std::vector<double> distribution_breakpoints(const DistributionSpec& spec);

/// Inverse-CDF sampler; a single uniform in [0, 1) drives every variant.
class DistributionSampler {
public:
    DistributionSampler(const DistributionSpec& spec, const ProblemParams& params);
    double operator()(double u) const;

private:
    DistributionSpec spec_;
    std::vector<double> cumulative_; // mixture selector
    std::vector<double> sorted_;     // empirical quantiles
};

/// Prediction-quality functional E[E(P*, Y)^s | P* = p*] for Y ~ G: closed
/// form for Dirac/Uniform/Mixture (log branch at s = 1), sample average for
/// Empirical. Lies in (0, 1] and equals 1 iff G is the point mass at p*.
double lambda_functional(const DistributionSpec& G, double p_star, double s,
                         const ProblemParams& params);

/// Closed-form lower bound 1 - (s/(2 p*)) eps - C eps^2 for G uniform on
/// [p* - eps, p* + eps], valid while the interval stays inside [1, theta].
double lambda_uniform_lower_bound(double p_star, double eps, double s,
                                  const ProblemParams& params);

/// Same bound under the multiplicative radius eps' (interval
/// [p*(1 - eps'), p*(1 + eps')]); evaluates the additive call at eps' * p*.
double lambda_uniform_lower_bound_multiplicative(double p_star, double eps_prime, double s,
                                                 const ProblemParams& params);

/// Mixture-of-uniforms lower bound. `guaranteed` keeps only terms that are
/// provably below the exact functional: the in-interval linear term (with its
/// quadratic safety margin subtracted) plus the center errors of the other
/// intervals. `second_order_residual` reports the subtracted quadratic margin;
/// helpful higher-order terms are dropped.
struct MixtureLowerBound {
    double guaranteed;
    double second_order_residual;
};

MixtureLowerBound lambda_mixture_lower_bound(const UniformMixture& mix, double p_star, double s,
                                             const ProblemParams& params);

/// Mirror functional E[P* E(P*, Y)^s | Y = y] / E[P*] for P* ~ F: closed form
/// with a log branch at s = 2, sums for Empirical. Lies in (0, 1].
double upsilon_functional(const DistributionSpec& F, double y, double s,
                          const ProblemParams& params);

/// Joint law of (P*, Y).
struct CouplingIndependent {
    DistributionSpec price;
    DistributionSpec prediction;
};

struct CouplingEmpirical {
    std::vector<std::pair<double, double>> pairs; // (p*, y)
};

struct CouplingDiscreteMatrix {
    DiscreteMarginal price;
    DiscreteMarginal prediction;
    std::vector<double> joint; // row-major over price x prediction atoms
};

using CouplingSpec = std::variant<CouplingIndependent, CouplingEmpirical, CouplingDiscreteMatrix>;

void validate_coupling(const CouplingSpec& coupling, const ProblemParams& params);

/// E[P* E(P*, Y)^s] / E[P*] under the coupling: exact sums for the discrete
/// variants, separable integrals of p* Lambda(p*) for independent marginals.
double coupling_cost_fraction(const CouplingSpec& coupling, double s,
                              const ProblemParams& params);

/// Expected-ratio guarantee max(r, fraction / (r*theta)) of the rho = 1
/// member under the coupling.
double expected_ratio_bound(const CouplingSpec& coupling, const ThresholdSpec& spec);

/// Infimum over prediction laws of the normalized transport cost for a
/// continuous or mixed price law: closed-form antiderivatives split at
/// sqrt(theta) (log branch at s = 2), sums for Empirical. Companion of the
/// discrete-marginal overload in transport.
double dual_lower_bound(const DistributionSpec& F, double s, const ProblemParams& params);

/// Closed form of the independent Uniform([c1, c2]) x Uniform([c1, c2]) cost
/// fraction, as printed, next to the quadrature value that validates it.
/// `value` is the authoritative quadrature-backed result.
struct UniformClosedForm {
    double value;
    double as_printed;
    double mismatch;
};

UniformClosedForm independent_uniform_closed_form(double c1, double c2, double s,
                                                  const ProblemParams& params);

/// Monte-Carlo estimate of lambda_functional with n_samples inverse-CDF
/// draws; blockwise summation keeps the result independent of thread count.
double mc_lambda_estimate(const DistributionSpec& G, double p_star, double s,
                          const ProblemParams& params, std::size_t n_samples, std::uint64_t seed,
                          std::uint64_t stream = 0);

/// Monte-Carlo estimate of upsilon_functional.
double mc_upsilon_estimate(const DistributionSpec& F, double y, double s,
                           const ProblemParams& params, std::size_t n_samples, std::uint64_t seed,
                           std::uint64_t stream = 0);

namespace serial {
double mc_lambda_estimate(const DistributionSpec& G, double p_star, double s,
                          const ProblemParams& params, std::size_t n_samples, std::uint64_t seed,
                          std::uint64_t stream = 0);
double mc_upsilon_estimate(const DistributionSpec& F, double y, double s,
                           const ProblemParams& params, std::size_t n_samples, std::uint64_t seed,
                           std::uint64_t stream = 0);
} // namespace serial

} // namespace onemax
