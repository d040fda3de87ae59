#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "onemax/core.hpp"
#include "onemax/thresholds.hpp"

namespace onemax {

/// Weighted atoms on [1, theta]: strictly increasing locations, positive
/// weights summing to 1.
struct DiscreteMarginal {
    std::vector<double> locations;
    std::vector<double> weights;

    std::size_t size() const { return locations.size(); }
};

DiscreteMarginal make_discrete_marginal(const ProblemParams& params,
                                        std::vector<double> locations,
                                        std::vector<double> weights);

/// Expected value of a discrete marginal.
double marginal_mean(const DiscreteMarginal& m);

/// A coupling of two discrete marginals: row sums reproduce the F weights,
/// column sums the G weights.
struct TransportPlan {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> weights; // row-major joint mass
    double objective = 0.0;
    std::vector<double> potential_f; // LP dual potentials of the solved problem
    std::vector<double> potential_g;

    double at(std::size_t i, std::size_t j) const { return weights[i * cols + j]; }

    /// Dual objective sum(f_i u_i) + sum(g_j v_j); equals the primal objective
    /// at optimality for the minimization problem.
    double dual_objective(const DiscreteMarginal& F, const DiscreteMarginal& G) const;
};

/// Transport cost p * E(p, y)^s behind the multiplicative stochastic bound.
double cost_multiplicative(double p, double y, double s);

/// Exact optimal plan for an arbitrary dense cost, by network simplex on the
/// bipartite atom grid. Set maximize to solve the sup version.
TransportPlan solve_transport(const DiscreteMarginal& F, const DiscreteMarginal& G,
                              const std::function<double(double, double)>& cost,
                              bool maximize = false);

/// Minimizing coupling for the cost p * E(p, y)^s.
TransportPlan min_cost_coupling(const DiscreteMarginal& F, const DiscreteMarginal& G, double s);

/// Worst-coupling performance bound (1/(r*theta)) * inf-cost / E[P*], using
/// the rho = 1 exponent of the family.
double ot_ratio_bound(const DiscreteMarginal& F, const DiscreteMarginal& G,
                      const ThresholdSpec& spec);

/// inf over y of p * E(p, y)^s: the endpoint adversary takes y = 1 above
/// sqrt(theta) and y = theta below it.
double adversarial_cost(double p, double s, const ProblemParams& params);

/// Infimum over all prediction laws of the normalized transport cost,
/// (integral of adversarial_cost dF) / E[P*]. The caller applies 1/(r*theta).
double dual_lower_bound(const DiscreteMarginal& F, double s, const ProblemParams& params);

/// c-transform of a potential sampled on the G grid: for each p in f_grid,
/// min over the grid of p * E(p, y)^s - potential(y).
std::vector<double> c_transform(std::span<const double> g_grid,
                                std::span<const double> potential,
                                std::span<const double> f_grid, double s,
                                const ProblemParams& params);

/// sup over couplings of the additive cost p * |p - y|, normalized by E[P*].
/// Composes with 1/(r*theta) - beta * result on the caller side.
double max_cost_additive(const DiscreteMarginal& F, const DiscreteMarginal& G);

/// Wasserstein-1 distance via the transport solver with cost |p - y|.
double wasserstein_1(const DiscreteMarginal& F, const DiscreteMarginal& G);

/// Wasserstein-1 distance via the sorted quantile coupling, the closed form
/// for one-dimensional marginals. Kept as an independent route next to the
/// solver; the two must agree.
double wasserstein_1_quantile(const DiscreteMarginal& F, const DiscreteMarginal& G);

} // namespace onemax
