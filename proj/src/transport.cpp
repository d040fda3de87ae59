#include "onemax/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "onemax/guarantees.hpp"

namespace onemax {

DiscreteMarginal make_discrete_marginal(const ProblemParams& params,
                                        std::vector<double> locations,
                                        std::vector<double> weights) {
    if (locations.empty() || locations.size() != weights.size())
        throw domain_error("DiscreteMarginal: need matching, nonempty atom lists");
    double total = 0.0;
    for (std::size_t i = 0; i < locations.size(); ++i) {
        if (!(locations[i] >= 1.0 && locations[i] <= params.theta))
            throw domain_error("DiscreteMarginal: location outside [1, theta]");
        if (i > 0 && !(locations[i] > locations[i - 1]))
            throw domain_error("DiscreteMarginal: locations must be strictly increasing");
        if (!(weights[i] > 0.0))
            throw domain_error("DiscreteMarginal: weights must be positive");
        total += weights[i];
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw domain_error("DiscreteMarginal: weights must sum to 1, got " + std::to_string(total));
    return DiscreteMarginal{std::move(locations), std::move(weights)};
}

double marginal_mean(const DiscreteMarginal& m) {
    double mean = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i)
        mean += m.weights[i] * m.locations[i];
    return mean;
}

double TransportPlan::dual_objective(const DiscreteMarginal& F, const DiscreteMarginal& G) const {
    double value = 0.0;
    for (std::size_t i = 0; i < rows; ++i)
        value += F.weights[i] * potential_f[i];
    for (std::size_t j = 0; j < cols; ++j)
        value += G.weights[j] * potential_g[j];
    return value;
}

double cost_multiplicative(double p, double y, double s) {
    return p * std::pow(std::min(p / y, y / p), s);
}

namespace {

// Dense transportation simplex. Nodes 0..m-1 are sources, m..m+n-1 sinks; the
// basis is a spanning tree of m+n-1 arcs kept as an explicit arc list.
class TransportSimplex {
public:
    TransportSimplex(const std::vector<double>& supply, const std::vector<double>& demand,
                     std::vector<double> cost)
        : m_(supply.size()), n_(demand.size()), supply_(supply), demand_(demand),
          cost_(std::move(cost)) {}

    void solve() {
        northwest_corner();
        double scale = 1.0;
        for (double c : cost_)
            scale = std::max(scale, std::abs(c));
        const double eps = 1e-12 * scale;

        std::size_t budget = 64 * (m_ * n_ + m_ + n_);
        bool bland = false;
        for (std::size_t iter = 0;; ++iter) {
            if (iter >= budget) {
                if (!bland) {
                    bland = true; // anti-cycling fallback, with a fresh budget
                    budget += budget;
                } else {
                    throw invariant_violation("transport simplex failed to terminate");
                }
            }
            compute_potentials();
            std::size_t ei = 0, ej = 0;
            if (!find_entering(eps, bland, ei, ej))
                break;
            pivot(ei, ej);
        }
    }

    TransportPlan extract(const std::vector<double>& original_cost, double sign) {
        TransportPlan plan;
        plan.rows = m_;
        plan.cols = n_;
        plan.weights.assign(m_ * n_, 0.0);
        for (const Arc& a : basis_) {
            double flow = a.flow;
            if (flow < 0.0) {
                if (flow < -1e-9)
                    throw invariant_violation("transport simplex produced negative flow");
                flow = 0.0;
            }
            plan.weights[a.i * n_ + a.j] = flow;
        }
        plan.objective = 0.0;
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                plan.objective += plan.weights[i * n_ + j] * original_cost[i * n_ + j];
        plan.potential_f.resize(m_);
        plan.potential_g.resize(n_);
        for (std::size_t i = 0; i < m_; ++i)
            plan.potential_f[i] = sign * u_[i];
        for (std::size_t j = 0; j < n_; ++j)
            plan.potential_g[j] = sign * v_[j];
        check_marginals(plan);
        return plan;
    }

private:
    struct Arc {
        std::size_t i, j;
        double flow;
    };

    void northwest_corner() {
        basis_.clear();
        std::size_t i = 0, j = 0;
        double a = supply_[0], b = demand_[0];
        while (true) {
            const double f = std::min(a, b);
            basis_.push_back(Arc{i, j, f});
            a -= f;
            b -= f;
            const bool last_i = i + 1 == m_;
            const bool last_j = j + 1 == n_;
            if (last_i && last_j)
                break;
            // Exactly one index advances per step, keeping m+n-1 basic arcs.
            if ((a <= b && !last_i) || last_j) {
                ++i;
                a = supply_[i];
            } else {
                ++j;
                b = demand_[j];
            }
        }
    }

    void rebuild_adjacency() {
        adj_.assign(m_ + n_, {});
        for (std::size_t k = 0; k < basis_.size(); ++k) {
            adj_[basis_[k].i].push_back(k);
            adj_[m_ + basis_[k].j].push_back(k);
        }
    }

    void compute_potentials() {
        rebuild_adjacency();
        u_.assign(m_, 0.0);
        v_.assign(n_, 0.0);
        std::vector<char> known(m_ + n_, 0);
        std::queue<std::size_t> queue;
        known[0] = 1;
        queue.push(0);
        while (!queue.empty()) {
            const std::size_t node = queue.front();
            queue.pop();
            for (std::size_t k : adj_[node]) {
                const Arc& a = basis_[k];
                const std::size_t other = node < m_ ? m_ + a.j : a.i;
                if (known[other])
                    continue;
                if (other >= m_)
                    v_[a.j] = cost_[a.i * n_ + a.j] - u_[a.i];
                else
                    u_[a.i] = cost_[a.i * n_ + a.j] - v_[a.j];
                known[other] = 1;
                queue.push(other);
            }
        }
    }

    bool find_entering(double eps, bool bland, std::size_t& ei, std::size_t& ej) const {
        double best = -eps;
        bool found = false;
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                const double red = cost_[i * n_ + j] - u_[i] - v_[j];
                if (red < best) {
                    best = red;
                    ei = i;
                    ej = j;
                    found = true;
                    if (bland)
                        return true; // first improving arc
                }
            }
        }
        return found;
    }

    void pivot(std::size_t ei, std::size_t ej) {
        // Tree path from source ei to sink ej; the entering arc closes the cycle.
        std::vector<long> parent_arc(m_ + n_, -1);
        std::vector<long> parent_node(m_ + n_, -1);
        std::vector<char> seen(m_ + n_, 0);
        std::queue<std::size_t> queue;
        seen[ei] = 1;
        queue.push(ei);
        while (!queue.empty()) {
            const std::size_t node = queue.front();
            queue.pop();
            if (node == m_ + ej)
                break;
            for (std::size_t k : adj_[node]) {
                const Arc& a = basis_[k];
                const std::size_t other = node < m_ ? m_ + a.j : a.i;
                if (seen[other])
                    continue;
                seen[other] = 1;
                parent_arc[other] = static_cast<long>(k);
                parent_node[other] = static_cast<long>(node);
                queue.push(other);
            }
        }

        // Walk back from the sink; arcs alternate -delta, +delta, ...
        std::vector<std::size_t> minus_arcs, plus_arcs;
        std::size_t node = m_ + ej;
        bool minus = true;
        while (node != ei) {
            const long k = parent_arc[node];
            if (k < 0)
                throw invariant_violation("transport simplex basis is not connected");
            (minus ? minus_arcs : plus_arcs).push_back(static_cast<std::size_t>(k));
            minus = !minus;
            node = static_cast<std::size_t>(parent_node[node]);
        }

        double delta = std::numeric_limits<double>::infinity();
        std::size_t leaving = minus_arcs.front();
        for (std::size_t k : minus_arcs) {
            if (basis_[k].flow < delta) {
                delta = basis_[k].flow;
                leaving = k;
            }
        }
        for (std::size_t k : minus_arcs)
            basis_[k].flow -= delta;
        for (std::size_t k : plus_arcs)
            basis_[k].flow += delta;
        basis_[leaving] = Arc{ei, ej, delta};
    }

    void check_marginals(const TransportPlan& plan) const {
        for (std::size_t i = 0; i < m_; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < n_; ++j)
                row += plan.weights[i * n_ + j];
            if (std::abs(row - supply_[i]) > 1e-9)
                throw invariant_violation("transport plan row sum deviates from marginal");
        }
        for (std::size_t j = 0; j < n_; ++j) {
            double col = 0.0;
            for (std::size_t i = 0; i < m_; ++i)
                col += plan.weights[i * n_ + j];
            if (std::abs(col - demand_[j]) > 1e-9)
                throw invariant_violation("transport plan column sum deviates from marginal");
        }
    }

    std::size_t m_, n_;
    std::vector<double> supply_, demand_;
    std::vector<double> cost_;
    std::vector<Arc> basis_;
    std::vector<std::vector<std::size_t>> adj_;
    std::vector<double> u_, v_;
};

} // namespace

TransportPlan solve_transport(const DiscreteMarginal& F, const DiscreteMarginal& G,
                              const std::function<double(double, double)>& cost, bool maximize) {
    const std::size_t m = F.size(), n = G.size();
    if (m > 1000 || n > 1000)
        throw domain_error("solve_transport: marginals are limited to 1000 atoms each");
    double mass_f = 0.0, mass_g = 0.0;
    for (double w : F.weights)
        mass_f += w;
    for (double w : G.weights)
        mass_g += w;
    if (std::abs(mass_f - mass_g) > 1e-9)
        throw domain_error("solve_transport: marginal masses differ by more than 1e-9");

    std::vector<double> costs(m * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            costs[i * n + j] = cost(F.locations[i], G.locations[j]);

    std::vector<double> solver_costs = costs;
    const double sign = maximize ? -1.0 : 1.0;
    if (maximize)
        for (double& c : solver_costs)
            c = -c;

    TransportSimplex simplex(F.weights, G.weights, std::move(solver_costs));
    simplex.solve();
    return simplex.extract(costs, sign);
}

TransportPlan min_cost_coupling(const DiscreteMarginal& F, const DiscreteMarginal& G, double s) {
    return solve_transport(F, G, [s](double p, double y) { return cost_multiplicative(p, y, s); });
}

double ot_ratio_bound(const DiscreteMarginal& F, const DiscreteMarginal& G,
                      const ThresholdSpec& spec) {
    const double s = smoothness_exponent_rho1(spec);
    const TransportPlan plan = min_cost_coupling(F, G, s);
    return spec.consistency() * plan.objective / marginal_mean(F);
}

double adversarial_cost(double p, double s, const ProblemParams& params) {
    if (!(p >= 1.0 && p <= params.theta))
        throw domain_error("adversarial_cost: p outside [1, theta]");
    if (p * p > params.theta)
        return std::pow(p, 1.0 - s); // adversary predicts 1
    return std::pow(p, 1.0 + s) * std::pow(params.theta, -s); // adversary predicts theta
}

double dual_lower_bound(const DiscreteMarginal& F, double s, const ProblemParams& params) {
    double numer = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i)
        numer += F.weights[i] * adversarial_cost(F.locations[i], s, params);
    return numer / marginal_mean(F);
}

std::vector<double> c_transform(std::span<const double> g_grid,
                                std::span<const double> potential,
                                std::span<const double> f_grid, double s,
                                const ProblemParams& params) {
    if (g_grid.empty() || f_grid.empty())
        throw domain_error("c_transform: empty grid");
    if (g_grid.size() != potential.size())
        throw domain_error("c_transform: potential size must match the G grid");
    for (double y : g_grid)
        if (!(y >= 1.0 && y <= params.theta))
            throw domain_error("c_transform: G grid point outside [1, theta]");
    for (double p : f_grid)
        if (!(p >= 1.0 && p <= params.theta))
            throw domain_error("c_transform: F grid point outside [1, theta]");
    std::vector<double> out(f_grid.size());
    for (std::size_t i = 0; i < f_grid.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < g_grid.size(); ++j)
            best = std::min(best, cost_multiplicative(f_grid[i], g_grid[j], s) - potential[j]);
        out[i] = best;
    }
    return out;
}

double max_cost_additive(const DiscreteMarginal& F, const DiscreteMarginal& G) {
    const TransportPlan plan =
        solve_transport(F, G, [](double p, double y) { return p * std::abs(p - y); }, true);
    return plan.objective / marginal_mean(F);
}

double wasserstein_1(const DiscreteMarginal& F, const DiscreteMarginal& G) {
    const TransportPlan plan =
        solve_transport(F, G, [](double p, double y) { return std::abs(p - y); });
    return plan.objective;
}

double wasserstein_1_quantile(const DiscreteMarginal& F, const DiscreteMarginal& G) {
    double total = 0.0;
    std::size_t i = 0, j = 0;
    double rf = F.weights[0], rg = G.weights[0];
    while (i < F.size() && j < G.size()) {
        const double d = std::min(rf, rg);
        total += d * std::abs(F.locations[i] - G.locations[j]);
        rf -= d;
        rg -= d;
        if (rf <= 1e-15) {
            ++i;
            if (i < F.size())
                rf = F.weights[i];
        }
        if (rg <= 1e-15) {
            ++j;
            if (j < G.size())
                rg = G.weights[j];
        }
    }
    return total;
}

} // namespace onemax
