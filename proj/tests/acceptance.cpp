// Acceptance suite: one pass/fail line per criterion. Returns the number of
// failed criteria. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "onemax/guarantees.hpp"
#include "onemax/harness/config.hpp"
#include "onemax/rng.hpp"
#include "onemax/harness/csv.hpp"
#include "onemax/harness/experiments.hpp"
#include "onemax/harness/gbm.hpp"
#include "onemax/stochastic.hpp"
#include "onemax/transport.hpp"
#include "oracles.hpp"

using namespace onemax;
using harness::ExperimentConfig;
using harness::ResolvedConfig;

namespace {

int failures = 0;

class Criterion {
public:
    Criterion(const char* id, const char* name, double runtime_limit_s = 0.0)
        : id_(id), name_(name), runtime_limit_s_(runtime_limit_s) {
        start_ = std::chrono::steady_clock::now();
    }

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass_ = false;
            if (!detail_.empty())
                detail_ += "; ";
            detail_ += what;
        }
    }

    ~Criterion() {
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        if (runtime_limit_s_ > 0.0 && seconds > runtime_limit_s_)
            check(false, "runtime " + std::to_string(seconds) + " s exceeds " +
                             std::to_string(runtime_limit_s_) + " s");
        std::printf("criterion %-2s [%s] %s (%.2f s)%s%s\n", id_, name_,
                    pass_ ? "PASS" : "FAIL", seconds, detail_.empty() ? "" : " -- ",
                    detail_.c_str());
        std::fflush(stdout);
        if (!pass_)
            ++failures;
    }

private:
    const char* id_;
    const char* name_;
    double runtime_limit_s_;
    bool pass_ = true;
    std::string detail_;
    std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void criterion1_pareto_front() {
    Criterion c("1", "pareto-front identity", 10.0);
    for (double theta : {2.0, 5.0, 28.0}) {
        const ProblemParams params(theta);
        const std::size_t n = 100000;
        const double step = instance_grid_step(params, n);

        std::vector<ThresholdSpec> specs;
        for (double lambda : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const double r = lambda_to_r(lambda, params);
            c.check(std::abs((1.0 / (r * theta)) * r * theta - 1.0) <= 1e-12,
                    "identity c*r*theta != 1 at lambda " + fmt(lambda));
            for (double rho : {0.0, 1.0})
                specs.emplace_back(r, rho, params);
        }

        std::vector<double> worst(specs.size(), 2.0);
        for (int k = 0; k <= 100; ++k) {
            const std::size_t idx = (n - 1) * static_cast<std::size_t>(k) / 100;
            const double q = 1.0 + step * static_cast<double>(idx);
            const Instance inst = worst_case_instance(params, n, q);
            const double p_star = max_price(inst);
            for (std::size_t i = 0; i < specs.size(); ++i) {
                const double ratio =
                    run_threshold(inst, phi_rho(specs[i], p_star), params).payoff / p_star;
                worst[i] = std::min(worst[i], ratio);
            }
        }
        for (std::size_t i = 0; i < specs.size(); ++i) {
            const double consistency = specs[i].consistency();
            c.check(std::abs(worst[i] - consistency) <= step + 1e-12,
                    "worst-case sweep off consistency at theta " + fmt(theta) + ": " +
                        fmt(worst[i]) + " vs " + fmt(consistency));
        }
    }
}

void criterion2_membership() {
    Criterion c("2", "S_PO membership", 5.0);
    for (double theta : {2.0, 5.0, 28.0}) {
        const ProblemParams params(theta);
        for (double lambda : {0.25, 0.5, 0.75}) {
            for (double rho : {0.0, 0.5, 1.0}) {
                const ThresholdSpec spec(lambda_to_r(lambda, params), rho, params);
                const auto samples = sample_threshold(spec, 10000);
                c.check(is_pareto_optimal_threshold(samples, spec, 1e-9).optimal,
                        "family member left S_PO at theta " + fmt(theta));
            }
        }
    }

    // three hand-built violators with their expected first violations
    const ProblemParams params(5.0);
    const ThresholdSpec spec(lambda_to_r(0.5, params), 1.0, params);
    const double rt = spec.r_theta();
    const auto sample_fn = [&](auto&& fn) {
        std::vector<std::pair<double, double>> samples;
        for (int i = 0; i < 10000; ++i) {
            const double z = 1.0 + 4.0 * i / 9999.0;
            samples.emplace_back(z, fn(z));
        }
        return samples;
    };

    const auto too_low = is_pareto_optimal_threshold(
        sample_fn([&](double) { return 1.0; }), spec, 1e-9);
    c.check(!too_low.optimal &&
                too_low.violation->constraint == ParetoConstraint::below_robust_floor &&
                too_low.violation->z == 1.0,
            "constant 1 not reported as below the robust floor at z = 1");

    const auto too_high = is_pareto_optimal_threshold(
        sample_fn([&](double) { return 5.0; }), spec, 1e-9);
    c.check(!too_high.optimal &&
                too_high.violation->constraint == ParetoConstraint::above_consistency_cap,
            "constant theta not reported as above 1/r");

    const auto sagging = is_pareto_optimal_threshold(
        sample_fn([&](double z) { return std::max(rt, 0.98 * z / rt); }), spec, 1e-9);
    // the floor at r*theta first drops below z/(r*theta) just past z = (r*theta)^2
    const double expected_z = rt * rt;
    c.check(!sagging.optimal &&
                sagging.violation->constraint == ParetoConstraint::below_ratio_line &&
                sagging.violation->z >= expected_z - 1e-9 &&
                sagging.violation->z <= expected_z + 5e-3,
            "sagging ratio line not reported at its first violation");
}

void criterion3_multiplicative_dominance() {
    Criterion c("3", "multiplicative bound dominance", 30.0);
    const ProblemParams params(5.0);
    for (double rho : {0.25, 0.5, 1.0}) {
        const ThresholdSpec spec(lambda_to_r(0.5, params), rho, params);
        const SlackReport report = verify_multiplicative_bound(spec, 10000, 200, 200);
        c.check(report.min_slack >= -1e-9,
                "min slack " + fmt(report.min_slack) + " at rho " + fmt(rho) + ", q " +
                    fmt(report.worst_q) + ", y " + fmt(report.worst_y));
    }
}

void criterion4_brittleness_gap() {
    Criterion c("4", "brittleness gap", 1.0);
    const ProblemParams params(5.0);
    const ThresholdSpec spec(lambda_to_r(0.5, params), 1.0, params);
    const BrittlenessRatios ratios = brittleness_witness(spec, 0.01, 100000);
    c.check(std::abs(ratios.ratio_rho0 - 0.2999) <= 0.002,
            "rho=0 ratio " + fmt(ratios.ratio_rho0) + " not 0.2999 +- 0.002");
    c.check(std::abs(ratios.ratio_rho1 - 0.7426) <= 0.002,
            "rho=1 ratio " + fmt(ratios.ratio_rho1) + " not 0.7426 +- 0.002");
}

void criterion5_additive_smoothness() {
    Criterion c("5", "additive smoothness and beta*");
    const ProblemParams params(5.0);
    const ThresholdSpec spec(lambda_to_r(0.5, params), 1.0, params);

    const double beta = additive_beta_star(spec);
    c.check(std::abs(beta - 0.7463) <= 1e-3, "beta* " + fmt(beta) + " not 0.7463 +- 1e-3");

    const AdditiveSlopeWitnesses w = additive_slope_witnesses(spec, 1e-6, 2000000);
    const double reached = std::max(w.slope_high_prediction, w.slope_low_prediction);
    c.check(std::abs(reached - beta) <= 1e-4,
            "witness slopes reach " + fmt(reached) + ", beta* = " + fmt(beta));

    const SlackReport report = verify_additive_bound(spec, 10000, 200, 200);
    c.check(report.min_slack >= -1e-9,
            "additive sweep min slack " + fmt(report.min_slack));
}

void criterion6_uniform_error_example() {
    Criterion c("6", "uniform-error lower bound");
    const ProblemParams params(5.0);
    const double lower = lambda_uniform_lower_bound(3.0, 0.5, 2.0, params);
    const double exact = lambda_functional(DistributionSpec{UniformInterval{2.5, 3.5}}, 3.0, 2.0,
                                           params);
    c.check(std::abs(lower - 0.70667) <= 1e-5, "lower bound " + fmt(lower) + " not 0.70667");
    c.check(std::abs(exact - 0.84987) <= 1e-5, "exact Lambda " + fmt(exact) + " not 0.84987");
    c.check(lower <= exact + 1e-12, "bound above the exact value");

    for (double s : {1.0, 2.0, 3.0}) {
        for (int pi = 1; pi <= 10; ++pi) {
            const double p_star = 1.0 + 4.0 * pi / 11.0;
            const double cap = std::min(5.0 - p_star, p_star - 1.0);
            for (int ei = 1; ei <= 10; ++ei) {
                const double eps = cap * 0.999 * ei / 10.0;
                const double lb = lambda_uniform_lower_bound(p_star, eps, s, params);
                const double ex = lambda_functional(
                    DistributionSpec{UniformInterval{p_star - eps, p_star + eps}}, p_star, s,
                    params);
                c.check(lb <= ex + 1e-12, "dominance failed at p* " + fmt(p_star) + ", eps " +
                                              fmt(eps) + ", s " + fmt(s));
            }
        }
    }
}

DiscreteMarginal random_marginal(const ProblemParams& params, std::uint64_t stream,
                                 std::size_t atoms) {
    std::vector<double> locations, weights;
    for (std::size_t i = 0; locations.size() < atoms; ++i) {
        const double loc = 1.0 + (params.theta - 1.0) * CounterRng::uniform01(424242, stream, i);
        bool fresh = true;
        for (double existing : locations)
            if (std::abs(existing - loc) < 1e-9)
                fresh = false;
        if (fresh)
            locations.push_back(loc);
    }
    std::sort(locations.begin(), locations.end());
    double total = 0.0;
    for (std::size_t i = 0; i < atoms; ++i) {
        weights.push_back(0.05 + CounterRng::uniform01(424243, stream, i));
        total += weights.back();
    }
    for (double& w : weights)
        w /= total;
    double dust = 1.0;
    for (std::size_t i = 0; i + 1 < atoms; ++i)
        dust -= weights[i];
    weights[atoms - 1] = dust;
    return make_discrete_marginal(params, std::move(locations), std::move(weights));
}

void criterion7_transport_chain() {
    Criterion c("7", "optimal-transport bound chain");
    const ProblemParams params(5.0);
    const ThresholdSpec spec(lambda_to_r(0.5, params), 1.0, params);
    const double s = smoothness_exponent_rho1(spec);

    for (int k = 0; k < 20; ++k) {
        const std::size_t atoms_f =
            2 + static_cast<std::size_t>(CounterRng::uniform01(5, k, 0) * 48.0);
        const std::size_t atoms_g =
            2 + static_cast<std::size_t>(CounterRng::uniform01(5, k, 1) * 48.0);
        const DiscreteMarginal F = random_marginal(params, 10 + k, atoms_f);
        const DiscreteMarginal G = random_marginal(params, 40 + k, atoms_g);

        const TransportPlan plan = min_cost_coupling(F, G, s);
        const double mean_f = marginal_mean(F);
        const double fraction_min = plan.objective / mean_f;
        const double dual = dual_lower_bound(F, s, params);

        std::vector<double> product(F.size() * G.size());
        for (std::size_t i = 0; i < F.size(); ++i)
            for (std::size_t j = 0; j < G.size(); ++j)
                product[i * G.size() + j] = F.weights[i] * G.weights[j];
        const double fraction_fixed = coupling_cost_fraction(
            CouplingSpec{CouplingDiscreteMatrix{F, G, std::move(product)}}, s, params);

        c.check(dual <= fraction_min + 1e-8, "dual above min-cost at case " + std::to_string(k));
        c.check(fraction_min <= fraction_fixed + 1e-8,
                "min-cost above fixed coupling at case " + std::to_string(k));
        c.check(std::abs(plan.objective - plan.dual_objective(F, G)) <= 1e-8,
                "primal/dual gap " + fmt(plan.objective - plan.dual_objective(F, G)));
    }

    for (int k = 0; k < 5; ++k) {
        const DiscreteMarginal F = random_marginal(params, 300 + k, 3);
        const DiscreteMarginal G = random_marginal(params, 400 + k, 3);
        const TransportPlan plan = min_cost_coupling(F, G, s);
        std::vector<double> cost(9);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                cost[i * 3 + j] = cost_multiplicative(F.locations[i], G.locations[j], s);
        const auto oracle = orc::enumerate_transport_vertices(F.weights, G.weights, cost);
        c.check(std::abs(plan.objective - oracle.best_objective) <= 1e-12,
                "3x3 objective differs from vertex enumeration");
        for (std::size_t cell = 0; cell < 9; ++cell)
            c.check(std::abs(plan.weights[cell] - oracle.best_plan[cell]) <= 1e-9,
                    "3x3 plan entry differs from vertex enumeration");
    }
}

void criterion8_wasserstein() {
    Criterion c("8", "Wasserstein-1 vs quantile coupling");
    const ProblemParams params(5.0);
    for (int k = 0; k < 50; ++k) {
        const std::size_t atoms_f =
            1 + static_cast<std::size_t>(CounterRng::uniform01(6, k, 0) * 49.0);
        const std::size_t atoms_g =
            1 + static_cast<std::size_t>(CounterRng::uniform01(6, k, 1) * 49.0);
        const DiscreteMarginal F = random_marginal(params, 600 + k, atoms_f);
        const DiscreteMarginal G = random_marginal(params, 700 + k, atoms_g);
        const double solver = wasserstein_1(F, G);
        const double quantile = wasserstein_1_quantile(F, G);
        c.check(std::abs(solver - quantile) <= 1e-12,
                "case " + std::to_string(k) + ": solver " + fmt(solver) + " vs quantile " +
                    fmt(quantile));
    }
}

void criterion9_figure_reproduction() {
    Criterion c("9", "synthetic sweep ordering and endpoints", 120.0);
    ExperimentConfig cfg;
    cfg.kind = "sweep-mult";
    cfg.lambda = 0.5;
    cfg.theta = 5.0;
    cfg.rho = {0.0, 0.5, 1.0};
    cfg.n = 1000;
    cfg.trials = 500;
    cfg.grid = 12;
    cfg.seed = 20240501;
    const ResolvedConfig rc = harness::resolve(cfg);
    const double consistency = 1.0 / (rc.r * cfg.theta);
    const double step = instance_grid_step(rc.params, cfg.n);

    const harness::SweepResult mult = harness::sweep_multiplicative(rc);
    const std::size_t grid = cfg.grid;
    for (std::size_t level = 0; level < grid; ++level) {
        const auto rec = [&](std::size_t rho_idx) -> const harness::RunRecord& {
            return mult.records[rho_idx * grid + level];
        };
        const auto se = [&](std::size_t rho_idx) { return mult.std_errors[rho_idx * grid + level]; };
        if (rec(0).error_level < 1.0) {
            c.check(rec(0).realized_ratio <=
                        rec(1).realized_ratio + 2.0 * (se(0) + se(1)),
                    "mult ordering rho 0 vs 0.5 at level " + fmt(rec(0).error_level));
            c.check(rec(1).realized_ratio <=
                        rec(2).realized_ratio + 2.0 * (se(1) + se(2)),
                    "mult ordering rho 0.5 vs 1 at level " + fmt(rec(0).error_level));
        }
        for (std::size_t rho_idx = 0; rho_idx < 3; ++rho_idx) {
            if (rec(rho_idx).error_level == 1.0)
                c.check(std::abs(rec(rho_idx).realized_ratio - consistency) <= step + 1e-12,
                        "mult consistency endpoint at rho index " + std::to_string(rho_idx));
            if (level == 0)
                c.check(rec(rho_idx).realized_ratio >= rc.r - step - 1e-9,
                        "mult robustness endpoint at rho index " + std::to_string(rho_idx));
        }
    }

    ExperimentConfig add_cfg = cfg;
    add_cfg.kind = "sweep-add";
    const ResolvedConfig rc_add = harness::resolve(add_cfg);
    const harness::SweepResult add = harness::sweep_additive(rc_add);
    for (std::size_t level = 0; level < grid; ++level) {
        const auto rec = [&](std::size_t rho_idx) -> const harness::RunRecord& {
            return add.records[rho_idx * grid + level];
        };
        const auto se = [&](std::size_t rho_idx) { return add.std_errors[rho_idx * grid + level]; };
        if (rec(0).error_level > 0.0) {
            c.check(rec(0).realized_ratio <= rec(1).realized_ratio + 2.0 * (se(0) + se(1)),
                    "add ordering rho 0 vs 0.5 at level " + fmt(rec(0).error_level));
            c.check(rec(1).realized_ratio <= rec(2).realized_ratio + 2.0 * (se(1) + se(2)),
                    "add ordering rho 0.5 vs 1 at level " + fmt(rec(0).error_level));
        } else {
            for (std::size_t rho_idx = 0; rho_idx < 3; ++rho_idx)
                c.check(std::abs(rec(rho_idx).realized_ratio - consistency) <= step + 1e-12,
                        "add consistency endpoint at rho index " + std::to_string(rho_idx));
        }
        for (std::size_t rho_idx = 0; rho_idx < 3; ++rho_idx)
            c.check(rec(rho_idx).realized_ratio >= rec(rho_idx).theoretical_bound - step -
                                                       3.0 * se(rho_idx) - 1e-9,
                    "record below its additive bound");
    }
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion10_determinism() {
    Criterion c("10", "byte-identical reruns");
#ifdef ONEMAX_CLI_PATH
    const std::string cli = ONEMAX_CLI_PATH;
    const struct {
        const char* name;
        const char* args;
    } runs[] = {
        {"brittleness", "brittleness --theta 5 --lambda 0.5 --n 100000 --seed 3"},
        {"sweep-mult", "sweep-mult --theta 5 --lambda 0.5 --n 200 --trials 50 --grid 5 --seed 11"},
        {"quad-surface", "quad-surface --grid 5 --seed 1"},
    };
    for (const auto& run : runs) {
        const std::string out1 = std::string("acc_det_") + run.name + "_1.csv";
        const std::string out2 = std::string("acc_det_") + run.name + "_2.csv";
        const std::string out3 = std::string("acc_det_") + run.name + "_3.csv";
        const std::string cmd1 =
            cli + " " + run.args + " --out " + out1 + " > /dev/null 2>&1";
        const std::string cmd2 =
            cli + " " + run.args + " --out " + out2 + " > /dev/null 2>&1";
        const std::string cmd3 = "OMP_NUM_THREADS=1 " + cli + " " + run.args + " --out " + out3 +
                                 " > /dev/null 2>&1";
        const int rc1 = std::system(cmd1.c_str());
        const int rc2 = std::system(cmd2.c_str());
        const int rc3 = std::system(cmd3.c_str());
        c.check(rc1 == 0 && rc2 == 0 && rc3 == 0, std::string(run.name) + " CLI run failed");
        const std::string b1 = slurp(out1), b2 = slurp(out2), b3 = slurp(out3);
        c.check(!b1.empty() && b1 == b2,
                std::string(run.name) + " reruns are not byte-identical");
        c.check(b1 == b3,
                std::string(run.name) + " single-threaded rerun differs");
        std::remove(out1.c_str());
        std::remove(out2.c_str());
        std::remove(out3.c_str());
    }

    // exit codes: 2 for config errors, 3 for input-data errors
    const int bad_cfg = std::system((cli + " sweep-mult --theta 0.5 --out acc_bad.csv"
                                           " > /dev/null 2>&1").c_str());
    c.check(WEXITSTATUS(bad_cfg) == 2, "config error did not exit with code 2");
    const int bad_input = std::system((cli + " real-data --input no_such_file.csv --out acc_bad.csv"
                                             " > /dev/null 2>&1").c_str());
    c.check(WEXITSTATUS(bad_input) == 3, "input-data error did not exit with code 3");
    std::remove("acc_bad.csv");
#else
    c.check(false, "CLI path not configured");
#endif
}

void criterion11_real_data_standin() {
    Criterion c("11", "real-data stand-in");
    ExperimentConfig cfg;
    cfg.kind = "real-data";
    cfg.lambda = 0.5;
    cfg.trials = 5;
    cfg.windows = 60;
    cfg.grid = 3;
    cfg.seed = 79; // the pinned path's global maximum falls inside the
                   // coverable window range for this seed
    cfg.gbm_minutes = 500000;

    const harness::PriceSeries raw =
        harness::gbm_series(cfg.gbm_minutes, 100.0, cfg.gbm_drift, cfg.gbm_vol, cfg.seed);
    const harness::PriceSeries pinned = harness::pin_extremes(raw, 3858.0, 108946.0);

    const harness::NormalizedSeries norm = harness::normalize_series(pinned);
    c.check(std::abs(norm.theta - 108946.0 / 3858.0) <= 1e-9,
            "normalized theta " + fmt(norm.theta) + " not U/L");
    c.check(std::abs(norm.theta - 28.24) <= 0.01, "theta not within 0.01 of 28.24");

    const auto records = harness::real_data(harness::resolve(cfg), pinned);
    const double r = records[0].r;
    const double consistency = 1.0 / (r * norm.theta);
    bool saw_alpha0 = false;
    for (const auto& rec : records) {
        if (rec.error_level == 0.0) {
            saw_alpha0 = true;
            c.check(rec.realized_ratio >= consistency - 1e-9,
                    "alpha=0 ratio below consistency");
            c.check(rec.realized_ratio <= consistency + 0.05,
                    "alpha=0 ratio " + fmt(rec.realized_ratio) + " far above consistency " +
                        fmt(consistency));
        }
        c.check(rec.realized_ratio >= r - 1e-9, "worst window ratio below robustness");
    }
    c.check(saw_alpha0, "alpha = 0 row missing");
}

} // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion1_pareto_front();
    criterion2_membership();
    criterion3_multiplicative_dominance();
    criterion4_brittleness_gap();
    criterion5_additive_smoothness();
    criterion6_uniform_error_example();
    criterion7_transport_chain();
    criterion8_wasserstein();
    criterion9_figure_reproduction();
    criterion10_determinism();
    criterion11_real_data_standin();
    if (failures == 0)
        std::printf("all criteria passed\n");
    else
        std::printf("%d criterion(s) FAILED\n", failures);
    return failures;
}
