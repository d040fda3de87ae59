// Command-line harness: each subcommand drives one experiment and writes a
// CSV of run records. Exit codes: 0 success, 2 configuration error, 3 input
// data error, 4 invariant violation detected during a verification run.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

#include "onemax/core.hpp"
#include "onemax/harness/config.hpp"
#include "onemax/harness/csv.hpp"
#include "onemax/harness/experiments.hpp"

namespace {

using onemax::harness::ExperimentConfig;

struct KindDefaults {
    const char* kind;
    const char* description;
    std::uint64_t n;
    std::uint64_t trials;
    std::uint64_t grid;
};

constexpr KindDefaults kKinds[] = {
    {"pareto-check", "certify S_PO membership and the consistency sweep", 100000, 1, 10000},
    {"sweep-mult", "worst-case mean ratio vs multiplicative error level", 1000, 500, 21},
    {"sweep-add", "worst-case mean ratio vs additive error level", 1000, 500, 21},
    {"brittleness", "flat vs ramped threshold under a near-perfect prediction", 100000, 1, 2},
    {"stochastic-bounds", "simulated ratios vs closed-form distribution bounds", 1000, 500, 8},
    {"ot-bounds", "optimal-transport bound chain on random discrete marginals", 1000, 20, 64},
    {"real-data", "sliding-window price experiment (CSV input or GBM stand-in)", 1000, 50, 11},
    {"quad-surface", "independent-uniform bound surface over (theta, s)", 1000, 1, 21},
};

void add_common_options(CLI::App* sub, ExperimentConfig& cfg, double& lambda_opt, double& r_opt,
                        std::string& config_path) {
    sub->add_option("--theta", cfg.theta, "price range upper bound (> 1)");
    auto* lam = sub->add_option("--lambda", lambda_opt, "trust parameter in [0, 1]");
    auto* rr = sub->add_option("--r", r_opt, "robustness target in [1/theta, theta^-1/2]");
    lam->excludes(rr);
    rr->excludes(lam);
    sub->add_option("--rho", cfg.rho, "interpolation knob(s) in [0, 1], repeatable")
        ->expected(-1);
    sub->add_option("--n", cfg.n, "instance length for synthetic sweeps");
    sub->add_option("--trials", cfg.trials, "samples per cell / repeats / random pairs");
    sub->add_option("--seed", cfg.seed, "64-bit RNG seed");
    sub->add_option("--grid", cfg.grid, "grid density (error levels, p*, membership)");
    sub->add_option("--delta", cfg.delta, "brittleness probe offset");
    sub->add_option("--input", cfg.input_path, "input price CSV (timestamp,price)");
    sub->add_option("--out", cfg.out_path, "output CSV path");
    sub->add_option("--windows", cfg.windows, "windows per repeat (real-data)");
    sub->add_option("--gbm-drift", cfg.gbm_drift, "GBM stand-in drift (annualized)");
    sub->add_option("--gbm-vol", cfg.gbm_vol, "GBM stand-in volatility (annualized)");
    sub->add_option("--gbm-minutes", cfg.gbm_minutes, "GBM stand-in length in minutes");
    sub->add_option("--config", config_path,
                    "flat key=value file mirroring the flags; flags override");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"one-max-search threshold algorithms: guarantees, bounds, experiments"};
    app.require_subcommand(1);

    struct SubState {
        ExperimentConfig cfg;
        double lambda_opt = -1.0;
        double r_opt = -1.0;
        std::string config_path;
        CLI::App* sub = nullptr;
    };
    std::vector<SubState> states(std::size(kKinds));
    for (std::size_t i = 0; i < std::size(kKinds); ++i) {
        SubState& st = states[i];
        st.cfg.kind = kKinds[i].kind;
        st.cfg.n = kKinds[i].n;
        st.cfg.trials = kKinds[i].trials;
        st.cfg.grid = kKinds[i].grid;
        st.sub = app.add_subcommand(kKinds[i].kind, kKinds[i].description);
        add_common_options(st.sub, st.cfg, st.lambda_opt, st.r_opt, st.config_path);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    for (SubState& st : states) {
        if (!st.sub->parsed())
            continue;
        try {
            if (st.sub->count("--lambda"))
                st.cfg.lambda = st.lambda_opt;
            if (st.sub->count("--r"))
                st.cfg.r = st.r_opt;
            if (!st.config_path.empty())
                onemax::harness::apply_config_file(
                    st.cfg, st.config_path,
                    [&](const std::string& flag) { return st.sub->count(flag) > 0; });
            if (st.cfg.out_path.empty())
                st.cfg.out_path = st.cfg.kind + ".csv";

            const onemax::harness::ResolvedConfig rc = onemax::harness::resolve(st.cfg);
            const onemax::harness::ExperimentOutput out = onemax::harness::run_experiment(rc);
            onemax::harness::emit_csv(out.records, st.cfg.out_path);
            if (!out.summary.empty())
                std::printf("%s\n", out.summary.c_str());
            std::printf("%s: wrote %zu records to %s\n", st.cfg.kind.c_str(),
                        out.records.size(), st.cfg.out_path.c_str());
            return 0;
        } catch (const onemax::harness::config_error& e) {
            std::fprintf(stderr, "config error: %s\n", e.what());
            return 2;
        } catch (const onemax::harness::data_error& e) {
            std::fprintf(stderr, "input data error: %s\n", e.what());
            return 3;
        } catch (const onemax::invariant_violation& e) {
            std::fprintf(stderr, "invariant violation: %s\n", e.what());
            return 4;
        } catch (const onemax::domain_error& e) {
            std::fprintf(stderr, "config error: %s\n", e.what());
            return 2;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 1;
        }
    }
    return 2;
}
