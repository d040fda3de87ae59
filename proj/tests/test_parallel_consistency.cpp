#include <doctest.h>

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "onemax/guarantees.hpp"
#include "onemax/harness/experiments.hpp"
#include "onemax/harness/gbm.hpp"
#include "onemax/stochastic.hpp"

using namespace onemax;

// The OpenMP kernels must reproduce the serial reference results exactly:
// every cell is a pure function of its indices and aggregation happens in
// index order, so thread count cannot change a single bit.

TEST_CASE("bound verification kernels match the serial reference") {
    const ProblemParams params(5.0);
    const ThresholdSpec spec(lambda_to_r(0.5, params), 1.0, params);

    const SlackReport par = verify_multiplicative_bound(spec, 1000, 37, 41);
    const SlackReport ref = serial::verify_multiplicative_bound(spec, 1000, 37, 41);
    CHECK(par.min_slack == ref.min_slack);
    CHECK(par.worst_q == ref.worst_q);
    CHECK(par.worst_y == ref.worst_y);

    const SlackReport par_add = verify_additive_bound(spec, 1000, 37, 41);
    const SlackReport ref_add = serial::verify_additive_bound(spec, 1000, 37, 41);
    CHECK(par_add.min_slack == ref_add.min_slack);
    CHECK(par_add.worst_y == ref_add.worst_y);
}

TEST_CASE("monte-carlo estimators match the serial reference") {
    const ProblemParams params(5.0);
    const DistributionSpec G{UniformInterval{2.0, 4.0}};
    const double par = mc_lambda_estimate(G, 3.0, 2.0, params, 200000, 99, 5);
    const double ref = serial::mc_lambda_estimate(G, 3.0, 2.0, params, 200000, 99, 5);
    CHECK(par == ref);

    const DistributionSpec F{UniformInterval{1.0, 5.0}};
    CHECK(mc_upsilon_estimate(F, 3.0, 2.0, params, 100000, 7, 1) ==
          serial::mc_upsilon_estimate(F, 3.0, 2.0, params, 100000, 7, 1));
}

TEST_CASE("experiment sweeps match the serial reference record by record") {
    harness::ExperimentConfig cfg;
    cfg.kind = "sweep-mult";
    cfg.lambda = 0.5;
    cfg.n = 400;
    cfg.trials = 150;
    cfg.grid = 7;
    cfg.seed = 2024;
    const harness::ResolvedConfig rc = harness::resolve(cfg);

    const harness::SweepResult par = harness::sweep_multiplicative(rc);
    const harness::SweepResult ref = harness::serial::sweep_multiplicative(rc);
    REQUIRE(par.records.size() == ref.records.size());
    for (std::size_t i = 0; i < par.records.size(); ++i) {
        CHECK(par.records[i] == ref.records[i]);
        CHECK(par.std_errors[i] == ref.std_errors[i]);
    }

    harness::ExperimentConfig add_cfg = cfg;
    add_cfg.kind = "sweep-add";
    const harness::ResolvedConfig rc_add = harness::resolve(add_cfg);
    const harness::SweepResult par_add = harness::sweep_additive(rc_add);
    const harness::SweepResult ref_add = harness::serial::sweep_additive(rc_add);
    REQUIRE(par_add.records.size() == ref_add.records.size());
    for (std::size_t i = 0; i < par_add.records.size(); ++i)
        CHECK(par_add.records[i] == ref_add.records[i]);
}

#ifdef _OPENMP
TEST_CASE("thread count cannot change a single bit") {
    const ProblemParams params(5.0);
    const ThresholdSpec spec(lambda_to_r(0.5, params), 1.0, params);
    const DistributionSpec G{UniformInterval{1.5, 4.5}};

    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const SlackReport sweep_one = verify_multiplicative_bound(spec, 800, 23, 29);
    const double mc_one = mc_lambda_estimate(G, 2.7, 2.0, params, 150000, 13, 3);
    omp_set_num_threads(saved);
    const SlackReport sweep_many = verify_multiplicative_bound(spec, 800, 23, 29);
    const double mc_many = mc_lambda_estimate(G, 2.7, 2.0, params, 150000, 13, 3);

    CHECK(sweep_one.min_slack == sweep_many.min_slack);
    CHECK(sweep_one.worst_q == sweep_many.worst_q);
    CHECK(mc_one == mc_many);
}
#endif

TEST_CASE("block-indexed window experiment matches the materializing reference") {
    harness::ExperimentConfig cfg;
    cfg.kind = "real-data";
    cfg.lambda = 0.5;
    cfg.trials = 3;
    cfg.windows = 15;
    cfg.grid = 3;
    cfg.seed = 31;
    cfg.gbm_minutes = 205000;
    const harness::PriceSeries series =
        harness::gbm_series(cfg.gbm_minutes, 100.0, cfg.gbm_drift, cfg.gbm_vol, cfg.seed);
    const harness::ResolvedConfig rc = harness::resolve(cfg);

    const auto fast = harness::real_data(rc, series);
    const auto ref = harness::serial::real_data(rc, series);
    REQUIRE(fast.size() == ref.size());
    for (std::size_t i = 0; i < fast.size(); ++i)
        CHECK(fast[i] == ref[i]);
}
