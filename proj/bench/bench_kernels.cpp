// Timing comparison of the OpenMP kernels against their serial references.
// Not part of the test suite; run manually: ./bench_kernels [repeats]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "onemax/guarantees.hpp"
#include "onemax/harness/experiments.hpp"
#include "onemax/parallel.hpp"
#include "onemax/stochastic.hpp"

using namespace onemax;

namespace {

template <class F>
double time_ms(int repeats, F&& f) {
    double best = 1e300;
    for (int i = 0; i < repeats; ++i) {
        const auto start = std::chrono::steady_clock::now();
        f();
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        best = std::min(best, ms);
    }
    return best;
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms);
}

} // namespace

int main(int argc, char** argv) {
    const int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
    std::printf("threads available: %d\n", max_threads());

    const ProblemParams params(5.0);
    const ThresholdSpec spec(lambda_to_r(0.5, params), 1.0, params);

    {
        const double ser = time_ms(repeats, [&] {
            serial::verify_multiplicative_bound(spec, 10000, 200, 200);
        });
        const double par =
            time_ms(repeats, [&] { verify_multiplicative_bound(spec, 10000, 200, 200); });
        report("verify_multiplicative", ser, par);
    }

    {
        const DistributionSpec G{UniformInterval{2.0, 4.0}};
        const double ser = time_ms(repeats, [&] {
            serial::mc_lambda_estimate(G, 3.0, 2.0, params, 4000000, 1, 0);
        });
        const double par =
            time_ms(repeats, [&] { mc_lambda_estimate(G, 3.0, 2.0, params, 4000000, 1, 0); });
        report("mc_lambda_estimate", ser, par);
    }

    {
        harness::ExperimentConfig cfg;
        cfg.kind = "sweep-mult";
        cfg.lambda = 0.5;
        cfg.n = 1000;
        cfg.trials = 500;
        cfg.grid = 21;
        const harness::ResolvedConfig rc = harness::resolve(cfg);
        const double ser = time_ms(repeats, [&] { harness::serial::sweep_multiplicative(rc); });
        const double par = time_ms(repeats, [&] { harness::sweep_multiplicative(rc); });
        report("sweep_multiplicative", ser, par);
    }

    return 0;
}
