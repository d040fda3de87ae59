#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "onemax/core.hpp"
#include "onemax/thresholds.hpp"

namespace onemax::harness {

/// Bad or inconsistent experiment configuration; the CLI maps this to exit
/// code 2.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shared knobs of every experiment driver. Exactly one of lambda/r may be
/// given; the other is derived. Defaults mirror the synthetic setup
/// (theta = 5, lambda = 0.5).
struct ExperimentConfig {
    std::string kind;
    double theta = 5.0;
    std::optional<double> lambda;
    std::optional<double> r;
    std::vector<double> rho = {0.0, 0.5, 1.0};
    std::uint64_t n = 1000;       // instance length for synthetic sweeps
    std::uint64_t trials = 500;   // samples per grid cell / repeats
    std::uint64_t seed = 1;
    std::uint64_t grid = 21;      // error levels and p* grid density
    double delta = 0.01;          // brittleness probe offset
    std::string input_path;      // real-data CSV; empty selects the GBM stand-in
    std::string out_path;

    // Geometric-Brownian-motion stand-in for the real-price experiment.
    double gbm_drift = 0.10;     // annualized
    double gbm_vol = 0.90;       // annualized
    std::uint64_t gbm_minutes = 260000;
    std::uint64_t windows = 100; // windows sampled per repeat
};

/// Derived quantities shared by the drivers.
struct ResolvedConfig {
    ExperimentConfig cfg;
    ProblemParams params;
    double lambda;
    double r;

    ThresholdSpec spec(double rho) const { return ThresholdSpec(r, rho, params); }
};

/// Validates the config and fills in the lambda/r pair.
ResolvedConfig resolve(const ExperimentConfig& cfg);

/// Applies a flat key=value config file (keys mirror the CLI flags, '#'
/// comments allowed). Keys whose flag was already given on the command line
/// are skipped, so flags override the file. Unknown keys and malformed
/// values raise config_error.
void apply_config_file(ExperimentConfig& cfg, const std::string& path,
                       const std::function<bool(const std::string&)>& flag_given);

} // namespace onemax::harness
