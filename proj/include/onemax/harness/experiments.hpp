#pragma once

#include <string>
#include <vector>

#include "onemax/harness/config.hpp"
#include "onemax/harness/csv.hpp"

namespace onemax::harness {

/// Records of one sweep together with the Monte-Carlo standard error of each
/// record's realized ratio (the error at the worst p* cell).
struct SweepResult {
    std::vector<RunRecord> records;
    std::vector<double> std_errors;
};

/// Worst-case mean ratio per (rho, E_min) with predictions sampled uniformly
/// on [p* E_min, p* / E_min], clipped to [1, theta].
SweepResult sweep_multiplicative(const ResolvedConfig& rc);

/// Worst-case mean ratio per (rho, eta_max) with predictions sampled
/// uniformly on [p* - eta_max, p* + eta_max], clipped to [1, theta].
SweepResult sweep_additive(const ResolvedConfig& rc);

namespace serial {
SweepResult sweep_multiplicative(const ResolvedConfig& rc);
SweepResult sweep_additive(const ResolvedConfig& rc);
} // namespace serial

struct WindowDraw {
    std::size_t start;
    bool replace_last;
};

/// Shared window sampling of the sliding-window experiment; kept in one place
/// so the parallel driver and the serial reference see identical draws.
WindowDraw draw_window(std::uint64_t seed, std::uint64_t repeat, std::uint64_t windows,
                       std::uint64_t window_index, std::size_t start_range);

/// S_PO membership of the sampled threshold plus the worst-case consistency
/// sweep; throws invariant_violation when either check fails.
std::vector<RunRecord> pareto_check(const ResolvedConfig& rc);

/// Near-perfect prediction around the jump of the flat threshold; one record
/// per rho in {0, 1}.
std::vector<RunRecord> brittleness(const ResolvedConfig& rc);

/// Uniform-prediction cells (p*, eps): simulated mean ratio of the rho = 1
/// member against the closed-form lower bound.
std::vector<RunRecord> stochastic_bounds(const ResolvedConfig& rc);

/// Random discrete marginal pairs: worst-coupling bound, independent-coupling
/// bound, dual bound and Wasserstein-1 diagnostics; verifies the bound chain.
struct OtBoundsResult {
    std::vector<RunRecord> records;
    std::string summary;
};

OtBoundsResult ot_bounds(const ResolvedConfig& rc);

/// Sliding-window price experiment on a normalized series (real CSV or the
/// GBM stand-in): per (alpha, rho) mean of the worst window ratio. Queries go
/// through a block-maximum index; the serial reference materializes every
/// window and runs the plain acceptance rule instead.
std::vector<RunRecord> real_data(const ResolvedConfig& rc, const PriceSeries& series);

namespace serial {
std::vector<RunRecord> real_data(const ResolvedConfig& rc, const PriceSeries& series);
} // namespace serial

/// Independent Uniform([1, theta])^2 cost fraction over a (theta, s) grid.
std::vector<RunRecord> quad_surface(const ResolvedConfig& rc);

/// Dispatch by rc.cfg.kind; loads the input series (or generates the GBM
/// stand-in) for real-data.
struct ExperimentOutput {
    std::vector<RunRecord> records;
    std::string summary;
};

ExperimentOutput run_experiment(const ResolvedConfig& rc);

} // namespace onemax::harness
