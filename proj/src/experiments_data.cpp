#include <algorithm>
#include <cmath>
#include <sstream>

#include "onemax/guarantees.hpp"
#include "onemax/harness/experiments.hpp"
#include "onemax/parallel.hpp"
#include "onemax/rng.hpp"
#include "onemax/stochastic.hpp"
#include "onemax/transport.hpp"

namespace onemax::harness {

namespace {

double grid_value(double lo, double hi, std::uint64_t idx, std::uint64_t count) {
    return lo + (hi - lo) * static_cast<double>(idx) / static_cast<double>(count - 1);
}

RunRecord base_record(const ResolvedConfig& rc, double rho) {
    RunRecord rec;
    rec.experiment = rc.cfg.kind;
    rec.theta = rc.cfg.theta;
    rec.lambda = rc.lambda;
    rec.r = rc.r;
    rec.rho = rho;
    rec.n = rc.cfg.n;
    rec.trials = rc.cfg.trials;
    rec.seed = rc.cfg.seed;
    rec.grid = rc.cfg.grid;
    return rec;
}

} // namespace

std::vector<RunRecord> stochastic_bounds(const ResolvedConfig& rc) {
    const double theta = rc.cfg.theta;
    const std::uint64_t grid = rc.cfg.grid;
    const std::uint64_t trials = rc.cfg.trials;
    const ThresholdSpec spec = rc.spec(1.0);
    const GuaranteeParams gp = make_guarantee_params(spec);
    const double s = gp.s_rho;
    const double step = instance_grid_step(rc.params, rc.cfg.n);

    struct Cell {
        double p_star = 0.0;
        double eps = 0.0;
        double mean = 0.0;
        double se = 0.0;
        double lower = 0.0;
    };
    const std::size_t cells = grid * grid;
    std::vector<Cell> results(cells);

    auto body = [&](std::size_t cell) {
        const std::uint64_t pi = cell / grid;
        const std::uint64_t ei = cell % grid;
        const double p_target = grid_value(1.0 + (theta - 1.0) / 16.0,
                                           theta - (theta - 1.0) / 16.0, pi, grid);
        const Instance instance = worst_case_instance(rc.params, rc.cfg.n, p_target);
        const double p_star = max_price(instance);
        const double eps = std::min(theta - p_star, p_star - 1.0) * 0.999 *
                           static_cast<double>(ei + 1) / static_cast<double>(grid);

        const double exact = lambda_functional(
            DistributionSpec{UniformInterval{p_star - eps, p_star + eps}}, p_star, s, rc.params);
        const double lower = lambda_uniform_lower_bound(p_star, eps, s, rc.params);
        if (lower > exact + 1e-9)
            throw invariant_violation("stochastic-bounds: closed-form lower bound exceeds the "
                                      "exact functional");

        double sum = 0.0, sum_sq = 0.0;
        for (std::uint64_t t = 0; t < trials; ++t) {
            const double u = CounterRng::uniform01(rc.cfg.seed, cell, t);
            const double y = p_star - eps + u * 2.0 * eps;
            const double ratio =
                run_threshold(instance, phi_rho(spec, y), rc.params).payoff / p_star;
            sum += ratio;
            sum_sq += ratio * ratio;
        }
        const double mean = sum / static_cast<double>(trials);
        const double var = std::max(0.0, sum_sq / static_cast<double>(trials) - mean * mean);
        results[cell] = Cell{p_star, eps, mean, std::sqrt(var / static_cast<double>(trials)), lower};
    };
    parallel_for(cells, body);

    std::vector<RunRecord> records;
    records.reserve(cells);
    for (std::size_t cell = 0; cell < cells; ++cell) {
        const Cell& c = results[cell];
        RunRecord rec = base_record(rc, 1.0);
        rec.context = c.p_star;
        rec.error_level = c.eps;
        rec.realized_ratio = c.mean;
        rec.theoretical_bound = std::max(spec.r, spec.consistency() * c.lower);
        if (c.mean < rec.theoretical_bound - step - 3.0 * c.se - 1e-9)
            throw invariant_violation("stochastic-bounds: simulated mean fell below the bound");
        records.push_back(std::move(rec));
    }
    return records;
}

namespace {

DiscreteMarginal random_marginal(const ProblemParams& params, std::uint64_t seed,
                                 std::uint64_t stream, std::size_t atoms) {
    std::vector<double> locations(atoms), weights(atoms);
    for (std::size_t i = 0; i < atoms; ++i) {
        locations[i] =
            1.0 + (params.theta - 1.0) * CounterRng::uniform01(seed, stream, 2 * i);
        weights[i] = 0.1 + CounterRng::uniform01(seed, stream, 2 * i + 1);
    }
    std::sort(locations.begin(), locations.end());
    for (std::size_t i = 1; i < atoms; ++i)
        if (locations[i] <= locations[i - 1])
            locations[i] = std::nextafter(locations[i - 1], params.theta + 1.0);
    double total = 0.0;
    for (double w : weights)
        total += w;
    for (double& w : weights)
        w /= total;
    // Renormalization dust goes to the heaviest atom so the mass is exact.
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < atoms; ++i)
        sum += weights[i];
    weights[atoms - 1] = 1.0 - sum;
    return make_discrete_marginal(params, std::move(locations), std::move(weights));
}

} // namespace

OtBoundsResult ot_bounds(const ResolvedConfig& rc) {
    const ThresholdSpec spec = rc.spec(1.0);
    const double s = smoothness_exponent_rho1(spec);
    const std::uint64_t pairs = rc.cfg.trials;

    OtBoundsResult out;
    double worst_gap = 0.0;
    double worst_w1_diff = 0.0;
    for (std::uint64_t k = 0; k < pairs; ++k) {
        const std::size_t atoms_f =
            2 + static_cast<std::size_t>(CounterRng::uniform01(rc.cfg.seed, 7000 + k, 0) * 48.0);
        const std::size_t atoms_g =
            2 + static_cast<std::size_t>(CounterRng::uniform01(rc.cfg.seed, 7000 + k, 1) * 48.0);
        const DiscreteMarginal F = random_marginal(rc.params, rc.cfg.seed, 7100 + k, atoms_f);
        const DiscreteMarginal G = random_marginal(rc.params, rc.cfg.seed, 7200 + k, atoms_g);

        const TransportPlan plan = min_cost_coupling(F, G, s);
        const double mean_f = marginal_mean(F);
        const double fraction_min = plan.objective / mean_f;
        const double dual = dual_lower_bound(F, s, rc.params);
        const double primal_dual_gap = std::abs(plan.objective - plan.dual_objective(F, G));

        std::vector<double> product(F.size() * G.size());
        for (std::size_t i = 0; i < F.size(); ++i)
            for (std::size_t j = 0; j < G.size(); ++j)
                product[i * G.size() + j] = F.weights[i] * G.weights[j];
        const double fraction_product = coupling_cost_fraction(
            CouplingSpec{CouplingDiscreteMatrix{F, G, std::move(product)}}, s, rc.params);

        if (!(fraction_min <= 1.0 + 1e-9))
            throw invariant_violation("ot-bounds: min-cost fraction exceeds 1");
        if (dual > fraction_min + 1e-8)
            throw invariant_violation("ot-bounds: dual bound exceeds the min-cost fraction");
        if (fraction_min > fraction_product + 1e-8)
            throw invariant_violation("ot-bounds: min-cost fraction exceeds a declared coupling");
        if (primal_dual_gap > 1e-8)
            throw invariant_violation("ot-bounds: LP primal and dual objectives disagree");

        const double w1 = wasserstein_1(F, G);
        const double w1_quantile = wasserstein_1_quantile(F, G);
        if (std::abs(w1 - w1_quantile) > 1e-12)
            throw invariant_violation("ot-bounds: W1 solver and quantile coupling disagree");

        worst_gap = std::max(worst_gap, primal_dual_gap);
        worst_w1_diff = std::max(worst_w1_diff, std::abs(w1 - w1_quantile));

        RunRecord rec = base_record(rc, 1.0);
        rec.context = mean_f;
        rec.error_level = w1;
        rec.realized_ratio = std::max(spec.r, spec.consistency() * fraction_product);
        rec.theoretical_bound = std::max(spec.r, spec.consistency() * fraction_min);
        out.records.push_back(std::move(rec));
    }

    // Discretization diagnostic: uniform marginals at grid and doubled grid.
    const std::uint64_t atoms = std::min<std::uint64_t>(rc.cfg.grid, 500);
    double bounds[2];
    for (int round = 0; round < 2; ++round) {
        const std::size_t count = static_cast<std::size_t>(atoms) << round;
        std::vector<double> locations(count), weights(count, 1.0 / static_cast<double>(count));
        for (std::size_t i = 0; i < count; ++i)
            locations[i] = 1.0 + (rc.cfg.theta - 1.0) * (static_cast<double>(i) + 0.5) /
                                     static_cast<double>(count);
        double dust = 1.0;
        for (std::size_t i = 0; i + 1 < count; ++i)
            dust -= weights[i];
        weights[count - 1] = dust;
        const DiscreteMarginal U = make_discrete_marginal(rc.params, locations, weights);
        bounds[round] = min_cost_coupling(U, U, s).objective / marginal_mean(U);
    }

    std::ostringstream summary;
    summary << "ot-bounds: " << pairs << " random pairs passed the bound chain; "
            << "max |primal - dual| = " << worst_gap
            << ", max |W1 solver - quantile| = " << worst_w1_diff
            << "; uniform discretization fraction " << bounds[0] << " at " << atoms
            << " atoms vs " << bounds[1] << " at " << 2 * atoms
            << " (discretization error estimate " << std::abs(bounds[0] - bounds[1]) << ")";
    out.summary = summary.str();
    return out;
}

namespace {

// Block-maximum index over a price array: first-acceptance and window-maximum
// queries in O(sqrt-ish) time instead of a full scan per window.
class BlockMaxIndex {
public:
    explicit BlockMaxIndex(const std::vector<double>& prices) : prices_(prices) {
        const std::size_t blocks = (prices.size() + kBlock - 1) / kBlock;
        block_max_.assign(blocks, 0.0);
        for (std::size_t b = 0; b < blocks; ++b) {
            double m = prices[b * kBlock];
            const std::size_t end = std::min(prices.size(), (b + 1) * kBlock);
            for (std::size_t i = b * kBlock; i < end; ++i)
                m = std::max(m, prices[i]);
            block_max_[b] = m;
        }
    }

    // First index in [begin, end) with price >= threshold, or end.
    std::size_t first_at_least(std::size_t begin, std::size_t end, double threshold) const {
        std::size_t i = begin;
        while (i < end) {
            const std::size_t b = i / kBlock;
            const std::size_t block_end = std::min(end, (b + 1) * kBlock);
            if (i % kBlock == 0 && block_end == (b + 1) * kBlock && block_max_[b] < threshold) {
                i = block_end; // whole block below threshold
                continue;
            }
            for (; i < block_end; ++i)
                if (prices_[i] >= threshold)
                    return i;
        }
        return end;
    }

    double range_max(std::size_t begin, std::size_t end) const {
        double m = prices_[begin];
        std::size_t i = begin;
        while (i < end) {
            const std::size_t b = i / kBlock;
            const std::size_t block_end = std::min(end, (b + 1) * kBlock);
            if (i % kBlock == 0 && block_end == (b + 1) * kBlock) {
                m = std::max(m, block_max_[b]);
            } else {
                for (std::size_t j = i; j < block_end; ++j)
                    m = std::max(m, prices_[j]);
            }
            i = block_end;
        }
        return m;
    }

private:
    static constexpr std::size_t kBlock = 256;
    const std::vector<double>& prices_;
    std::vector<double> block_max_;
};

} // namespace

namespace {
constexpr std::size_t kRealDataWindow = 100800; // ten weeks of minutes

void check_real_data_span(const PriceSeries& series) {
    if (series.size() < 2 * kRealDataWindow)
        throw data_error(DataErrorKind::insufficient_span,
                         "real-data: series must span at least 20 weeks of minute data (" +
                             std::to_string(2 * kRealDataWindow) + " rows), got " +
                             std::to_string(series.size()));
}
} // namespace

WindowDraw draw_window(std::uint64_t seed, std::uint64_t repeat, std::uint64_t windows,
                       std::uint64_t window_index, std::size_t start_range) {
    const std::uint64_t stream = 9000 + repeat * windows + window_index;
    const double u0 = CounterRng::uniform01(seed, stream, 0);
    const double u1 = CounterRng::uniform01(seed, stream, 1);
    const std::size_t start =
        kRealDataWindow +
        std::min(start_range - 1, static_cast<std::size_t>(u0 * static_cast<double>(start_range)));
    return WindowDraw{start, u1 < 0.75};
}

std::vector<RunRecord> real_data(const ResolvedConfig& rc, const PriceSeries& series) {
    constexpr std::size_t kWindow = kRealDataWindow;
    check_real_data_span(series);

    const NormalizedSeries norm = normalize_series(series);
    const ProblemParams params(norm.theta);
    const double r = lambda_to_r(rc.lambda, params);
    const std::vector<double>& prices = norm.instance.prices;
    const BlockMaxIndex index(prices);

    const std::uint64_t alphas = rc.cfg.grid;
    const std::uint64_t repeats = rc.cfg.trials;
    const std::uint64_t windows = rc.cfg.windows;
    const std::size_t start_range = prices.size() - 2 * kWindow + 1;

    const ThresholdSpec spec0(r, 0.0, params);
    const ThresholdSpec spec1(r, 1.0, params);

    // Windows and the worst-case price replacement are shared across alpha and
    // rho; streams depend only on (repeat, window).
    struct Window {
        std::size_t start;
        bool replaced;
        double max_w0;      // before replacement
        double max_w0_mod;  // after replacement
        double max_w_prev;
    };
    std::vector<Window> draws(repeats * windows);
    parallel_for(repeats * windows, [&](std::size_t idx) {
        const WindowDraw draw =
            draw_window(rc.cfg.seed, idx / windows, windows, idx % windows, start_range);
        const std::size_t start = draw.start;
        const std::size_t end = start + kWindow;
        const double max_body = index.range_max(start, end - 1);
        const double last = draw.replace_last ? 1.0 : prices[end - 1];
        draws[idx] = Window{start, draw.replace_last, std::max(max_body, prices[end - 1]),
                            std::max(max_body, last), index.range_max(start - kWindow, start)};
    });

    struct CellResult {
        double mean_r0 = 0.0;
        double mean_r1 = 0.0;
    };
    std::vector<CellResult> per_alpha(alphas);

    parallel_for(alphas, [&](std::size_t a) {
        const double alpha = grid_value(0.0, 1.0, a, alphas);
        double sum0 = 0.0, sum1 = 0.0;
        for (std::uint64_t t = 0; t < repeats; ++t) {
            double worst0 = 2.0, worst1 = 2.0;
            for (std::uint64_t j = 0; j < windows; ++j) {
                const Window& w = draws[t * windows + j];
                const double y = std::clamp(
                    alpha * w.max_w_prev + (1.0 - alpha) * w.max_w0, 1.0, params.theta);
                const std::size_t end = w.start + kWindow;
                const double p_star = w.max_w0_mod;
                const double last = w.replaced ? 1.0 : prices[end - 1];
                for (int rho_idx = 0; rho_idx < 2; ++rho_idx) {
                    const double threshold = phi_rho(rho_idx == 0 ? spec0 : spec1, y);
                    const std::size_t hit = index.first_at_least(w.start, end - 1, threshold);
                    double payoff = 1.0;
                    if (hit < end - 1)
                        payoff = prices[hit];
                    else if (last >= threshold)
                        payoff = last;
                    const double ratio = payoff / p_star;
                    (rho_idx == 0 ? worst0 : worst1) = std::min(rho_idx == 0 ? worst0 : worst1, ratio);
                }
            }
            sum0 += worst0;
            sum1 += worst1;
        }
        per_alpha[a] = CellResult{sum0 / static_cast<double>(repeats),
                                  sum1 / static_cast<double>(repeats)};
    });

    std::vector<RunRecord> records;
    for (std::uint64_t a = 0; a < alphas; ++a) {
        for (double rho : {0.0, 1.0}) {
            RunRecord rec = base_record(rc, rho);
            rec.theta = norm.theta;
            rec.r = r;
            rec.context = norm.theta;
            rec.error_level = grid_value(0.0, 1.0, a, alphas);
            rec.realized_ratio = rho == 0.0 ? per_alpha[a].mean_r0 : per_alpha[a].mean_r1;
            rec.theoretical_bound = r; // robustness holds at every error level
            if (rec.realized_ratio < r - 1e-9)
                throw invariant_violation("real-data: worst window ratio fell below robustness");
            records.push_back(std::move(rec));
        }
    }
    return records;
}

namespace serial {

std::vector<RunRecord> real_data(const ResolvedConfig& rc, const PriceSeries& series) {
    constexpr std::size_t kWindow = kRealDataWindow;
    check_real_data_span(series);

    const NormalizedSeries norm = normalize_series(series);
    const ProblemParams params(norm.theta);
    const double r = lambda_to_r(rc.lambda, params);
    const std::vector<double>& prices = norm.instance.prices;

    const std::uint64_t alphas = rc.cfg.grid;
    const std::uint64_t repeats = rc.cfg.trials;
    const std::uint64_t windows = rc.cfg.windows;
    const std::size_t start_range = prices.size() - 2 * kWindow + 1;

    const ThresholdSpec spec0(r, 0.0, params);
    const ThresholdSpec spec1(r, 1.0, params);

    std::vector<RunRecord> records;
    std::vector<double> window(kWindow);
    for (std::uint64_t a = 0; a < alphas; ++a) {
        const double alpha = grid_value(0.0, 1.0, a, alphas);
        double sum0 = 0.0, sum1 = 0.0;
        for (std::uint64_t t = 0; t < repeats; ++t) {
            double worst0 = 2.0, worst1 = 2.0;
            for (std::uint64_t j = 0; j < windows; ++j) {
                const WindowDraw draw = draw_window(rc.cfg.seed, t, windows, j, start_range);
                const std::size_t end = draw.start + kWindow;
                window.assign(prices.begin() + static_cast<long>(draw.start),
                              prices.begin() + static_cast<long>(end));
                const double max_w_prev =
                    *std::max_element(prices.begin() + static_cast<long>(draw.start - kWindow),
                                      prices.begin() + static_cast<long>(draw.start));
                const double max_w0 = *std::max_element(window.begin(), window.end());
                const double y =
                    std::clamp(alpha * max_w_prev + (1.0 - alpha) * max_w0, 1.0, params.theta);
                if (draw.replace_last)
                    window.back() = 1.0;
                const double p_star = *std::max_element(window.begin(), window.end());
                worst0 = std::min(
                    worst0, run_threshold(std::span<const double>(window), phi_rho(spec0, y),
                                          params).payoff / p_star);
                worst1 = std::min(
                    worst1, run_threshold(std::span<const double>(window), phi_rho(spec1, y),
                                          params).payoff / p_star);
            }
            sum0 += worst0;
            sum1 += worst1;
        }
        for (double rho : {0.0, 1.0}) {
            RunRecord rec = base_record(rc, rho);
            rec.theta = norm.theta;
            rec.r = r;
            rec.context = norm.theta;
            rec.error_level = alpha;
            rec.realized_ratio = (rho == 0.0 ? sum0 : sum1) / static_cast<double>(repeats);
            rec.theoretical_bound = r;
            records.push_back(std::move(rec));
        }
    }
    return records;
}

} // namespace serial

} // namespace onemax::harness
