#include "onemax/harness/gbm.hpp"

#include <algorithm>
#include <cmath>

#include "onemax/rng.hpp"

namespace onemax::harness {

PriceSeries gbm_series(std::uint64_t minutes, double start_price, double drift, double vol,
                       std::uint64_t seed, std::int64_t start_timestamp) {
    if (minutes < 2)
        throw domain_error("gbm_series: need at least 2 minutes");
    if (!(start_price > 0.0))
        throw domain_error("gbm_series: start price must be positive");

    constexpr double minutes_per_year = 365.25 * 24.0 * 60.0;
    const double dt = 1.0 / minutes_per_year;
    const double drift_term = (drift - 0.5 * vol * vol) * dt;
    const double vol_term = vol * std::sqrt(dt);

    PriceSeries series;
    series.timestamps.resize(minutes);
    series.prices.resize(minutes);
    double log_price = std::log(start_price);
    for (std::uint64_t i = 0; i < minutes; ++i) {
        series.timestamps[i] = start_timestamp + static_cast<std::int64_t>(i) * 60;
        series.prices[i] = std::exp(log_price);
        const double u = CounterRng::uniform01(seed, /*stream=*/0x67626d, i);
        log_price += drift_term + vol_term * inverse_normal_cdf(std::min(std::max(u, 1e-12), 1.0 - 1e-12));
    }
    return series;
}

PriceSeries pin_extremes(const PriceSeries& series, double target_min, double target_max) {
    if (series.prices.empty())
        throw domain_error("pin_extremes: empty series");
    if (!(0.0 < target_min && target_min < target_max))
        throw domain_error("pin_extremes: need 0 < target_min < target_max");
    double lo = series.prices[0], hi = series.prices[0];
    for (double p : series.prices) {
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    if (!(hi > lo))
        throw domain_error("pin_extremes: constant series");

    // log-affine map sending [lo, hi] onto [target_min, target_max]
    const double slope = std::log(target_max / target_min) / std::log(hi / lo);
    PriceSeries out = series;
    for (double& p : out.prices)
        p = target_min * std::exp(slope * std::log(p / lo));
    return out;
}

} // namespace onemax::harness
