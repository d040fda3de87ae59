#pragma once

#include <cstdint>

#include "onemax/harness/csv.hpp"

namespace onemax::harness {

/// Minute-sampled geometric Brownian motion, the CI stand-in for real price
/// data. Drift and volatility are annualized; the path is a pure function of
/// the seed.
PriceSeries gbm_series(std::uint64_t minutes, double start_price, double drift, double vol,
                       std::uint64_t seed, std::int64_t start_timestamp = 1577836800);

/// Rescales a positive series in log space so its extremes match exactly
/// (fixtures that pin a target price range).
PriceSeries pin_extremes(const PriceSeries& series, double target_min, double target_max);

} // namespace onemax::harness
