#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "onemax/core.hpp"

namespace onemax::harness {

enum class DataErrorKind {
    missing_file,
    bad_header,
    malformed_row,
    non_monotonic_timestamps,
    non_positive_price,
    insufficient_span,
    write_failure,
};

/// Malformed or missing input data; the CLI maps this to exit code 3.
class data_error : public std::runtime_error {
public:
    data_error(DataErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    DataErrorKind kind() const { return kind_; }

private:
    DataErrorKind kind_;
};

/// Minute-resolution price rows with nondecreasing timestamps.
struct PriceSeries {
    std::vector<std::int64_t> timestamps;
    std::vector<double> prices;

    std::size_t size() const { return prices.size(); }
};

/// Reads a "timestamp,price" CSV; aborts with the offending line number on
/// the first malformed row.
PriceSeries ingest_csv(const std::string& path);

/// Writes the series back out (fixture generation and round trips).
void write_series_csv(const PriceSeries& series, const std::string& path);

/// Rescales prices by the observed minimum L so the range becomes [1, theta].
struct NormalizedSeries {
    Instance instance;
    double theta;
    double scale; // the observed minimum L
};

NormalizedSeries normalize_series(const PriceSeries& series);

/// One experiment outcome row. Wall time is kept in memory only: emitted
/// files must be byte-identical across reruns.
struct RunRecord {
    std::string experiment;
    double theta = 0.0;
    double lambda = 0.0;
    double r = 0.0;
    double rho = 0.0;
    std::uint64_t n = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t grid = 0;
    double context = 0.0; // per-kind companion value (worst p*, E[P*], ...)
    double error_level = 0.0;
    double realized_ratio = 0.0;
    double theoretical_bound = 0.0;
    bool clipped = false;
    double wall_time_ms = 0.0; // not serialized

    bool operator==(const RunRecord&) const = default;
};

/// Column order of the emitted CSV; documented in the README.
std::string run_record_header();

/// Emits header plus one row per record, 12 significant digits, '.' decimal
/// point regardless of locale.
void emit_csv(const std::vector<RunRecord>& records, const std::string& path);

/// Reads back a file produced by emit_csv (wall time resets to zero).
std::vector<RunRecord> read_records_csv(const std::string& path);

} // namespace onemax::harness
