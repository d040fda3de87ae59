#include "onemax/harness/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

namespace onemax::harness {

namespace {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, const std::string& path, std::size_t line) {
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw data_error(DataErrorKind::malformed_row,
                         path + ":" + std::to_string(line) + ": malformed number '" +
                             std::string(text) + "'");
    return value;
}

std::uint64_t parse_u64(std::string_view text, const std::string& path, std::size_t line) {
    std::uint64_t value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw data_error(DataErrorKind::malformed_row,
                         path + ":" + std::to_string(line) + ": malformed integer '" +
                             std::string(text) + "'");
    return value;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

} // namespace

PriceSeries ingest_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw data_error(DataErrorKind::missing_file, "cannot open input file: " + path);

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line))
        throw data_error(DataErrorKind::bad_header, path + ": empty file");
    ++line_no;
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != "timestamp,price")
        throw data_error(DataErrorKind::bad_header,
                         path + ":1: expected header 'timestamp,price', got '" + line + "'");

    PriceSeries series;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const auto fields = split_commas(line);
        if (fields.size() != 2)
            throw data_error(DataErrorKind::malformed_row,
                             path + ":" + std::to_string(line_no) + ": expected 2 fields, got " +
                                 std::to_string(fields.size()));
        std::int64_t ts = 0;
        const auto res =
            std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), ts);
        if (res.ec != std::errc{} || res.ptr != fields[0].data() + fields[0].size())
            throw data_error(DataErrorKind::malformed_row,
                             path + ":" + std::to_string(line_no) + ": malformed timestamp '" +
                                 std::string(fields[0]) + "'");
        const double price = parse_double(fields[1], path, line_no);
        if (!(price > 0.0))
            throw data_error(DataErrorKind::non_positive_price,
                             path + ":" + std::to_string(line_no) +
                                 ": price must be positive, got " + std::string(fields[1]));
        if (!series.timestamps.empty() && ts < series.timestamps.back())
            throw data_error(DataErrorKind::non_monotonic_timestamps,
                             path + ":" + std::to_string(line_no) +
                                 ": timestamps must be nondecreasing");
        series.timestamps.push_back(ts);
        series.prices.push_back(price);
    }
    return series;
}

void write_series_csv(const PriceSeries& series, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw data_error(DataErrorKind::write_failure, "cannot open output file: " + path);
    out << "timestamp,price\n";
    for (std::size_t i = 0; i < series.size(); ++i)
        out << series.timestamps[i] << ',' << format_double(series.prices[i]) << '\n';
    if (!out)
        throw data_error(DataErrorKind::write_failure, "write failed: " + path);
}

NormalizedSeries normalize_series(const PriceSeries& series) {
    if (series.prices.empty())
        throw domain_error("normalize_series: empty series");
    double lo = series.prices[0], hi = series.prices[0];
    for (double p : series.prices) {
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    const double theta = hi / lo;
    if (!(theta > 1.0))
        throw domain_error("normalize_series: constant series has no range (theta = 1)");
    std::vector<double> scaled(series.size());
    for (std::size_t i = 0; i < series.size(); ++i)
        scaled[i] = series.prices[i] / lo;
    return NormalizedSeries{Instance{std::move(scaled)}, theta, lo};
}

std::string run_record_header() {
    return "experiment,theta,lambda,r,rho,n,trials,seed,grid,context,error_level,"
           "realized_ratio,theoretical_bound,clipped";
}

void emit_csv(const std::vector<RunRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw data_error(DataErrorKind::write_failure, "cannot open output file: " + path);
    out << run_record_header() << '\n';
    for (const RunRecord& rec : records) {
        out << rec.experiment << ',' << format_double(rec.theta) << ','
            << format_double(rec.lambda) << ',' << format_double(rec.r) << ','
            << format_double(rec.rho) << ',' << rec.n << ',' << rec.trials << ',' << rec.seed
            << ',' << rec.grid << ',' << format_double(rec.context) << ','
            << format_double(rec.error_level) << ',' << format_double(rec.realized_ratio) << ','
            << format_double(rec.theoretical_bound) << ',' << (rec.clipped ? 1 : 0) << '\n';
    }
    if (!out)
        throw data_error(DataErrorKind::write_failure, "write failed: " + path);
}

std::vector<RunRecord> read_records_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw data_error(DataErrorKind::missing_file, "cannot open input file: " + path);
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line))
        throw data_error(DataErrorKind::bad_header, path + ": empty file");
    ++line_no;
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != run_record_header())
        throw data_error(DataErrorKind::bad_header, path + ":1: unexpected record header");

    std::vector<RunRecord> records;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const auto f = split_commas(line);
        if (f.size() != 14)
            throw data_error(DataErrorKind::malformed_row,
                             path + ":" + std::to_string(line_no) + ": expected 14 fields");
        RunRecord rec;
        rec.experiment = std::string(f[0]);
        rec.theta = parse_double(f[1], path, line_no);
        rec.lambda = parse_double(f[2], path, line_no);
        rec.r = parse_double(f[3], path, line_no);
        rec.rho = parse_double(f[4], path, line_no);
        rec.n = parse_u64(f[5], path, line_no);
        rec.trials = parse_u64(f[6], path, line_no);
        rec.seed = parse_u64(f[7], path, line_no);
        rec.grid = parse_u64(f[8], path, line_no);
        rec.context = parse_double(f[9], path, line_no);
        rec.error_level = parse_double(f[10], path, line_no);
        rec.realized_ratio = parse_double(f[11], path, line_no);
        rec.theoretical_bound = parse_double(f[12], path, line_no);
        rec.clipped = parse_u64(f[13], path, line_no) != 0;
        records.push_back(std::move(rec));
    }
    return records;
}

} // namespace onemax::harness
