#include "onemax/harness/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace onemax::harness {

ResolvedConfig resolve(const ExperimentConfig& cfg) {
    if (cfg.lambda && cfg.r)
        throw config_error("provide exactly one of lambda and r, not both");
    if (!(cfg.theta > 1.0))
        throw config_error("theta must be > 1");
    if (cfg.trials < 1)
        throw config_error("trials must be >= 1");
    if (cfg.n < 2)
        throw config_error("n must be >= 2");
    if (cfg.grid < 2)
        throw config_error("grid must be >= 2");
    for (double rho : cfg.rho)
        if (!(rho >= 0.0 && rho <= 1.0))
            throw config_error("rho values must lie in [0, 1]");
    if (cfg.rho.empty())
        throw config_error("need at least one rho value");

    ProblemParams params(cfg.theta);
    double lambda, r;
    if (cfg.r) {
        r = *cfg.r;
        lambda = r_to_lambda(r, params);
        if (!(lambda >= -1e-9 && lambda <= 1.0 + 1e-9))
            throw config_error("r outside [1/theta, theta^(-1/2)]");
    } else {
        lambda = cfg.lambda.value_or(0.5);
        if (!(lambda >= 0.0 && lambda <= 1.0))
            throw config_error("lambda must lie in [0, 1]");
        r = lambda_to_r(lambda, params);
    }
    return ResolvedConfig{cfg, params, lambda, r};
}

namespace {

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos)
        return "";
    const auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

double parse_real(const std::string& value, const std::string& key) {
    double out = 0.0;
    const char* last = value.data() + value.size();
    const auto res = std::from_chars(value.data(), last, out);
    if (res.ec != std::errc{} || res.ptr != last)
        throw config_error("config key '" + key + "': malformed number '" + value + "'");
    return out;
}

std::uint64_t parse_count(const std::string& value, const std::string& key) {
    std::uint64_t out = 0;
    const char* last = value.data() + value.size();
    const auto res = std::from_chars(value.data(), last, out);
    if (res.ec != std::errc{} || res.ptr != last)
        throw config_error("config key '" + key + "': malformed integer '" + value + "'");
    return out;
}

} // namespace

void apply_config_file(ExperimentConfig& cfg, const std::string& path,
                       const std::function<bool(const std::string&)>& flag_given) {
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open config file: " + path);

    const auto given = [&](const char* flag) { return flag_given && flag_given(flag); };
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line.substr(0, line.find('#')));
        if (stripped.empty())
            continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw config_error("config " + path + ":" + std::to_string(line_no) +
                               ": expected key=value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));

        if (key == "theta") {
            if (!given("--theta")) cfg.theta = parse_real(value, key);
        } else if (key == "lambda") {
            if (!given("--lambda") && !given("--r")) cfg.lambda = parse_real(value, key);
        } else if (key == "r") {
            if (!given("--r") && !given("--lambda")) cfg.r = parse_real(value, key);
        } else if (key == "rho") {
            if (!given("--rho")) {
                cfg.rho.clear();
                std::istringstream items(value);
                std::string item;
                while (items >> item)
                    cfg.rho.push_back(parse_real(item, key));
                if (cfg.rho.empty())
                    throw config_error("config key 'rho': no values");
            }
        } else if (key == "n") {
            if (!given("--n")) cfg.n = parse_count(value, key);
        } else if (key == "trials") {
            if (!given("--trials")) cfg.trials = parse_count(value, key);
        } else if (key == "seed") {
            if (!given("--seed")) cfg.seed = parse_count(value, key);
        } else if (key == "grid") {
            if (!given("--grid")) cfg.grid = parse_count(value, key);
        } else if (key == "delta") {
            if (!given("--delta")) cfg.delta = parse_real(value, key);
        } else if (key == "input") {
            if (!given("--input")) cfg.input_path = value;
        } else if (key == "out") {
            if (!given("--out")) cfg.out_path = value;
        } else if (key == "windows") {
            if (!given("--windows")) cfg.windows = parse_count(value, key);
        } else if (key == "gbm-drift") {
            if (!given("--gbm-drift")) cfg.gbm_drift = parse_real(value, key);
        } else if (key == "gbm-vol") {
            if (!given("--gbm-vol")) cfg.gbm_vol = parse_real(value, key);
        } else if (key == "gbm-minutes") {
            if (!given("--gbm-minutes")) cfg.gbm_minutes = parse_count(value, key);
        } else {
            throw config_error("config " + path + ":" + std::to_string(line_no) +
                               ": unknown key '" + key + "'");
        }
    }
}

} // namespace onemax::harness
