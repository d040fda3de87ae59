#include "onemax/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "onemax/guarantees.hpp"
#include "onemax/parallel.hpp"
#include "onemax/quadrature.hpp"
#include "onemax/rng.hpp"

namespace onemax {

namespace {

// Integral of t^gamma over [a, b], with the log branch at gamma = -1. The
// expm1 form stays accurate when gamma + 1 underflows toward zero.
double power_integral(double a, double b, double gamma) {
    if (b <= a)
        return 0.0;
    const double t = gamma + 1.0;
    if (t == 0.0)
        return std::log(b / a);
    return std::pow(a, t) * std::expm1(t * std::log(b / a)) / t;
}

double error_power(double p_star, double y, double s) {
    return std::pow(std::min(p_star / y, y / p_star), s);
}

void check_exponent(double s) {
    if (!(s >= 1.0))
        throw domain_error("stochastic functional: exponent s must be >= 1");
}

void check_in_range(double x, const ProblemParams& params, const char* what) {
    if (!(x >= 1.0 && x <= params.theta))
        throw domain_error(std::string(what) + " outside [1, theta]");
}

void validate_interval(const UniformInterval& iv, const ProblemParams& params) {
    if (!(iv.lo >= 1.0 && iv.hi <= params.theta && iv.lo < iv.hi))
        throw domain_error("UniformInterval: need 1 <= lo < hi <= theta");
}

// lambda_functional restricted to one uniform interval.
double lambda_uniform(const UniformInterval& iv, double p_star, double s) {
    const double width = iv.hi - iv.lo;
    double below = 0.0, above = 0.0;
    if (iv.lo < p_star)
        below = std::pow(p_star, -s) * power_integral(iv.lo, std::min(iv.hi, p_star), s);
    if (iv.hi > p_star)
        above = std::pow(p_star, s) * power_integral(std::max(iv.lo, p_star), iv.hi, -s);
    return (below + above) / width;
}

// Numerator of upsilon_functional restricted to one uniform interval:
// integral of p * E(p, y)^s over the interval, unnormalized.
double upsilon_uniform_numer(const UniformInterval& iv, double y, double s) {
    const double width = iv.hi - iv.lo;
    double below = 0.0, above = 0.0;
    if (iv.lo < y)
        below = std::pow(y, -s) * power_integral(iv.lo, std::min(iv.hi, y), 1.0 + s);
    if (iv.hi > y)
        above = std::pow(y, s) * power_integral(std::max(iv.lo, y), iv.hi, 1.0 - s);
    return (below + above) / width;
}

} // namespace

void validate_distribution(const DistributionSpec& spec, const ProblemParams& params) {
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Dirac>) {
                check_in_range(d.point, params, "Dirac point");
            } else if constexpr (std::is_same_v<T, UniformInterval>) {
                validate_interval(d, params);
            } else if constexpr (std::is_same_v<T, UniformMixture>) {
                if (d.weights.empty() || d.weights.size() != d.intervals.size())
                    throw domain_error("UniformMixture: need matching, nonempty weight/interval lists");
                double total = 0.0;
                for (std::size_t k = 0; k < d.weights.size(); ++k) {
                    if (!(d.weights[k] > 0.0))
                        throw domain_error("UniformMixture: weights must be positive");
                    total += d.weights[k];
                    validate_interval(d.intervals[k], params);
                    if (k > 0 && !(d.intervals[k].lo >= d.intervals[k - 1].hi))
                        throw domain_error("UniformMixture: intervals must be sorted and disjoint");
                }
                if (std::abs(total - 1.0) > 1e-12)
                    throw domain_error("UniformMixture: weights must sum to 1");
            } else {
                if (d.samples.empty())
                    throw domain_error("Empirical: need at least one sample");
                for (double x : d.samples)
                    check_in_range(x, params, "Empirical sample");
            }
        },
        spec);
}

double distribution_mean(const DistributionSpec& spec) {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Dirac>) {
                return d.point;
            } else if constexpr (std::is_same_v<T, UniformInterval>) {
                return 0.5 * (d.lo + d.hi);
            } else if constexpr (std::is_same_v<T, UniformMixture>) {
                double mean = 0.0;
                for (std::size_t k = 0; k < d.weights.size(); ++k)
                    mean += d.weights[k] * 0.5 * (d.intervals[k].lo + d.intervals[k].hi);
                return mean;
            } else {
                double mean = 0.0;
                for (double x : d.samples)
                    mean += x;
                return mean / static_cast<double>(d.samples.size());
            }
        },
        spec);
}

std::vector<double> distribution_breakpoints(const DistributionSpec& spec) {
    return std::visit(
        [](const auto& d) -> std::vector<double> {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Dirac>) {
                return {d.point};
            } else if constexpr (std::is_same_v<T, UniformInterval>) {
                return {d.lo, d.hi};
            } else if constexpr (std::is_same_v<T, UniformMixture>) {
                std::vector<double> pts;
                for (const auto& iv : d.intervals) {
                    pts.push_back(iv.lo);
                    pts.push_back(iv.hi);
                }
                return pts;
            } else {
                std::vector<double> pts = d.samples;
                std::sort(pts.begin(), pts.end());
                return pts;
            }
        },
        spec);
}

DistributionSampler::DistributionSampler(const DistributionSpec& spec,
                                         const ProblemParams& params)
    : spec_(spec) {
    validate_distribution(spec, params);
    if (const auto* mix = std::get_if<UniformMixture>(&spec_)) {
        double cum = 0.0;
        for (double w : mix->weights) {
            cum += w;
            cumulative_.push_back(cum);
        }
        cumulative_.back() = 1.0;
    } else if (const auto* emp = std::get_if<Empirical>(&spec_)) {
        sorted_ = emp->samples;
        std::sort(sorted_.begin(), sorted_.end());
    }
}

double DistributionSampler::operator()(double u) const {
    u = std::clamp(u, 0.0, std::nextafter(1.0, 0.0));
    return std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Dirac>) {
                return d.point;
            } else if constexpr (std::is_same_v<T, UniformInterval>) {
                return d.lo + u * (d.hi - d.lo);
            } else if constexpr (std::is_same_v<T, UniformMixture>) {
                const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u,
                                                 [](double c, double x) { return c <= x; });
                const std::size_t k = static_cast<std::size_t>(it - cumulative_.begin());
                const double before = k == 0 ? 0.0 : cumulative_[k - 1];
                const double local = std::clamp((u - before) / d.weights[k], 0.0, 1.0);
                return d.intervals[k].lo + local * (d.intervals[k].hi - d.intervals[k].lo);
            } else {
                const std::size_t idx = std::min(
                    sorted_.size() - 1,
                    static_cast<std::size_t>(u * static_cast<double>(sorted_.size())));
                return sorted_[idx];
            }
        },
        spec_);
}

double lambda_functional(const DistributionSpec& G, double p_star, double s,
                         const ProblemParams& params) {
    check_exponent(s);
    check_in_range(p_star, params, "lambda_functional p*");
    validate_distribution(G, params);
    return std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Dirac>) {
                return error_power(p_star, d.point, s);
            } else if constexpr (std::is_same_v<T, UniformInterval>) {
                return lambda_uniform(d, p_star, s);
            } else if constexpr (std::is_same_v<T, UniformMixture>) {
                double total = 0.0;
                for (std::size_t k = 0; k < d.weights.size(); ++k)
                    total += d.weights[k] * lambda_uniform(d.intervals[k], p_star, s);
                return total;
            } else {
                double total = 0.0;
                for (double y : d.samples)
                    total += error_power(p_star, y, s);
                return total / static_cast<double>(d.samples.size());
            }
        },
        G);
}

namespace {

double uniform_bound_constant(double s, double theta) {
    const double c1 = s * (s - 1.0) / 6.0 * std::pow(theta, std::min(0.0, 2.0 - s));
    const double c2 = s * (1.0 + s) / 6.0;
    return (c1 * std::pow(theta, -s) + c2) / 2.0;
}

} // namespace

double lambda_uniform_lower_bound(double p_star, double eps, double s,
                                  const ProblemParams& params) {
    check_exponent(s);
    check_in_range(p_star, params, "lambda_uniform_lower_bound p*");
    if (!(eps > 0.0 && eps <= std::min(params.theta - p_star, p_star - 1.0)))
        throw domain_error("lambda_uniform_lower_bound: eps must satisfy "
                           "0 < eps <= min(theta - p*, p* - 1)");
    const double c = uniform_bound_constant(s, params.theta);
    return 1.0 - s / (2.0 * p_star) * eps - c * eps * eps;
}

double lambda_uniform_lower_bound_multiplicative(double p_star, double eps_prime, double s,
                                                 const ProblemParams& params) {
    check_in_range(p_star, params, "lambda_uniform_lower_bound_multiplicative p*");
    if (!(eps_prime > 0.0 &&
          eps_prime <= std::min(1.0 - 1.0 / p_star, params.theta / p_star - 1.0)))
        throw domain_error("lambda_uniform_lower_bound_multiplicative: eps' out of range");
    return lambda_uniform_lower_bound(p_star, eps_prime * p_star, s, params);
}

MixtureLowerBound lambda_mixture_lower_bound(const UniformMixture& mix, double p_star, double s,
                                             const ProblemParams& params) {
    check_exponent(s);
    check_in_range(p_star, params, "lambda_mixture_lower_bound p*");
    validate_distribution(DistributionSpec{mix}, params);

    double guaranteed = 0.0;
    double residual = 0.0;
    bool seen_containing = false;
    for (std::size_t k = 0; k < mix.weights.size(); ++k) {
        const UniformInterval& iv = mix.intervals[k];
        const double w = mix.weights[k];
        if (!seen_containing && iv.lo <= p_star && p_star <= iv.hi) {
            seen_containing = true;
            // Worst one-sided radius covers off-center p*; the quadratic
            // margin is subtracted so the output stays a valid lower bound.
            const double radius = std::max(p_star - iv.lo, iv.hi - p_star);
            const double margin = uniform_bound_constant(s, params.theta) * radius * radius;
            guaranteed += w * std::max(0.0, 1.0 - s / (2.0 * p_star) * radius - margin);
            residual += w * margin;
        } else {
            const double mu = 0.5 * (iv.lo + iv.hi);
            guaranteed += w * error_power(p_star, mu, s);
        }
    }
    return MixtureLowerBound{guaranteed, residual};
}

double upsilon_functional(const DistributionSpec& F, double y, double s,
                          const ProblemParams& params) {
    check_exponent(s);
    check_in_range(y, params, "upsilon_functional y");
    validate_distribution(F, params);
    const double numer = std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Dirac>) {
                return d.point * error_power(d.point, y, s);
            } else if constexpr (std::is_same_v<T, UniformInterval>) {
                return upsilon_uniform_numer(d, y, s);
            } else if constexpr (std::is_same_v<T, UniformMixture>) {
                double total = 0.0;
                for (std::size_t k = 0; k < d.weights.size(); ++k)
                    total += d.weights[k] * upsilon_uniform_numer(d.intervals[k], y, s);
                return total;
            } else {
                double total = 0.0;
                for (double p : d.samples)
                    total += p * error_power(p, y, s);
                return total / static_cast<double>(d.samples.size());
            }
        },
        F);
    return numer / distribution_mean(F);
}

void validate_coupling(const CouplingSpec& coupling, const ProblemParams& params) {
    std::visit(
        [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, CouplingIndependent>) {
                validate_distribution(c.price, params);
                validate_distribution(c.prediction, params);
            } else if constexpr (std::is_same_v<T, CouplingEmpirical>) {
                if (c.pairs.empty())
                    throw domain_error("CouplingEmpirical: need at least one pair");
                for (const auto& [p, y] : c.pairs) {
                    check_in_range(p, params, "coupling sample p*");
                    check_in_range(y, params, "coupling sample y");
                }
            } else {
                const std::size_t m = c.price.size(), n = c.prediction.size();
                if (c.joint.size() != m * n)
                    throw domain_error("CouplingDiscreteMatrix: joint size must be m*n");
                double total = 0.0;
                for (double wij : c.joint) {
                    if (wij < 0.0)
                        throw domain_error("CouplingDiscreteMatrix: joint weights must be >= 0");
                    total += wij;
                }
                if (std::abs(total - 1.0) > 1e-9)
                    throw domain_error("CouplingDiscreteMatrix: joint mass must be 1");
                for (std::size_t i = 0; i < m; ++i) {
                    double row = 0.0;
                    for (std::size_t j = 0; j < n; ++j)
                        row += c.joint[i * n + j];
                    if (std::abs(row - c.price.weights[i]) > 1e-9)
                        throw domain_error("CouplingDiscreteMatrix: row sums deviate from F");
                }
                for (std::size_t j = 0; j < n; ++j) {
                    double col = 0.0;
                    for (std::size_t i = 0; i < m; ++i)
                        col += c.joint[i * n + j];
                    if (std::abs(col - c.prediction.weights[j]) > 1e-9)
                        throw domain_error("CouplingDiscreteMatrix: column sums deviate from G");
                }
            }
        },
        coupling);
}

namespace {

// integral of p * Lambda_G(p) dF(p) for absolutely continuous F pieces.
double independent_numerator(const DistributionSpec& F, const DistributionSpec& G, double s,
                             const ProblemParams& params) {
    const std::vector<double> cuts = distribution_breakpoints(G);
    const auto integrand = [&](double p) {
        return p * lambda_functional(G, p, s, params);
    };
    return std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Dirac>) {
                return integrand(d.point);
            } else if constexpr (std::is_same_v<T, UniformInterval>) {
                return integrate_with_breakpoints(integrand, d.lo, d.hi, cuts, 1e-11) /
                       (d.hi - d.lo);
            } else if constexpr (std::is_same_v<T, UniformMixture>) {
                double total = 0.0;
                for (std::size_t k = 0; k < d.weights.size(); ++k) {
                    const auto& iv = d.intervals[k];
                    total += d.weights[k] *
                             integrate_with_breakpoints(integrand, iv.lo, iv.hi, cuts, 1e-11) /
                             (iv.hi - iv.lo);
                }
                return total;
            } else {
                double total = 0.0;
                for (double p : d.samples)
                    total += integrand(p);
                return total / static_cast<double>(d.samples.size());
            }
        },
        F);
}

} // namespace

double coupling_cost_fraction(const CouplingSpec& coupling, double s,
                              const ProblemParams& params) {
    check_exponent(s);
    validate_coupling(coupling, params);
    return std::visit(
        [&](const auto& c) -> double {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, CouplingIndependent>) {
                return independent_numerator(c.price, c.prediction, s, params) /
                       distribution_mean(c.price);
            } else if constexpr (std::is_same_v<T, CouplingEmpirical>) {
                double numer = 0.0, denom = 0.0;
                for (const auto& [p, y] : c.pairs) {
                    numer += p * error_power(p, y, s);
                    denom += p;
                }
                return numer / denom;
            } else {
                const std::size_t n = c.prediction.size();
                double numer = 0.0;
                for (std::size_t i = 0; i < c.price.size(); ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        numer += c.joint[i * n + j] *
                                 cost_multiplicative(c.price.locations[i],
                                                     c.prediction.locations[j], s);
                return numer / marginal_mean(c.price);
            }
        },
        coupling);
}

double expected_ratio_bound(const CouplingSpec& coupling, const ThresholdSpec& spec) {
    const double s = smoothness_exponent_rho1(spec);
    const double fraction = coupling_cost_fraction(coupling, s, spec.params);
    return std::max(spec.r, fraction * spec.consistency());
}

namespace {

// integral of adversarial_cost over one uniform interval, unnormalized.
double adversarial_uniform_numer(const UniformInterval& iv, double s,
                                 const ProblemParams& params) {
    const double split = std::sqrt(params.theta);
    const double width = iv.hi - iv.lo;
    double low = 0.0, high = 0.0;
    if (iv.lo < split)
        low = std::pow(params.theta, -s) *
              power_integral(iv.lo, std::min(iv.hi, split), 1.0 + s);
    if (iv.hi > split)
        high = power_integral(std::max(iv.lo, split), iv.hi, 1.0 - s);
    return (low + high) / width;
}

} // namespace

double dual_lower_bound(const DistributionSpec& F, double s, const ProblemParams& params) {
    check_exponent(s);
    validate_distribution(F, params);
    const double numer = std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Dirac>) {
                return adversarial_cost(d.point, s, params);
            } else if constexpr (std::is_same_v<T, UniformInterval>) {
                return adversarial_uniform_numer(d, s, params);
            } else if constexpr (std::is_same_v<T, UniformMixture>) {
                double total = 0.0;
                for (std::size_t k = 0; k < d.weights.size(); ++k)
                    total += d.weights[k] * adversarial_uniform_numer(d.intervals[k], s, params);
                return total;
            } else {
                double total = 0.0;
                for (double p : d.samples)
                    total += adversarial_cost(p, s, params);
                return total / static_cast<double>(d.samples.size());
            }
        },
        F);
    return numer / distribution_mean(F);
}

UniformClosedForm independent_uniform_closed_form(double c1, double c2, double s,
                                                  const ProblemParams& params) {
    if (!(c1 >= 1.0 && c1 < c2 && c2 <= params.theta))
        throw domain_error("independent_uniform_closed_form: need 1 <= c1 < c2 <= theta");
    if (std::abs(s - 1.0) < 1e-12 || std::abs(s - 2.0) < 1e-12)
        throw domain_error("independent_uniform_closed_form: s in {1, 2} is unsupported, "
                           "use the quadrature path");
    check_exponent(s);

    const auto zeta = [&](double gamma) {
        return (std::pow(c2, gamma) - std::pow(c1, gamma)) / gamma;
    };
    const double as_printed =
        2.0 / std::pow(zeta(1.0), 3.0) *
        (zeta(2.0 - s) * zeta(1.0 - s) - std::pow(c1, 2.0 - s) * zeta(1.0 + s) / (2.0 - s) +
         zeta(2.0 + s) * zeta(1.0 + s) - std::pow(c2, 2.0 + s) * zeta(1.0 - s) / (2.0 + s) -
         zeta(3.0) * (1.0 / (2.0 - s) - 1.0 / (2.0 + s)));

    const UniformInterval iv{c1, c2};
    const CouplingSpec independent{CouplingIndependent{DistributionSpec{iv}, DistributionSpec{iv}}};
    const double value = coupling_cost_fraction(independent, s, params);
    return UniformClosedForm{value, as_printed, std::abs(as_printed - value)};
}

namespace {

constexpr std::size_t kMcBlock = 4096;

template <class PerSample>
double mc_blockwise(std::size_t n_samples, PerSample&& per_sample, bool parallel) {
    if (n_samples == 0)
        throw domain_error("monte carlo: need at least one sample");
    const std::size_t blocks = (n_samples + kMcBlock - 1) / kMcBlock;
    std::vector<double> partial(blocks, 0.0);
    auto body = [&](std::size_t b) {
        const std::size_t begin = b * kMcBlock;
        const std::size_t end = std::min(begin + kMcBlock, n_samples);
        double sum = 0.0;
        for (std::size_t i = begin; i < end; ++i)
            sum += per_sample(i);
        partial[b] = sum;
    };
    if (parallel) {
        parallel_for(blocks, body);
    } else {
        for (std::size_t b = 0; b < blocks; ++b)
            body(b);
    }
    double total = 0.0;
    for (double p : partial)
        total += p;
    return total / static_cast<double>(n_samples);
}

double mc_lambda_impl(const DistributionSpec& G, double p_star, double s,
                      const ProblemParams& params, std::size_t n_samples, std::uint64_t seed,
                      std::uint64_t stream, bool parallel) {
    check_exponent(s);
    check_in_range(p_star, params, "mc_lambda_estimate p*");
    const DistributionSampler sampler(G, params);
    return mc_blockwise(
        n_samples,
        [&](std::size_t i) {
            const double y = sampler(CounterRng::uniform01(seed, stream, i));
            return error_power(p_star, y, s);
        },
        parallel);
}

double mc_upsilon_impl(const DistributionSpec& F, double y, double s,
                       const ProblemParams& params, std::size_t n_samples, std::uint64_t seed,
                       std::uint64_t stream, bool parallel) {
    check_exponent(s);
    check_in_range(y, params, "mc_upsilon_estimate y");
    const DistributionSampler sampler(F, params);
    const double numer = mc_blockwise(
        n_samples,
        [&](std::size_t i) {
            const double p = sampler(CounterRng::uniform01(seed, stream, i));
            return p * error_power(p, y, s);
        },
        parallel);
    const double denom = mc_blockwise(
        n_samples,
        [&](std::size_t i) { return sampler(CounterRng::uniform01(seed, stream, i)); },
        parallel);
    return numer / denom;
}

} // namespace

double mc_lambda_estimate(const DistributionSpec& G, double p_star, double s,
                          const ProblemParams& params, std::size_t n_samples, std::uint64_t seed,
                          std::uint64_t stream) {
    return mc_lambda_impl(G, p_star, s, params, n_samples, seed, stream, true);
}

double mc_upsilon_estimate(const DistributionSpec& F, double y, double s,
                           const ProblemParams& params, std::size_t n_samples, std::uint64_t seed,
                           std::uint64_t stream) {
    return mc_upsilon_impl(F, y, s, params, n_samples, seed, stream, true);
}

namespace serial {

double mc_lambda_estimate(const DistributionSpec& G, double p_star, double s,
                          const ProblemParams& params, std::size_t n_samples, std::uint64_t seed,
                          std::uint64_t stream) {
    return mc_lambda_impl(G, p_star, s, params, n_samples, seed, stream, false);
}

double mc_upsilon_estimate(const DistributionSpec& F, double y, double s,
                           const ProblemParams& params, std::size_t n_samples, std::uint64_t seed,
                           std::uint64_t stream) {
    return mc_upsilon_impl(F, y, s, params, n_samples, seed, stream, false);
}

} // namespace serial

} // namespace onemax
