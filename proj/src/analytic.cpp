#include "cumuldyn/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cumuldyn/numeric.hpp"

namespace cumuldyn {

namespace {

/// Normalize log-weights into probabilities. The weights are binomial-theorem
/// terms, so their sum equals the closed-form denominator; summing them
/// directly keeps the table normalized to rounding error for any n.
Pmf normalize_log_weights(const std::vector<double>& log_w) {
    const double total = numeric::log_sum_exp(log_w);
    Pmf out(log_w.size());
    for (std::size_t k = 0; k < log_w.size(); ++k) out[k] = std::exp(log_w[k] - total);
    return out;
}

bool near_integer(double x) { return std::abs(x - std::round(x)) <= 1e-9 * std::max(1.0, std::abs(x)); }

}  // namespace

double expected_id(double n, const ModelParams& params) {
    if (n < 0.0) throw std::invalid_argument("expected_id: n must be non-negative");
    return params.q() * n + params.m0();
}

double analytic_path_count(std::size_t n, std::size_t k, const ModelParams& params) {
    if (k >= n) return 0.0;
    const double log_value =
        std::log(params.r()) + static_cast<double>(k) * std::log(params.q()) +
        numeric::log_binomial(static_cast<double>(n), k + 1);
    if (n <= 1000 && log_value < 700.0) {
        // Direct product keeps differences between neighbouring n accurate.
        const std::size_t j = std::min(k + 1, n - k - 1);
        long double c = 1.0L;
        for (std::size_t i = 1; i <= j; ++i) c = c * static_cast<long double>(n - j + i) / static_cast<long double>(i);
        return static_cast<double>(static_cast<long double>(params.r()) *
                                   std::pow(static_cast<long double>(params.q()), static_cast<long double>(k)) * c);
    }
    return std::exp(log_value);
}

PathLengthDistribution analytic_path_counts(std::size_t n, const ModelParams& params) {
    if (n < 1) throw std::invalid_argument("analytic_path_counts: n must be at least 1");
    PathLengthDistribution dist;
    dist.n = n;
    dist.log_counts.resize(n);
    const double log_r = std::log(params.r());
    const double log_q = std::log(params.q());
    for (std::size_t k = 0; k < n; ++k) {
        dist.log_counts[k] = log_r + static_cast<double>(k) * log_q + numeric::log_binomial(static_cast<double>(n), k + 1);
    }
    finalize_from_logs(dist);
    return dist;
}

double total_paths_closed(std::size_t n, const ModelParams& params) {
    const double q = params.q();
    return params.r() * std::expm1(static_cast<double>(n) * std::log1p(q)) / q;
}

Pmf normalized_path_dist(std::size_t n, double q) {
    if (n < 1) throw std::invalid_argument("normalized_path_dist: n must be at least 1");
    if (!(q > 0.0)) throw std::invalid_argument("normalized_path_dist: q must be positive");
    std::vector<double> log_w(n);
    const double log_q = std::log(q);
    for (std::size_t k = 0; k < n; ++k) {
        log_w[k] = numeric::log_binomial(static_cast<double>(n), k + 1) + static_cast<double>(k + 1) * log_q;
    }
    return normalize_log_weights(log_w);
}

double ipl_slope(double q) {
    if (!(q > 0.0)) throw std::invalid_argument("ipl_slope: q must be positive");
    return q / (q + 1.0);
}

CorrectedRate corrected_rate_a(std::span<const std::size_t> backlinks) {
    if (backlinks.empty()) throw std::invalid_argument("corrected_rate_a: empty backlink sequence");
    long double acc = 0.0L;
    for (std::size_t i = 0; i < backlinks.size(); ++i) {
        acc += static_cast<long double>(backlinks[i]) / static_cast<long double>(i + 1);
    }
    CorrectedRate out;
    out.q_prime = static_cast<double>(acc / static_cast<long double>(backlinks.size()));
    out.p_prime = out.q_prime / (1.0 + out.q_prime);
    return out;
}

CorrectedRate corrected_rate_b(double q, double m0, std::size_t n) {
    if (n < 1) throw std::invalid_argument("corrected_rate_b: n must be at least 1");
    CorrectedRate out;
    out.q_prime = q + m0 * numeric::harmonic(n) / static_cast<double>(n);
    out.p_prime = out.q_prime / (1.0 + out.q_prime);
    return out;
}

Pmf binomial_path_dist(std::size_t n_prime) {
    if (n_prime < 1) throw std::invalid_argument("binomial_path_dist: n' must be at least 1");
    std::vector<double> log_w(n_prime);
    for (std::size_t k = 0; k < n_prime; ++k) log_w[k] = numeric::log_binomial(static_cast<double>(n_prime), k + 1);
    return normalize_log_weights(log_w);
}

Pmf binomial_path_dist_np(double n, double p) {
    double x = 2.0 * p * n;
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("binomial_path_dist_np: p n must be positive");
    if (near_integer(x)) return binomial_path_dist(static_cast<std::size_t>(std::llround(x)));
    const auto support = static_cast<std::size_t>(std::ceil(x));
    std::vector<double> log_w(support);
    for (std::size_t k = 0; k < support; ++k) log_w[k] = numeric::log_binomial(x, k + 1);
    return normalize_log_weights(log_w);
}

MaxSpeed max_speed(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("max_speed: p must lie in (0, 1)");
    MaxSpeed out;
    out.v = 2.0 * p;
    out.delta_n = 1.0 / out.v;
    return out;
}

RatePredictions rate_predictions(double q, const CorrectedRate& a, const CorrectedRate& b) {
    RatePredictions out;
    out.p = ipl_slope(q);
    out.q_prime_a = a.q_prime;
    out.p_prime_a = a.p_prime;
    out.q_prime_b = b.q_prime;
    out.p_prime_b = b.p_prime;
    const MaxSpeed speed = max_speed(out.p);
    out.v = speed.v;
    out.delta_n = speed.delta_n;
    return out;
}

InitialCount expected_initial_count(std::size_t n, const ModelParams& params) {
    if (n < 1) throw std::invalid_argument("expected_initial_count: n must be at least 1");
    const double q = params.q();
    const double a = params.m1() / q;
    InitialCount out;
    out.exact = (numeric::harmonic_real(static_cast<double>(n) + a) - numeric::harmonic_real(a)) / q;
    out.approx = std::log1p(q * static_cast<double>(n) / params.m1()) / q;
    return out;
}

double initial_fraction_estimate(double m0) {
    if (!(m0 >= 0.0)) throw std::invalid_argument("initial_fraction_estimate: m0 must be non-negative");
    return 1.0 / (m0 + 1.0);
}

}  // namespace cumuldyn
