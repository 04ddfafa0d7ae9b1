#pragma once

// Closed-form predictions of the search model: id growth, path counts and
// their normalized distributions, corrected ipl rates, maximum path speed and
// the expected number of initial inventions.

#include <cstddef>
#include <span>
#include <vector>

#include "cumuldyn/core_types.hpp"

namespace cumuldyn {

/// Probability table indexed by path length k.
using Pmf = std::vector<double>;

/// q n + m0, the expected backlink count of a node arriving after n others.
double expected_id(double n, const ModelParams& params);

/// Single term r q^k C(n, k+1); zero for k >= n.
double analytic_path_count(std::size_t n, std::size_t k, const ModelParams& params);

/// f_k = r q^k C(n, k+1) for k = 0..n-1, evaluated in log space.
PathLengthDistribution analytic_path_counts(std::size_t n, const ModelParams& params);

/// r ((1 + q)^n - 1) / q.
double total_paths_closed(std::size_t n, const ModelParams& params);

/// C(n, k+1) q^(k+1) / ((1 + q)^n - 1).
Pmf normalized_path_dist(std::size_t n, double q);

/// Asymptotic ipl rate q / (q + 1).
double ipl_slope(double q);

struct CorrectedRate {
    double q_prime = 0.0;
    double p_prime = 0.0;
};

/// Data-based correction: q' = (1/n) sum_i m_i / i with 1-based i.
CorrectedRate corrected_rate_a(std::span<const std::size_t> backlinks);

/// Parameter-based correction: q' = q + m0 H(n) / n.
CorrectedRate corrected_rate_b(double q, double m0, std::size_t n);

/// C(n', k+1) / (2^n' - 1).
Pmf binomial_path_dist(std::size_t n_prime);

/// Binomial-type distribution written in n and p, with x = 2 p n.
///
/// For non-integer x the binomial is the real-argument (log-gamma) form.
/// The support is k = 0..ceil(x)-1, the range where C(x, k+1) stays positive,
/// and the table is normalized over that support; for integer x this is
/// exactly C(x, k+1) / (4^(pn) - 1).
Pmf binomial_path_dist_np(double n, double p);

struct MaxSpeed {
    double v = 0.0;
    double delta_n = 0.0;
};

/// v = 2p, delta_n = 1 / v.
MaxSpeed max_speed(double p);

/// Combine the model's rate predictions into one record.
RatePredictions rate_predictions(double q, const CorrectedRate& a, const CorrectedRate& b);

struct InitialCount {
    double exact = 0.0;   ///< (1/q)(H(n + m1/q) - H(m1/q))
    double approx = 0.0;  ///< (1/q) ln(1 + q n / m1)
};

InitialCount expected_initial_count(std::size_t n, const ModelParams& params);

/// r ~ 1 / (m0 + 1), valid when q is small against m0.
double initial_fraction_estimate(double m0);

}  // namespace cumuldyn
