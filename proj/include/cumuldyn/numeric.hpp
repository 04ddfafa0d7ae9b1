#pragma once

// Small numeric helpers shared by the path engine and the analytic module.

#include <cmath>
#include <limits>
#include <span>

#include "cumuldyn/core_types.hpp"

namespace cumuldyn::numeric {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();
inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

/// ln(e^a + e^b) without overflow.
inline double log_add(double a, double b) {
    if (a == neg_inf) return b;
    if (b == neg_inf) return a;
    if (a < b) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}

/// ln(sum e^x) over a span; -inf for an empty span.
double log_sum_exp(std::span<const double> xs);

/// ln(e^x - 1) for x > 0, stable for small and large x.
double log_expm1(double x);

/// Natural log of a non-negative exact integer; -inf for zero.
double log_of(const PathCount& value);

/// ln C(x, j) for real x >= 0 and integer j with x - j + 1 > 0.
double log_binomial(double x, std::size_t j);

/// Exact harmonic number H(n) for n <= 10^6, asymptotic expansion above.
double harmonic(std::size_t n);

/// Harmonic number of a real argument, H(x) = digamma(x + 1) + gamma.
double harmonic_real(double x);

}  // namespace cumuldyn::numeric
