#include "cumuldyn/numeric.hpp"

#include <algorithm>
#include <stdexcept>

#include <boost/math/special_functions/digamma.hpp>

namespace cumuldyn::numeric {

double log_sum_exp(std::span<const double> xs) {
    double hi = neg_inf;
    for (double x : xs) hi = std::max(hi, x);
    if (hi == neg_inf) return neg_inf;
    double acc = 0.0;
    for (double x : xs) acc += std::exp(x - hi);
    return hi + std::log(acc);
}

double log_expm1(double x) {
    if (x > 30.0) return x + std::log1p(-std::exp(-x));
    return std::log(std::expm1(x));
}

double log_of(const PathCount& value) {
    if (value.is_zero()) return neg_inf;
    const std::size_t bits = boost::multiprecision::msb(value);
    if (bits < 1000) return std::log(value.convert_to<double>());
    // Top two limbs carry more bits than a double; the rest is below resolution.
    const auto& backend = value.backend();
    const std::size_t size = backend.size();
    const auto* limbs = backend.limbs();
    constexpr int limb_bits = sizeof(*limbs) * 8;
    const double head = std::ldexp(static_cast<double>(limbs[size - 1]), limb_bits) + static_cast<double>(limbs[size - 2]);
    return std::log(head) + static_cast<double>((size - 2) * limb_bits) * std::log(2.0);
}

double log_binomial(double x, std::size_t j) {
    const double jd = static_cast<double>(j);
    if (x < 0.0 || !(x - jd + 1.0 > 0.0)) throw std::domain_error("log_binomial: argument outside support");
    if (x == std::floor(x) && x <= 1000.0) {
        // Product form keeps full precision for the moderate integer range.
        const auto n = static_cast<std::size_t>(x);
        const std::size_t kk = std::min(j, n - j);
        long double acc = 1.0L;
        for (std::size_t i = 1; i <= kk; ++i) {
            acc = acc * static_cast<long double>(n - kk + i) / static_cast<long double>(i);
        }
        return static_cast<double>(std::log(acc));
    }
    return std::lgamma(x + 1.0) - std::lgamma(jd + 1.0) - std::lgamma(x - jd + 1.0);
}

double harmonic(std::size_t n) {
    if (n <= 1'000'000) {
        long double acc = 0.0L;
        for (std::size_t i = n; i >= 1; --i) acc += 1.0L / static_cast<long double>(i);
        return static_cast<double>(acc);
    }
    const double nd = static_cast<double>(n);
    return std::log(nd) + euler_gamma + 1.0 / (2.0 * nd);
}

double harmonic_real(double x) {
    if (x < 0.0) throw std::domain_error("harmonic_real: negative argument");
    return boost::math::digamma(x + 1.0) + euler_gamma;
}

}  // namespace cumuldyn::numeric
