#pragma once

// Search-process growth model: each new invention performs a geometric number
// of searches, each picking up one backward link to a uniformly chosen
// existing invention.

#include <cstddef>
#include <cstdint>
#include <random>

#include "cumuldyn/core_types.hpp"

namespace cumuldyn {

/// Random source for all simulations. std::mt19937_64 is fully specified by
/// the C++ standard, so a given seed yields the same 64-bit stream everywhere.
/// Uniform variates are derived from raw outputs here, never through the
/// implementation-defined std distributions.
using Rng = std::mt19937_64;
inline constexpr const char* rng_name = "mt19937_64/v1";

/// Uniform double in the open interval (0, 1) from the top 53 bits.
double uniform_open01(Rng& rng);

/// Uniform integer in [0, bound) by rejection; bound must be positive.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

/// Probability of completing an invention with n existing inventions.
double rho(std::size_t n, const ModelParams& params);

/// P(m) = (1 - p)^m p by inversion: floor(ln u / ln(1 - p)).
std::size_t sample_geometric(double p, Rng& rng);

std::size_t sample_backlink_count(std::size_t n, const ModelParams& params, Rng& rng);

/// Grow an N-node graph. Node i draws m ~ Geometric(rho(i)), caps it at i and
/// cites m distinct earlier nodes chosen uniformly without replacement.
KnowledgeGraph simulate(const ModelParams& params, std::size_t node_count, std::uint64_t seed);

}  // namespace cumuldyn
