#include "cumuldyn/growth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace cumuldyn {

double uniform_open01(Rng& rng) {
    const std::uint64_t bits = rng() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
    // Reject the top partial block so every residue is equally likely.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

double rho(std::size_t n, const ModelParams& params) {
    return 1.0 / (params.q() * static_cast<double>(n) + params.m1());
}

std::size_t sample_geometric(double p, Rng& rng) {
    if (!(p > 0.0)) throw std::invalid_argument("geometric parameter must be positive");
    const double u = uniform_open01(rng);
    if (p >= 1.0) return 0;
    const double m = std::floor(std::log(u) / std::log1p(-p));
    if (m >= static_cast<double>(std::numeric_limits<std::size_t>::max() / 2)) {
        return std::numeric_limits<std::size_t>::max() / 2;
    }
    return static_cast<std::size_t>(m);
}

std::size_t sample_backlink_count(std::size_t n, const ModelParams& params, Rng& rng) {
    return sample_geometric(rho(n, params), rng);
}

namespace {

/// Floyd's algorithm: m distinct values from [0, n), returned ascending.
std::vector<Ordinal> sample_distinct(std::size_t n, std::size_t m, Rng& rng) {
    std::vector<Ordinal> picked;
    picked.reserve(m);
    std::unordered_set<Ordinal> seen;
    seen.reserve(m * 2);
    for (std::size_t j = n - m; j < n; ++j) {
        const Ordinal t = uniform_below(rng, j + 1);
        const Ordinal chosen = seen.contains(t) ? j : t;
        seen.insert(chosen);
        picked.push_back(chosen);
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

std::string synthetic_id(std::size_t i, std::size_t width) {
    std::string digits = std::to_string(i);
    return "N" + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

}  // namespace

KnowledgeGraph simulate(const ModelParams& params, std::size_t node_count, std::uint64_t seed) {
    if (node_count < 1) throw std::invalid_argument("simulate needs at least one node");
    Rng rng(seed);
    const std::size_t width = std::to_string(node_count - 1).size();

    std::vector<InventionNode> nodes;
    std::vector<Citation> edges;
    nodes.reserve(node_count);
    for (std::size_t i = 0; i < node_count; ++i) {
        const std::size_t m = std::min(sample_backlink_count(i, params, rng), i);
        for (Ordinal target : sample_distinct(i, m, rng)) edges.push_back({i, target});
        nodes.push_back({synthetic_id(i, width), i, std::nullopt, {"SIM"}});
    }
    return KnowledgeGraph(std::move(nodes), std::move(edges), std::vector<std::uint32_t>(node_count, 0));
}

}  // namespace cumuldyn
