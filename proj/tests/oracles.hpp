#pragma once

// Slow reference implementations used to check the fast code paths.

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "cumuldyn/core_types.hpp"

namespace oracle {

using cumuldyn::Citation;
using cumuldyn::InventionNode;
using cumuldyn::KnowledgeGraph;

/// Graph on n nodes with edges {citing, cited}; ordinals are positions.
inline KnowledgeGraph make_graph(std::size_t n, std::vector<Citation> edges, std::vector<std::uint32_t> external = {}) {
    std::vector<InventionNode> nodes;
    for (std::size_t i = 0; i < n; ++i) nodes.push_back({"n" + std::to_string(i), i, std::nullopt, {}});
    if (external.empty()) external.assign(n, 0);
    return KnowledgeGraph(std::move(nodes), std::move(edges), std::move(external));
}

/// Each backward pair (i, j), j < i, present with probability `density`.
inline KnowledgeGraph random_dag(std::size_t n, double density, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(density);
    std::vector<Citation> edges;
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (coin(rng)) edges.push_back({i, j});
        }
    }
    return make_graph(n, std::move(edges));
}

namespace detail {
inline void walk(const std::vector<std::vector<std::size_t>>& citers, std::size_t v, std::size_t len,
                 std::vector<std::uint64_t>& f) {
    if (f.size() <= len) f.resize(len + 1, 0);
    ++f[len];
    for (std::size_t w : citers[v]) walk(citers, w, len + 1, f);
}
}  // namespace detail

/// Enumerate every path that starts at an initial node of the n-prefix and
/// follows citations forward; f[k] counts paths with k links.
inline std::vector<std::uint64_t> enumerate_paths(const KnowledgeGraph& g, std::size_t n) {
    std::vector<std::vector<std::size_t>> citers(n);
    std::vector<bool> initial(n, true);
    for (const auto& e : g.internal_edges()) {
        if (e.citing < n) {
            citers[e.cited].push_back(e.citing);
            initial[e.citing] = false;
        }
    }
    std::vector<std::uint64_t> f;
    for (std::size_t s = 0; s < n; ++s) {
        if (initial[s]) detail::walk(citers, s, 0, f);
    }
    return f;
}

struct NaiveFit {
    double slope;
    double intercept;
    double r2;
};

/// Textbook normal equations without centring.
inline NaiveFit naive_ols(std::span<const double> x, std::span<const double> y) {
    long double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const long double n = static_cast<long double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += static_cast<long double>(x[i]) * x[i];
        sxy += static_cast<long double>(x[i]) * y[i];
    }
    const long double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const long double intercept = (sy - slope * sx) / n;
    long double ss_res = 0, ss_tot = 0;
    const long double ybar = sy / n;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const long double r = y[i] - (intercept + slope * x[i]);
        ss_res += r * r;
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
    }
    return {static_cast<double>(slope), static_cast<double>(intercept),
            ss_tot == 0 ? 0.0 : static_cast<double>(1 - ss_res / ss_tot)};
}

}  // namespace oracle
