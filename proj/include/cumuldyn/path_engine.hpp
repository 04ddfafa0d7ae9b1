#pragma once

// Internal dependence, path-length distributions and their evolution across
// chronological prefixes of a KnowledgeGraph.
//
// Paths start at initial nodes (no internal backward link) and follow
// citations forward in time. The number of paths of length k ending at node i
// is the sum over its cited nodes of their counts at k - 1, so one sweep in
// ordinal order yields every per-node vector and the running totals f_k.

#include <cstddef>
#include <functional>
#include <map>
#include <memory>

#include "cumuldyn/core_types.hpp"

namespace cumuldyn {

enum class NumericMode {
    automatic,  ///< exact up to PathOptions::log_threshold nodes, log space above
    exact,
    log_space,
};

struct PathOptions {
    NumericMode mode = NumericMode::automatic;
    std::size_t log_threshold = 50'000;

    bool use_exact(std::size_t node_count) const {
        return mode == NumericMode::exact || (mode == NumericMode::automatic && node_count <= log_threshold);
    }
};

/// Internal edges among the first n nodes divided by n.
double internal_dependence(const KnowledgeGraph& g, std::size_t n);
/// External backlinks of the first n nodes divided by n.
double external_dependence(const KnowledgeGraph& g, std::size_t n);
/// Fraction of the first n nodes with zero internal backward links.
double initial_fraction(const KnowledgeGraph& g, std::size_t n);
BacklinkDistribution backlink_distribution(const KnowledgeGraph& g, std::size_t n);

PathLengthDistribution path_length_distribution(const KnowledgeGraph& g, std::size_t n,
                                                const PathOptions& options = {});

/// Incremental path-count sweep over a valid graph.
///
/// Each node's vector is computed once from the vectors of the nodes it cites
/// and added to the running totals. Earlier nodes never gain backward links,
/// so the totals after advancing to n equal a batch computation on the
/// n-node prefix. Per-node vectors are kept for the whole sweep (a future
/// node may cite any earlier one); each is trimmed to its nonzero k range.
///
/// In log-space mode each accumulation is a log-sum-exp step with relative
/// error of a few ulp, so well below 1e-9 per accumulation.
class PathSweep {
public:
    /// Keeps a reference to `g`, which must outlive the sweep.
    PathSweep(const KnowledgeGraph& g, bool exact);
    PathSweep(KnowledgeGraph&&, bool) = delete;
    ~PathSweep();
    PathSweep(PathSweep&&) noexcept;
    PathSweep& operator=(PathSweep&&) noexcept;

    bool exact() const;
    /// Number of nodes processed so far.
    std::size_t size() const;
    void advance();
    void advance_to(std::size_t n);

    std::size_t mipl() const;
    PathLengthDistribution distribution() const;

    /// Nonzero entries k -> paths of length k ending at node i (exact mode).
    std::map<std::size_t, PathCount> node_path_vector(Ordinal i) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

using CheckpointObserver = std::function<void(const Checkpoint&, const PathLengthDistribution&)>;

/// Checkpoints at stride, 2*stride, ..., always ending at the node count.
/// The observer, when set, receives the full distribution at each checkpoint.
CumulativenessSeries cumulativeness_series(const KnowledgeGraph& g, std::size_t stride,
                                           const PathOptions& options = {},
                                           const CheckpointObserver& observer = {});

}  // namespace cumuldyn
