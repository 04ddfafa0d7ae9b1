#pragma once

// Shared domain types for citation-DAG cumulativeness analysis.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace cumuldyn {

/// 0-based chronological position of a node inside a KnowledgeGraph.
using Ordinal = std::size_t;

/// Exact path count. Totals grow exponentially with the node count.
using PathCount = boost::multiprecision::cpp_int;

struct InventionNode {
    std::string node_id;
    Ordinal ordinal = 0;
    std::optional<int> year;
    std::vector<std::string> class_labels;
};

/// Internal backward link: `citing` builds on the earlier node `cited`.
struct Citation {
    Ordinal citing = 0;
    Ordinal cited = 0;

    friend bool operator==(const Citation&, const Citation&) = default;
    friend auto operator<=>(const Citation&, const Citation&) = default;
};

enum class ViolationKind {
    non_contiguous_ordinal,
    year_order,
    edge_out_of_range,
    self_edge,
    forward_edge,
    duplicate_edge,
    external_count_size,
};

const char* to_string(ViolationKind kind);

struct GraphViolation {
    ViolationKind kind;
    std::string description;
    std::vector<Ordinal> ordinals;
};

/// Chronologically ordered invention nodes plus internal backward links and
/// per-node counts of links leaving the technology.
///
/// Construction never throws on invariant violations; they are recorded and
/// reported by validate_graph(). Analysis routines refuse invalid graphs.
/// The node order is the topological order: every valid edge points from a
/// higher ordinal to a lower one.
class KnowledgeGraph {
public:
    KnowledgeGraph() = default;
    KnowledgeGraph(std::vector<InventionNode> nodes, std::vector<Citation> internal_edges,
                   std::vector<std::uint32_t> external_backlink_counts);

    std::size_t node_count() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }

    std::span<const InventionNode> nodes() const { return nodes_; }
    const InventionNode& node(Ordinal i) const { return nodes_.at(i); }
    std::span<const Citation> internal_edges() const { return edges_; }
    std::span<const std::uint32_t> external_backlink_counts() const { return external_; }

    /// Cited ordinals of `citing`, ascending. Out-of-range edges are omitted.
    std::span<const Ordinal> cited_by(Ordinal citing) const;
    std::size_t internal_backlinks(Ordinal citing) const { return cited_by(citing).size(); }
    std::uint32_t external_backlinks(Ordinal i) const;

    bool valid() const { return violations_.empty(); }
    const std::vector<GraphViolation>& violations() const { return violations_; }

    bool has_years() const;

private:
    std::vector<InventionNode> nodes_;
    std::vector<Citation> edges_;
    std::vector<std::uint32_t> external_;
    std::vector<std::size_t> offsets_;
    std::vector<Ordinal> targets_;
    std::vector<GraphViolation> violations_;
};

/// Empty iff every KnowledgeGraph invariant holds.
std::vector<GraphViolation> validate_graph(const KnowledgeGraph& g);

/// Throws std::invalid_argument naming the first violation.
void require_valid(const KnowledgeGraph& g);

/// Search-model parameters. m0 = m1 - 1; r defaults to 1 / m1.
class ModelParams {
public:
    /// Throws std::invalid_argument unless q > 0, m1 > 1 and 0 < r <= 1.
    static ModelParams from_m1(double q, double m1);
    static ModelParams from_m1(double q, double m1, double r);
    static ModelParams from_m0(double q, double m0) { return from_m1(q, m0 + 1.0); }

    double q() const { return q_; }
    double m1() const { return m1_; }
    double m0() const { return m0_; }
    double r() const { return r_; }

private:
    ModelParams(double q, double m1, double r) : q_(q), m1_(m1), m0_(m1 - 1.0), r_(r) {}

    double q_;
    double m1_;
    double m0_;
    double r_;
};

/// Histogram of internal backward links per node over a prefix of n nodes.
struct BacklinkDistribution {
    std::size_t n = 0;
    std::vector<std::size_t> counts;  ///< counts[m] = nodes with m links
    double mean = 0.0;
};

/// Path-length distribution for one prefix size.
///
/// `counts` holds exact f_k when computed in integer mode and is empty
/// otherwise; `log_counts` (ln f_k, -inf where f_k = 0) is always filled.
struct PathLengthDistribution {
    std::size_t n = 0;
    std::vector<PathCount> counts;
    std::vector<double> log_counts;
    std::vector<double> normalized;
    double ipl = 0.0;
    std::size_t mipl = 0;

    bool is_exact() const { return !counts.empty(); }
    bool has_paths() const { return !normalized.empty(); }
    /// ln of the total number of paths; -inf when there are none.
    double log_total() const;
};

/// Fill `normalized`, `ipl` and `mipl` from `log_counts`.
void finalize_from_logs(PathLengthDistribution& dist);
/// Fill `log_counts`, `normalized`, `ipl` and `mipl` from exact `counts`.
void finalize_from_counts(PathLengthDistribution& dist);

struct Checkpoint {
    std::size_t n = 0;
    double id = 0.0;
    double ipl = 0.0;
    std::size_t mipl = 0;
    double ed = 0.0;

    friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

struct CumulativenessSeries {
    std::vector<Checkpoint> checkpoints;
};

struct RatePredictions {
    double p = 0.0;
    double q_prime_a = 0.0;
    double p_prime_a = 0.0;
    double q_prime_b = 0.0;
    double p_prime_b = 0.0;
    double v = 0.0;
    double delta_n = 0.0;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double intercept_se = 0.0;
    double slope_p_value = 0.0;
    double intercept_p_value = 0.0;
    double r_squared = 0.0;
    double adj_r_squared = 0.0;
    double residual_se = 0.0;
    double f_statistic = 0.0;
    double f_p_value = 0.0;
    std::size_t n_obs = 0;

    double predict(double x) const { return intercept + slope * x; }
};

enum class DistributionFamily { geometric, binomial_type, binomial, normal, poisson };

const char* to_string(DistributionFamily family);

struct PlotPoint {
    std::size_t value = 0;  ///< m (backlinks) or k (path length)
    double empirical = 0.0;
    double model = 0.0;
};

struct ChiSquare {
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 0.0;  ///< NaN when dof == 0
};

struct DistributionFit {
    DistributionFamily family = DistributionFamily::geometric;
    std::vector<double> params;
    std::vector<PlotPoint> plot_points;
    double plot_correlation = 0.0;
    ChiSquare chi_square;
    std::vector<std::string> warnings;
};

}  // namespace cumuldyn
