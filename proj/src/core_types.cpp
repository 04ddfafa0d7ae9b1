#include "cumuldyn/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cumuldyn/numeric.hpp"

namespace cumuldyn {

const char* to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::non_contiguous_ordinal: return "non-contiguous ordinal";
        case ViolationKind::year_order: return "year order";
        case ViolationKind::edge_out_of_range: return "edge out of range";
        case ViolationKind::self_edge: return "self edge";
        case ViolationKind::forward_edge: return "forward edge";
        case ViolationKind::duplicate_edge: return "duplicate edge";
        case ViolationKind::external_count_size: return "external count size";
    }
    return "unknown";
}

const char* to_string(DistributionFamily family) {
    switch (family) {
        case DistributionFamily::geometric: return "geometric";
        case DistributionFamily::binomial_type: return "binomial-type";
        case DistributionFamily::binomial: return "binomial";
        case DistributionFamily::normal: return "normal";
        case DistributionFamily::poisson: return "poisson";
    }
    return "unknown";
}

namespace {

std::string edge_text(const Citation& e) {
    std::ostringstream os;
    os << '(' << e.citing << ',' << e.cited << ')';
    return os.str();
}

}  // namespace

KnowledgeGraph::KnowledgeGraph(std::vector<InventionNode> nodes, std::vector<Citation> internal_edges,
                               std::vector<std::uint32_t> external_backlink_counts)
    : nodes_(std::move(nodes)), edges_(std::move(internal_edges)), external_(std::move(external_backlink_counts)) {
    const std::size_t n = nodes_.size();

    for (std::size_t i = 0; i < n; ++i) {
        if (nodes_[i].ordinal != i) {
            violations_.push_back({ViolationKind::non_contiguous_ordinal,
                                   "node at position " + std::to_string(i) + " has ordinal " +
                                       std::to_string(nodes_[i].ordinal),
                                   {nodes_[i].ordinal}});
        }
        if (i > 0 && nodes_[i].year && nodes_[i - 1].year && *nodes_[i].year < *nodes_[i - 1].year) {
            violations_.push_back({ViolationKind::year_order,
                                   "year decreases from ordinal " + std::to_string(i - 1) + " to " +
                                       std::to_string(i),
                                   {i - 1, i}});
        }
    }
    if (external_.size() != n) {
        violations_.push_back({ViolationKind::external_count_size,
                               "external_backlink_counts has " + std::to_string(external_.size()) +
                                   " entries for " + std::to_string(n) + " nodes",
                               {}});
    }

    // Build backward adjacency (CSR) from in-range edges.
    std::vector<Citation> sorted;
    sorted.reserve(edges_.size());
    for (const auto& e : edges_) {
        if (e.citing >= n || e.cited >= n) {
            violations_.push_back({ViolationKind::edge_out_of_range,
                                   "edge " + edge_text(e) + " references a missing ordinal",
                                   {e.citing, e.cited}});
            continue;
        }
        if (e.citing == e.cited) {
            violations_.push_back({ViolationKind::self_edge, "self edge " + edge_text(e), {e.citing}});
        } else if (e.citing < e.cited) {
            violations_.push_back({ViolationKind::forward_edge, "forward edge " + edge_text(e),
                                   {e.citing, e.cited}});
        }
        sorted.push_back(e);
    }
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i] == sorted[i - 1] && (i < 2 || sorted[i - 2] != sorted[i])) {
            violations_.push_back({ViolationKind::duplicate_edge, "duplicate edge " + edge_text(sorted[i]),
                                   {sorted[i].citing, sorted[i].cited}});
        }
    }

    offsets_.assign(n + 1, 0);
    for (const auto& e : sorted) ++offsets_[e.citing + 1];
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
    targets_.reserve(sorted.size());
    for (const auto& e : sorted) targets_.push_back(e.cited);
}

std::span<const Ordinal> KnowledgeGraph::cited_by(Ordinal citing) const {
    if (citing >= nodes_.size()) throw std::out_of_range("ordinal out of range");
    return std::span<const Ordinal>(targets_).subspan(offsets_[citing], offsets_[citing + 1] - offsets_[citing]);
}

std::uint32_t KnowledgeGraph::external_backlinks(Ordinal i) const {
    return i < external_.size() ? external_[i] : 0;
}

bool KnowledgeGraph::has_years() const {
    return !nodes_.empty() &&
           std::all_of(nodes_.begin(), nodes_.end(), [](const InventionNode& v) { return v.year.has_value(); });
}

std::vector<GraphViolation> validate_graph(const KnowledgeGraph& g) { return g.violations(); }

void require_valid(const KnowledgeGraph& g) {
    if (!g.valid()) {
        throw std::invalid_argument("invalid knowledge graph: " + g.violations().front().description);
    }
}

ModelParams ModelParams::from_m1(double q, double m1) { return from_m1(q, m1, 1.0 / m1); }

ModelParams ModelParams::from_m1(double q, double m1, double r) {
    if (!(q > 0.0) || !std::isfinite(q)) throw std::invalid_argument("q must be positive");
    if (!(m1 > 1.0) || !std::isfinite(m1)) throw std::invalid_argument("m1 must exceed 1");
    if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("r must lie in (0, 1]");
    return ModelParams(q, m1, r);
}

double PathLengthDistribution::log_total() const { return numeric::log_sum_exp(log_counts); }

void finalize_from_logs(PathLengthDistribution& dist) {
    auto& lc = dist.log_counts;
    while (!lc.empty() && lc.back() == numeric::neg_inf) lc.pop_back();
    dist.normalized.clear();
    dist.ipl = 0.0;
    dist.mipl = 0;
    if (lc.empty()) return;

    const double total = numeric::log_sum_exp(lc);
    dist.normalized.resize(lc.size());
    double mean = 0.0;
    for (std::size_t k = 0; k < lc.size(); ++k) {
        dist.normalized[k] = std::exp(lc[k] - total);
        mean += static_cast<double>(k) * dist.normalized[k];
    }
    dist.ipl = mean;
    dist.mipl = lc.size() - 1;
}

void finalize_from_counts(PathLengthDistribution& dist) {
    while (!dist.counts.empty() && dist.counts.back() == 0) dist.counts.pop_back();
    dist.log_counts.resize(dist.counts.size());
    for (std::size_t k = 0; k < dist.counts.size(); ++k) dist.log_counts[k] = numeric::log_of(dist.counts[k]);
    finalize_from_logs(dist);
}

}  // namespace cumuldyn
