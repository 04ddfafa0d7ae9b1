#include "cumuldyn/path_engine.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <variant>

#include "cumuldyn/numeric.hpp"

namespace cumuldyn {

namespace {

void check_prefix(const KnowledgeGraph& g, std::size_t n) {
    if (n < 1 || n > g.node_count()) {
        throw std::out_of_range("prefix size " + std::to_string(n) + " outside [1, " +
                                std::to_string(g.node_count()) + "]");
    }
}

struct ExactOps {
    using Value = PathCount;
    static Value zero() { return 0; }
    static Value one() { return 1; }
    static bool is_zero(const Value& v) { return v.is_zero(); }
};

struct LogOps {
    using Value = double;
    static Value zero() { return numeric::neg_inf; }
    static Value one() { return 0.0; }
    static bool is_zero(Value v) { return v == numeric::neg_inf; }
};

/// Per-node vectors live in one pool; node i owns pool[offset, offset + len)
/// holding k = first_k .. first_k + len - 1.
template <class Ops>
class SweepCore {
public:
    using Value = typename Ops::Value;

    explicit SweepCore(const KnowledgeGraph& g) : g_(&g) {
        first_k_.reserve(g.node_count());
        offset_.reserve(g.node_count() + 1);
        offset_.push_back(0);
    }

    std::size_t size() const { return first_k_.size(); }

    void advance() {
        const Ordinal i = size();
        const auto cited = g_->cited_by(i);
        if (cited.empty()) {
            pool_.push_back(Ops::one());
            first_k_.push_back(0);
            offset_.push_back(pool_.size());
            add_to_totals(0, i);
            return;
        }
        std::size_t lo = SIZE_MAX;
        std::size_t hi = 0;
        for (Ordinal c : cited) {
            lo = std::min(lo, first_k_[c] + 1);
            hi = std::max(hi, first_k_[c] + length(c) + 1);
        }
        accumulate(cited, lo, hi - lo);
        first_k_.push_back(lo);
        offset_.push_back(pool_.size());
        add_to_totals(lo, i);
    }

    std::size_t mipl() const { return totals_.empty() ? 0 : totals_.size() - 1; }
    const std::vector<Value>& totals() const { return totals_; }

    std::map<std::size_t, Value> node_vector(Ordinal i) const {
        std::map<std::size_t, Value> out;
        for (std::size_t t = 0; t < length(i); ++t) {
            const Value& v = pool_[offset_[i] + t];
            if (!Ops::is_zero(v)) out.emplace(first_k_[i] + t, v);
        }
        return out;
    }

private:
    std::size_t length(Ordinal i) const { return offset_[i + 1] - offset_[i]; }

    void accumulate(std::span<const Ordinal> cited, std::size_t lo, std::size_t len) {
        if constexpr (std::is_same_v<Ops, ExactOps>) {
            scratch_.assign(len, Ops::zero());
            for (Ordinal c : cited) {
                const std::size_t base = first_k_[c] + 1 - lo;
                for (std::size_t t = 0; t < length(c); ++t) scratch_[base + t] += pool_[offset_[c] + t];
            }
        } else {
            // Two passes: per-k maximum, then scaled sum.
            scratch_.assign(len, Ops::zero());
            for (Ordinal c : cited) {
                const std::size_t base = first_k_[c] + 1 - lo;
                for (std::size_t t = 0; t < length(c); ++t) {
                    scratch_[base + t] = std::max(scratch_[base + t], pool_[offset_[c] + t]);
                }
            }
            sums_.assign(len, 0.0);
            for (Ordinal c : cited) {
                const std::size_t base = first_k_[c] + 1 - lo;
                for (std::size_t t = 0; t < length(c); ++t) {
                    const double v = pool_[offset_[c] + t];
                    if (v != numeric::neg_inf) sums_[base + t] += std::exp(v - scratch_[base + t]);
                }
            }
            for (std::size_t t = 0; t < len; ++t) {
                if (scratch_[t] != numeric::neg_inf) scratch_[t] += std::log(sums_[t]);
            }
        }
        for (auto& v : scratch_) pool_.push_back(std::move(v));
    }

    void add_to_totals(std::size_t lo, Ordinal i) {
        const std::size_t len = length(i);
        if (totals_.size() < lo + len) totals_.resize(lo + len, Ops::zero());
        for (std::size_t t = 0; t < len; ++t) {
            const Value& v = pool_[offset_[i] + t];
            if constexpr (std::is_same_v<Ops, ExactOps>) {
                totals_[lo + t] += v;
            } else {
                totals_[lo + t] = numeric::log_add(totals_[lo + t], v);
            }
        }
        while (!totals_.empty() && Ops::is_zero(totals_.back())) totals_.pop_back();
    }

    const KnowledgeGraph* g_;
    std::vector<Value> pool_;
    std::vector<std::size_t> first_k_;
    std::vector<std::size_t> offset_;
    std::vector<Value> totals_;
    std::vector<Value> scratch_;
    std::vector<double> sums_;
};

}  // namespace

struct PathSweep::Impl {
    std::variant<SweepCore<ExactOps>, SweepCore<LogOps>> core;
};

PathSweep::PathSweep(const KnowledgeGraph& g, bool exact) {
    require_valid(g);
    if (exact) {
        impl_ = std::make_unique<Impl>(Impl{SweepCore<ExactOps>(g)});
    } else {
        impl_ = std::make_unique<Impl>(Impl{SweepCore<LogOps>(g)});
    }
}

PathSweep::~PathSweep() = default;
PathSweep::PathSweep(PathSweep&&) noexcept = default;
PathSweep& PathSweep::operator=(PathSweep&&) noexcept = default;

bool PathSweep::exact() const { return impl_->core.index() == 0; }

std::size_t PathSweep::size() const {
    return std::visit([](const auto& c) { return c.size(); }, impl_->core);
}

void PathSweep::advance() {
    std::visit([](auto& c) { c.advance(); }, impl_->core);
}

void PathSweep::advance_to(std::size_t n) {
    std::visit(
        [n](auto& c) {
            while (c.size() < n) c.advance();
        },
        impl_->core);
}

std::size_t PathSweep::mipl() const {
    return std::visit([](const auto& c) { return c.mipl(); }, impl_->core);
}

PathLengthDistribution PathSweep::distribution() const {
    PathLengthDistribution dist;
    dist.n = size();
    if (auto* exact_core = std::get_if<SweepCore<ExactOps>>(&impl_->core)) {
        dist.counts = exact_core->totals();
        finalize_from_counts(dist);
    } else {
        dist.log_counts = std::get<SweepCore<LogOps>>(impl_->core).totals();
        finalize_from_logs(dist);
    }
    return dist;
}

std::map<std::size_t, PathCount> PathSweep::node_path_vector(Ordinal i) const {
    auto* exact_core = std::get_if<SweepCore<ExactOps>>(&impl_->core);
    if (exact_core == nullptr) throw std::logic_error("node_path_vector requires exact mode");
    if (i >= exact_core->size()) throw std::out_of_range("node not yet processed");
    return exact_core->node_vector(i);
}

double internal_dependence(const KnowledgeGraph& g, std::size_t n) {
    check_prefix(g, n);
    std::size_t links = 0;
    // Edges point backward, so a prefix node's links all stay in the prefix.
    for (Ordinal i = 0; i < n; ++i) links += g.internal_backlinks(i);
    return static_cast<double>(links) / static_cast<double>(n);
}

double external_dependence(const KnowledgeGraph& g, std::size_t n) {
    check_prefix(g, n);
    std::uint64_t links = 0;
    for (Ordinal i = 0; i < n; ++i) links += g.external_backlinks(i);
    return static_cast<double>(links) / static_cast<double>(n);
}

double initial_fraction(const KnowledgeGraph& g, std::size_t n) {
    check_prefix(g, n);
    std::size_t initial = 0;
    for (Ordinal i = 0; i < n; ++i) initial += g.internal_backlinks(i) == 0 ? 1 : 0;
    return static_cast<double>(initial) / static_cast<double>(n);
}

BacklinkDistribution backlink_distribution(const KnowledgeGraph& g, std::size_t n) {
    check_prefix(g, n);
    BacklinkDistribution dist;
    dist.n = n;
    std::size_t total = 0;
    for (Ordinal i = 0; i < n; ++i) {
        const std::size_t m = g.internal_backlinks(i);
        if (dist.counts.size() <= m) dist.counts.resize(m + 1, 0);
        ++dist.counts[m];
        total += m;
    }
    dist.mean = static_cast<double>(total) / static_cast<double>(n);
    return dist;
}

PathLengthDistribution path_length_distribution(const KnowledgeGraph& g, std::size_t n,
                                                const PathOptions& options) {
    check_prefix(g, n);
    PathSweep sweep(g, options.use_exact(n));
    sweep.advance_to(n);
    return sweep.distribution();
}

CumulativenessSeries cumulativeness_series(const KnowledgeGraph& g, std::size_t stride,
                                           const PathOptions& options, const CheckpointObserver& observer) {
    if (g.empty()) throw std::invalid_argument("cumulativeness series of an empty graph");
    if (stride == 0) throw std::invalid_argument("stride must be positive");

    const std::size_t total = g.node_count();
    PathSweep sweep(g, options.use_exact(total));
    CumulativenessSeries series;
    std::size_t internal_links = 0;
    std::uint64_t external_links = 0;

    for (std::size_t n = 1; n <= total; ++n) {
        sweep.advance();
        internal_links += g.internal_backlinks(n - 1);
        external_links += g.external_backlinks(n - 1);
        if (n % stride != 0 && n != total) continue;

        const PathLengthDistribution dist = sweep.distribution();
        Checkpoint cp;
        cp.n = n;
        cp.id = static_cast<double>(internal_links) / static_cast<double>(n);
        cp.ipl = dist.ipl;
        cp.mipl = dist.mipl;
        cp.ed = static_cast<double>(external_links) / static_cast<double>(n);
        series.checkpoints.push_back(cp);
        if (observer) observer(cp, dist);
    }
    return series;
}

}  // namespace cumuldyn
