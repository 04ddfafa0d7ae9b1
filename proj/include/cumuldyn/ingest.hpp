#pragma once

// Loading patent-like citation corpora and carving technology graphs out of
// them.
//
// Input files (UTF-8 CSV, header row required, columns matched by name):
//   nodes:    node_id,year,classes[,granted]   classes is ';'-separated
//   edges:    citing_id,cited_id[,origin]       origin in {APP, EXA, empty}
//   grouping: group_name,prefix
//
// Nodes are assumed to be pre-aggregated patent families.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cumuldyn/core_types.hpp"

namespace cumuldyn {

enum class CitationOrigin { app, exa, unknown };

const char* to_string(CitationOrigin origin);

struct CorpusNode {
    std::string node_id;
    std::optional<int> year;
    std::vector<std::string> classes;
    std::optional<bool> granted;
};

struct CitationRecord {
    std::string citing_id;
    std::string cited_id;
    CitationOrigin origin = CitationOrigin::unknown;
};

struct Corpus {
    std::vector<CorpusNode> nodes;
    std::vector<CitationRecord> citations;
    std::unordered_map<std::string, std::size_t> index;

    const CorpusNode* find(const std::string& node_id) const;
};

/// Throws InputError (with line number) for malformed rows, duplicate node
/// ids and self citations; IoError when a file cannot be read.
Corpus load_corpus(const std::filesystem::path& node_file, const std::filesystem::path& edge_file);
Corpus parse_corpus(std::istream& nodes, std::istream& edges);

/// Class code with all whitespace removed ("Y02E 10/5" -> "Y02E10/5").
std::string normalize_class(std::string_view code);

struct TechnologyQuery {
    std::string name;
    std::vector<std::string> class_prefixes;  ///< normalized
    std::optional<int> year_cutoff;

    /// Normalizes prefixes; throws std::invalid_argument when none remain
    /// or one is empty.
    static TechnologyQuery make(std::string name, const std::vector<std::string>& prefixes,
                                std::optional<int> year_cutoff = std::nullopt);

    bool matches(const CorpusNode& node) const;
};

enum class OriginFilter { all, app_only };

struct BuildFilters {
    OriginFilter origin = OriginFilter::all;
    bool granted_only = false;
};

struct BuildDiagnostics {
    std::size_t selected_nodes = 0;
    std::size_t citations_considered = 0;  ///< citing node selected, origin kept
    std::size_t origin_filtered = 0;
    std::size_t internal_edges = 0;
    std::size_t external_links = 0;
    std::size_t duplicates_collapsed = 0;
    std::size_t chronology_dropped = 0;  ///< cited year later than citing year
    std::size_t tie_order_dropped = 0;   ///< cited node ordered after citing node
};

struct BuildResult {
    KnowledgeGraph graph;
    BuildDiagnostics diagnostics;
};

/// Select the query's nodes, order them by (year, node_id) and classify their
/// citations. Nodes without a year sort first; with a cutoff set they are
/// excluded. Throws InputError when no node matches.
BuildResult build_graph(const Corpus& corpus, const TechnologyQuery& query, const BuildFilters& filters = {});

/// group name -> class prefixes (normalized).
using GroupingTable = std::map<std::string, std::vector<std::string>>;

GroupingTable load_grouping(const std::filesystem::path& path);
GroupingTable parse_grouping(std::istream& in);

/// Node ids matching any prefix of each group, each listed once, ascending.
/// Throws std::invalid_argument for a group without prefixes.
std::map<std::string, std::vector<std::string>> class_grouping(const Corpus& corpus, const GroupingTable& table);

}  // namespace cumuldyn
