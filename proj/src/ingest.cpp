#include "cumuldyn/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <stdexcept>

#include "cumuldyn/csv.hpp"
#include "cumuldyn/errors.hpp"

namespace cumuldyn {

const char* to_string(CitationOrigin origin) {
    switch (origin) {
        case CitationOrigin::app: return "APP";
        case CitationOrigin::exa: return "EXA";
        case CitationOrigin::unknown: return "";
    }
    return "";
}

const CorpusNode* Corpus::find(const std::string& node_id) const {
    const auto it = index.find(node_id);
    return it == index.end() ? nullptr : &nodes[it->second];
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

std::string upper(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

std::size_t require_column(const csv::Table& t, std::string_view name) {
    const auto col = t.column(name);
    if (!col) throw InputError("missing column '" + std::string(name) + "'", 1);
    return *col;
}

void check_width(const csv::Row& row, std::size_t width) {
    if (row.fields.size() != width) {
        throw InputError("expected " + std::to_string(width) + " fields, found " + std::to_string(row.fields.size()),
                         row.line);
    }
}

std::optional<int> parse_year(const std::string& text, std::size_t line) {
    const std::string t = trim(text);
    if (t.empty()) return std::nullopt;
    int value = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size()) throw InputError("invalid year '" + t + "'", line);
    return value;
}

std::optional<bool> parse_flag(const std::string& text, std::size_t line) {
    const std::string t = upper(trim(text));
    if (t.empty()) return std::nullopt;
    if (t == "TRUE" || t == "1" || t == "YES") return true;
    if (t == "FALSE" || t == "0" || t == "NO") return false;
    throw InputError("invalid granted flag '" + trim(text) + "'", line);
}

CitationOrigin parse_origin(const std::string& text, std::size_t line) {
    const std::string t = upper(trim(text));
    if (t.empty() || t == "UNKNOWN") return CitationOrigin::unknown;
    if (t == "APP") return CitationOrigin::app;
    if (t == "EXA") return CitationOrigin::exa;
    throw InputError("invalid origin '" + trim(text) + "'", line);
}

std::vector<std::string> split_classes(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find(';', start);
        const std::string part = trim(std::string_view(text).substr(start, end - start));
        if (!part.empty()) out.push_back(part);
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return out;
}

void parse_nodes(const csv::Table& nodes, Corpus& corpus) {
    const std::size_t id_col = require_column(nodes, "node_id");
    const std::size_t year_col = require_column(nodes, "year");
    const std::size_t class_col = require_column(nodes, "classes");
    const auto granted_col = nodes.column("granted");
    for (const auto& row : nodes.rows) {
        check_width(row, nodes.header.size());
        CorpusNode node;
        node.node_id = trim(row.fields[id_col]);
        if (node.node_id.empty()) throw InputError("empty node_id", row.line);
        node.year = parse_year(row.fields[year_col], row.line);
        node.classes = split_classes(row.fields[class_col]);
        if (granted_col) node.granted = parse_flag(row.fields[*granted_col], row.line);
        if (!corpus.index.emplace(node.node_id, corpus.nodes.size()).second) {
            throw InputError("duplicate node id '" + node.node_id + "'", row.line);
        }
        corpus.nodes.push_back(std::move(node));
    }
}

void parse_edges(const csv::Table& edges, Corpus& corpus) {
    const std::size_t citing_col = require_column(edges, "citing_id");
    const std::size_t cited_col = require_column(edges, "cited_id");
    const auto origin_col = edges.column("origin");
    for (const auto& row : edges.rows) {
        check_width(row, edges.header.size());
        CitationRecord rec;
        rec.citing_id = trim(row.fields[citing_col]);
        rec.cited_id = trim(row.fields[cited_col]);
        if (rec.citing_id.empty() || rec.cited_id.empty()) throw InputError("empty citation endpoint", row.line);
        if (rec.citing_id == rec.cited_id) throw InputError("self citation '" + rec.citing_id + "'", row.line);
        if (origin_col) rec.origin = parse_origin(row.fields[*origin_col], row.line);
        corpus.citations.push_back(std::move(rec));
    }
}

template <class Fn>
void with_file_context(const std::filesystem::path& path, Fn&& fn) {
    try {
        fn();
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

bool matches_any(const CorpusNode& node, const std::vector<std::string>& prefixes) {
    for (const auto& cls : node.classes) {
        const std::string norm = normalize_class(cls);
        for (const auto& p : prefixes) {
            if (starts_with(norm, p)) return true;
        }
    }
    return false;
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& node_file, const std::filesystem::path& edge_file) {
    Corpus corpus;
    const csv::Table nodes = csv::read_file(node_file);
    with_file_context(node_file, [&] { parse_nodes(nodes, corpus); });
    const csv::Table edges = csv::read_file(edge_file);
    with_file_context(edge_file, [&] { parse_edges(edges, corpus); });
    return corpus;
}

Corpus parse_corpus(std::istream& nodes, std::istream& edges) {
    Corpus corpus;
    parse_nodes(csv::read(nodes), corpus);
    parse_edges(csv::read(edges), corpus);
    return corpus;
}

std::string normalize_class(std::string_view code) {
    std::string out;
    out.reserve(code.size());
    for (char c : code) {
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    }
    return out;
}

TechnologyQuery TechnologyQuery::make(std::string name, const std::vector<std::string>& prefixes,
                                      std::optional<int> year_cutoff) {
    TechnologyQuery q;
    q.name = std::move(name);
    q.year_cutoff = year_cutoff;
    for (const auto& p : prefixes) {
        std::string norm = normalize_class(p);
        if (norm.empty()) throw std::invalid_argument("technology query has an empty class prefix");
        q.class_prefixes.push_back(std::move(norm));
    }
    if (q.class_prefixes.empty()) throw std::invalid_argument("technology query needs at least one class prefix");
    std::sort(q.class_prefixes.begin(), q.class_prefixes.end());
    q.class_prefixes.erase(std::unique(q.class_prefixes.begin(), q.class_prefixes.end()), q.class_prefixes.end());
    return q;
}

bool TechnologyQuery::matches(const CorpusNode& node) const { return matches_any(node, class_prefixes); }

BuildResult build_graph(const Corpus& corpus, const TechnologyQuery& query, const BuildFilters& filters) {
    std::vector<const CorpusNode*> selected;
    for (const auto& node : corpus.nodes) {
        if (filters.granted_only && node.granted == false) continue;
        if (query.year_cutoff && (!node.year || *node.year > *query.year_cutoff)) continue;
        if (query.matches(node)) selected.push_back(&node);
    }
    if (selected.empty()) throw InputError("query '" + query.name + "' matches no nodes");
    std::sort(selected.begin(), selected.end(), [](const CorpusNode* a, const CorpusNode* b) {
        if (a->year != b->year) return a->year < b->year;
        return a->node_id < b->node_id;
    });

    std::unordered_map<std::string, Ordinal> ordinal_of;
    ordinal_of.reserve(selected.size());
    std::vector<InventionNode> nodes;
    nodes.reserve(selected.size());
    for (Ordinal i = 0; i < selected.size(); ++i) {
        ordinal_of.emplace(selected[i]->node_id, i);
        nodes.push_back({selected[i]->node_id, i, selected[i]->year, selected[i]->classes});
    }

    BuildResult result;
    BuildDiagnostics& diag = result.diagnostics;
    diag.selected_nodes = selected.size();
    std::set<std::pair<Ordinal, Ordinal>> internal;
    std::set<std::pair<Ordinal, std::string>> external;
    std::vector<std::uint32_t> external_counts(selected.size(), 0);

    for (const auto& cit : corpus.citations) {
        const auto citing_it = ordinal_of.find(cit.citing_id);
        if (citing_it == ordinal_of.end()) continue;
        if (filters.origin == OriginFilter::app_only && cit.origin != CitationOrigin::app) {
            ++diag.origin_filtered;
            continue;
        }
        ++diag.citations_considered;
        const Ordinal citing = citing_it->second;
        const auto& citing_year = selected[citing]->year;
        const CorpusNode* cited_node = corpus.find(cit.cited_id);
        if (cited_node && cited_node->year && citing_year && *cited_node->year > *citing_year) {
            ++diag.chronology_dropped;
            continue;
        }
        const auto cited_it = ordinal_of.find(cit.cited_id);
        if (cited_it != ordinal_of.end()) {
            if (cited_it->second >= citing) {
                ++diag.tie_order_dropped;
                continue;
            }
            if (!internal.emplace(citing, cited_it->second).second) ++diag.duplicates_collapsed;
        } else {
            if (external.emplace(citing, cit.cited_id).second) {
                ++external_counts[citing];
            } else {
                ++diag.duplicates_collapsed;
            }
        }
    }

    std::vector<Citation> edges;
    edges.reserve(internal.size());
    for (const auto& [citing, cited] : internal) edges.push_back({citing, cited});
    diag.internal_edges = edges.size();
    diag.external_links = external.size();
    result.graph = KnowledgeGraph(std::move(nodes), std::move(edges), std::move(external_counts));
    return result;
}

GroupingTable parse_grouping(std::istream& in) {
    const csv::Table t = csv::read(in);
    const std::size_t group_col = require_column(t, "group_name");
    const std::size_t prefix_col = require_column(t, "prefix");
    GroupingTable table;
    for (const auto& row : t.rows) {
        check_width(row, t.header.size());
        const std::string group = trim(row.fields[group_col]);
        if (group.empty()) throw InputError("empty group name", row.line);
        const std::string prefix = normalize_class(row.fields[prefix_col]);
        auto& prefixes = table[group];
        if (!prefix.empty()) prefixes.push_back(prefix);
    }
    return table;
}

GroupingTable load_grouping(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_grouping(in);
}

std::map<std::string, std::vector<std::string>> class_grouping(const Corpus& corpus, const GroupingTable& table) {
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& [group, prefixes] : table) {
        if (prefixes.empty()) throw std::invalid_argument("group '" + group + "' has no class prefixes");
        auto& members = out[group];
        for (const auto& node : corpus.nodes) {
            if (matches_any(node, prefixes)) members.push_back(node.node_id);
        }
        std::sort(members.begin(), members.end());
    }
    return out;
}

}  // namespace cumuldyn
