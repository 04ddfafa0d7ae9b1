#include "cumuldyn/report.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <ostream>
#include <thread>

#include "cumuldyn/analytic.hpp"
#include "cumuldyn/csv.hpp"
#include "cumuldyn/errors.hpp"
#include "cumuldyn/fitting.hpp"
#include "cumuldyn/growth.hpp"
#include "cumuldyn/ingest.hpp"
#include "cumuldyn/numeric.hpp"

namespace cumuldyn::cli {

namespace fs = std::filesystem;

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) { return csv::format_double(v); }
std::string num(std::size_t v) { return std::to_string(v); }

template <class Fn>
int run_command(std::ostream& err, const char* name, Fn&& body) {
    try {
        body();
        return exit_ok;
    } catch (const IoError& e) {
        err << name << ": I/O error: " << e.what() << '\n';
        return exit_io;
    } catch (const InputError& e) {
        err << name << ": " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        err << name << ": " << e.what() << '\n';
        return exit_usage;
    } catch (const std::out_of_range& e) {
        err << name << ": " << e.what() << '\n';
        return exit_usage;
    }
}

double parse_double(const std::string& text, std::size_t line) {
    const std::string t = text;
    if (t == "nan") return nan_value;
    if (t == "inf") return std::numeric_limits<double>::infinity();
    if (t == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size()) throw InputError("invalid number '" + t + "'", line);
    return v;
}

std::size_t parse_size(const std::string& text, std::size_t line) {
    std::size_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw InputError("invalid count '" + text + "'", line);
    }
    return v;
}

struct Columns {
    const csv::Table& table;
    std::vector<std::size_t> index;

    Columns(const csv::Table& t, std::initializer_list<const char*> names) : table(t) {
        for (const char* n : names) {
            const auto c = t.column(n);
            if (!c) throw InputError(std::string("missing column '") + n + "'", 1);
            index.push_back(*c);
        }
    }

    const std::string& get(const csv::Row& row, std::size_t which) const {
        if (row.fields.size() != table.header.size()) {
            throw InputError("expected " + std::to_string(table.header.size()) + " fields, found " +
                                 std::to_string(row.fields.size()),
                             row.line);
        }
        return row.fields[index[which]];
    }
};

void add_fit_row(CsvTable& t, const std::string& quantity, const LinearFit& f) {
    t.add({quantity, num(f.slope), num(f.intercept), num(f.r_squared), num(f.residual_se), num(f.f_statistic),
           num(f.n_obs), num(f.slope_se), num(f.intercept_se), num(f.adj_r_squared), num(f.f_p_value)});
}

const std::vector<std::string> fit_columns = {"quantity", "slope",    "intercept", "r2",     "se",       "f",
                                              "n_obs",    "slope_se", "intercept_se", "adj_r2", "f_p_value"};

BuildFilters filters_of(const CorpusOptions& c) {
    BuildFilters f;
    f.origin = c.app_only ? OriginFilter::app_only : OriginFilter::all;
    f.granted_only = c.granted_only;
    return f;
}

void record_corpus_args(ReportBundle& bundle, const CorpusOptions& c) {
    bundle.set_argument("nodes", c.nodes.string());
    bundle.set_argument("edges", c.edges.string());
    bundle.set_argument("app_only", c.app_only ? "true" : "false");
    bundle.set_argument("granted_only", c.granted_only ? "true" : "false");
}

void record_path_args(ReportBundle& bundle, const PathOptions& p) {
    const char* mode = p.mode == NumericMode::exact ? "exact" : p.mode == NumericMode::log_space ? "log" : "auto";
    bundle.set_argument("mode", mode);
    bundle.set_argument("log_threshold", std::to_string(p.log_threshold));
}

nlohmann::json diagnostics_json(const BuildDiagnostics& d) {
    return {{"selected_nodes", d.selected_nodes},
            {"citations_considered", d.citations_considered},
            {"origin_filtered", d.origin_filtered},
            {"internal_edges", d.internal_edges},
            {"external_links", d.external_links},
            {"duplicates_collapsed", d.duplicates_collapsed},
            {"chronology_dropped", d.chronology_dropped},
            {"tie_order_dropped", d.tie_order_dropped}};
}

std::string count_text(const PathLengthDistribution& dist, std::size_t k) {
    if (dist.is_exact()) return dist.counts[k].str();
    return num(std::exp(dist.log_counts[k]));
}

std::map<std::size_t, BacklinkDistribution> read_backlink_tables(const fs::path& path) {
    const csv::Table t = csv::read_file(path);
    const Columns cols(t, {"n", "m", "count"});
    std::map<std::size_t, BacklinkDistribution> out;
    for (const auto& row : t.rows) {
        const std::size_t n = parse_size(cols.get(row, 0), row.line);
        const std::size_t m = parse_size(cols.get(row, 1), row.line);
        const std::size_t c = parse_size(cols.get(row, 2), row.line);
        auto& d = out[n];
        d.n = n;
        if (d.counts.size() <= m) d.counts.resize(m + 1, 0);
        d.counts[m] += c;
    }
    for (auto& [n, d] : out) {
        std::size_t total = 0;
        double links = 0.0;
        for (std::size_t m = 0; m < d.counts.size(); ++m) {
            total += d.counts[m];
            links += static_cast<double>(m * d.counts[m]);
        }
        if (total == 0) throw InputError("empty backlink distribution at n = " + std::to_string(n));
        d.n = total;
        d.mean = links / static_cast<double>(total);
    }
    return out;
}

std::map<std::size_t, PathLengthDistribution> read_path_tables(const fs::path& path) {
    const csv::Table t = csv::read_file(path);
    const Columns cols(t, {"n", "k", "log_count"});
    std::map<std::size_t, PathLengthDistribution> out;
    for (const auto& row : t.rows) {
        const std::size_t n = parse_size(cols.get(row, 0), row.line);
        const std::size_t k = parse_size(cols.get(row, 1), row.line);
        const double lc = parse_double(cols.get(row, 2), row.line);
        auto& d = out[n];
        d.n = n;
        if (d.log_counts.size() <= k) d.log_counts.resize(k + 1, numeric::neg_inf);
        d.log_counts[k] = numeric::log_add(d.log_counts[k], lc);
    }
    for (auto& [n, d] : out) {
        finalize_from_logs(d);
        if (!d.has_paths()) throw InputError("empty path-length distribution at n = " + std::to_string(n));
    }
    return out;
}

std::string join_params(const std::vector<double>& params) {
    std::string out;
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) out += ';';
        out += num(params[i]);
    }
    return out;
}

std::string join_warnings(const std::vector<std::string>& w) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += "; ";
        out += w[i];
    }
    return out;
}

void emit_fit(CsvTable& plot, CsvTable& summary, const char* quantity, std::size_t n, const DistributionFit& fit) {
    for (const auto& p : fit.plot_points) {
        plot.add({quantity, num(n), to_string(fit.family), num(p.value), num(p.empirical), num(p.model)});
    }
    summary.add({quantity, num(n), to_string(fit.family), join_params(fit.params), num(fit.plot_correlation),
                 num(fit.chi_square.statistic), num(fit.chi_square.dof), num(fit.chi_square.p_value),
                 join_warnings(fit.warnings)});
}

struct TechnologyResult {
    std::string name;
    bool present = false;
    std::string warning;
    std::size_t n = 0;
    double id = 0.0;
    double ipl = 0.0;
    std::size_t mipl = 0;
    double ed = 0.0;
    double q = nan_value;
    double p = nan_value;
    double q_fit = nan_value;
    double rate = nan_value;
};

TechnologyResult measure_technology(const Corpus& corpus, const std::string& name,
                                    const std::vector<std::string>& prefixes, const SweepOptions& options) {
    TechnologyResult r;
    r.name = name;
    BuildResult built;
    try {
        built = build_graph(corpus, TechnologyQuery::make(name, prefixes, options.year_cutoff),
                            filters_of(options.corpus));
    } catch (const InputError& e) {
        r.warning = e.what();
        return r;
    }
    const KnowledgeGraph& g = built.graph;
    const CumulativenessSeries series = cumulativeness_series(g, options.stride, options.path_options);
    const Checkpoint& last = series.checkpoints.back();
    r.present = true;
    r.n = last.n;
    r.id = last.id;
    r.ipl = last.ipl;
    r.mipl = last.mipl;
    r.ed = last.ed;
    // Total internal references over n^2.
    r.q = last.id / static_cast<double>(last.n);
    if (series.checkpoints.size() >= 3) {
        r.q_fit = fit_series(series, SeriesQuantity::id).slope;
        r.p = fit_series(series, SeriesQuantity::ipl).slope;
    } else {
        r.warning = "fewer than three checkpoints; slopes not fitted";
    }
    if (g.has_years()) {
        r.rate = invention_rate(g);
    } else {
        r.warning += r.warning.empty() ? "" : "; ";
        r.warning += "missing years; invention rate not computed";
    }
    return r;
}

}  // namespace

void CsvTable::add(std::vector<std::string> row) { rows.push_back(std::move(row)); }

ReportBundle::ReportBundle(std::string command) : command_(std::move(command)) {}

void ReportBundle::set_argument(const std::string& key, const std::string& value) { arguments_[key] = value; }

CsvTable& ReportBundle::add_table(const std::string& file_name, std::vector<std::string> columns) {
    CsvTable& t = tables_[file_name];
    t.columns = std::move(columns);
    t.rows.clear();
    return t;
}

void ReportBundle::warn(const std::string& message) { warnings_.push_back(message); }

void ReportBundle::set_diagnostic(const std::string& key, nlohmann::json value) { diagnostics_[key] = std::move(value); }

nlohmann::json ReportBundle::metadata() const {
    nlohmann::json outputs = nlohmann::json::array();
    for (const auto& [name, table] : tables_) outputs.push_back({{"file", name}, {"rows", table.rows.size()}});
    return {{"tool", "cumuldyn"},
            {"version", CUMULDYN_VERSION},
            {"command", command_},
            {"arguments", arguments_},
            {"rng", rng_name},
            {"outputs", outputs},
            {"diagnostics", diagnostics_},
            {"warnings", warnings_}};
}

void ReportBundle::write(const fs::path& dir) const {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    for (const auto& [name, table] : tables_) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw IoError("cannot write " + (dir / name).string());
        out << csv::join(table.columns) << '\n';
        for (const auto& row : table.rows) out << csv::join(row) << '\n';
        if (!out) throw IoError("write failed for " + (dir / name).string());
    }
    std::ofstream meta(dir / "metadata.json", std::ios::binary);
    if (!meta) throw IoError("cannot write " + (dir / "metadata.json").string());
    meta << metadata().dump(2) << '\n';
    if (!meta) throw IoError("write failed for metadata.json");
}

std::size_t sweep_threads(std::optional<std::size_t> requested) {
    if (requested && *requested > 0) return *requested;
    if (const char* env = std::getenv("CUMULDYN_THREADS")) {
        std::size_t v = 0;
        const std::string_view text(env);
        const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
        if (res.ec == std::errc() && v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

CumulativenessSeries read_series(const fs::path& path) {
    const csv::Table t = csv::read_file(path);
    const Columns cols(t, {"n", "id", "ipl", "mipl", "ed"});
    CumulativenessSeries series;
    for (const auto& row : t.rows) {
        Checkpoint cp;
        cp.n = parse_size(cols.get(row, 0), row.line);
        cp.id = parse_double(cols.get(row, 1), row.line);
        cp.ipl = parse_double(cols.get(row, 2), row.line);
        cp.mipl = parse_size(cols.get(row, 3), row.line);
        cp.ed = parse_double(cols.get(row, 4), row.line);
        if (!series.checkpoints.empty() && cp.n <= series.checkpoints.back().n) {
            throw InputError("series n must increase strictly", row.line);
        }
        series.checkpoints.push_back(cp);
    }
    return series;
}

int cmd_simulate(const SimulateOptions& options, std::ostream& err) {
    return run_command(err, "simulate", [&] {
        const ModelParams params = ModelParams::from_m1(options.q, options.m1);
        if (options.n < 1) throw std::invalid_argument("--n must be at least 1");
        const KnowledgeGraph g = simulate(params, options.n, options.seed);

        ReportBundle bundle("simulate");
        bundle.set_argument("q", num(options.q));
        bundle.set_argument("m1", num(options.m1));
        bundle.set_argument("n", num(options.n));
        bundle.set_argument("seed", std::to_string(options.seed));
        CsvTable& nodes = bundle.add_table("nodes.csv", {"node_id", "year", "classes"});
        for (const auto& v : g.nodes()) nodes.add({v.node_id, "", "SIM"});
        CsvTable& edges = bundle.add_table("edges.csv", {"citing_id", "cited_id", "origin"});
        for (const auto& e : g.internal_edges()) edges.add({g.node(e.citing).node_id, g.node(e.cited).node_id, ""});
        bundle.set_diagnostic("internal_edges", g.internal_edges().size());
        bundle.write(options.out);
    });
}

int cmd_measure(const MeasureOptions& options, std::ostream& err) {
    return run_command(err, "measure", [&] {
        if (options.stride == 0 || options.dist_stride == 0) throw std::invalid_argument("strides must be positive");
        if (options.dist_stride % options.stride != 0) {
            throw std::invalid_argument("--dist-stride must be a multiple of --stride");
        }
        const TechnologyQuery query = TechnologyQuery::make(options.name, options.prefixes, options.year_cutoff);
        const Corpus corpus = load_corpus(options.corpus.nodes, options.corpus.edges);
        const BuildResult built = build_graph(corpus, query, filters_of(options.corpus));
        const KnowledgeGraph& g = built.graph;

        ReportBundle bundle("measure");
        record_corpus_args(bundle, options.corpus);
        record_path_args(bundle, options.path_options);
        bundle.set_argument("name", options.name);
        std::string prefixes;
        for (const auto& p : query.class_prefixes) prefixes += (prefixes.empty() ? "" : ";") + p;
        bundle.set_argument("prefixes", prefixes);
        bundle.set_argument("year_cutoff", options.year_cutoff ? std::to_string(*options.year_cutoff) : "");
        bundle.set_argument("stride", num(options.stride));
        bundle.set_argument("dist_stride", num(options.dist_stride));
        bundle.set_diagnostic("build", diagnostics_json(built.diagnostics));

        CsvTable& series_t = bundle.add_table("series.csv", {"n", "id", "ipl", "mipl", "ed"});
        CsvTable& paths_t = bundle.add_table("path_lengths.csv", {"n", "k", "count", "log_count", "normalized"});
        CsvTable& links_t = bundle.add_table("backlinks.csv", {"n", "m", "count"});
        const std::size_t total = g.node_count();
        cumulativeness_series(g, options.stride, options.path_options,
                              [&](const Checkpoint& cp, const PathLengthDistribution& dist) {
                                  series_t.add({num(cp.n), num(cp.id), num(cp.ipl), num(cp.mipl), num(cp.ed)});
                                  if (cp.n % options.dist_stride != 0 && cp.n != total) return;
                                  for (std::size_t k = 0; k < dist.log_counts.size(); ++k) {
                                      paths_t.add({num(cp.n), num(k), count_text(dist, k), num(dist.log_counts[k]),
                                                   num(dist.normalized[k])});
                                  }
                                  const BacklinkDistribution hist = backlink_distribution(g, cp.n);
                                  for (std::size_t m = 0; m < hist.counts.size(); ++m) {
                                      links_t.add({num(cp.n), num(m), num(hist.counts[m])});
                                  }
                              });

        CsvTable& per_node = bundle.add_table("node_backlinks.csv", {"ordinal", "node_id", "year", "internal", "external"});
        for (const auto& v : g.nodes()) {
            per_node.add({num(v.ordinal), v.node_id, v.year ? std::to_string(*v.year) : "",
                          num(g.internal_backlinks(v.ordinal)), num(static_cast<std::size_t>(g.external_backlinks(v.ordinal)))});
        }
        bundle.write(options.out);
    });
}

int cmd_fit(const FitOptions& options, std::ostream& err) {
    return run_command(err, "fit", [&] {
        const CumulativenessSeries series = read_series(options.series);
        if (series.checkpoints.size() < 3) throw InputError("series needs at least three checkpoints");
        SeriesWindow window;
        window.min_n = options.min_n;

        ReportBundle bundle("fit");
        bundle.set_argument("series", options.series.string());
        bundle.set_argument("min_n", options.min_n ? std::to_string(*options.min_n) : "");

        const LinearFit id_fit = fit_series(series, SeriesQuantity::id, window);
        const LinearFit ipl_fit = fit_series(series, SeriesQuantity::ipl, window);
        const LinearFit mipl_fit = fit_series(series, SeriesQuantity::mipl, window);
        CsvTable& fits = bundle.add_table("fits.csv", fit_columns);
        add_fit_row(fits, "id", id_fit);
        add_fit_row(fits, "ipl", ipl_fit);
        add_fit_row(fits, "mipl", mipl_fit);

        const std::size_t n = series.checkpoints.back().n;
        const double q = id_fit.slope;
        const double m0 = id_fit.intercept;

        std::optional<fs::path> backlinks_path = options.node_backlinks;
        if (!backlinks_path) {
            const fs::path sibling = options.series.parent_path() / "node_backlinks.csv";
            if (fs::exists(sibling)) backlinks_path = sibling;
        }
        bundle.set_argument("node_backlinks", backlinks_path ? backlinks_path->string() : "");

        CorrectedRate rate_a{nan_value, nan_value};
        if (backlinks_path) {
            const csv::Table t = csv::read_file(*backlinks_path);
            const Columns cols(t, {"ordinal", "internal"});
            std::vector<std::size_t> links(t.rows.size(), 0);
            for (const auto& row : t.rows) {
                const std::size_t ord = parse_size(cols.get(row, 0), row.line);
                if (ord >= links.size()) throw InputError("ordinal out of range", row.line);
                links[ord] = parse_size(cols.get(row, 1), row.line);
            }
            if (links.size() < n) throw InputError("node_backlinks has fewer nodes than the series");
            links.resize(n);
            rate_a = corrected_rate_a(links);
        } else {
            bundle.warn("no per-node backlink table; q_prime_a and p_prime_a not computed");
        }

        CsvTable& rates = bundle.add_table(
            "rates.csv", {"n", "m0", "q", "p", "q_prime_a", "p_prime_a", "q_prime_b", "p_prime_b", "v", "delta_n",
                          "ipl_slope", "mipl_slope"});
        if (q > 0.0) {
            const RatePredictions pred = rate_predictions(q, rate_a, corrected_rate_b(q, m0, n));
            rates.add({num(n), num(m0), num(q), num(pred.p), num(pred.q_prime_a), num(pred.p_prime_a),
                       num(pred.q_prime_b), num(pred.p_prime_b), num(pred.v), num(pred.delta_n), num(ipl_fit.slope),
                       num(mipl_fit.slope)});
        } else {
            bundle.warn("fitted id slope is not positive; rate predictions undefined");
            rates.add({num(n), num(m0), num(q), num(nan_value), num(rate_a.q_prime), num(rate_a.p_prime),
                       num(nan_value), num(nan_value), num(nan_value), num(nan_value), num(ipl_fit.slope),
                       num(mipl_fit.slope)});
        }
        bundle.write(options.out);
    });
}

int cmd_gof(const GofOptions& options, std::ostream& err) {
    return run_command(err, "gof", [&] {
        if (options.backlinks.empty() && options.path_lengths.empty()) {
            throw std::invalid_argument("give --backlinks and/or --path-lengths");
        }
        ReportBundle bundle("gof");
        bundle.set_argument("backlinks", options.backlinks.string());
        bundle.set_argument("path_lengths", options.path_lengths.string());
        bundle.set_argument("series", options.series ? options.series->string() : "");

        std::map<std::size_t, BacklinkDistribution> backlinks;
        std::map<std::size_t, PathLengthDistribution> paths;
        if (!options.backlinks.empty()) backlinks = read_backlink_tables(options.backlinks);
        if (!options.path_lengths.empty()) paths = read_path_tables(options.path_lengths);
        if (backlinks.empty() && paths.empty()) throw InputError("empty distribution input");

        CsvTable& plot = bundle.add_table("prob_plot.csv", {"quantity", "n", "family", "value", "empirical", "model"});
        CsvTable& summary = bundle.add_table(
            "gof_summary.csv",
            {"quantity", "n", "family", "params", "correlation", "chi2", "dof", "p_value", "warnings"});

        if (!backlinks.empty()) {
            std::optional<ModelParams> params;
            if (options.q && options.m1) {
                params = ModelParams::from_m1(*options.q, *options.m1);
            } else if (options.series) {
                const LinearFit f = fit_series(read_series(*options.series), SeriesQuantity::id);
                params = ModelParams::from_m0(f.slope, f.intercept);
            } else {
                throw std::invalid_argument("backlink fits need --q and --m1, or --series");
            }
            bundle.set_argument("q", num(params->q()));
            bundle.set_argument("m1", num(params->m1()));
            for (const auto& [n, hist] : backlinks) {
                emit_fit(plot, summary, "backlinks", n, geometric_gof(hist, *params, n));
                emit_fit(plot, summary, "backlinks", n, backlink_gof(hist, DistributionFamily::normal));
                emit_fit(plot, summary, "backlinks", n, backlink_gof(hist, DistributionFamily::binomial));
            }
        }
        for (const auto& [n, dist] : paths) {
            emit_fit(plot, summary, "path_length", n, pathlength_gof(dist));
            emit_fit(plot, summary, "path_length", n, pathlength_gof(dist, std::nullopt, DistributionFamily::poisson));
            emit_fit(plot, summary, "path_length", n, pathlength_gof(dist, std::nullopt, DistributionFamily::normal));
        }
        bundle.write(options.out);
    });
}

int cmd_sweep(const SweepOptions& options, std::ostream& err) {
    return run_command(err, "sweep", [&] {
        if (options.stride == 0) throw std::invalid_argument("stride must be positive");
        const GroupingTable groups = load_grouping(options.queries);
        if (groups.empty()) throw InputError("query table lists no technologies");
        const Corpus corpus = load_corpus(options.corpus.nodes, options.corpus.edges);

        std::vector<std::pair<std::string, std::vector<std::string>>> work(groups.begin(), groups.end());
        for (const auto& [name, prefixes] : work) {
            if (prefixes.empty()) throw InputError("technology '" + name + "' has no class prefixes");
        }
        std::vector<TechnologyResult> results(work.size());
        std::vector<std::exception_ptr> failures(work.size());
        std::atomic<std::size_t> next{0};
        const std::size_t workers = std::min(sweep_threads(options.threads), work.size());
        {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < workers; ++w) {
                pool.emplace_back([&] {
                    for (std::size_t i = next++; i < work.size(); i = next++) {
                        try {
                            results[i] = measure_technology(corpus, work[i].first, work[i].second, options);
                        } catch (...) {
                            failures[i] = std::current_exception();
                        }
                    }
                });
            }
        }
        for (const auto& f : failures) {
            if (f) std::rethrow_exception(f);
        }

        ReportBundle bundle("sweep");
        record_corpus_args(bundle, options.corpus);
        record_path_args(bundle, options.path_options);
        bundle.set_argument("queries", options.queries.string());
        bundle.set_argument("year_cutoff", options.year_cutoff ? std::to_string(*options.year_cutoff) : "");
        bundle.set_argument("stride", num(options.stride));

        CsvTable& techs =
            bundle.add_table("technologies.csv", {"tech", "n", "id", "ipl", "q", "p", "rate", "q_fit", "mipl", "ed"});
        std::vector<const TechnologyResult*> present;
        for (const auto& r : results) {
            if (!r.warning.empty()) bundle.warn(r.name + ": " + r.warning);
            if (!r.present) continue;
            present.push_back(&r);
            techs.add({r.name, num(r.n), num(r.id), num(r.ipl), num(r.q), num(r.p), num(r.rate), num(r.q_fit),
                       num(r.mipl), num(r.ed)});
        }

        CsvTable& cross = bundle.add_table("cross_fits.csv", [] {
            auto cols = fit_columns;
            cols.front() = "fit";
            return cols;
        }());
        CsvTable& power = bundle.add_table("power_law.csv", {"fit", "exponent", "prefactor", "r2", "n_obs"});
        CsvTable& labels = bundle.add_table("labels.csv", {"tech", "n", "id", "fitted_id", "label"});

        if (present.size() < 3) {
            bundle.warn("fewer than three technologies; cross-technology fits skipped");
        } else {
            std::vector<double> ids;
            std::vector<double> ipls;
            for (const auto* r : present) {
                ids.push_back(r->id);
                ipls.push_back(r->ipl);
            }
            try {
                add_fit_row(cross, "ipl_vs_id", ols_fit(ids, ipls));
            } catch (const std::invalid_argument& e) {
                bundle.warn(std::string("ipl_vs_id skipped: ") + e.what());
            }

            std::vector<double> qs;
            std::vector<double> rates;
            for (const auto* r : present) {
                if (r->q > 0.0 && r->rate > 0.0 && std::isfinite(r->rate)) {
                    qs.push_back(r->q);
                    rates.push_back(r->rate);
                }
            }
            if (qs.size() >= 3) {
                try {
                    const PowerLawFit pl = power_law_fit(qs, rates);
                    power.add({"rate_vs_q", num(pl.exponent), num(pl.prefactor), num(pl.log_log.r_squared),
                               num(pl.log_log.n_obs)});
                } catch (const std::invalid_argument& e) {
                    bundle.warn(std::string("rate_vs_q skipped: ") + e.what());
                }
            } else {
                bundle.warn("fewer than three technologies with q and rate; rate_vs_q skipped");
            }

            std::vector<TechnologyPoint> points;
            for (const auto* r : present) {
                if (r->id > 0.0) points.push_back({r->name, static_cast<double>(r->n), r->id});
            }
            try {
                const RelativeCumulativeness cls = classify_relative_cumulativeness(points);
                power.add({"id_vs_n", num(cls.fit.exponent), num(cls.fit.prefactor), num(cls.fit.log_log.r_squared),
                           num(cls.fit.log_log.n_obs)});
                for (std::size_t i = 0; i < points.size(); ++i) {
                    labels.add({points[i].name, num(points[i].n), num(points[i].id), num(cls.fit.predict(points[i].n)),
                                to_string(cls.labels[i])});
                }
            } catch (const std::invalid_argument& e) {
                bundle.warn(std::string("classification skipped: ") + e.what());
            }
        }
        for (const auto& w : bundle.warnings()) err << "sweep: warning: " << w << '\n';
        bundle.write(options.out);
    });
}

}  // namespace cumuldyn::cli
