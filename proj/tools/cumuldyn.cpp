#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cumuldyn/report.hpp"

using namespace cumuldyn;
using namespace cumuldyn::cli;

namespace {

void add_corpus_flags(CLI::App* sub, CorpusOptions& c) {
    sub->add_option("--nodes", c.nodes, "nodes CSV (node_id,year,classes[,granted])")->required();
    sub->add_option("--edges", c.edges, "edges CSV (citing_id,cited_id[,origin])")->required();
    sub->add_flag("--app-only", c.app_only, "keep only applicant-added citations");
    sub->add_flag("--granted-only", c.granted_only, "skip nodes whose granted column is false");
}

void add_path_flags(CLI::App* sub, PathOptions& p) {
    static const std::map<std::string, NumericMode> modes = {
        {"auto", NumericMode::automatic}, {"exact", NumericMode::exact}, {"log", NumericMode::log_space}};
    sub->add_option("--mode", p.mode, "path counting: auto, exact or log")
        ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
    sub->add_option("--log-threshold", p.log_threshold, "auto mode switches to log space above this node count");
}

/// Replace `--config FILE` by the file's key=value pairs as long flags.
/// Keys already given on the command line are skipped so flags win.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args;
    std::string config;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) {
            config = argv[++i];
        } else if (a.rfind("--config=", 0) == 0) {
            config = a.substr(9);
        } else {
            args.push_back(a);
        }
    }
    if (config.empty()) return args;

    std::set<std::string> given;
    for (const auto& a : args) {
        if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') - 2));
    }
    std::ifstream in(config);
    if (!in) throw std::runtime_error("cannot open config file " + config);
    for (const auto& item : CLI::ConfigINI().from_config(in)) {
        if (item.name == "++" || item.name == "--") continue;
        if (given.count(item.name)) continue;
        for (const auto& value : item.inputs) args.push_back("--" + item.name + "=" + value);
    }
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cumulativeness indicators on citation graphs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", CUMULDYN_VERSION);

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "grow a graph with the search model");
    simulate->add_option("--q", sim.q, "id growth rate")->required();
    simulate->add_option("--m1", sim.m1, "expected backlinks of the first invention")->required();
    simulate->add_option("--n", sim.n, "node count")->required();
    simulate->add_option("--seed", sim.seed, "RNG seed")->required();
    simulate->add_option("--out", sim.out, "output directory")->required();

    MeasureOptions measure_opts;
    std::optional<int> measure_cutoff;
    auto* measure = app.add_subcommand("measure", "id and ipl series of one technology");
    add_corpus_flags(measure, measure_opts.corpus);
    measure->add_option("--name", measure_opts.name, "technology label");
    measure->add_option("--prefix", measure_opts.prefixes, "class prefix (repeatable)")->required();
    measure->add_option("--year-cutoff", measure_cutoff, "drop nodes after this year");
    measure->add_option("--stride", measure_opts.stride, "checkpoint spacing")->capture_default_str();
    measure->add_option("--dist-stride", measure_opts.dist_stride, "distribution table spacing")
        ->capture_default_str();
    add_path_flags(measure, measure_opts.path_options);
    measure->add_option("--out", measure_opts.out, "output directory")->required();

    FitOptions fit_opts;
    std::optional<std::filesystem::path> fit_backlinks;
    std::optional<std::size_t> fit_min_n;
    auto* fit = app.add_subcommand("fit", "OLS fits of a series and rate predictions");
    fit->add_option("--series", fit_opts.series, "series.csv from measure")->required();
    fit->add_option("--node-backlinks", fit_backlinks, "node_backlinks.csv (default: next to the series)");
    fit->add_option("--min-n", fit_min_n, "ignore checkpoints below this n");
    fit->add_option("--out", fit_opts.out, "output directory")->required();

    GofOptions gof_opts;
    std::optional<std::filesystem::path> gof_series;
    std::optional<double> gof_q;
    std::optional<double> gof_m1;
    auto* gof = app.add_subcommand("gof", "probability plots and chi-square tests");
    gof->add_option("--backlinks", gof_opts.backlinks, "backlinks.csv from measure");
    gof->add_option("--path-lengths", gof_opts.path_lengths, "path_lengths.csv from measure");
    gof->add_option("--series", gof_series, "series.csv used to fit q and m0");
    gof->add_option("--q", gof_q, "model q (with --m1)");
    gof->add_option("--m1", gof_m1, "model m1 (with --q)");
    gof->add_option("--out", gof_opts.out, "output directory")->required();

    SweepOptions sweep_opts;
    std::optional<int> sweep_cutoff;
    std::optional<std::size_t> sweep_threads_flag;
    auto* sweep = app.add_subcommand("sweep", "compare many technologies");
    add_corpus_flags(sweep, sweep_opts.corpus);
    sweep->add_option("--queries", sweep_opts.queries, "group_name,prefix table")->required();
    sweep->add_option("--year-cutoff", sweep_cutoff, "drop nodes after this year");
    sweep->add_option("--stride", sweep_opts.stride, "checkpoint spacing")->capture_default_str();
    sweep->add_option("--threads", sweep_threads_flag, "worker threads (default CUMULDYN_THREADS)");
    add_path_flags(sweep, sweep_opts.path_options);
    sweep->add_option("--out", sweep_opts.out, "output directory")->required();

    app.footer("Every subcommand also accepts --config FILE with key=value lines naming long flags;\n"
               "flags given on the command line take precedence.");

    std::vector<std::string> args;
    try {
        args = expand_config(argc, argv);
    } catch (const std::runtime_error& e) {
        std::cerr << e.what() << '\n';
        return exit_io;
    }
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    if (simulate->parsed()) return cmd_simulate(sim, std::cerr);
    if (measure->parsed()) {
        measure_opts.year_cutoff = measure_cutoff;
        return cmd_measure(measure_opts, std::cerr);
    }
    if (fit->parsed()) {
        fit_opts.node_backlinks = fit_backlinks;
        fit_opts.min_n = fit_min_n;
        return cmd_fit(fit_opts, std::cerr);
    }
    if (gof->parsed()) {
        gof_opts.series = gof_series;
        gof_opts.q = gof_q;
        gof_opts.m1 = gof_m1;
        return cmd_gof(gof_opts, std::cerr);
    }
    sweep_opts.year_cutoff = sweep_cutoff;
    sweep_opts.threads = sweep_threads_flag;
    return cmd_sweep(sweep_opts, std::cerr);
}
