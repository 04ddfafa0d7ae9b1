#pragma once

// Command implementations behind the cumuldyn CLI. Each command writes CSV
// tables plus a metadata.json sidecar into an output directory and returns a
// process exit code: 0 success, 2 usage or validation error, 3 I/O failure.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cumuldyn/path_engine.hpp"

namespace cumuldyn::cli {

enum ExitCode : int { exit_ok = 0, exit_usage = 2, exit_io = 3 };

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row);
};

/// Result artifacts of one command run.
class ReportBundle {
public:
    explicit ReportBundle(std::string command);

    void set_argument(const std::string& key, const std::string& value);
    CsvTable& add_table(const std::string& file_name, std::vector<std::string> columns);
    void warn(const std::string& message);
    void set_diagnostic(const std::string& key, nlohmann::json value);

    const std::vector<std::string>& warnings() const { return warnings_; }
    nlohmann::json metadata() const;

    /// Creates `dir` if needed and writes every table plus metadata.json.
    /// Throws IoError.
    void write(const std::filesystem::path& dir) const;

private:
    std::string command_;
    std::map<std::string, std::string> arguments_;
    std::map<std::string, CsvTable> tables_;
    std::vector<std::string> warnings_;
    nlohmann::json diagnostics_ = nlohmann::json::object();
};

struct SimulateOptions {
    double q = 0.0;
    double m1 = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::filesystem::path out;
};

struct CorpusOptions {
    std::filesystem::path nodes;
    std::filesystem::path edges;
    bool app_only = false;
    bool granted_only = false;
};

struct MeasureOptions {
    CorpusOptions corpus;
    std::string name = "technology";
    std::vector<std::string> prefixes;
    std::optional<int> year_cutoff;
    std::size_t stride = 100;
    std::size_t dist_stride = 1000;
    PathOptions path_options;
    std::filesystem::path out;
};

struct FitOptions {
    std::filesystem::path series;
    /// Defaults to node_backlinks.csv next to the series file when present.
    std::optional<std::filesystem::path> node_backlinks;
    std::optional<std::size_t> min_n;
    std::filesystem::path out;
};

struct GofOptions {
    std::filesystem::path backlinks;
    std::filesystem::path path_lengths;
    std::optional<std::filesystem::path> series;  ///< source of fitted q, m0
    std::optional<double> q;
    std::optional<double> m1;
    std::filesystem::path out;
};

struct SweepOptions {
    CorpusOptions corpus;
    std::filesystem::path queries;  ///< group_name,prefix table
    std::optional<int> year_cutoff;
    std::size_t stride = 100;
    std::optional<std::size_t> threads;  ///< overrides CUMULDYN_THREADS
    PathOptions path_options;
    std::filesystem::path out;
};

int cmd_simulate(const SimulateOptions& options, std::ostream& err);
int cmd_measure(const MeasureOptions& options, std::ostream& err);
int cmd_fit(const FitOptions& options, std::ostream& err);
int cmd_gof(const GofOptions& options, std::ostream& err);
int cmd_sweep(const SweepOptions& options, std::ostream& err);

/// Worker count for sweeps: explicit value, else CUMULDYN_THREADS, else
/// hardware concurrency; never below 1.
std::size_t sweep_threads(std::optional<std::size_t> requested);

/// Parse a series.csv written by cmd_measure.
CumulativenessSeries read_series(const std::filesystem::path& path);

}  // namespace cumuldyn::cli
