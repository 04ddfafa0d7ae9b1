#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cumuldyn/csv.hpp"
#include "cumuldyn/report.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path root = fs::temp_directory_path() / "cumuldyn_cli_test";

int run(const std::string& args) {
    const std::string cmd = std::string(CUMULDYN_CLI) + " " + args + " >/dev/null 2>" + (root / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << text;
}

std::string dir(const std::string& name) { return (root / name).string(); }

cumuldyn::csv::Table table(const std::string& path) { return cumuldyn::csv::read_file(path); }

double cell(const cumuldyn::csv::Table& t, std::size_t row, const std::string& col) {
    return std::stod(t.rows.at(row).fields.at(*t.column(col)));
}

struct Setup {
    Setup() {
        fs::remove_all(root);
        fs::create_directories(root);
    }
};
const Setup setup;

}  // namespace

TEST_CASE("simulate writes files and is deterministic") {
    CHECK(run("simulate --q 0.002 --m1 3 --n 5000 --seed 7 --out " + dir("sim_a")) == 0);
    CHECK(run("simulate --q 0.002 --m1 3 --n 5000 --seed 7 --out " + dir("sim_b")) == 0);
    for (const char* f : {"nodes.csv", "edges.csv", "metadata.json"}) {
        CHECK(fs::exists(root / "sim_a" / f));
        CHECK(slurp(root / "sim_a" / f) == slurp(root / "sim_b" / f));
    }
    CHECK(table(dir("sim_a/nodes.csv")).rows.size() == 5000);
}

TEST_CASE("usage errors") {
    CHECK(run("simulate --q 0 --m1 3 --n 10 --seed 1 --out " + dir("bad")) == 2);
    CHECK(slurp(root / "stderr.txt").find("q must be positive") != std::string::npos);
    CHECK(run("simulate --q -1 --m1 3 --n 10 --seed 1 --out " + dir("bad")) == 2);
    CHECK(run("simulate --q 0.1 --n 10 --seed 1 --out " + dir("bad")) == 2);
    CHECK(run("") == 2);
    CHECK(run("nonsense") == 2);
    CHECK(run("simulate --help") == 0);
}

TEST_CASE("io errors") {
    CHECK(run("fit --series " + dir("missing/series.csv") + " --out " + dir("fit_missing")) == 3);
    write(root / "blocker", "x");
    CHECK(run("simulate --q 0.1 --m1 3 --n 10 --seed 1 --out " + dir("blocker/sub")) == 3);
}

TEST_CASE("measure, fit and gof pipeline") {
    REQUIRE(run("simulate --q 0.002 --m1 3 --n 3000 --seed 3 --out " + dir("pipe_sim")) == 0);
    const std::string corpus = "--nodes " + dir("pipe_sim/nodes.csv") + " --edges " + dir("pipe_sim/edges.csv");
    REQUIRE(run("measure " + corpus + " --prefix SIM --out " + dir("pipe_m")) == 0);
    const auto series = table(dir("pipe_m/series.csv"));
    CHECK(series.header == std::vector<std::string>{"n", "id", "ipl", "mipl", "ed"});
    CHECK(series.rows.size() == 30);
    CHECK(series.rows.front().fields[0] == "100");

    REQUIRE(run("measure " + corpus + " --prefix SIM --out " + dir("pipe_m2")) == 0);
    CHECK(slurp(root / "pipe_m/path_lengths.csv") == slurp(root / "pipe_m2/path_lengths.csv"));
    CHECK(slurp(root / "pipe_m/metadata.json") == slurp(root / "pipe_m2/metadata.json"));

    REQUIRE(run("fit --series " + dir("pipe_m/series.csv") + " --out " + dir("pipe_f")) == 0);
    const auto rates = table(dir("pipe_f/rates.csv"));
    REQUIRE(rates.rows.size() == 1);
    CHECK(cell(rates, 0, "q_prime_a") > 0.0);
    CHECK(cell(rates, 0, "v") == doctest::Approx(2 * cell(rates, 0, "p")));

    REQUIRE(run("gof --backlinks " + dir("pipe_m/backlinks.csv") + " --path-lengths " +
                dir("pipe_m/path_lengths.csv") + " --series " + dir("pipe_m/series.csv") + " --out " + dir("pipe_g")) == 0);
    const auto summary = table(dir("pipe_g/gof_summary.csv"));
    bool saw = false;
    for (std::size_t i = 0; i < summary.rows.size(); ++i) {
        if (summary.rows[i].fields[2] == "geometric" && summary.rows[i].fields[1] == "3000") {
            CHECK(cell(summary, i, "correlation") >= 0.99);
            saw = true;
        }
    }
    CHECK(saw);

    CHECK(run("measure " + corpus + " --prefix NOPE --out " + dir("pipe_none")) == 2);
    CHECK(run("measure " + corpus + " --prefix SIM --stride 100 --dist-stride 150 --out " + dir("pipe_x")) == 2);
}

TEST_CASE("chain fixture") {
    std::string nodes = "node_id,year,classes\n";
    std::string edges = "citing_id,cited_id\n";
    for (int i = 0; i < 400; ++i) {
        nodes += "c" + std::to_string(1000 + i) + ",2000,K\n";
        if (i) edges += "c" + std::to_string(1000 + i) + ",c" + std::to_string(999 + i) + "\n";
    }
    write(root / "chain/nodes.csv", nodes);
    write(root / "chain/edges.csv", edges);
    REQUIRE(run("measure --nodes " + dir("chain/nodes.csv") + " --edges " + dir("chain/edges.csv") +
                " --prefix K --stride 20 --out " + dir("chain_m")) == 0);
    REQUIRE(run("fit --series " + dir("chain_m/series.csv") + " --out " + dir("chain_f")) == 0);
    const auto fits = table(dir("chain_f/fits.csv"));
    CHECK(fits.rows[1].fields[0] == "ipl");
    CHECK(cell(fits, 1, "slope") == doctest::Approx(0.5));
}

TEST_CASE("gof fixtures") {
    // Histogram drawn exactly from the geometric model at n = 1000.
    const double p = 1.0 / (0.001 * 1000 + 2.0);
    std::string text = "n,m,count\n";
    for (int m = 0; m < 30; ++m) {
        text += "1000," + std::to_string(m) + "," +
                std::to_string(static_cast<long>(std::llround(1e8 * std::pow(1 - p, m) * p))) + "\n";
    }
    write(root / "gof_fix/backlinks.csv", text);
    REQUIRE(run("gof --backlinks " + dir("gof_fix/backlinks.csv") + " --q 0.001 --m1 2 --out " + dir("gof_fix_out")) ==
            0);
    const auto summary = table(dir("gof_fix_out/gof_summary.csv"));
    CHECK(summary.rows[0].fields[2] == "geometric");
    CHECK(cell(summary, 0, "correlation") == doctest::Approx(1.0).epsilon(1e-6));

    write(root / "gof_empty/backlinks.csv", "n,m,count\n");
    CHECK(run("gof --backlinks " + dir("gof_empty/backlinks.csv") + " --q 0.001 --m1 2 --out " + dir("gof_e")) == 2);
    write(root / "gof_zero/backlinks.csv", "n,m,count\n10,0,0\n");
    CHECK(run("gof --backlinks " + dir("gof_zero/backlinks.csv") + " --q 0.001 --m1 2 --out " + dir("gof_z")) == 2);
    CHECK(run("gof --backlinks " + dir("gof_fix/backlinks.csv") + " --out " + dir("gof_noparams")) == 2);
}

TEST_CASE("sweep") {
    std::mt19937_64 rng(8);
    std::string nodes = "node_id,year,classes\n";
    std::string edges = "citing_id,cited_id,origin\n";
    const double qs[] = {0.01, 0.03, 0.06};
    for (int t = 0; t < 3; ++t) {
        const std::string cls = "T" + std::to_string(t);
        const int count = 200 + 100 * t;
        for (int i = 0; i < count; ++i) {
            const std::string id = cls + "-" + std::to_string(10000 + i);
            nodes += id + "," + std::to_string(1990 + i / (20 + 10 * t)) + "," + cls + "\n";
            for (int j = 0; j < i; ++j) {
                if (std::uniform_real_distribution<double>(0, 1)(rng) < qs[t]) {
                    edges += id + "," + cls + "-" + std::to_string(10000 + j) + ",APP\n";
                }
            }
        }
    }
    write(root / "sweep/nodes.csv", nodes);
    write(root / "sweep/edges.csv", edges);
    write(root / "sweep/queries.csv", "group_name,prefix\nalpha,T0\nbeta,T1\ngamma,T2\n");
    write(root / "sweep/one.csv", "group_name,prefix\nalpha,T0\n");
    write(root / "sweep/config.txt", "stride=50\nthreads=2\n");
    const std::string corpus = "--nodes " + dir("sweep/nodes.csv") + " --edges " + dir("sweep/edges.csv");

    REQUIRE(run("sweep " + corpus + " --queries " + dir("sweep/queries.csv") + " --out " + dir("sweep_a")) == 0);
    const auto techs = table(dir("sweep_a/technologies.csv"));
    CHECK(techs.rows.size() == 3);
    CHECK(table(dir("sweep_a/cross_fits.csv")).rows.size() == 1);
    CHECK(table(dir("sweep_a/labels.csv")).rows.size() == 3);
    CHECK(cell(techs, 0, "rate") == doctest::Approx(20.0));

    setenv("CUMULDYN_THREADS", "1", 1);
    REQUIRE(run("sweep " + corpus + " --queries " + dir("sweep/queries.csv") + " --out " + dir("sweep_b")) == 0);
    unsetenv("CUMULDYN_THREADS");
    for (const char* f : {"technologies.csv", "cross_fits.csv", "power_law.csv", "labels.csv"}) {
        CHECK(slurp(root / "sweep_a" / f) == slurp(root / "sweep_b" / f));
    }

    REQUIRE(run("sweep " + corpus + " --queries " + dir("sweep/one.csv") + " --out " + dir("sweep_one")) == 0);
    CHECK(table(dir("sweep_one/technologies.csv")).rows.size() == 1);
    CHECK(table(dir("sweep_one/cross_fits.csv")).rows.empty());
    CHECK(slurp(root / "sweep_one/metadata.json").find("cross-technology fits skipped") != std::string::npos);

    REQUIRE(run("sweep " + corpus + " --queries " + dir("sweep/queries.csv") + " --config " +
                dir("sweep/config.txt") + " --stride 100 --out " + dir("sweep_cfg")) == 0);
    const std::string meta = slurp(root / "sweep_cfg/metadata.json");
    CHECK(meta.find("\"stride\": \"100\"") != std::string::npos);
}

TEST_CASE("config file supplies flags") {
    write(root / "cfg/sim.txt", "q=0.002\nm1=3\nn=200\nseed=4\n");
    REQUIRE(run("simulate --config " + dir("cfg/sim.txt") + " --out " + dir("cfg_a")) == 0);
    REQUIRE(run("simulate --q 0.002 --m1 3 --n 200 --seed 4 --out " + dir("cfg_b")) == 0);
    CHECK(slurp(root / "cfg_a/edges.csv") == slurp(root / "cfg_b/edges.csv"));
    REQUIRE(run("simulate --config " + dir("cfg/sim.txt") + " --seed 5 --out " + dir("cfg_c")) == 0);
    CHECK(slurp(root / "cfg_c/metadata.json").find("\"seed\": \"5\"") != std::string::npos);
}

TEST_CASE("thread count resolution") {
    CHECK(cumuldyn::cli::sweep_threads(3) == 3);
    setenv("CUMULDYN_THREADS", "2", 1);
    CHECK(cumuldyn::cli::sweep_threads(std::nullopt) == 2);
    setenv("CUMULDYN_THREADS", "zero", 1);
    CHECK(cumuldyn::cli::sweep_threads(std::nullopt) >= 1);
    unsetenv("CUMULDYN_THREADS");
}
