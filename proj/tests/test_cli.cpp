#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "squelp/config.hpp"

using namespace squelp;
namespace fs = std::filesystem;

namespace {

const std::string kConfigs = SQUELP_CONFIG_DIR;

// Runs the installed binary with the given arguments, output discarded.
int run_cli(const std::string& args) {
    const std::string cmd = std::string(SQUELP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    if (rc == -1 || !WIFEXITED(rc)) return -1;
    return WEXITSTATUS(rc);
}

fs::path scratch(const std::string& name) {
    fs::path p = fs::path("cli_scratch") / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "cannot open " << p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::size_t line_count(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

bool has_csv_row(const std::string& csv, const std::string& prefix) {
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);)
        if (line.rfind(prefix, 0) == 0) return true;
    return false;
}

// Writes a mutated copy of a shipped config and returns its path.
template <class Mutate>
fs::path derived_config(const fs::path& dir, const std::string& base, Mutate mutate) {
    RunConfig cfg = parse_config_file(kConfigs + "/" + base);
    mutate(cfg);
    const fs::path out = dir / ("derived_" + base);
    std::ofstream(out) << cfg.serialize();
    return out;
}

} // namespace

TEST_CASE("solve writes trace, solution, summary and provenance, and exits 0") {
    const fs::path dir = scratch("solve");
    const int rc =
        run_cli("solve --config " + kConfigs + "/headline_scalar.ini --out " + dir.string());
    CHECK(rc == 0);

    const std::string trace = slurp(dir / "trace.csv");
    CHECK(trace.rfind("iter,sup_dist,c1_dist,", 0) == 0);
    CHECK(line_count(trace) >= 3); // header plus at least two outer iterations

    const std::string summary = slurp(dir / "summary.txt");
    CHECK(summary.find("status=converged") != std::string::npos);
    CHECK(summary.find("residual_ok=true") != std::string::npos);
    CHECK(summary.find("mode=solve_scalar") != std::string::npos);

    CHECK(fs::exists(dir / "solution.csv"));

    // the provenance file is the canonical serialization and must reparse
    RunConfig back = parse_config_text(slurp(dir / "config.txt"));
    CHECK(back.grid.nx == 64);
    CHECK(back.out_dir == dir.string());
}

TEST_CASE("repeated runs produce byte-identical output files") {
    const fs::path a = scratch("det_a");
    const fs::path b = scratch("det_b");
    const std::string base = "solve --config " + kConfigs + "/headline_scalar.ini --out ";
    REQUIRE(run_cli(base + a.string()) == 0);
    REQUIRE(run_cli(base + b.string()) == 0);

    CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
    CHECK(slurp(a / "solution.csv") == slurp(b / "solution.csv"));
    CHECK(slurp(a / "summary.txt") == slurp(b / "summary.txt"));
}

TEST_CASE("config problems exit with code 2") {
    const fs::path dir = scratch("bad_configs");

    SUBCASE("missing file") {
        CHECK(run_cli("solve --config /nonexistent/nope.ini") == 2);
    }
    SUBCASE("unparseable text") {
        const fs::path bad = dir / "garbage.ini";
        std::ofstream(bad) << "this is not a config\n";
        CHECK(run_cli("solve --config " + bad.string()) == 2);
    }
    SUBCASE("validation failure") {
        const fs::path bad = derived_config(dir, "headline_scalar.ini",
                                            [](RunConfig& c) { c.op.p = 0.5; });
        CHECK(run_cli("solve --config " + bad.string()) == 2);
    }
}

TEST_CASE("an outer budget too small to converge exits with code 4") {
    const fs::path dir = scratch("starved");
    const fs::path cfg = derived_config(dir, "headline_scalar.ini",
                                        [](RunConfig& c) { c.solver.max_outer = 2; });
    CHECK(run_cli("solve --config " + cfg.string() + " --out " + (dir / "out").string()) == 4);
}

TEST_CASE("converge writes the refinement table") {
    const fs::path dir = scratch("converge");
    const fs::path cfg = derived_config(dir, "convergence_robin_p2.ini", [](RunConfig& c) {
        c.experiment.levels = {16, 32};
    });
    CHECK(run_cli("converge --config " + cfg.string() + " --out " + (dir / "out").string()) == 0);

    const std::string table = slurp(dir / "out" / "convergence.csv");
    CHECK(line_count(table) == 3); // header + one row per level
    CHECK(slurp(dir / "out" / "summary.txt").find("all_converged=true") != std::string::npos);
}

TEST_CASE("audit reports findings and always exits 0") {
    SUBCASE("clean scalar audit") {
        const fs::path dir = scratch("audit_ok");
        CHECK(run_cli("audit --config " + kConfigs + "/audit_headline.ini --out " + dir.string()) ==
              0);
        const std::string csv = slurp(dir / "audit.csv");
        CHECK(has_csv_row(csv, "distance_weight_summability,1"));
        CHECK(has_csv_row(csv, "growth_bound,1"));
        CHECK(slurp(dir / "summary.txt").find("all_ok=true") != std::string::npos);
    }
    SUBCASE("system audit with a broken exponent chain") {
        const fs::path dir = scratch("audit_chain");
        const fs::path cfg = derived_config(dir, "audit_system.ini", [](RunConfig& c) {
            c.reaction.chain.gamma1 = 0.6; // exceeds the declared gap beta1 - alpha1
        });
        CHECK(run_cli("audit --config " + cfg.string() + " --out " + (dir / "out").string()) == 0);
        const std::string csv = slurp(dir / "out" / "audit.csv");
        CHECK(has_csv_row(csv, "parameter_chain,0"));
        CHECK(slurp(dir / "out" / "summary.txt").find("all_ok=false") != std::string::npos);
    }
}

TEST_CASE("uniqueness run accepts a seed override") {
    const fs::path dir = scratch("unique_seed");
    const int rc = run_cli("unique --config " + kConfigs + "/uniqueness_p2.ini --seed 99 --out " +
                           dir.string());
    CHECK(rc == 0);
    const std::string summary = slurp(dir / "summary.txt");
    CHECK(summary.find("pass=true") != std::string::npos);
    CHECK(summary.find("asserted=true") != std::string::npos);
    // the override is recorded in the provenance copy
    CHECK(slurp(dir / "config.txt").find("seed = 99") != std::string::npos);
}

TEST_CASE("usage errors from the argument parser are nonzero and not solver codes") {
    CHECK(run_cli("solve") != 0);              // --config is required
    CHECK(run_cli("transmogrify --config x") != 0); // unknown subcommand
    CHECK(run_cli("") != 0);                   // a subcommand is required
}
