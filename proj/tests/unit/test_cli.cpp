#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "corpus.hpp"

namespace {

struct Outcome {
    int code;
    std::string out;
};

Outcome run(const std::string& args) {
    const std::string cmd = std::string(PFG_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe);
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string corpus(const std::string& rel) { return testing::corpusDir() + "/" + rel; }
const std::string kModel = " --container-model " + testing::corpusDir() + "/stdlib/std.json";

std::string tempPath(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("pfg_cli_test_" + name)).string();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("check exits 0 on a sound, dominating analysis") {
    auto r = run("check " + corpus("paper/fig1.ir"));
    CHECK(r.code == 0);
    CHECK(r.out.find("recall: ok") != std::string::npos);
    CHECK(r.out.find("dominance: ok") != std::string::npos);
    CHECK(run("check " + corpus("paper/fig4.ir") + kModel + " --analysis kobj:2").code == 0);
}

TEST_CASE("check exits 3 when a shortcut is withheld") {
    auto r = run("check " + corpus("paper/fig1.ir") + " --drop-shortcut 0");
    CHECK(r.code == 3);
    CHECK(r.out.find("missing points-to") != std::string::npos);
}

TEST_CASE("input problems exit 1") {
    CHECK(run("analyze /nonexistent/file.ir").code == 1);
    CHECK(run("analyze " + corpus("paper/fig1.ir") + " --analysis bogus").code == 1);
    CHECK(run("analyze " + corpus("paper/fig1.ir") + " --patterns container").code == 1);
    CHECK(run("analyze " + corpus("paper/fig1.ir") + " --patterns nonsense").code == 1);
    CHECK(run("analyze " + corpus("paper/fig1.ir") + " --entry Main.nothing").code == 1);
    CHECK(run("analyze " + corpus("paper/fig4.ir") + " --container-model /nonexistent.json").code == 1);
    CHECK(run("frobnicate").code == 1);
    CHECK(run("").code == 1);
    const std::string bad = tempPath("bad.ir");
    {
        FILE* f = std::fopen(bad.c_str(), "w");
        std::fputs("class A { method m() { x = ; } }", f);
        std::fclose(f);
    }
    auto r = run("analyze " + bad);
    CHECK(r.code == 1);
    CHECK(r.out.find("1:") != std::string::npos);
    std::filesystem::remove(bad);
}

TEST_CASE("analyze writes report and DOT files") {
    const std::string report = tempPath("r.json"), dot = tempPath("g.dot");
    CHECK(run("analyze " + corpus("paper/fig5.ir") + " --report " + report + " --dot " + dot).code == 0);
    CHECK(testing::readFile(report).find("SHORTCUTLFLOW") != std::string::npos);
    CHECK(testing::readFile(dot).find("digraph pfg") == 0);
    std::filesystem::remove(report);
    std::filesystem::remove(dot);
}

TEST_CASE("patterns none equals ci byte for byte") {
    auto ci = run("analyze " + corpus("paper/fig4.ir") + kModel + " --analysis ci");
    auto none = run("analyze " + corpus("paper/fig4.ir") + kModel + " --patterns none");
    CHECK(ci.code == 0);
    CHECK(ci.out == none.out);
}

TEST_CASE("compare prints a table and optional CSV") {
    const std::string csv = tempPath("m.csv");
    auto r = run("compare " + corpus("paper/fig1_probe.ir") + " --analyses ci,csc,kcfa:1 --csv " + csv);
    CHECK(r.code == 0);
    CHECK(r.out.find("dominates ci") != std::string::npos);
    CHECK(testing::readFile(csv).find("csc,0,") != std::string::npos);
    std::filesystem::remove(csv);
}

TEST_CASE("interp and gen are deterministic") {
    auto a = run("interp " + corpus("paper/fig5.ir"));
    CHECK(a.code == 0);
    CHECK(a.out == run("interp " + corpus("paper/fig5.ir")).out);
    auto g = run("gen --seed 3 --containers 4 --wrappers 2 --local-flows 1");
    CHECK(g.code == 0);
    CHECK(g.out == run("gen --seed 3 --containers 4 --wrappers 2 --local-flows 1").out);
    CHECK(g.out.find("class Holder") != std::string::npos);
}

TEST_CASE("time budget marks the report") {
    const std::string prog = tempPath("big.ir");
    CHECK(run("gen --containers 60 --workers 60 -o " + prog).code == 0);
    auto r = run("analyze " + prog + kModel + " --analysis kobj:2 --time-budget 1");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"timedOut\": true") != std::string::npos);
    std::filesystem::remove(prog);
}

}  // TEST_SUITE
