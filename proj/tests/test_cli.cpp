#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "agodd/cli.hpp"
#include "json.hpp"

#include "fixtures.hpp"

using fixtures::corpus_path;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = agodd::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

// Scoped override of an environment variable; nullptr unsets it.
struct EnvGuard {
    std::string name;
    bool had;
    std::string old;
    EnvGuard(std::string n, const char* value) : name(std::move(n)) {
        const char* cur = std::getenv(name.c_str());
        had = cur != nullptr;
        if (had) old = cur;
        if (value)
            ::setenv(name.c_str(), value, 1);
        else
            ::unsetenv(name.c_str());
    }
    ~EnvGuard() {
        if (had)
            ::setenv(name.c_str(), old.c_str(), 1);
        else
            ::unsetenv(name.c_str());
    }
};

std::string write_temp(const std::string& stem, const std::string& text) {
    auto path = std::filesystem::temp_directory_path() / stem;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    REQUIRE(out.good());
    out << text;
    out.close();
    return path.string();
}

size_t count_lines_with(const std::string& text, const std::string& prefix) {
    size_t n = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind(prefix, 0) == 0) ++n;
    return n;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("check validates models and their scenarios") {
    SUBCASE("a minimal model passes") {
        auto r = run({"check", corpus_path("empty.agodd")});
        CHECK(r.code == 0);
        CHECK(r.out == "ok: " + corpus_path("empty.agodd") + "\n");
        CHECK(r.err.empty());
    }
    SUBCASE("a model with matching scenarios passes") {
        auto r = run({"check", corpus_path("cultivation_iter1.agodd"),
                      corpus_path("cultivation_iter1.agsc")});
        CHECK(r.code == 0);
        CHECK(contains(r.out, "ok: "));
    }
    SUBCASE("an unreadable file exits with a read error") {
        auto r = run({"check", corpus_path("no_such_file.agodd")});
        CHECK(r.code == 3);
        CHECK(contains(r.err, "cannot read"));
    }
    SUBCASE("a scenario file is not a model") {
        auto r = run({"check", corpus_path("fig5_iter1.agsc")});
        CHECK(r.code == 3);
        CHECK(contains(r.err, "fig5_iter1.agsc"));
    }
    SUBCASE("validation errors gate the exit code") {
        std::string path = write_temp("agodd_cli_dup.agodd",
                                      "odd \"dup\" {\n"
                                      "  dimension slope unit % range [0, 10]\n"
                                      "  dimension slope unit % range [0, 10]\n"
                                      "}\n");
        auto r = run({"check", path});
        CHECK(r.code == 3);
        CHECK(contains(r.err, "[duplicate-dimension]"));
    }
    SUBCASE("scenario names must be unique across the given files") {
        auto r = run({"check", corpus_path("cultivation_iter1.agodd"),
                      corpus_path("cultivation_iter1.agsc"),
                      corpus_path("cultivation_iter1.agsc")});
        CHECK(r.code == 3);
        CHECK(contains(r.err, "duplicate-scenario"));
    }
}

TEST_CASE("verify maps verdicts onto exit codes") {
    SUBCASE("boundary violations exit 1") {
        auto r = run({"verify", corpus_path("cultivation_iter1.agodd"),
                      corpus_path("cultivation_iter1.agsc")});
        CHECK(r.code == 1);
        CHECK(contains(r.out, "iteration 1: needs_odd_revision"));
        CHECK(contains(r.out, "violation: scenario \"french field\""));
    }
    SUBCASE("full coverage without violations exits 0") {
        auto r = run({"verify", corpus_path("fig5.agodd"),
                      corpus_path("fig5_iter4.agsc")});
        CHECK(r.code == 0);
        CHECK(contains(r.out, "verified"));
    }
    SUBCASE("a clean but sparse scenario set exits 2") {
        std::string path = write_temp("agodd_cli_east.agsc",
                                      "scenario \"east strip\" {\n"
                                      "  layer 1: bind \"scenery\"/\"Work "
                                      "area\"/\"Easting\" in [10, 30] m\n"
                                      "}\n");
        auto r = run({"verify", corpus_path("fig5.agodd"), path});
        CHECK(r.code == 2);
        CHECK(contains(r.out, "needs_scenarios"));

        auto relaxed = run({"verify", corpus_path("fig5.agodd"), path,
                            "--threshold", "0.2"});
        CHECK(relaxed.code == 0);
        CHECK(contains(relaxed.out, "verified"));
    }
    SUBCASE("the reported iteration number is configurable") {
        auto r = run({"verify", corpus_path("fig5.agodd"),
                      corpus_path("fig5_iter4.agsc"), "--iteration", "4"});
        CHECK(contains(r.out, "iteration 4: verified"));
    }
    SUBCASE("json reports parse and repeat byte for byte") {
        std::vector<std::string> args = {"verify", corpus_path("fig5.agodd"),
                                         corpus_path("fig5_iter1.agsc"),
                                         "--json"};
        auto a = run(args);
        auto b = run(args);
        CHECK(a.code == 1);
        CHECK(a.out == b.out);
        auto j = nlohmann::json::parse(a.out);
        CHECK(j["schema"] == "agodd-report/1");
        CHECK(j["verdict"] == "needs_odd_revision");
    }
}

TEST_CASE("coverage reports ratios, per-dimension shares and gaps") {
    SUBCASE("a full tiling covers everything") {
        auto r = run({"coverage", corpus_path("fig5.agodd"),
                      corpus_path("fig5_iter4.agsc")});
        CHECK(r.code == 0);
        CHECK(contains(r.out, "coverage: 1 (grid 100)"));
        CHECK(count_lines_with(r.out, "gap: ") == 0);
    }
    SUBCASE("partial coverage exits 2 and lists gaps") {
        auto r = run({"coverage", corpus_path("fig5.agodd"),
                      corpus_path("fig5_iter1.agsc")});
        CHECK(r.code == 2);
        CHECK(contains(r.out, "coverage: 0.375 (grid 100)"));
        CHECK(count_lines_with(r.out, "gap: ") > 0);
    }
    SUBCASE("json coverage carries the same numbers") {
        auto r = run({"coverage", corpus_path("fig5.agodd"),
                      corpus_path("fig5_iter1.agsc"), "--json"});
        CHECK(r.code == 2);
        auto j = nlohmann::json::parse(r.out);
        CHECK(j["schema"] == "agodd-coverage/1");
        CHECK(j["coverage"]["overall"] == 0.375);
        CHECK(j["coverage"]["grid"] == 100);
        CHECK(j["coverage"]["per_dimension"]["x"] == 0.875);
        CHECK(j["coverage"]["per_dimension"]["y"] == 1.0);
        CHECK(j["gaps"].is_array());
        CHECK(!j["gaps"].empty());
    }
    SUBCASE("the grid comes from the environment unless a flag overrides it") {
        EnvGuard env("AGODD_GRID", "10");
        auto from_env = run({"coverage", corpus_path("fig5.agodd"),
                             corpus_path("fig5_iter1.agsc")});
        CHECK(contains(from_env.out, "(grid 10)"));
        auto from_flag = run({"coverage", corpus_path("fig5.agodd"),
                              corpus_path("fig5_iter1.agsc"), "--grid", "4"});
        CHECK(contains(from_flag.out, "(grid 4)"));
    }
    SUBCASE("a malformed grid environment value is a usage error") {
        for (const char* bad : {"abc", "0", "-3", "10x"}) {
            EnvGuard env("AGODD_GRID", bad);
            auto r = run({"coverage", corpus_path("fig5.agodd"),
                          corpus_path("fig5_iter1.agsc")});
            CHECK(r.code == 4);
            CHECK(contains(r.err, "AGODD_GRID"));
        }
    }
    SUBCASE("a non-positive grid flag is a usage error") {
        auto r = run({"coverage", corpus_path("fig5.agodd"),
                      corpus_path("fig5_iter1.agsc"), "--grid", "0"});
        CHECK(r.code == 4);
        CHECK(contains(r.err, "--grid"));
    }
}

TEST_CASE("diff lists attribute tree edits between revisions") {
    SUBCASE("identical files show no differences") {
        auto r = run({"diff", corpus_path("cultivation_iter1.agodd"),
                      corpus_path("cultivation_iter1.agodd")});
        CHECK(r.code == 0);
        CHECK(r.out == "(no differences)\n");
    }
    SUBCASE("the second revision adds five attributes") {
        auto r = run({"diff", corpus_path("cultivation_iter1.agodd"),
                      corpus_path("cultivation_iter2.agodd")});
        CHECK(r.code == 0);
        CHECK(count_lines_with(r.out, "added: ") == 5);
        CHECK(count_lines_with(r.out, "removed: ") == 0);
        CHECK(contains(r.out,
                       "added: scenery/Fields in Europe/Slope ≤ 10 % (iter 2)"));
        CHECK(contains(r.out,
                       "added: dynamic_objects/Ego-vehicle/Traktor X (iter 2)"));
    }
    SUBCASE("the third revision adds four more") {
        auto r = run({"diff", corpus_path("cultivation_iter2.agodd"),
                      corpus_path("cultivation_iter3.agodd")});
        CHECK(r.code == 0);
        CHECK(count_lines_with(r.out, "added: ") == 4);
        CHECK(contains(
            r.out, "added: scenery/Fields in Europe/Fields in GER (iter 3)"));
        CHECK(contains(r.out, "added: dynamic_objects/Cultivation "
                              "implement/Width ≤ 50 m/Implement Y (iter 3)"));
    }
}

TEST_CASE("simulate runs an event script against the processes") {
    SUBCASE("the harvesting chain cuts the crop and hands it on") {
        std::vector<std::string> args = {
            "simulate", corpus_path("wheat.agodd"), corpus_path("wheat.agev"),
            "--state", "crop_height=50"};
        auto r = run(args);
        CHECK(r.code == 0);
        CHECK(contains(r.out, "state: crop_height = 50 cm\n"));
        CHECK(contains(r.out, "event: interaction C1"));
        CHECK(contains(r.out, "  fired: \"24/7 autonomous harvesting\""));
        CHECK(contains(r.out, "crop_height = 25 cm"));
        CHECK(contains(r.out, "event: interaction C2"));
        CHECK(contains(r.out, "  fired: \"24/7 cultivation\""));
        CHECK(contains(r.out, "SA2"));
        CHECK(!contains(r.out, "24/7 crop transport"));
        auto again = run(args);
        CHECK(again.out == r.out);
    }
    SUBCASE("measured and elapsed events update the state between firings") {
        std::string path = write_temp("agodd_cli_tick.agev",
                                      "elapsed 30 min\n"
                                      "measured grain_moisture 16 %\n");
        auto r = run({"simulate", corpus_path("wheat.agodd"), path});
        CHECK(r.code == 0);
        CHECK(contains(r.out, "state: (empty)\n"));
        CHECK(contains(r.out, "event: elapsed 30 min"));
        CHECK(contains(r.out, "elapsed(min) = 30"));
        CHECK(contains(r.out, "event: measured grain_moisture 16 %"));
        CHECK(contains(r.out, "grain_moisture = 16 %"));
        CHECK(count_lines_with(r.out, "  fired: ") == 0);
    }
    SUBCASE("label dimensions can seed the initial state") {
        auto r = run({"simulate", corpus_path("wheat.agodd"),
                      corpus_path("wheat.agev"), "--state", "crop_type=barley"});
        CHECK(r.code == 0);
        CHECK(contains(r.out, "crop_type = \"barley\""));
    }
    SUBCASE("state arguments are checked before the run") {
        auto base = std::vector<std::string>{
            "simulate", corpus_path("wheat.agodd"), corpus_path("wheat.agev"),
            "--state"};
        auto no_eq = base;
        no_eq.push_back("crop_height");
        CHECK(run(no_eq).code == 4);
        auto empty_dim = base;
        empty_dim.push_back("=5");
        CHECK(run(empty_dim).code == 4);
        auto unknown = base;
        unknown.push_back("ghost=5");
        auto r = run(unknown);
        CHECK(r.code == 3);
        CHECK(contains(r.err, "[unknown-dimension]"));
        auto not_number = base;
        not_number.push_back("crop_height=tall");
        auto n = run(not_number);
        CHECK(n.code == 3);
        CHECK(contains(n.err, "not a number"));
    }
    SUBCASE("a missing event script is a read error") {
        auto r = run({"simulate", corpus_path("wheat.agodd"),
                      corpus_path("no_such.agev")});
        CHECK(r.code == 3);
    }
}

TEST_CASE("table renders rows from the deepest refinement back to the root") {
    SUBCASE("the cultivation model") {
        auto r = run({"table", corpus_path("cultivation.agodd")});
        CHECK(r.code == 0);
        CHECK(contains(r.out, "ODD \"cultivation\""));
        CHECK(contains(r.out, "framing requirement: "));
        CHECK(contains(r.out, "framing capability: "));
        CHECK(contains(r.out, "framing hara: "));
        CHECK(contains(r.out, "\"Fields in GER\" (∪) iter 3 <- "
                              "\"Fields in Europe\" (∩) iter 1"));
        CHECK(contains(r.out, "\"Implement Y\" (∩) iter 3 <- \"Width ≤ 50 m\" "
                              "(∪) {implement_width <= 50 m} iter 2"));
        CHECK(contains(r.out, "<- dynamic_objects (∩)\n"));
        CHECK(contains(r.out,
                       "process \"24/7 autonomous cultivation (depth limit 15 "
                       "cm)\": start SA1 -> interaction(C1) -> end EA1"));
    }
    SUBCASE("an all-absent process renders as a dash row") {
        auto r = run({"table", corpus_path("wheat.agodd")});
        CHECK(r.code == 0);
        CHECK(contains(r.out, "process \"24/7 crop transport\": ---"));
        CHECK(contains(r.out, "process \"24/7 cultivation\": start SA2 -> "
                              "interaction(C2, C2.1) -> end EA2"));
    }
}

TEST_CASE("usage errors and help") {
    CHECK(run({}).code == 4);
    CHECK(run({"frobnicate"}).code == 4);
    CHECK(run({"check"}).code == 4);
    CHECK(run({"verify", corpus_path("fig5.agodd")}).code == 4);
    CHECK(run({"diff", corpus_path("fig5.agodd")}).code == 4);
    auto help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(contains(help.out, "check"));
    CHECK(contains(help.out, "simulate"));
    CHECK(contains(help.out, "table"));
}
