#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "jaguar/cli.hpp"
#include "jaguar/data_io.hpp"
#include "jaguar/json_io.hpp"

using namespace jaguar;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "jaguar");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

// A fresh scratch directory per test case.
struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("jaguar_cli_" + name)) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    std::string path(const std::string& leaf) const { return (dir / leaf).string(); }
    std::string write(const std::string& leaf, const std::string& text) const {
        std::ofstream(dir / leaf) << text;
        return path(leaf);
    }
};

}  // namespace

TEST_CASE("width on the four-cycle with classic statistics") {
    Scratch s("width");
    const auto q = s.write("q.cq", "Q(X,Y,Z,W) :- R(X,Y), S(Y,Z), T(Z,W), U(W,X).\n");
    const Result r = run({"width", "--query", q, "--classic"});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["subw"].get<double>() == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(j["selector"].is_array());
    CHECK(j["certificate"].is_object());
    CHECK(j["certificate"][""].get<double>() == 0.0);
}

TEST_CASE("width without statistics source is a usage error") {
    Scratch s("width_usage");
    const auto q = s.write("q.cq", "Q(X,Y) :- R(X,Y).\n");
    CHECK(run({"width", "--query", q}).code == 1);
}

TEST_CASE("eval agrees with oracle on a generated square") {
    Scratch s("eval");
    REQUIRE(run({"gen", "square", "--m", "8", "--out", s.path("data")}).code == 0);
    CHECK(fs::exists(s.path("data/query.cq")));
    const auto q = s.path("data/query.cq");
    const Result e = run({"eval", "--query", q, "--data", s.path("data"), "--trace", s.path("t.json")});
    const Result o = run({"oracle", "--query", q, "--data", s.path("data")});
    REQUIRE(e.code == 0);
    REQUIRE(o.code == 0);
    CHECK(e.out == o.out);
    CHECK(e.out.rfind("X\tY\tZ\tW\n", 0) == 0);
    // 2 (m/2)^2 − 1 answers plus the header.
    CHECK(std::count(e.out.begin(), e.out.end(), '\n') == 2 * 16 - 1 + 1);

    std::ifstream in(s.path("t.json"));
    const Json t = Json::parse(in);
    REQUIRE(t["nodes"].is_array());
    const Json& root = t["nodes"][0];
    CHECK(root["parent"].is_null());
    CHECK(root["edge"] == "root");
    for (const char* key : {"id", "parent", "edge", "light_index", "c", "X", "Y", "W", "theta", "I_size", "join_out",
                            "terminal_td"}) {
        CHECK(root.contains(key));
    }

    const Result out_file = run({"eval", "--query", q, "--data", s.path("data"), "--output", s.path("a.tsv")});
    CHECK(out_file.code == 0);
    CHECK(read_text_file(s.path("a.tsv")) == o.out);
}

TEST_CASE("eval with statistics and epsilon") {
    Scratch s("eval_stats");
    REQUIRE(run({"gen", "square", "--m", "6", "--out", s.path("data")}).code == 0);
    const auto q = s.path("data/query.cq");
    const auto st = s.write("s.txt", "# degree bounds\ndeg(R; X,Y|) <= 5\ndeg(S; Z|Y) <= 3\n");
    const Result a = run({"eval", "--query", q, "--data", s.path("data"), "--stats", st, "--epsilon", "0.3"});
    const Result o = run({"oracle", "--query", q, "--data", s.path("data")});
    REQUIRE(a.code == 0);
    CHECK(a.out == o.out);
    const auto bad = s.write("bad.txt", "deg(S; Z|Y) <= 1\n");
    const Result v = run({"eval", "--query", q, "--data", s.path("data"), "--stats", bad});
    CHECK(v.code == 2);
    CHECK(v.err.find("S") != std::string::npos);
    CHECK(run({"eval", "--query", q, "--data", s.path("data"), "--epsilon", "0"}).code == 1);
}

TEST_CASE("missing relation is an input error naming it") {
    Scratch s("missing");
    REQUIRE(run({"gen", "square", "--m", "4", "--out", s.path("data")}).code == 0);
    fs::remove(s.path("data/T.tsv"));
    const Result r = run({"eval", "--query", s.path("data/query.cq"), "--data", s.path("data")});
    CHECK(r.code == 2);
    CHECK(r.err.find("'T'") != std::string::npos);
}

TEST_CASE("parse errors and usage errors") {
    Scratch s("errors");
    const auto bad = s.write("bad.cq", "Q(X) :- R(X,Y)\n");
    const Result p = run({"oracle", "--query", bad, "--data", s.dir.string()});
    CHECK(p.code == 2);
    CHECK_FALSE(p.err.empty());
    CHECK(run({}).code == 1);
    CHECK(run({"eval"}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"gen", "square", "--m", "5", "--out", s.path("x")}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("dump-tds prints the family") {
    Scratch s("dump");
    const auto q = s.write("q.cq", "Q(X,Y,Z,W) :- R(X,Y), S(Y,Z), T(Z,W), U(W,X).\n");
    const Result r = run({"width", "--query", q, "--dump-tds"});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["tds"].size() == 3);
    const Result e = run({"eval", "--query", q, "--dump-tds"});
    CHECK(e.code == 0);
    CHECK(e.out == r.out);
}

TEST_CASE("gen random writes the requested tables") {
    Scratch s("random");
    const auto spec = s.write(
        "spec.json", R"({"domain": 5, "relations": [{"name": "R", "vars": ["X", "Y"], "size": 7}]})");
    REQUIRE(run({"gen", "random", "--seed", "3", "--spec", spec, "--out", s.path("a")}).code == 0);
    REQUIRE(run({"gen", "random", "--seed", "3", "--spec", spec, "--out", s.path("b")}).code == 0);
    CHECK(read_text_file(s.path("a/R.tsv")) == read_text_file(s.path("b/R.tsv")));
    CHECK(read_tsv(s.path("a/R.tsv")).rows.size() == 7);
}

TEST_CASE("bench prints one csv row per size") {
    const Result r = run({"bench", "--m-min", "8", "--m-max", "32", "--csv"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "m,N,epsilon,join_work_tuples,heavy_edges_max,light_run_max,wall_ms");
    int rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 3);
    CHECK(run({"bench", "--m-min", "8", "--m-max", "16", "--csv", "--baseline"}).code == 0);
}
