#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

using Json = nlohmann::json;

namespace {

struct Run {
    int code;
    std::string text;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out;
    int code = pnp::cli::run(args, out);
    return {code, out.str()};
}

Json result(const Run& r) { return Json::parse(r.text).at("result"); }

} // namespace

TEST_SUITE("cli") {

TEST_CASE("factor prints the cache line format") {
    auto r = run({"factor", "2400"});
    CHECK(r.code == 0);
    CHECK(r.text == "2400=2^5*3*5^2\n");
    auto j = Json::parse(run({"factor", "2400", "--json"}).text);
    CHECK(j["result"]["complete"] == true);
    CHECK(j["version"] == PNPAIR_VERSION);
    CHECK(j["config"]["seed"] == 1);
    CHECK(j["factor_cache_digest"].is_string());
}

TEST_CASE("exhausted budget exits with 3") {
    // (2^61-1)(2^89-1), far beyond ten rho iterations
    auto r = run({"--budget", "10", "factor", "1427247692705959880439315947500961989719490561", "--json"});
    CHECK(r.code == 3);
    CHECK(result(r)["complete"] == false);
}

TEST_CASE("input errors exit with 4 and a JSON error") {
    for (auto args : {std::vector<std::string>{"condition", "--p", "4", "--m", "7"},
                      std::vector<std::string>{"classify", "--p", "7", "--m", "9..7"},
                      std::vector<std::string>{"nonsense"}, std::vector<std::string>{"tables", "--which", "3"},
                      std::vector<std::string>{"settle", "--p", "7", "--m", "3", "--strategy", "greedy"}}) {
        auto r = run(args);
        CAPTURE(args[0]);
        CHECK(r.code == 4);
        auto j = Json::parse(r.text);
        CHECK(j["error"]["kind"].is_string());
        CHECK(j["error"]["message"].is_string());
    }
}

TEST_CASE("help exits with 0") {
    auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.text.find("classify") != std::string::npos);
}

TEST_CASE("tables report matches for the first table") {
    auto r = run({"tables", "--which", "1"});
    CHECK(r.code == 0);
    auto t = result(r)["tables"][0];
    CHECK(t["rows"] == 4);
    CHECK(t["matched"] == 4);
}

TEST_CASE("thresholds reproduce the anchors") {
    auto r = run({"thresholds"});
    CHECK(r.code == 0);
    auto v = result(r)["values"];
    CHECK(v["m6"] == 1155);
    CHECK(v["m5"] == 319219);
    CHECK(v["case1_m"] == 436);
    CHECK(v["opener_q49"] == 35);
    CHECK(run({"thresholds", "--id", "nope"}).code == 4);
}

TEST_CASE("classify lists the unresolved pairs") {
    auto r = run({"classify", "--p", "7", "--k", "1", "--m", "7..12"});
    CHECK(r.code == 0);
    auto s = result(r)["summary"];
    CHECK(s["pairs"] == 6);
    CHECK(s["unresolved"] == Json::array({"(7,7)", "(7,8)", "(7,9)", "(7,10)", "(7,12)"}));
}

TEST_CASE("condition and plan reports") {
    auto c = result(run({"condition", "--p", "7", "--m", "14", "--form", "square", "--c", "24"}));
    CHECK(c["condition"]["verdict"] == "fails");
    auto c5 = result(run({"condition", "--p", "7", "--k", "5", "--m", "7", "--form", "square", "--c", "8"}));
    CHECK(c5["condition"]["verdict"] == "passes");
    auto p = result(run({"plan", "--p", "7", "--m", "7"}));
    CHECK(p["passing"] == false);
    CHECK(p["search"]["atoms"] == 7);
    auto row = result(run({"plan", "--p", "7", "--k", "2", "--m", "7", "--divisors", "29", "2", "1", "1"}));
    CHECK(row["plan"]["lambda"] == "0.591458675085391");
    CHECK(row["condition"]["verdict"] == "passes");
}

TEST_CASE("reports are byte-identical across runs") {
    for (auto args : {std::vector<std::string>{"tables", "--which", "1"},
                      std::vector<std::string>{"settle", "--p", "7", "--m", "3", "--samples", "3", "--seed", "4"},
                      std::vector<std::string>{"charsum", "--p", "3", "--m", "4", "--kind", "hybrid", "--samples", "5"},
                      std::vector<std::string>{"classify", "--p", "7", "--m", "20..24", "--workers", "3"}}) {
        CAPTURE(args[0]);
        CHECK(run(args).text == run(args).text);
    }
}

TEST_CASE("settle report layout") {
    auto r = run({"settle", "--p", "3", "--m", "4", "--samples", "4", "--seed", "2"});
    CHECK(r.code == 0);
    auto j = result(r);
    CHECK(j["samples"] == 4);
    CHECK(j["cells_per_function"] == 2);
    CHECK(j["config"].is_null());
    CHECK(Json::parse(r.text)["config"]["seed"] == 2);
    for (auto& f : j["functions"]) {
        CHECK(f["numerator"].size() == 2);
        CHECK(f["denominator"].size() == 2);
        CHECK(f["cells"].size() == 2);
    }
}

TEST_CASE("charsum writes CSV") {
    auto r = run({"charsum", "--p", "3", "--m", "4", "--kind", "weil", "--samples", "6"});
    CHECK(r.code == 0);
    std::istringstream in(r.text);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 3 + 6);
    CHECK(lines[0].rfind("# pnpair ", 0) == 0);
    CHECK(lines[2] == "kind,tuple,abs_sum,bound,hypothesis,result");
    CHECK(lines[3].rfind("weil,", 0) == 0);
}

TEST_CASE("--out writes the report to a file") {
    const std::string path = "unit_cli_out.json";
    auto r = run({"--out", path, "thresholds", "--id", "m6"});
    CHECK(r.code == 0);
    CHECK(r.text.empty());
    std::ifstream in(path);
    Json j = Json::parse(in);
    CHECK(j["result"]["values"]["m6"] == 1155);
    std::remove(path.c_str());
}

TEST_CASE("an explicit cache file is used and digested") {
    const std::string path = "unit_cli_cache.txt";
    {
        std::ofstream f(path);
        f << "2400=2^5*3*5^2\n";
    }
    auto j = Json::parse(run({"--cache", path, "factor", "2400", "--json"}).text);
    CHECK(j["config"]["cache_path"] == path);
    auto other = Json::parse(run({"factor", "2400", "--json"}).text);
    CHECK(j["factor_cache_digest"] != other["factor_cache_digest"]);
    std::remove(path.c_str());
    CHECK(run({"--cache", "missing_cache_file.txt", "factor", "10"}).code == 4);
}

}
