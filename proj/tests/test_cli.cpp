#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using nlohmann::json;

namespace {

std::string cli() { return std::string(QMORSE_CLI_PATH); }

int run(const std::string& args) {
    std::string cmd = cli() + " " + args + " > qm_cli_stdout.txt 2> qm_cli_stderr.txt";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const std::string& path) { return json::parse(read_file(path)); }

struct TempFiles {
    std::vector<std::string> paths;
    std::string add(const std::string& p) {
        paths.push_back(p);
        return p;
    }
    ~TempFiles() {
        for (const auto& p : paths) std::remove(p.c_str());
    }
};

std::string spec_json(int dim, int k, const std::string& expr, double radius = 1.0) {
    json j;
    j["dim"] = dim;
    j["k"] = k;
    j["expr"] = expr;
    j["radius"] = radius;
    return j.dump();
}

}  // namespace

TEST_CASE("cli usage errors exit with code 2") {
    CHECK(run("") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("analyze qm_cli_missing_file.json") == 2);
    CHECK(run("--version") == 0);

    TempFiles tmp;
    write_file(tmp.add("qm_cli_bad.json"), "this is not json");
    CHECK(run("analyze qm_cli_bad.json") == 2);

    write_file(tmp.add("qm_cli_saddle.json"), spec_json(2, 3, "x1^2 - x2^2"));
    CHECK(run("analyze qm_cli_saddle.json --grid 7") == 2);
    CHECK(run("analyze qm_cli_saddle.json --epsilon 0") == 2);
    CHECK(run("analyze qm_cli_saddle.json --quadrature-max 8") == 2);
}

TEST_CASE("analyze writes a passing report for the saddle") {
    TempFiles tmp;
    write_file(tmp.add("qm_cli_saddle.json"), spec_json(2, 3, "x1^2 - x2^2"));
    tmp.add("qm_cli_saddle_report.json");

    CHECK(run("analyze qm_cli_saddle.json --grid 32 -o qm_cli_saddle_report.json") == 0);
    json rep = read_json("qm_cli_saddle_report.json");
    CHECK(rep["tool"] == "qmorse");
    CHECK(rep["tool_version"] == "0.1.0");
    CHECK(rep["verification"]["all_pass"] == true);
    CHECK(rep["certificates"].size() == 1);
    CHECK(rep["charts"].size() == 1);
    CHECK(rep["config"]["grid"] == 32);

    tmp.paths.push_back("qm_cli_stdout.txt");
    tmp.paths.push_back("qm_cli_stderr.txt");
}

TEST_CASE("analyze exits 1 when a verdict fails") {
    TempFiles tmp;
    write_file(tmp.add("qm_cli_x4.json"), spec_json(2, 4, "x1^4 + x2^2"));
    tmp.add("qm_cli_x4_report.json");

    CHECK(run("analyze qm_cli_x4.json --no-perturb -o qm_cli_x4_report.json") == 1);
    json rep = read_json("qm_cli_x4_report.json");
    CHECK(rep["verification"]["all_pass"] == false);
    std::string err = read_file("qm_cli_stderr.txt");
    CHECK(err.find("sigma_min") != std::string::npos);
}

TEST_CASE("sard emits the bound table and rejects bad scales") {
    TempFiles tmp;
    write_file(tmp.add("qm_cli_dw.json"), spec_json(2, 3, "(x1^2 - 0.25)^2 + x2^2"));
    tmp.add("qm_cli_sard.csv");

    CHECK(run("sard qm_cli_dw.json --lambdas 2.5,2.5 --epsilons 0.5,0.25 --delta 0.5 "
              "--grid 32 -o qm_cli_sard.csv") == 0);
    std::istringstream table(read_file("qm_cli_sard.csv"));
    std::string line;
    REQUIRE(std::getline(table, line));
    CHECK(line == "epsilon,empirical_upper,bound,ratio");
    int rows = 0;
    while (std::getline(table, line)) {
        if (line.empty()) continue;
        ++rows;
        double eps, emp, bound, ratio;
        char c;
        std::istringstream ls(line);
        ls >> eps >> c >> emp >> c >> bound >> c >> ratio;
        CHECK(bound > 0.0);
        CHECK(emp >= 0.0);
        CHECK(ratio >= 0.0);
        CHECK(emp <= bound * std::max(1.0, ratio) + 1e-9);
    }
    CHECK(rows == 2);

    CHECK(run("sard qm_cli_dw.json --lambdas 2.5 --epsilons 1.0 --delta 0.5 --grid 32") == 2);
    CHECK(run("sard qm_cli_dw.json --lambdas 2.5 --epsilons 0 --delta 0.5 --grid 32") == 2);
}

TEST_CASE("chart samples the saddle chart exactly") {
    TempFiles tmp;
    write_file(tmp.add("qm_cli_saddle.json"), spec_json(2, 3, "x1^2 - x2^2"));
    tmp.add("qm_cli_chart.json");
    tmp.add("qm_cli_chart.csv");

    CHECK(run("chart qm_cli_saddle.json --no-perturb --grid 32 --point 0.001,0.001 "
              "-o qm_cli_chart.json --csv qm_cli_chart.csv") == 0);

    json rec = read_json("qm_cli_chart.json");
    CHECK(rec["l"] == 1);
    CHECK(rec["morse_index"] == 1);
    CHECK(rec["residual_sup"] == 0.0);

    std::istringstream table(read_file("qm_cli_chart.csv"));
    std::string line;
    REQUIRE(std::getline(table, line));
    CHECK(line == "x1,x2,phi1,phi2,residual");
    int rows = 0;
    while (std::getline(table, line)) {
        if (line.empty()) continue;
        ++rows;
        CHECK(line.substr(line.rfind(',') + 1) == "0");
    }
    CHECK(rows == 1000);

    // without --csv, stdout carries exactly one JSON document
    CHECK(run("chart qm_cli_saddle.json --no-perturb --grid 32 --point 0.001,0.001") == 0);
    json only = json::parse(read_file("qm_cli_stdout.txt"));
    CHECK(only["l"] == 1);

    CHECK(run("chart qm_cli_saddle.json --no-perturb --grid 32 --point 0.5,0.5") == 1);
}

TEST_CASE("cover reports the interval covering number") {
    TempFiles tmp;
    std::ostringstream pts;
    for (int i = 0; i <= 100; ++i) pts << (i / 100.0) << "\n";
    write_file(tmp.add("qm_cli_interval.csv"), pts.str());
    tmp.add("qm_cli_cover.json");

    CHECK(run("cover qm_cli_interval.csv --epsilon 0.1 -o qm_cli_cover.json") == 0);
    json cov = read_json("qm_cli_cover.json");
    CHECK(cov["upper"] == 5);
    CHECK(cov["lower"] == 5);
    CHECK(cov["centers"].size() == 5);
}

TEST_CASE("verify accepts fresh reports and flags tampered ones") {
    TempFiles tmp;
    write_file(tmp.add("qm_cli_sum2.json"), spec_json(2, 3, "x1^2 + x2^2"));
    tmp.add("qm_cli_sum2_report.json");

    REQUIRE(run("analyze qm_cli_sum2.json --grid 32 -o qm_cli_sum2_report.json") == 0);
    CHECK(run("verify qm_cli_sum2_report.json") == 0);

    std::string rep = read_file("qm_cli_sum2_report.json");
    auto pos = rep.find("\"all_pass\": true");
    REQUIRE(pos != std::string::npos);
    rep.replace(pos, 16, "\"all_pass\": false");
    write_file(tmp.add("qm_cli_tampered.json"), rep);
    CHECK(run("verify qm_cli_tampered.json") == 1);

    CHECK(run("verify qm_cli_sum2.json") == 2);
}

TEST_CASE("repeated analyses differ only in timings") {
    TempFiles tmp;
    write_file(tmp.add("qm_cli_sum2.json"), spec_json(2, 3, "x1^2 + x2^2"));
    tmp.add("qm_cli_rep1.json");
    tmp.add("qm_cli_rep2.json");

    REQUIRE(run("analyze qm_cli_sum2.json -o qm_cli_rep1.json") == 0);
    REQUIRE(run("analyze qm_cli_sum2.json -o qm_cli_rep2.json") == 0);

    json a = read_json("qm_cli_rep1.json");
    json b = read_json("qm_cli_rep2.json");
    a.erase("timings_ms");
    b.erase("timings_ms");
    CHECK(a.dump() == b.dump());
}
