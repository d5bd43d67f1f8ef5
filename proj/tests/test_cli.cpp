#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "json.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(MLCALC_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        r.out.append(buf.data(), got);
    int status = pclose(pipe);
    r.exit_code = WEXITSTATUS(status);
    return r;
}

} // namespace

TEST_CASE("ml-eval grid and exit codes") {
    RunResult ok = run_cli("ml-eval --beta 1 --zmin -2 --zmax 2 --count 5");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("z,e_beta,e_beta_beta,m_wright") == 0);
    // beta = 1 rows carry exp values
    CHECK(ok.out.find("7.3890560989306") != std::string::npos); // e^2

    RunResult empty = run_cli("ml-eval --count 0");
    CHECK(empty.exit_code == 0);
    CHECK(empty.out == "z,e_beta,e_beta_beta,m_wright\n");

    RunResult bad = run_cli("ml-eval --beta 0.5 --zmin -60 --zmax -55 --count 2");
    CHECK(bad.exit_code == 2);
}

TEST_CASE("verify report schema, determinism and exit codes") {
    std::string args = "verify --suite appell --deterministic --seed 7";
    RunResult a = run_cli(args);
    CHECK(a.exit_code == 0);
    RunResult b = run_cli(args);
    CHECK(a.out == b.out); // byte identical under --deterministic

    nlohmann::json r = nlohmann::json::parse(a.out);
    CHECK(r["failures"] == 0);
    CHECK(!r.contains("timestamp"));
    for (const auto& s : r["suites"])
        for (const auto& c : s["checks"]) {
            CHECK(c.contains("name"));
            CHECK(c.contains("ref"));
            CHECK(c.contains("status"));
            CHECK(c.contains("lhs"));
            CHECK(c.contains("rhs"));
            CHECK(c.contains("tol"));
        }

    RunResult ts = run_cli("verify --suite appell --seed 7");
    nlohmann::json rt = nlohmann::json::parse(ts.out);
    CHECK(rt.contains("timestamp"));
}

TEST_CASE("verify mc underpowered policy") {
    RunResult r = run_cli("verify --suite mc --samples 10 --deterministic");
    CHECK(r.exit_code == 0); // warning, not failure
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["warning"] == "UNDERPOWERED");
}

TEST_CASE("verify bounds suite never fails") {
    RunResult r = run_cli("verify --suite bounds --deterministic");
    CHECK(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    for (const auto& s : j["suites"])
        for (const auto& c : s["checks"]) CHECK(c["status"] == "reported");
}

TEST_CASE("symbol-grid ratio columns") {
    RunResult r = run_cli(
        R"(symbol-grid --op '{"kind":"identity","dim":2}' --grid 3 --beta 0.5)");
    CHECK(r.exit_code == 0);
    // identity: symbol column equals the Ihat column -> ratio 1 on every row
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line); // header
    CHECK(line.find("symbol_re") != std::string::npos);
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        // ratio_re is column 10 (0-based 9)
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        REQUIRE(cells.size() >= 11);
        double ratio_re = std::stod(cells[9]);
        CHECK(ratio_re == doctest::Approx(1.0).epsilon(1e-6));
    }
    CHECK(rows == 9);

    RunResult bad = run_cli(
        R"(symbol-grid --op '{"kind":"identity","dim":2}' --grid 2 --radius 9 --beta 0.5)");
    CHECK(bad.exit_code == 2); // outside the exponential domain
}

TEST_CASE("mehler table with baseline column") {
    setenv("MLCALC_DATA_DIR", MLCALC_DATA_PATH, 1);
    RunResult r = run_cli("mehler --beta 0.5 --t-list 0.5 --s-list 0.5 --xi 0.8,0.6");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("beta,t,s,pt_re,pt_im,defect,baseline_defect") == 0);
    CHECK(r.out.find("0.014366631620629") != std::string::npos);
}

TEST_CASE("sample export reproducibility") {
    RunResult a = run_cli("sample --samples 5 --dim 2 --seed 99");
    RunResult b = run_cli("sample --samples 5 --dim 2 --seed 99");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    RunResult c = run_cli("sample --samples 5 --dim 2 --seed 100");
    CHECK(a.out != c.out);
}
