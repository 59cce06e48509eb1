#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "support.hpp"
#include "x0p/cli.hpp"

using namespace x0p;
using namespace testing;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run_binary(const std::string& args) {
    std::string cmd = std::string(X0P_BIN) + " " + args + " 2>/dev/null";
    Run r;
    FILE* f = popen(cmd.c_str(), "r");
    REQUIRE(f);
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, n);
    int st = pclose(f);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

const CheckResult* find_check(const RunReport& r, const std::string& name) {
    for (auto& c : r.checks)
        if (c.name == name) return &c;
    return nullptr;
}

}  // namespace

TEST_CASE("report status aggregation") {
    RunReport r;
    CHECK(r.overall() == Status::Pass);
    r.add("a", true);
    r.add("b", Status::Inconclusive);
    CHECK(r.overall() == Status::Inconclusive);
    CHECK(r.exit_code() == 1);
    r.add("c", false, "broken");
    CHECK(r.overall() == Status::Fail);
    r.add("d", true);
    CHECK(r.overall() == Status::Fail);
    auto j = r.to_json(false);
    CHECK(j["status"] == "fail");
    CHECK_FALSE(j.contains("seconds"));
    CHECK(r.to_json(true).contains("seconds"));
    CHECK(j["checks"].size() == 4);
    CHECK(j["artifact_version"] == kArtifactVersion);
    CHECK(j["schema_version"] == kSchemaVersion);
    CHECK(r.to_text().find("[fail] c: broken") != std::string::npos);
}

TEST_CASE("verify 137 matches the golden report") {
    std::ifstream in(std::string(X0P_TEST_DATA) + "/../golden/verify_137.json");
    REQUIRE(in);
    auto golden = json::parse(in);
    auto r = cmd_verify(137);
    CHECK(r.to_json(false) == golden);
    CHECK(r.exit_code() == 0);
    // deterministic apart from timing
    CHECK(cmd_verify(137, RunOptions{3}).to_json(false) == golden);
}

TEST_CASE("verify reports the 197 second patch as failing the linear factor screen") {
    auto r = cmd_verify(197);
    CHECK(r.overall() == Status::Fail);
    for (auto& c : r.checks) {
        if (c.name == "patch 2 no linear factor")
            CHECK(c.status == Status::Fail);
        else
            CHECK_MESSAGE(c.status == Status::Pass, c.name);
    }
    REQUIRE(find_check(r, "coverage"));
}

TEST_CASE("verify of an unknown level") {
    try {
        cmd_verify(9999);
        FAIL("unknown level accepted");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NotFound);
    }
}

TEST_CASE("genus tables") {
    auto r = cmd_genus(6, true);
    CHECK(r.overall() == Status::Pass);
    CHECK(r.checks.size() == 14);
    CHECK(r.parameters["checked"] == true);
    CHECK(r.data["cutoff"] == 13300);

    auto r0 = cmd_genus(0, false);
    auto row = r0.data["prime"]["0"].get<std::vector<long>>();
    CHECK(row.size() == 15);
    CHECK(row.back() == 71);

    auto r7 = cmd_genus(7, true);
    CHECK(r7.parameters["checked"] == false);
    CHECK(r7.checks.empty());
    CHECK(r7.exit_code() == 0);
    CHECK(r7.data["prime"].contains("7"));
}

TEST_CASE("verify-all with a withheld fixture") {
    auto tmp = fs::temp_directory_path() / ("x0p_fx_" + std::to_string(rand_int(0, 1L << 40)));
    fs::create_directories(tmp);
    fs::copy_file(fixture_path(137), tmp / "137.json");
    RunOptions opt;
    opt.fixtures = tmp.string();
    auto r = cmd_verify_all(opt, {137, 173});
    fs::remove_all(tmp);
    CHECK(r.overall() == Status::Fail);
    REQUIRE(r.checks.size() == 2);
    CHECK(r.checks[0].status == Status::Pass);
    CHECK(r.checks[1].status == Status::Fail);
    CHECK(r.checks[1].detail == "missing fixture");
    CHECK(r.data["173"].is_null());
    CHECK(r.data["137"]["coverage"] == "pass");
}

TEST_CASE("verify-all over every level") {
    auto r = cmd_verify_all();
    REQUIRE(r.checks.size() == 16);
    int pass = 0;
    for (auto& c : r.checks) pass += c.status == Status::Pass;
    CHECK(pass == 15);
    CHECK(r.data["197"]["patch 2 no linear factor"] == "fail");
    for (auto& [lvl, row] : r.data.items()) CHECK(row["coverage"] == "pass");
}

TEST_CASE("points and disks commands") {
    auto fp = cmd_points_fp(137, 5);
    CHECK(fp.overall() == Status::Pass);
    CHECK(fp.data["count"] == 8);
    auto fp7 = cmd_points_fp(227, 7);
    CHECK(fp7.overall() == Status::Inconclusive);

    auto s = cmd_points_search(199, 5);
    CHECK(s.overall() == Status::Pass);
    CHECK(s.data["points"].size() == 8);

    auto cm = cmd_points_cm(137, -7);
    CHECK(cm.overall() == Status::Inconclusive);
    CHECK(cm.data["q_abs"].get<double>() == doctest::Approx(0.941133).epsilon(1e-5));

    auto d = cmd_disks(197, 23, {1});
    CHECK(d.overall() == Status::Fail);
    CHECK(d.data["uncovered"].size() == 1);
    auto d2 = cmd_disks(197, 23, {});
    CHECK(d2.overall() == Status::Pass);
    CHECK(d2.parameters["patches"] == json::array({1, 2}));

    RunOptions off;
    off.offline = true;
    auto pr = cmd_primes(137, 5, 13, {}, off);
    CHECK(pr.data["newform_data"] == "available");
    bool five = false;
    for (auto& row : pr.data["primes"])
        if (row["p"] == 5) {
            five = true;
            CHECK(row["covered"] == true);
            CHECK(row["hecke"] == "generates");
        }
    CHECK(five);
}

TEST_CASE("binary exit codes and output") {
    CHECK(run_binary("verify 137").code == 0);
    CHECK(run_binary("verify 197").code == 1);
    CHECK(run_binary("verify 9999").code == 2);
    CHECK(run_binary("verify").code == 2);
    CHECK(run_binary("frobnicate").code == 2);
    CHECK(run_binary("--help").code == 0);
    auto g = run_binary("--json genus --max 0");
    CHECK(g.code == 0);
    auto j = json::parse(g.out);
    CHECK(j["command"] == "genus");
    CHECK(j["data"]["prime"]["0"].size() == 15);
    CHECK(j.contains("seconds"));
    auto t = run_binary("genus --max 6 --check");
    CHECK(t.code == 0);
    CHECK(t.out.find("4 | 137 173 199 251 311") != std::string::npos);
    CHECK(run_binary("--json points cm --level 157 --disc -3").code == 1);
}
