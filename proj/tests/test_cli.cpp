#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cstdio>
#include <string>

#include "doctest.h"
#include "json.hpp"

using nlohmann::ordered_json;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(SCHURCLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

// determinism modulo the timings block
std::string stripped(const std::string& out) {
    auto j = ordered_json::parse(out);
    j.erase("timings");
    return j.dump();
}

}  // namespace

TEST_CASE("orbits command reproduces the census") {
    auto r = run_cli("orbits --q 3 --jordan 2:0");
    CHECK(r.exit_code == 0);
    auto j = ordered_json::parse(r.out);
    CHECK(j["report"]["X"] == 27);
    CHECK(j["report"]["orbits"] == 9);
    CHECK(j["report"]["X0"] == 9);
    CHECK(j["report"]["orbits_meeting_X0"] == 3);
    auto r2 = run_cli("orbits --q 3 --jordan 1:0,1:1");
    CHECK(ordered_json::parse(r2.out)["report"]["orbits_meeting_X0"] == 9);
}

TEST_CASE("weil table") {
    auto r = run_cli("weil-table --q 3");
    CHECK(r.exit_code == 0);
    auto j = ordered_json::parse(r.out);
    CHECK(j["report"]["gamma_1"] == "i");
    auto r5 = run_cli("weil-table --q 5");
    CHECK(ordered_json::parse(r5.out)["report"]["gamma_1"] == "1");
}

TEST_CASE("check-conjecture exits 0 on separable inputs") {
    auto r = run_cli("check-conjecture --q 5 --jordan 2:0");
    CHECK(r.exit_code == 0);
    auto j = ordered_json::parse(r.out);
    CHECK(j["report"]["rho_count"] == 25);
    CHECK(j["report"]["trivial_count"] == 25);
    auto r2 = run_cli("check-conjecture --q 5 --charpoly t^2+2");
    CHECK(r2.exit_code == 0);
    auto r3 = run_cli("check-conjecture --q 3 --jordan 2:0 --rho diagonal");
    CHECK(r3.exit_code == 0);
    CHECK(ordered_json::parse(r3.out)["report"]["rho_count"] == 3);
}

TEST_CASE("config errors exit 64") {
    CHECK(run_cli("check-conjecture --q 3 --jordan 1:1,1:1").exit_code == 64);  // duplicate
    CHECK(run_cli("check-conjecture --q 4 --jordan 2:0").exit_code == 64);      // char 2
    CHECK(run_cli("check-conjecture --q 6 --jordan 2:0").exit_code == 64);      // not a power
    CHECK(run_cli("oracle-compare --q 2 --jordan 2:0").exit_code == 64);
    CHECK(run_cli("orbits --q 3").exit_code == 64);  // no beta given
    CHECK(run_cli("bogus-subcommand").exit_code == 64);
}

TEST_CASE("oracle-compare masters the identity") {
    auto r = run_cli("oracle-compare --q 3 --jordan 2:0 --ring both");
    CHECK(r.exit_code == 0);
    auto j = ordered_json::parse(r.out);
    REQUIRE(j["report"].size() == 2);
    for (auto& rep : j["report"]) {
        CHECK(rep["matches_algebraic_class"] == true);
        CHECK(rep["rho_count"] == 9);
        CHECK(rep["matches"] == 9);
    }
    auto rp = run_cli("oracle-compare --q 3 --charpoly t^2+1 --ring padic");
    CHECK(rp.exit_code == 0);
}

TEST_CASE("witness command") {
    auto r = run_cli("witness --q 5 --jordan 2:0 --rho 0,1");
    CHECK(r.exit_code == 0);
    auto j = ordered_json::parse(r.out);
    CHECK(j["report"]["kind"] == "split_closed_form");
    CHECK(j["report"]["M"] == 5);
    CHECK(j["report"]["verified"] == true);
    CHECK(j["report"]["delta"].size() == 20);  // |F[J_2]^x| = q(q-1)
    auto rq = run_cli("witness --q 5 --charpoly t^2-2");
    CHECK(rq.exit_code == 0);
    auto jq = ordered_json::parse(rq.out);
    CHECK(jq["report"]["kind"] == "quadratic_closed_form");
    CHECK(jq["report"]["verified"] == true);
    auto rs = run_cli("witness --q 3 --jordan 2:0 --rho 1,2");
    CHECK(rs.exit_code == 0);  // p = n + 1 is too small for exp coords: solver path
    CHECK(ordered_json::parse(rs.out)["report"]["kind"] == "solver");
    CHECK(ordered_json::parse(rs.out)["report"]["verified"] == true);
}

TEST_CASE("reports are deterministic modulo timings") {
    auto a = run_cli("check-conjecture --q 3 --jordan 2:0 --witnesses --seed 7");
    auto b = run_cli("check-conjecture --q 3 --jordan 2:0 --witnesses --seed 7");
    CHECK(stripped(a.out) == stripped(b.out));
    // thread count must not change the payload
    auto c = run_cli("check-conjecture --q 3 --jordan 2:0 --witnesses --seed 7 --threads 1");
    auto d = run_cli("check-conjecture --q 3 --jordan 2:0 --witnesses --seed 7 --threads 2");
    auto cj = ordered_json::parse(c.out);
    auto dj = ordered_json::parse(d.out);
    CHECK(cj["report"].dump() == dj["report"].dump());
    auto e = run_cli("oracle-compare --q 3 --jordan 2:0 --seed 5");
    auto f = run_cli("oracle-compare --q 3 --jordan 2:0 --seed 5");
    CHECK(stripped(e.out) == stripped(f.out));
}

TEST_CASE("pretty view renders the same data") {
    auto r = run_cli("orbits --q 3 --jordan 2:0 --pretty");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("orbits_meeting_X0: 3") != std::string::npos);
}

TEST_CASE("SCHUR_THREADS is honored") {
    std::string cmd = std::string("SCHUR_THREADS=1 ") + SCHURCLI_PATH +
                      " orbits --q 3 --jordan 2:0 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    pclose(pipe);
    auto j = ordered_json::parse(out);
    CHECK(j["config"]["threads"] == 1);
}

TEST_CASE("matrix file input") {
    std::string path = "/tmp/schur_cli_beta.txt";
    FILE* f = fopen(path.c_str(), "w");
    REQUIRE(f != nullptr);
    fputs("2\n0 1\n0 0\n", f);  // J_2(0)
    fclose(f);
    auto r = run_cli("orbits --q 3 --matrix-file " + path);
    CHECK(r.exit_code == 0);
    CHECK(ordered_json::parse(r.out)["report"]["orbits_meeting_X0"] == 3);
    // a non-regular matrix is rejected
    f = fopen(path.c_str(), "w");
    fputs("2\n1 0\n0 1\n", f);
    fclose(f);
    CHECK(run_cli("orbits --q 3 --matrix-file " + path).exit_code != 0);
}
