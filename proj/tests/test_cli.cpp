#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <string>

#ifndef OCURVE_CLI
#error "OCURVE_CLI must point at the ocurve-lab binary"
#endif
#ifndef OCURVE_DATA
#error "OCURVE_DATA must point at the test data directory"
#endif

namespace {

struct RunResult {
    int exitCode = -1;
    std::string output;  // stdout + stderr interleaved
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(OCURVE_CLI) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf{};
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), got);
    int status = pclose(pipe);
    r.exitCode = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string data(const char* name) { return std::string(OCURVE_DATA) + "/" + name; }

}  // namespace

TEST_CASE("analyze on a passing system exits 0 with the full report") {
    auto r = run("analyze " + data("e1.ham"));
    CHECK(r.exitCode == 0);
    CHECK(r.output.find("hypothesis.H1 = pass") != std::string::npos);
    CHECK(r.output.find("hypothesis.H4 = pass") != std::string::npos);
    CHECK(r.output.find("resonance.k = 1,2") != std::string::npos);
    CHECK(r.output.find("rays.plus.c = 4.7123889803846897") != std::string::npos);
}

TEST_CASE("hypothesis failure exits 2 with the diagnostic") {
    auto r = run("check " + data("omega-bad.ham"));
    CHECK(r.exitCode == 2);
    CHECK(r.output.find("OrderTooLow") != std::string::npos);
}

TEST_CASE("operational errors exit 1") {
    CHECK(run("analyze /nonexistent/file.ham").exitCode == 1);
    CHECK(run("rays").exitCode == 1);  // missing required argument
}

TEST_CASE("reports are byte-identical across runs") {
    std::string cmd = "reduce " + data("e2.ham") + " --format json";
    auto a = run(cmd);
    auto b = run(cmd);
    CHECK(a.exitCode == 0);
    CHECK(a.output == b.output);
    CHECK(a.output.find("\"reduced.gamma\"") != std::string::npos);
}

TEST_CASE("csv output carries the trajectory header") {
    auto r = run("ocurve " + data("e1.ham") + " --format csv");
    CHECK(r.exitCode == 0);
    CHECK(r.output.rfind("t,x1,x2,x3,x4,H,J1,psi1\n", 0) == 0);
}

TEST_CASE("verify exits 0 on both rays of E2") {
    CHECK(run("verify " + data("e2.ham") + " --ray plus").exitCode == 0);
    CHECK(run("verify " + data("e2.ham") + " --ray minus").exitCode == 0);
}
