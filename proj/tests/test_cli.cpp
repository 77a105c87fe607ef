#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string cli_path() {
    const char* p = std::getenv("ORBITKIT_CLI");
    return p ? p : "./orbitkit";
}

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& args) {
    const std::string out_path = "cli_test_stdout.tmp";
    const int rc = std::system((cli_path() + " " + args + " > " + out_path + " 2>/dev/null").c_str());
    std::ifstream f(out_path);
    std::ostringstream buf;
    buf << f.rdbuf();
#ifdef WEXITSTATUS
    return {WEXITSTATUS(rc), buf.str()};
#else
    return {rc, buf.str()};
#endif
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream(path) << text;
}

} // namespace

TEST_CASE("norm verb prints 12 significant digits") {
    write_file("cli_x.json", R"({"dim":2,"re":[[3,0],[0,4]],"im":[[0,0],[0,0]]})");
    RunResult r = run("norm cli_x.json --spec schatten:2");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.output.find("5.00000000000") != std::string::npos);
}

TEST_CASE("verdict on identical profiles returns four true flags") {
    write_file("cli_p.json",
               R"({"eigenvalues":[{"re":1,"im":0,"mult":2},{"re":2,"im":0,"mult":1}],)"
               R"("kernel_dim":1,"essential_points":[],"tail_bound":0})");
    RunResult r = run("verdict cli_p.json cli_p.json");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.output.find("\"same_unitary_orbit\": true") != std::string::npos);
    REQUIRE(r.output.find("\"in_groupoid_orbit_closure\": true") != std::string::npos);
}

TEST_CASE("intertwine end to end meets the certified bound") {
    write_file("cli_a.json",
               R"({"eigenvalues":[{"re":1,"im":0,"mult":2},{"re":0.5,"im":0,"mult":1}],)"
               R"("kernel_dim":2,"essential_points":[],"tail_bound":0})");
    write_file("cli_b.json",
               R"({"eigenvalues":[{"re":1,"im":0,"mult":2},{"re":0.5,"im":0,"mult":1}],)"
               R"("kernel_dim":4,"essential_points":[],"tail_bound":0})");
    RunResult r = run("intertwine cli_a.json cli_b.json --eps 0.1 --dim 32");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.output.find("\"achieved_error\": 0.0") != std::string::npos);
    REQUIRE(r.output.find("\"certified_bound\": 0.2") != std::string::npos);
}

TEST_CASE("domain errors exit 2 with the code in the report") {
    write_file("cli_a.json",
               R"({"eigenvalues":[{"re":1,"im":0,"mult":1}],"kernel_dim":0,)"
               R"("essential_points":[],"tail_bound":0})");
    write_file("cli_c.json",
               R"({"eigenvalues":[{"re":7,"im":0,"mult":1}],"kernel_dim":0,)"
               R"("essential_points":[],"tail_bound":0})");
    RunResult r = run("intertwine cli_a.json cli_c.json --dim 4");
    REQUIRE(r.exit_code == 2);
    REQUIRE(r.output.find("NotInClosure") != std::string::npos);
}

TEST_CASE("missing or malformed input exits 1") {
    RunResult missing = run("norm does_not_exist.json");
    REQUIRE(missing.exit_code == 1);
    write_file("cli_bad.json", "{not json");
    RunResult bad = run("norm cli_bad.json");
    REQUIRE(bad.exit_code == 1);
}

TEST_CASE("reports are byte-identical across runs") {
    for (const std::string& cmd :
         {std::string("demo-isclosed --dim 8"), std::string("demo-shift --n 3 --dim 8"),
          std::string("demo-nonseparable --dim 16 --m 8 --spec ") +
              "ratio:1,0.5,0.333333333333,0.25,0.2,0.166666666667,0.142857142857,0.125,"
              "0.111111111111,0.1,0.0909090909091,0.0833333333333,0.0769230769231,"
              "0.0714285714286,0.0666666666667,0.0625"}) {
        RunResult r1 = run(cmd);
        RunResult r2 = run(cmd);
        REQUIRE(r1.exit_code == 0);
        REQUIRE(r1.output == r2.output);
        REQUIRE_FALSE(r1.output.empty());
    }
}

TEST_CASE("csv output format emits plain rows") {
    RunResult r = run("demo-isclosed --dim 6 --format csv");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.output.find('{') == std::string::npos);
    int lines = 0;
    for (char c : r.output)
        if (c == '\n') ++lines;
    REQUIRE(lines == 5); // n = 1..5
}

TEST_CASE("matrix csv input round trips") {
    write_file("cli_m.csv", "2,0,0,0\n0,0,3,0\n");
    RunResult r = run("norm cli_m.csv --spec op");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.output.find("3.00000000000") != std::string::npos);
}
