#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli/cli.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = o2cli::dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("synth emits a family with the right c_q") {
    const auto r = run({"synth", "--g", "0"});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"source\":\"synthesized\"") != std::string::npos);
    const auto pos = r.out.find("\"c_q\":");
    REQUIRE(pos != std::string::npos);
    const double cq = std::stod(r.out.substr(pos + 6));
    CHECK(cq == doctest::Approx(kPi * kPi / 2.0).epsilon(1e-10));
    CHECK(r.out.find("\"validation\"") != std::string::npos);
    CHECK(r.out.find("\"verdict\":\"pass\"") != std::string::npos);
}

TEST_CASE("synth rejects the Dirac g with exit 1") {
    const auto r = run({"synth", "--g", "1.0"});
    CHECK(r.code == 1);
    CHECK(r.err.find("degenerate") != std::string::npos);
}

TEST_CASE("moment excess reports exit 1") {
    const auto r = run({"synth", "--g", "0.5,0.3"});
    CHECK(r.code == 1);
    CHECK(r.err.find("moment excess") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run({"synth", "--bogus-flag"}).code == 2);
    CHECK(run({"no-such-command"}).code == 2);
    CHECK(run({}).code == 2);
}

TEST_CASE("help exits 0") {
    const auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("synth") != std::string::npos);
}

TEST_CASE("example table matches the closed form") {
    const auto r = run({"example", "budd-symmetric", "--table", "0..3"});
    CHECK(r.code == 0);
    std::istringstream is(r.out);
    std::string line;
    std::getline(is, line);
    CHECK(line == "l,W,log_W,L_q");
    std::getline(is, line);  // l = 0: W = 1
    CHECK(line.substr(0, 4) == "0,1,");
    std::getline(is, line);  // l = 1: W = 3 pi / 5
    const auto c1 = line.find(',');
    const double w1 = std::stod(line.substr(c1 + 1));
    CHECK(w1 == doctest::Approx(3.0 * kPi / 5.0).epsilon(1e-12));
}

TEST_CASE("validate command verdict and exit code") {
    const auto good = run({"validate", "--g", "budd-symmetric", "--depth", "10", "--window",
                           "50"});
    CHECK(good.code == 0);
    CHECK(good.out.find("\"verdict\":\"pass\"") != std::string::npos);
}

TEST_CASE("asympt reports the regime and constant") {
    const auto r = run({"asympt", "--g", "0", "--x-grid", "100,1000"});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"regime\":\"drift_deficit\"") != std::string::npos);
    const auto pos = r.out.find("\"limit_constant\":");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(r.out.substr(pos + 17)) ==
          doctest::Approx(2.0 / (kPi * kPi)).epsilon(1e-12));

    const auto csv = run({"asympt", "--g", "0.0,0.5", "--format", "csv", "--x-grid", "10,100"});
    CHECK(csv.code == 0);
    CHECK(csv.out.rfind("x,L,L_tilde,ratio\n", 0) == 0);
}

TEST_CASE("walk output is deterministic in the seed and has the CSV shape") {
    const std::vector<std::string> args = {"walk",    "--g",       "budd-symmetric",
                                           "--n-walks", "2000",    "--horizon",
                                           "1000",    "--support-cut", "2048",
                                           "--seed",  "77"};
    const auto a = run(args);
    const auto b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);  // byte-identical
    CHECK(a.out.rfind("ladder_type,value,count,expected_probability,z_score\n", 0) == 0);
    CHECK(a.out.find("strict_descending_height,1,") != std::string::npos);
    CHECK(a.out.find("z_score") != std::string::npos);

    auto c = args;
    c.back() = "78";
    CHECK(run(c).out != a.out);
}

TEST_CASE("oracle command compares the two paths") {
    const auto r = run({"oracle", "--g", "0.1,0.2", "--kmax", "10", "--terms", "20000"});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"pass\":true") != std::string::npos);
}

TEST_CASE("oracle with the loop-equation check enabled") {
    const auto r = run({"oracle", "--g", "fully-packed", "--kmax", "5", "--terms", "20000",
                        "--enable-tutte"});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"enabled\":true") != std::string::npos);
    CHECK(r.out.find("\"calibration_residual\":") != std::string::npos);
}

TEST_CASE("g-file input") {
    const std::string path = "/tmp/o2_test_g.txt";
    {
        std::ofstream f(path);
        f << "0.0\n0.5\n";
    }
    const auto r = run({"asympt", "--g-file", path});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"regime\":\"boundary_summable\"") != std::string::npos);
}

TEST_CASE("--out writes the payload to a file") {
    const std::string path = "/tmp/o2_test_out.json";
    const auto r = run({"synth", "--g", "0", "--out", path});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::string content((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    CHECK(content.find("\"c_q\":") != std::string::npos);
}
