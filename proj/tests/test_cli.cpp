// End-to-end tests of the torsionlab command line tool: documented examples,
// output schemas, exit codes, and reproducibility.  The binary path is
// injected by the build as TORSIONLAB_CLI_PATH.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

using nlohmann::json;

struct CliResult {
    int code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    const std::string cmd =
        env_prefix + std::string(TORSIONLAB_CLI_PATH) + " " + args + " 2>/dev/null";
    CliResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

json run_json(const std::string& args) {
    const CliResult r = run_cli(args);
    REQUIRE(r.code == 0);
    return json::parse(r.out);
}

} // namespace

TEST_CASE("alex emits normalized Alexander coefficients") {
    const json trefoil = run_json("alex --knot trefoil --reproducible");
    CHECK(trefoil["coefficients"] == json::array({1, -1, 1}));
    CHECK(trefoil["degree_span"] == 2);
    CHECK(trefoil["symmetry"]["palindromic"] == true);
    CHECK(trefoil["symmetry"]["check"] == "pass");

    const json fig8 =
        run_json("alex --braid \"strands=3; s1 s2^-1 s1 s2^-1\" --reproducible");
    CHECK(fig8["coefficients"] == json::array({1, -3, 1}));

    // The empty braid word closes to the unknot.
    const json unknot = run_json("alex --braid \"strands=2;\" --reproducible");
    CHECK(unknot["coefficients"] == json::array({1}));
    CHECK(unknot["degree_span"] == 0);

    const json pd = run_json(
        "alex --pd \"PD[X[4,1,5,2],X[2,5,3,6],X[6,3,1,4]]\" --reproducible");
    CHECK(pd["coefficients"] == json::array({1, -1, 1}));
}

TEST_CASE("alex csv embeds coefficients in the shared schema") {
    const CliResult r = run_cli("alex --knot trefoil --format csv");
    CHECK(r.code == 0);
    CHECK(r.out == "t,value,backend,normalization\n"
                   "0,1,alex,canonical\n"
                   "1,-1,alex,canonical\n"
                   "2,1,alex,canonical\n");
}

TEST_CASE("torsion csv rows and pinned values") {
    const CliResult trefoil =
        run_cli("torsion --knot trefoil --backend roots --t 2 --format csv");
    CHECK(trefoil.code == 0);
    CHECK(trefoil.out == "t,value,backend,normalization\n2,2,roots,canonical\n");

    // the torus input defaults to the quadrature backend
    const CliResult torus = run_cli("torsion --torus 1,0 --t 2 --format csv");
    CHECK(torus.code == 0);
    CHECK(torus.out == "t,value,backend,normalization\n2,1,quadrature,cellular\n");
}

TEST_CASE("torsion json reports the fitted monomial offset for both backends") {
    const json out =
        run_json("torsion --knot trefoil --backend both --t 2 --reproducible");
    REQUIRE(out.contains("monomial_offset"));
    CHECK(out["monomial_offset"] == 0);
    CHECK(out["monomial_offset_residual"].get<double>() < 1e-6);
    CHECK(out["normalization"]["roots"] == "canonical");
    CHECK(out["normalization"]["quadrature"] == "cellular");
    REQUIRE(out["rows"].size() == 2);
    for (const json& row : out["rows"]) {
        CHECK(row["converged"] == true);
        CHECK(row["value"].get<double>() == doctest::Approx(2.0).epsilon(1e-5));
    }
}

TEST_CASE("symmetry reports the fitted exponent and parity") {
    const json out = run_json("symmetry --knot trefoil --t 2,3,5 --reproducible");
    REQUIRE(out["reports"].size() == 1);
    const json& rep = out["reports"][0];
    CHECK(rep["backend"] == "roots");
    CHECK(rep["rounded_exponent"] == -1);
    CHECK(rep["integrality_residual"].get<double>() < 1e-9);
    CHECK(rep["parity"] == "odd");
    CHECK(rep["expected_parity"] == "odd");
    CHECK(rep["parity_matches"] == true);
    CHECK(rep["check"] == "PASS");
    CHECK(out["vacuous"] == false);
}

TEST_CASE("symmetry with a real scale skips the integrality check") {
    const json out =
        run_json("symmetry --knot trefoil --real-scale 0.5 --reproducible");
    const json& rep = out["reports"][0];
    CHECK(rep["fitted_exponent"].get<double>() == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(rep["integral_expected"] == false);
    CHECK(rep["integrality"] == "skipped (real class)");
    CHECK_FALSE(rep.contains("rounded_exponent"));
    CHECK(rep["check"] == "PASS");
}

TEST_CASE("symmetry csv lists local exponents") {
    const CliResult r =
        run_cli("symmetry --knot trefoil --t 2,3,5 --backend roots --format csv");
    CHECK(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "t,value,backend,normalization");
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        CHECK(line.find(",-1,roots,exponent") != std::string::npos);
    }
    CHECK(rows == 3);
}

TEST_CASE("verify runs the requested suite with a case budget") {
    const json out =
        run_json("verify --suite duality --cases 20 --seed 11 --reproducible");
    CHECK(out["pass"] == true);
    CHECK(out["seed"] == 11);
    REQUIRE(out["suites"].size() == 1);
    CHECK(out["suites"][0]["suite"] == "duality");
    CHECK(out["suites"][0]["cases"] == 20);
    CHECK(out["suites"][0]["passed"] == 20);
    CHECK(out["suites"][0]["failures"].empty());
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("alex").code == 2);
    CHECK(run_cli("torsion --knot trefoil --braid \"strands=2; s1\"").code == 2);
    CHECK(run_cli("alex --torus 1,0").code == 2);
    CHECK(run_cli("torsion --knot trefoil --backend fantasy").code == 2);
    CHECK(run_cli("torsion --knot trefoil --quad-nodes 100").code == 2);
    CHECK(run_cli("torsion --knot trefoil --t -1").code == 2);
    CHECK(run_cli("torsion --knot trefoil --t 0").code == 2);
    CHECK(run_cli("symmetry --knot trefoil --real-scale 0").code == 2);
    CHECK(run_cli("symmetry --knot trefoil --t 2,3").code == 2);
    CHECK(run_cli("symmetry --knot trefoil --t 1,1,1,2,3").code == 2);
    CHECK(run_cli("torsion --torus 1,0 --backend roots").code == 2);
    CHECK(run_cli("torsion --torus 0,0").code == 2);
    CHECK(run_cli("alex --knot nonexistent").code == 2);
    CHECK(run_cli("verify --suite bogus").code == 2);
    CHECK(run_cli("alex --braid \"strands=3; s1\"").code == 2); // link closure
}

TEST_CASE("parse errors exit with code 3") {
    CHECK(run_cli("alex --braid \"strands=2; s9\"").code == 3);
    CHECK(run_cli("alex --braid \"s1 s1 s1\"").code == 3);
    CHECK(run_cli("alex --pd \"PD[X[1,2,3]]\"").code == 3);
    CHECK(run_cli("torsion --knot trefoil --t 2,foo").code == 3);
    CHECK(run_cli("torsion --torus bogus").code == 3);
}

TEST_CASE("quadrature non-convergence exits with code 4 and flags the row") {
    const CliResult r = run_cli(
        "torsion --knot figure-eight --backend quadrature "
        "--t 2.6180339887498949 --quad-nodes 16 --tol 1e-300 --format csv");
    CHECK(r.code == 4);
    CHECK(r.out.find("nan,quadrature") != std::string::npos);
}

TEST_CASE("invariant violations exit with code 5") {
    CHECK(run_cli("alex --pd \"PD[X[1,4,3,2],X[3,2,1,4]]\"").code == 5);
}

TEST_CASE("reproducible runs are byte-identical") {
    const std::string args = "verify --suite fkdet --cases 8 --seed 5 --reproducible";
    const CliResult a = run_cli(args);
    const CliResult b = run_cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);

    const std::string targs =
        "torsion --knot figure-eight --backend both --t 0.5,2 --reproducible";
    CHECK(run_cli(targs).out == run_cli(targs).out);
}

TEST_CASE("the seed falls back to the TORSIONLAB_SEED environment variable") {
    const CliResult flagged =
        run_cli("verify --suite fkdet --cases 8 --seed 9 --reproducible");
    const CliResult env = run_cli("verify --suite fkdet --cases 8 --reproducible",
                                  "TORSIONLAB_SEED=9 ");
    CHECK(flagged.code == 0);
    CHECK(flagged.out == env.out);
}

TEST_CASE("reports can be written to a file") {
    const std::string path = "cli_test_output.json";
    std::remove(path.c_str());
    const CliResult r =
        run_cli("alex --knot figure-eight --reproducible -o " + path);
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    REQUIRE(in.good());
    json parsed;
    in >> parsed;
    CHECK(parsed["coefficients"] == json::array({1, -3, 1}));
    std::remove(path.c_str());
}

TEST_CASE("braid input can be read from a file") {
    const std::string path = "cli_test_braid.txt";
    {
        std::ofstream out(path);
        out << "strands=2; s1 s1 s1\n";
    }
    const json parsed = run_json("alex --braid @" + path + " --reproducible");
    CHECK(parsed["coefficients"] == json::array({1, -1, 1}));
    std::remove(path.c_str());
}
