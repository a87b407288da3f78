#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "torsionlab/verify.hpp"

#include <random>

using namespace torsionlab;

TEST_CASE("random acyclic complexes are acyclic and well formed") {
    std::mt19937_64 rng(2026);
    for (int iter = 0; iter < 8; ++iter) {
        const bool laurent = iter % 2 == 0;
        const BasedChainComplex c =
            random_acyclic_complex(rng, 3, 3, laurent, 4, laurent ? 1.3 : 1.0);
        const std::vector<int> betti = l2_betti_generic(c);
        for (int b : betti) CHECK(b == 0);
        const TorsionValue tv = torsion(c);
        CHECK(tv.acyclic);
        CHECK(tv.value > 0.0);
    }
}

TEST_CASE("random generators are deterministic per seed") {
    std::mt19937_64 a(7), b(7);
    const LaurentMatrix ma = random_laurent_matrix(a, 3, 2, 3);
    const LaurentMatrix mb = random_laurent_matrix(b, 3, 2, 3);
    REQUIRE(ma.rows() == mb.rows());
    for (int r = 0; r < ma.rows(); ++r)
        for (int c = 0; c < ma.cols(); ++c)
            CHECK((ma.at(r, c) - mb.at(r, c)).is_zero());
}

TEST_CASE("determinant identity suite") {
    const SuiteResult res = run_fkdet_suite(17, 6);
    INFO((res.failures.empty() ? std::string() : res.failures.front()));
    CHECK(res.ok());
    CHECK(res.cases == 4 * 6);
}

TEST_CASE("duality suite") {
    const SuiteResult res = run_duality_suite(18, 10, 4);
    INFO((res.failures.empty() ? std::string() : res.failures.front()));
    CHECK(res.ok());
    CHECK(res.cases == 14);
}

TEST_CASE("torus suite") {
    const SuiteResult res = run_torus_suite();
    INFO((res.failures.empty() ? std::string() : res.failures.front()));
    CHECK(res.ok());
}

TEST_CASE("euler suite") {
    const SuiteResult res = run_euler_suite(19, 4);
    INFO((res.failures.empty() ? std::string() : res.failures.front()));
    CHECK(res.ok());
}

TEST_CASE("symmetry suite") {
    const SuiteResult res = run_symmetry_suite(20, 3);
    INFO((res.failures.empty() ? std::string() : res.failures.front()));
    CHECK(res.ok());
}

TEST_CASE("suites are reproducible for a fixed seed") {
    const SuiteResult a = run_fkdet_suite(99, 4);
    const SuiteResult b = run_fkdet_suite(99, 4);
    CHECK(a.cases == b.cases);
    CHECK(a.passed == b.passed);
    CHECK(a.failures == b.failures);
}

TEST_CASE("run_all_suites covers every family") {
    const std::vector<SuiteResult> all = run_all_suites(4);
    REQUIRE(all.size() == 5);
    for (const SuiteResult& r : all) {
        INFO(r.suite, ": ", (r.failures.empty() ? std::string() : r.failures.front()));
        CHECK(r.ok());
    }
}
