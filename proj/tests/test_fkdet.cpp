#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "torsionlab/errors.hpp"
#include "torsionlab/fkdet.hpp"

#include <cmath>
#include <random>

using namespace torsionlab;

namespace {

LaurentPoly P(std::initializer_list<std::pair<int, Complex>> terms) {
    return LaurentPoly::from_terms(terms);
}

LaurentMatrix single(const LaurentPoly& p) {
    LaurentMatrix m(1, 1);
    m.at(0, 0) = p;
    return m;
}

} // namespace

TEST_CASE("mahler measure of integer polynomials") {
    // M(z - 1) = 1, M(2z - 1) = 2, M(z^2 - z + 1) = 1 (roots on the unit circle)
    CHECK(mahler_jensen(P({{1, 1.0}, {0, -1.0}})) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mahler_jensen(P({{1, 2.0}, {0, -1.0}})) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(mahler_jensen(P({{2, 1.0}, {1, -1.0}, {0, 1.0}})) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // (2z - 1)(z - 2) = 2z^2 - 5z + 2, measure 2 * 2 = 4
    CHECK(mahler_jensen(P({{2, 2.0}, {1, -5.0}, {0, 2.0}})) ==
          doctest::Approx(4.0).epsilon(1e-12));
    // monomial shifts do not matter
    CHECK(mahler_jensen(P({{-3, 2.0}, {-4, -1.0}})) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(mahler_jensen(LaurentPoly::zero()), std::invalid_argument);
}

TEST_CASE("polynomial roots") {
    const auto roots = poly_roots(P({{2, 1.0}, {0, -1.0}}));
    REQUIRE(roots.size() == 2);
    double lo = std::min(std::abs(roots[0] + 1.0), std::abs(roots[0] - 1.0));
    CHECK(lo < 1e-10);
    CHECK(std::abs(roots[0] + roots[1]) < 1e-10);
}

TEST_CASE("generic rank probes") {
    LaurentMatrix m(2, 2);
    m.at(0, 0) = P({{1, 1.0}, {0, -1.0}});
    CHECK(generic_rank(m) == 1);
    CHECK(generic_rank(LaurentMatrix(2, 3)) == 0);

    LaurentMatrix col(2, 1);
    col.at(0, 0) = P({{0, 1.0}, {1, -2.0}});
    col.at(1, 0) = col.at(0, 0);
    CHECK(generic_rank(col) == 1);

    LaurentMatrix full(2, 2);
    full.at(0, 0) = P({{0, 1.0}});
    full.at(1, 1) = P({{1, 1.0}, {0, 3.0}});
    CHECK(generic_rank(full) == 2);
}

TEST_CASE("quadrature settings validation") {
    QuadratureSettings s;
    CHECK_NOTHROW(s.validate());
    s.node_count = 100;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.node_count = 8;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = QuadratureSettings{};
    s.refinement_limit = 1;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = QuadratureSettings{};
    s.target_tolerance = 0.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("determinant values pinned against hand computations") {
    QuadratureSettings s;

    // scalar entries evaluate to |det|, exactly (single-node path)
    const FkResult c = fk_det(single(P({{0, {-3.0, 4.0}}})), s);
    CHECK(c.value == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(c.rank_profile == 1);
    CHECK(c.det_class);

    // 1x1 polynomial: Mahler measure of 2z - 1 is 2
    const FkResult m1 = fk_det(single(P({{1, 2.0}, {0, -1.0}})), s);
    CHECK(m1.value == doctest::Approx(2.0).epsilon(1e-6));

    // circle-root singular integrand: M(z - 1) = 1 still converges
    const FkResult sing = fk_det(single(P({{1, 1.0}, {0, -1.0}})), s);
    CHECK(sing.value == doctest::Approx(1.0).epsilon(1e-6));

    // rectangular 1x2 row (0, 1 - 2z): operator norm picks up the nonzero entry
    LaurentMatrix row(1, 2);
    row.at(0, 1) = P({{0, 1.0}, {1, -2.0}});
    const FkResult r = fk_det(row, s);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(r.rank_profile == 1);

    // 2x1 column (1 - 2z; 1 - 2z): Gram determinant doubles, value 2*sqrt(2)
    LaurentMatrix col(2, 1);
    col.at(0, 0) = P({{0, 1.0}, {1, -2.0}});
    col.at(1, 0) = col.at(0, 0);
    const FkResult cr = fk_det(col, s);
    CHECK(cr.value == doctest::Approx(2.8284271247461903).epsilon(1e-6));

    // zero and empty matrices have value one by convention
    const FkResult z = fk_det(LaurentMatrix(2, 2), s);
    CHECK(z.value == 1.0);
    CHECK(z.rank_profile == 0);
    CHECK(fk_det(LaurentMatrix(0, 3), s).value == 1.0);
}

TEST_CASE("square laurent determinant interpolation") {
    LaurentMatrix m(2, 2);
    m.at(0, 0) = P({{1, 1.0}});
    m.at(0, 1) = P({{0, 1.0}});
    m.at(1, 1) = P({{1, 1.0}, {0, -2.0}});
    const LaurentPoly det = laurent_determinant(m);
    // z * (z - 2) = z^2 - 2z
    CHECK(std::abs(det.coeff(2) - Complex(1.0)) < 1e-12);
    CHECK(std::abs(det.coeff(1) - Complex(-2.0)) < 1e-12);
    CHECK(det.lo() == 1);

    // rank-deficient product: det(z, 1; 1, z^-1) = 0 identically
    LaurentMatrix zero(2, 2);
    zero.at(0, 0) = P({{1, 1.0}});
    zero.at(0, 1) = P({{0, 1.0}});
    zero.at(1, 0) = P({{0, 1.0}});
    zero.at(1, 1) = P({{-1, 1.0}});
    CHECK(laurent_determinant(zero).is_zero());

    // negative exponents survive the round trip
    LaurentMatrix neg(1, 1);
    neg.at(0, 0) = P({{-2, 3.0}, {0, -1.0}});
    const LaurentPoly nd = laurent_determinant(neg);
    CHECK(std::abs(nd.coeff(-2) - Complex(3.0)) < 1e-12);
    CHECK(std::abs(nd.coeff(0) - Complex(-1.0)) < 1e-12);
}

TEST_CASE("square path and quadrature agree") {
    std::mt19937_64 rng(91);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    std::uniform_int_distribution<int> expo(-1, 1);
    QuadratureSettings s;
    for (int iter = 0; iter < 6; ++iter) {
        LaurentMatrix m(3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                m.at(i, j) = LaurentPoly::monomial(expo(rng), coeff(rng));
        const FkResult direct = fk_det_square_poly(m);
        const FkResult quad = fk_det(m, s);
        if (!direct.det_class) {
            CHECK(direct.value == 0.0);
            continue;
        }
        CHECK(quad.value == doctest::Approx(direct.value).epsilon(2e-6));
        CHECK(quad.rank_profile == direct.rank_profile);
    }
}

TEST_CASE("node sweep is deterministic across serial and parallel") {
    LaurentMatrix m(2, 3);
    m.at(0, 0) = P({{1, 1.0}, {0, -1.0}});
    m.at(0, 2) = P({{0, 0.5}});
    m.at(1, 1) = P({{2, 1.0}, {0, 1.0}});
    m.at(1, 2) = P({{-1, 2.0}});

    const quad::NodeSweep serial = quad::sweep(m, 2, 512, 0.25, /*parallel=*/false);
    const quad::NodeSweep parallel = quad::sweep(m, 2, 512, 0.25, /*parallel=*/true);
    REQUIRE(serial.w.size() == parallel.w.size());
    for (std::size_t i = 0; i < serial.w.size(); ++i) CHECK(serial.w[i] == parallel.w[i]);
    CHECK(serial.min_retained == parallel.min_retained);

    QuadratureSettings sp;
    QuadratureSettings ss;
    ss.parallel = false;
    CHECK(fk_det(m, sp).value == fk_det(m, ss).value);
}

TEST_CASE("jitter avoids lattice-aligned circle zeros") {
    // z - 1 vanishes at the theta = 0 node of every uniform grid; the offset
    // ladder must move off the singularity rather than clamp it.
    LaurentMatrix m = single(P({{1, 1.0}, {0, -1.0}}));
    const quad::LevelEstimate lvl = quad::level_estimate(m, 1, 256, true);
    CHECK(lvl.offset == doctest::Approx(0.5));
    CHECK(lvl.min_retained > quad::kNodeFloor);
}

TEST_CASE("non convergence carries diagnostics") {
    QuadratureSettings s;
    s.target_tolerance = 1e-16; // unreachable before the refinement cap
    s.refinement_limit = 3;
    // roots on the circle at an irrational angle keep the trapezoid error at
    // O(1/N), so three doublings cannot reach the requested tolerance
    LaurentMatrix m = single(P({{2, 1.0}, {1, -2.0 * std::cos(0.7)}, {0, 1.0}}));
    bool threw = false;
    try {
        fk_det(m, s);
    } catch (const NonConvergence& e) {
        threw = true;
        CHECK(std::isfinite(e.last_estimate));
        CHECK(std::isfinite(e.previous_estimate));
    }
    CHECK(threw);
}
