#pragma once

// Seeded property suites for the determinant and torsion identities, plus the
// random-complex generators they share with the unit tests.  Every suite is
// deterministic for a fixed seed.

#include "torsionlab/alexl2.hpp"
#include "torsionlab/chain.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace torsionlab {

struct SuiteResult {
    std::string suite;
    int cases = 0;
    int passed = 0;
    std::vector<std::string> failures; // capped at a few messages
    bool ok() const { return cases > 0 && passed == cases; }
};

// Matrix with random complex coefficients and entry spans up to `span`.
LaurentMatrix random_laurent_matrix(std::mt19937_64& rng, int rows, int cols, int span);

// Acyclic based complex: an exact two-block skeleton per degree followed by
// paired elementary basis operations (transvections, swaps, scalings) that
// preserve both exactness and the composition identity.  With laurent=false
// all entries stay constant and t must be 1.
BasedChainComplex random_acyclic_complex(std::mt19937_64& rng, int max_degree, int max_block,
                                         bool laurent, int span_budget, double t);

// Determinant identities: scalar agreement with |det|, row/column swap
// invariance, column scaling by +-z^k, and adjoint invariance.
SuiteResult run_fkdet_suite(std::uint64_t seed, int cases_per_item,
                            const QuadratureSettings& settings = {});

// tau(C^#) = tau(C)^{(-1)^{m+1}} on random acyclic complexes, plus
// zero-torsion inputs dualizing to zero torsion.
SuiteResult run_duality_suite(std::uint64_t seed, int scalar_cases, int laurent_cases,
                              const QuadratureSettings& settings = {});

// tau = 1 for the torus complexes across directions and parameters.
SuiteResult run_torus_suite(const std::vector<double>& ts = {0.5, 1.0, 1.7, 5.0},
                            const QuadratureSettings& settings = {});

// tau(act_euler(C, d, j, z^k)) = t^k * tau(C), exactly on presentation
// complexes and numerically on random Laurent complexes; the symmetry parity
// is unchanged by the action.
SuiteResult run_euler_suite(std::uint64_t seed, int cases,
                            const QuadratureSettings& settings = {});

// Alexander sanity on random braid closures: palindromic coefficients,
// |Delta(1)| = 1, and an odd integral symmetry exponent.
SuiteResult run_symmetry_suite(std::uint64_t seed, int cases,
                               const QuadratureSettings& settings = {});

std::vector<SuiteResult> run_all_suites(std::uint64_t seed,
                                        const QuadratureSettings& settings = {});

} // namespace torsionlab
