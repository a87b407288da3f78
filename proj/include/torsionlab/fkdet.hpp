#pragma once

// Operator determinants of Laurent-polynomial matrices acting on l^2(Z).
// Square nonsingular matrices reduce to the Mahler measure of their scalar
// determinant; general rectangular matrices are handled by integrating the
// log-volume of the top singular values around the unit circle.

#include "torsionlab/groupring.hpp"

#include <vector>

namespace torsionlab {

struct QuadratureSettings {
    int node_count = 256;        // starting nodes per circle sweep; power of two, >= 16
    int refinement_limit = 12;   // maximum number of doublings past the start level
    double target_tolerance = 1e-7; // absolute tolerance on successive log estimates
    bool parallel = true;        // evaluate nodes with OpenMP when available

    void validate() const; // throws std::invalid_argument
};

struct FkResult {
    double value = 1.0;    // determinant; 0 exactly when det_class is false
    int rank_profile = 0;  // rank of the symbol at almost every circle point
    bool det_class = true;
};

// Roots (with multiplicity) of p after dividing out its monomial factor,
// computed from the companion matrix.  Constants give an empty list; the zero
// polynomial is rejected (std::invalid_argument).
std::vector<Complex> poly_roots(const LaurentPoly& p);

// Mahler measure |lead| * prod max(1, |root|) via companion-matrix roots.
// Roots with modulus within 1e-10 of 1 are treated as unimodular.
// The zero polynomial is rejected (std::invalid_argument).
double mahler_jensen(const LaurentPoly& p);

// Rank of M(z) at generic unit-modulus z, decided by majority vote over a
// fixed set of pseudo-random probe points.  Disagreement between probes
// raises NonConvergence.
int generic_rank(const LaurentMatrix& m);

// Exact scalar determinant by evaluation at roots of unity and inverse DFT.
// A verification probe guards against conditioning failures
// (InterpolationError).
LaurentPoly laurent_determinant(const LaurentMatrix& m);

// Determinant of a general rectangular matrix by adaptive circle quadrature.
// Zero matrices (rank 0) give value 1.  Raises NonConvergence when the
// refinement budget is exhausted.
FkResult fk_det(const LaurentMatrix& m, const QuadratureSettings& settings = {});

// Determinant of a square matrix through its scalar determinant polynomial:
// exact rank and Mahler measure, or the zero/non-determinant-class result
// when the determinant vanishes identically.
FkResult fk_det_square_poly(const LaurentMatrix& m);

namespace quad {

// Per-node data for one circle sweep at a fixed resolution.  w[j] is the sum
// of logs of the top `rank` eigenvalues of M(z_j) M(z_j)^*, where
// z_j = exp(2*pi*i*(j+offset)/nodes).  min_retained is the smallest eigenvalue
// that entered any of the sums (infinity when rank is 0).
struct NodeSweep {
    std::vector<double> w;
    double min_retained = 0.0;
};

// Log-scale estimate at one resolution together with the node offset used.
struct LevelEstimate {
    double log_value = 0.0;
    double offset = 0.0;
    double min_retained = 0.0;
};

// Eigenvalues below this are considered to sit on a symbol zero; the sweep is
// retried at shifted node offsets when one is encountered.
inline constexpr double kNodeFloor = 1e-13;

// Hard cap on the number of nodes in a single sweep; refinement loops stop
// (and report non-convergence) rather than exceed it.
inline constexpr long kNodeBudget = 1L << 26;

NodeSweep sweep(const LaurentMatrix& m, int rank, long nodes, double offset, bool parallel);

// Runs sweep at offsets 0, 1/2, 1/4, 3/4 (fractions of the node step) until
// none of the retained eigenvalues falls below kNodeFloor; falls back to the
// best offset seen with clamped logarithms.
LevelEstimate level_estimate(const LaurentMatrix& m, int rank, long nodes, bool parallel);

// (sum of w) / (2 * nodes): the trapezoid value of the log-determinant.
double trapezoid_mean(const NodeSweep& s);

} // namespace quad

} // namespace torsionlab
