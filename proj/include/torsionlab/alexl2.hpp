#pragma once

// The abelian L2-Alexander torsion of a knot exterior as a function of t > 0,
// computed either exactly from the Alexander roots or through the circle
// quadrature applied to the presentation complex, together with the symmetry
// diagnostics tau(1/t) = t^n * tau(t).

#include "torsionlab/fkdet.hpp"
#include "torsionlab/knot.hpp"

#include <optional>
#include <string>
#include <vector>

namespace torsionlab {

enum class Backend { Roots, Quadrature };

std::string backend_name(Backend b);

// A knot-group presentation with the abelianization sending every meridian to
// 1, optionally rescaled by a real factor applied to the homology class.
struct AdmissibleTripleAbelian {
    WirtingerPresentation presentation;
    LaurentPoly alexander;           // normalized Alexander polynomial
    std::vector<double> root_moduli; // |roots| of the Alexander polynomial
    double lead_abs = 1.0;           // |leading coefficient|
    double scale = 1.0;              // r in the class r*phi
    std::optional<int> genus;        // recorded when the knot is known

    // Throws NotAdmissible when the Alexander polynomial is constant (the
    // torsion of such inputs is not defined in the abelian setting).
    static AdmissibleTripleAbelian from_presentation(WirtingerPresentation p,
                                                     std::optional<int> genus = std::nullopt);
};

// Replace the class phi by r*phi, r != 0; torsions satisfy
// tau_{r phi}(t) = tau_phi(t^r).
AdmissibleTripleAbelian real_scale(AdmissibleTripleAbelian triple, double r);

// Exact closed form |lead| * prod_i max(u, |a_i|) / max(u, 1) at u = t^scale.
double torsion_roots(const AdmissibleTripleAbelian& triple, double t);

// Torsion of the presentation complex at u = t^scale via circle quadrature.
// Agrees with the roots backend up to an integer power of t.
double torsion_quadrature(const AdmissibleTripleAbelian& triple, double t,
                          const QuadratureSettings& settings = {});

double torsion_value(const AdmissibleTripleAbelian& triple, double t, Backend backend,
                     const QuadratureSettings& settings = {});

struct SymmetryReport {
    Backend backend = Backend::Roots;
    std::vector<double> grid;           // evaluation points after nudging
    std::vector<double> values;         // tau(t)
    std::vector<double> mirror_values;  // tau(1/t)
    std::vector<double> exponents;      // n(t) = log(tau(1/t)/tau(t)) / log(t)
    double exponent = 0.0;              // mean of exponents
    double constancy_residual = 0.0;    // max deviation of n(t) from the mean
    bool integral_expected = true;      // exponent should be an integer
    double integrality_residual = 0.0;  // distance of the mean to the nearest integer
    int rounded_exponent = 0;           // valid when integral_expected
    std::optional<int> expected_norm;   // 2*genus - 1 when the genus is known
    bool parity_matches = true;         // exponent == norm mod 2 (when both known)
};

// Evaluates tau on the grid and at the mirrored points and fits the symmetry
// exponent.  Grid points too close to t = 1 or to a root modulus (where the
// torsion has a kink) are nudged upward before evaluation.  Throws
// VacuousSymmetry when the torsion vanishes identically on the grid.
SymmetryReport symmetry_report(const AdmissibleTripleAbelian& triple, std::vector<double> grid,
                               Backend backend, const QuadratureSettings& settings = {});

std::vector<double> default_symmetry_grid();

} // namespace torsionlab
