#include "torsionlab/alexl2.hpp"

#include "torsionlab/chain.hpp"
#include "torsionlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace torsionlab {

namespace {

// Grid points whose log-distance to a kink (t = 1 or a root modulus) is
// below this are nudged before evaluation.
constexpr double kKinkLogGap = 0.02;
constexpr double kNudgeFactor = 1.031;

bool near_kink(double t, const std::vector<double>& kinks) {
    for (double k : kinks)
        if (std::abs(std::log(t / k)) < kKinkLogGap) return true;
    return false;
}

} // namespace

std::string backend_name(Backend b) {
    return b == Backend::Roots ? "roots" : "quadrature";
}

AdmissibleTripleAbelian AdmissibleTripleAbelian::from_presentation(WirtingerPresentation p,
                                                                   std::optional<int> genus) {
    AdmissibleTripleAbelian triple;
    triple.alexander = alexander_polynomial(p);
    if (triple.alexander.span() == 0)
        throw NotAdmissible(
            "constant Alexander polynomial: the abelian torsion is not defined here");
    triple.presentation = std::move(p);
    triple.lead_abs = std::abs(triple.alexander.coeff(triple.alexander.hi()));
    for (Complex root : poly_roots(triple.alexander))
        triple.root_moduli.push_back(std::abs(root));
    std::sort(triple.root_moduli.begin(), triple.root_moduli.end());
    triple.genus = genus;
    return triple;
}

AdmissibleTripleAbelian real_scale(AdmissibleTripleAbelian triple, double r) {
    if (r == 0.0) throw std::invalid_argument("real_scale factor must be nonzero");
    triple.scale *= r;
    return triple;
}

double torsion_roots(const AdmissibleTripleAbelian& triple, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("torsion argument t must be positive");
    const double u = std::pow(t, triple.scale);
    double value = triple.lead_abs;
    for (double a : triple.root_moduli) value *= std::max(u, a);
    return value / std::max(u, 1.0);
}

double torsion_quadrature(const AdmissibleTripleAbelian& triple, double t,
                          const QuadratureSettings& settings) {
    if (!(t > 0.0)) throw std::invalid_argument("torsion argument t must be positive");
    const double u = std::pow(t, triple.scale);
    const BasedChainComplex c = presentation_complex(triple.presentation, u);
    return torsion(c, settings).value;
}

double torsion_value(const AdmissibleTripleAbelian& triple, double t, Backend backend,
                     const QuadratureSettings& settings) {
    return backend == Backend::Roots ? torsion_roots(triple, t)
                                     : torsion_quadrature(triple, t, settings);
}

std::vector<double> default_symmetry_grid() {
    return {1.0 / 3.0, 0.5, 0.8, 1.25, 2.0, 3.0};
}

SymmetryReport symmetry_report(const AdmissibleTripleAbelian& triple, std::vector<double> grid,
                               Backend backend, const QuadratureSettings& settings) {
    if (grid.empty()) throw std::invalid_argument("symmetry grid must not be empty");
    // Kinks of t -> tau(t): t = 1 and the points where t^scale crosses a root
    // modulus.  The torsion is not differentiable there and the local
    // exponent is ill-defined, so grid points are pushed off them.
    std::vector<double> kinks{1.0};
    for (double a : triple.root_moduli)
        if (a > 0.0) kinks.push_back(std::pow(a, 1.0 / triple.scale));

    SymmetryReport rep;
    rep.backend = backend;
    for (double t : grid) {
        if (!(t > 0.0)) throw std::invalid_argument("symmetry grid points must be positive");
        int guard = 0;
        while (near_kink(t, kinks)) {
            t *= kNudgeFactor;
            if (++guard > 64)
                throw NonConvergence("could not nudge a grid point away from torsion kinks");
        }
        rep.grid.push_back(t);
    }

    for (double t : rep.grid) {
        rep.values.push_back(torsion_value(triple, t, backend, settings));
        rep.mirror_values.push_back(torsion_value(triple, 1.0 / t, backend, settings));
    }

    bool all_zero = true, any_zero = false;
    for (std::size_t i = 0; i < rep.grid.size(); ++i) {
        const bool zero = rep.values[i] == 0.0 || rep.mirror_values[i] == 0.0;
        all_zero = all_zero && zero;
        any_zero = any_zero || zero;
    }
    if (all_zero)
        throw VacuousSymmetry("torsion vanishes on the whole grid; symmetry holds vacuously");
    if (any_zero)
        throw NonConvergence("torsion vanishes at some grid points but not all");

    for (std::size_t i = 0; i < rep.grid.size(); ++i) {
        const double t = rep.grid[i];
        rep.exponents.push_back(std::log(rep.mirror_values[i] / rep.values[i]) / std::log(t));
    }
    double mean = 0.0;
    for (double n : rep.exponents) mean += n;
    mean /= double(rep.exponents.size());
    rep.exponent = mean;
    for (double n : rep.exponents)
        rep.constancy_residual = std::max(rep.constancy_residual, std::abs(n - mean));

    rep.integral_expected = std::abs(triple.scale - std::round(triple.scale)) < 1e-12;
    rep.rounded_exponent = int(std::lround(mean));
    rep.integrality_residual = std::abs(mean - std::round(mean));
    if (triple.genus) {
        rep.expected_norm = 2 * *triple.genus - 1;
        if (rep.integral_expected)
            rep.parity_matches = ((rep.rounded_exponent - *rep.expected_norm) % 2) == 0;
    }
    return rep;
}

} // namespace torsionlab
