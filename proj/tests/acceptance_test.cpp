// Acceptance gate: one line per criterion, [PASS]/[FAIL] with timing, exit
// code equal to the number of failed criteria.

#include "torsionlab/alexl2.hpp"
#include "torsionlab/chain.hpp"
#include "torsionlab/errors.hpp"
#include "torsionlab/knot.hpp"
#include "torsionlab/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace torsionlab;
using Clock = std::chrono::steady_clock;

int g_failures = 0;

void run_criterion(int index, const std::string& title,
                   const std::function<bool(std::string&)>& body) {
    std::string detail;
    const Clock::time_point start = Clock::now();
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("[%s] criterion %d: %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", index,
                title.c_str(), secs, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

bool within_budget(const Clock::time_point& start, double budget, std::string& detail) {
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (secs < budget) return true;
    detail += "runtime budget " + std::to_string(budget) + "s exceeded; ";
    return false;
}

AdmissibleTripleAbelian registry_triple(const std::string& name) {
    const KnotRecord* rec = find_knot(name);
    if (rec == nullptr) throw std::invalid_argument("missing registry knot: " + name);
    return AdmissibleTripleAbelian::from_presentation(wirtinger(braid_to_pd(rec->braid)),
                                                      rec->genus);
}

bool suite_ok(const SuiteResult& r, std::string& detail) {
    std::ostringstream ss;
    ss << r.suite << " " << r.passed << "/" << r.cases;
    if (!r.ok() && !r.failures.empty()) ss << " first failure: " << r.failures.front();
    detail += ss.str() + "; ";
    return r.ok();
}

// --- criterion bodies -------------------------------------------------------

bool torus_reproduction(std::string& detail) {
    const Clock::time_point start = Clock::now();
    bool ok = true;
    for (const auto& [a, b] : std::vector<std::pair<long, long>>{{1, 0}, {1, 1}}) {
        for (double t : {0.5, 1.0, 2.0, 5.0}) {
            const TorsionValue tv = torsion(torus_complex(a, b, t));
            if (!tv.acyclic || std::abs(tv.value - 1.0) > 1e-6) {
                ok = false;
                detail += "phi=(" + std::to_string(a) + "," + std::to_string(b) +
                          ") t=" + std::to_string(t) + " tau=" + std::to_string(tv.value) +
                          "; ";
            }
        }
    }
    return within_budget(start, 5.0, detail) && ok;
}

bool knot_symmetry(std::string& detail) {
    const Clock::time_point start = Clock::now();
    bool ok = true;
    for (const std::string name : {"trefoil", "figure-eight"}) {
        const AdmissibleTripleAbelian triple = registry_triple(name);

        const SymmetryReport roots =
            symmetry_report(triple, default_symmetry_grid(), Backend::Roots);
        if (roots.integrality_residual > 1e-9 || roots.rounded_exponent != -1 ||
            !roots.expected_norm || *roots.expected_norm != 1 || !roots.parity_matches) {
            ok = false;
            detail += name + " roots: n=" + std::to_string(roots.exponent) +
                      " residual=" + std::to_string(roots.integrality_residual) + "; ";
        }

        const SymmetryReport quad =
            symmetry_report(triple, default_symmetry_grid(), Backend::Quadrature);
        const bool odd = std::abs(quad.rounded_exponent) % 2 == 1;
        if (quad.integrality_residual > 1e-6 || !odd || !quad.parity_matches) {
            ok = false;
            detail += name + " quadrature: n=" + std::to_string(quad.exponent) +
                      " residual=" + std::to_string(quad.integrality_residual) + "; ";
        }
    }
    return within_budget(start, 5.0, detail) && ok;
}

bool duality_suite(std::string& detail) {
    const Clock::time_point start = Clock::now();
    const bool ok = suite_ok(run_duality_suite(1001, 200, 50), detail);
    return within_budget(start, 60.0, detail) && ok;
}

bool fkdet_suite(std::string& detail) {
    return suite_ok(run_fkdet_suite(2002, 100), detail);
}

bool euler_action(std::string& detail) {
    return suite_ok(run_euler_suite(3003, 10), detail);
}

bool backend_cross_validation(std::string& detail) {
    bool ok = true;
    for (const std::string name : {"trefoil", "figure-eight"}) {
        const AdmissibleTripleAbelian triple = registry_triple(name);
        const double fit_t = 2.0;
        const double m_raw = (std::log(torsion_quadrature(triple, fit_t)) -
                              std::log(torsion_roots(triple, fit_t))) /
                             std::log(fit_t);
        const long m = std::lround(m_raw);
        for (double t : {0.5, 2.0, 3.0}) {
            const double residual = std::abs(std::log(torsion_quadrature(triple, t)) -
                                             std::log(torsion_roots(triple, t)) -
                                             double(m) * std::log(t));
            if (residual > 1e-5) {
                ok = false;
                detail += name + " t=" + std::to_string(t) + " m=" + std::to_string(m) +
                          " residual=" + std::to_string(residual) + "; ";
            }
        }
    }
    return ok;
}

bool alexander_pipeline(std::string& detail) {
    const Clock::time_point start = Clock::now();
    bool ok = true;

    const auto coeffs = [](const LaurentPoly& p) {
        std::vector<long> out;
        for (int k = 0; k <= p.span(); ++k) out.push_back(std::lround(p.coeff(k).real()));
        return out;
    };
    const LaurentPoly trefoil =
        alexander_polynomial(wirtinger(braid_to_pd(find_knot("trefoil")->braid)));
    if (coeffs(trefoil) != std::vector<long>{1, -1, 1}) {
        ok = false;
        detail += "trefoil polynomial mismatch; ";
    }
    const LaurentPoly fig8 =
        alexander_polynomial(wirtinger(braid_to_pd(find_knot("figure-eight")->braid)));
    if (coeffs(fig8) != std::vector<long>{1, -3, 1}) {
        ok = false;
        detail += "figure-eight polynomial mismatch; ";
    }

    // 20 random braid closures with at most 8 crossings that close to knots.
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<int> strands_dist(2, 4);
    std::uniform_int_distribution<int> length_dist(1, 8);
    int found = 0, attempts = 0;
    while (found < 20 && attempts < 4000) {
        ++attempts;
        BraidWord b;
        b.strands = strands_dist(rng);
        const int len = length_dist(rng);
        std::uniform_int_distribution<int> gen_dist(1, b.strands - 1);
        std::bernoulli_distribution sign_dist(0.5);
        for (int i = 0; i < len; ++i) {
            const int g = gen_dist(rng);
            b.letters.push_back(sign_dist(rng) ? g : -g);
        }
        PDCode pd;
        try {
            pd = braid_to_pd(b);
        } catch (const NotAdmissible&) {
            continue;
        }
        ++found;
        const LaurentPoly delta = alexander_polynomial(wirtinger(pd));
        const std::vector<long> c = coeffs(delta);
        const int d = int(c.size()) - 1;
        bool pal_plus = true, pal_minus = true;
        for (int k = 0; k <= d; ++k) {
            pal_plus = pal_plus && c[std::size_t(k)] == c[std::size_t(d - k)];
            pal_minus = pal_minus && c[std::size_t(k)] == -c[std::size_t(d - k)];
        }
        const double det_abs = std::abs(delta.eval(Complex(1.0, 0.0)));
        if (!(pal_plus || pal_minus) || std::abs(det_abs - 1.0) > 1e-6) {
            ok = false;
            detail += "closure " + print_braid(b) + " failed symmetry/determinant; ";
        }
    }
    if (found < 20) {
        ok = false;
        detail += "only " + std::to_string(found) + "/20 knot closures found; ";
    }
    return within_budget(start, 30.0, detail) && ok;
}

bool real_classes(std::string& detail) {
    bool ok = true;
    for (const std::string name : {"trefoil", "figure-eight"}) {
        const AdmissibleTripleAbelian base = registry_triple(name);
        for (double r : {0.5, 2.0, -1.0}) {
            const AdmissibleTripleAbelian scaled = real_scale(base, r);
            for (double t : {0.7, 2.0, 3.0}) {
                const double lhs = torsion_roots(scaled, t);
                const double rhs = torsion_roots(base, std::pow(t, r));
                if (std::abs(lhs - rhs) > 1e-9 * std::max(1.0, std::abs(rhs))) {
                    ok = false;
                    detail += name + " r=" + std::to_string(r) + " t=" + std::to_string(t) +
                              "; ";
                }
            }
            const SymmetryReport rep =
                symmetry_report(scaled, default_symmetry_grid(), Backend::Roots);
            if (std::abs(rep.exponent - r * (-1.0)) > 1e-9) {
                ok = false;
                detail += name + " r=" + std::to_string(r) +
                          " exponent=" + std::to_string(rep.exponent) + "; ";
            }
        }
    }
    return ok;
}

} // namespace

int main() {
    run_criterion(1, "torus complex torsion is 1 on the quadrature path", torus_reproduction);
    run_criterion(2, "symmetry exponent -1 with odd parity for the bundled knots",
                  knot_symmetry);
    run_criterion(3, "duality suite over random acyclic complexes", duality_suite);
    run_criterion(4, "determinant identity suite", fkdet_suite);
    run_criterion(5, "Euler action shifts log-torsion by k*log t", euler_action);
    run_criterion(6, "backends agree up to one integer monomial per knot",
                  backend_cross_validation);
    run_criterion(7, "Alexander pipeline on bundled and random closures",
                  alexander_pipeline);
    run_criterion(8, "real homology classes rescale the torsion argument", real_classes);

    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
}
