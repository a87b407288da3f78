#include "torsionlab/fkdet.hpp"

#include "eigen_util.hpp"
#include "torsionlab/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

namespace torsionlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Singular values below this fraction of the largest one do not count toward
// the rank at a probe point.
constexpr double kRankRelTol = 1e-10;
// Unimodularity snap for polynomial roots.
constexpr double kRootSnap = 1e-10;
constexpr double kLogFloor = 1e-300;

const std::array<double, 7>& probe_angles() {
    static const std::array<double, 7> angles = [] {
        std::mt19937_64 rng(0x51a7be9uLL);
        std::uniform_real_distribution<double> dist(0.0, kTwoPi);
        std::array<double, 7> a{};
        for (double& x : a) x = dist(rng);
        return a;
    }();
    return angles;
}

// True when every entry is a constant (exponent-zero) coefficient, so the
// symbol itself does not depend on the circle angle.  Monomials z^k with
// k != 0 have span zero but still rotate with the angle, so they do not count.
bool constant_symbol(const LaurentMatrix& m) {
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) {
            const LaurentPoly& p = m.at(r, c);
            if (!p.is_zero() && (p.lo() != 0 || p.hi() != 0)) return false;
        }
    return true;
}

} // namespace

void QuadratureSettings::validate() const {
    if (node_count < 16 || (node_count & (node_count - 1)) != 0)
        throw std::invalid_argument("node_count must be a power of two and at least 16");
    if (refinement_limit < 2 || refinement_limit > 40)
        throw std::invalid_argument("refinement_limit must lie in [2, 40]");
    if (!(target_tolerance > 0.0))
        throw std::invalid_argument("target_tolerance must be positive");
}

std::vector<Complex> poly_roots(const LaurentPoly& p) {
    if (p.is_zero()) throw std::invalid_argument("zero polynomial has no root set");
    const int d = p.span();
    if (d == 0) return {};
    const int lo = p.lo();
    const Complex lead = p.coeff(lo + d);
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -p.coeff(lo + i) / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    if (es.info() != Eigen::Success)
        throw NonConvergence("companion-matrix eigenvalue iteration failed");
    std::vector<Complex> roots(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) roots[std::size_t(i)] = es.eigenvalues()(i);
    return roots;
}

double mahler_jensen(const LaurentPoly& p) {
    if (p.is_zero())
        throw std::invalid_argument("zero polynomial is outside the determinant class");
    double val = std::abs(p.coeff(p.hi()));
    for (Complex root : poly_roots(p)) {
        double r = std::abs(root);
        if (std::abs(r - 1.0) < kRootSnap) continue; // count as unimodular
        if (r > 1.0) val *= r;
    }
    return val;
}

int generic_rank(const LaurentMatrix& m) {
    if (m.empty()) return 0;
    std::map<int, int> votes;
    for (double th : probe_angles()) {
        Eigen::MatrixXcd a = eval_at(m, std::polar(1.0, th));
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
        const auto& s = svd.singularValues();
        int r = 0;
        if (s.size() > 0 && s(0) > 0.0) {
            const double cut = kRankRelTol * s(0);
            for (int i = 0; i < s.size(); ++i)
                if (s(i) > cut) ++r;
        }
        ++votes[r];
    }
    for (const auto& [r, n] : votes)
        if (n >= 4) return r;
    throw NonConvergence("rank probes disagree; the symbol rank is numerically ambiguous");
}

namespace quad {

NodeSweep sweep(const LaurentMatrix& m, int rank, long nodes, double offset, bool parallel) {
    NodeSweep out;
    out.w.assign(std::size_t(nodes), 0.0);
    out.min_retained = std::numeric_limits<double>::infinity();
    if (rank <= 0 || m.empty()) return out;

    const double step = kTwoPi / double(nodes);
    const bool rows_small = m.rows() <= m.cols();
    double min_ret = std::numeric_limits<double>::infinity();
    bool ok = true;
    (void)parallel;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(min : min_ret) reduction(&& : ok) \
    if (parallel)
#endif
    for (long j = 0; j < nodes; ++j) {
        const Complex z = std::polar(1.0, step * (double(j) + offset));
        const Eigen::MatrixXcd a = eval_at(m, z);
        const Eigen::MatrixXcd g =
            rows_small ? (a * a.adjoint()).eval() : (a.adjoint() * a).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) {
            ok = false;
            continue;
        }
        const auto& ev = es.eigenvalues(); // ascending
        const int n = int(ev.size());
        double s = 0.0;
        for (int i = n - rank; i < n; ++i) {
            const double lambda = ev(i);
            min_ret = std::min(min_ret, lambda);
            s += std::log(std::max(lambda, kLogFloor));
        }
        out.w[std::size_t(j)] = s;
    }
    if (!ok) throw NonConvergence("Gram eigenvalue iteration failed during a circle sweep");
    out.min_retained = min_ret;
    return out;
}

double trapezoid_mean(const NodeSweep& s) {
    double acc = 0.0;
    for (double x : s.w) acc += x; // fixed order keeps results reproducible
    return acc / (2.0 * double(s.w.size()));
}

LevelEstimate level_estimate(const LaurentMatrix& m, int rank, long nodes, bool parallel) {
    static constexpr std::array<double, 4> offsets{0.0, 0.5, 0.25, 0.75};
    NodeSweep best;
    double best_offset = 0.0;
    bool have_best = false;
    for (double off : offsets) {
        NodeSweep s = sweep(m, rank, nodes, off, parallel);
        if (s.min_retained >= kNodeFloor)
            return {trapezoid_mean(s), off, s.min_retained};
        if (!have_best || s.min_retained > best.min_retained) {
            best = std::move(s);
            best_offset = off;
            have_best = true;
        }
    }
    // Every offset hit a symbol zero; the clamped logs still integrate to a
    // finite value and Richardson extrapolation absorbs the bias.
    return {trapezoid_mean(best), best_offset, best.min_retained};
}

} // namespace quad

FkResult fk_det(const LaurentMatrix& m, const QuadratureSettings& settings) {
    settings.validate();
    if (m.empty()) return {1.0, 0, true};
    const int rank = generic_rank(m);
    if (rank == 0) return {1.0, 0, true};

    if (constant_symbol(m)) {
        // Constant symbol: the integrand does not depend on the angle.
        quad::NodeSweep s = quad::sweep(m, rank, 1, 0.0, false);
        return {std::exp(0.5 * s.w[0]), rank, true};
    }

    const long base = settings.node_count;
    double e_prev = quad::level_estimate(m, rank, base, settings.parallel).log_value;
    double e_cur = quad::level_estimate(m, rank, 2 * base, settings.parallel).log_value;
    double rich_prev = 2.0 * e_cur - e_prev;
    for (int k = 2; k <= settings.refinement_limit; ++k) {
        const long nodes = base << k;
        if (nodes > quad::kNodeBudget) break;
        const double e_next = quad::level_estimate(m, rank, nodes, settings.parallel).log_value;
        const double rich = 2.0 * e_next - e_cur;
        if (std::abs(rich - rich_prev) <= settings.target_tolerance)
            return {std::exp(rich), rank, true};
        e_cur = e_next;
        rich_prev = rich;
    }
    throw NonConvergence("circle quadrature exhausted its refinement budget",
                         std::exp(rich_prev), std::exp(e_cur));
}

LaurentPoly laurent_determinant(const LaurentMatrix& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("determinant requires a square matrix");
    const int n = m.rows();
    if (n == 0) return LaurentPoly::constant(1.0);

    long lo_sum = 0, hi_sum = 0;
    double scale = 1.0;
    for (int r = 0; r < n; ++r) {
        int lo_r = std::numeric_limits<int>::max();
        int hi_r = std::numeric_limits<int>::min();
        double row_l1 = 0.0;
        for (int c = 0; c < n; ++c) {
            const LaurentPoly& p = m.at(r, c);
            row_l1 += p.coeff_l1();
            if (!p.is_zero()) {
                lo_r = std::min(lo_r, p.lo());
                hi_r = std::max(hi_r, p.hi());
            }
        }
        if (hi_r < lo_r) return LaurentPoly::zero(); // a row of zeros
        lo_sum += lo_r;
        hi_sum += hi_r;
        scale *= row_l1;
    }

    const long count = hi_sum - lo_sum + 1; // number of candidate coefficients
    if (count > 4096)
        throw InterpolationError("determinant support too large to reconstruct from samples");

    // Samples are demodulated by z^{-lo_sum} so that the inverse transform
    // recovers the coefficients of det * z^{-lo_sum}, supported on [0, count).
    const long lo_mod = ((lo_sum % count) + count) % count;
    std::vector<Complex> samples(static_cast<std::size_t>(count));
    double vmax = 0.0;
    for (long j = 0; j < count; ++j) {
        const Complex z = std::polar(1.0, kTwoPi * double(j) / double(count));
        const Complex demod = std::polar(1.0, -kTwoPi * double((j * lo_mod) % count) / double(count));
        samples[std::size_t(j)] = eval_at(m, z).determinant() * demod;
        vmax = std::max(vmax, std::abs(samples[std::size_t(j)]));
    }
    // All samples are bounded by the row-sum product; a uniformly negligible
    // determinant is the zero polynomial.
    if (vmax <= 1e-11 * std::max(scale, kLogFloor)) return LaurentPoly::zero();

    std::vector<Complex> coefs(static_cast<std::size_t>(count));
    double cmax = 0.0;
    for (long s = 0; s < count; ++s) {
        Complex acc = 0.0;
        for (long j = 0; j < count; ++j)
            acc += samples[std::size_t(j)] *
                   std::polar(1.0, -kTwoPi * double((j * s) % count) / double(count));
        coefs[std::size_t(s)] = acc / double(count);
        cmax = std::max(cmax, std::abs(coefs[std::size_t(s)]));
    }
    std::vector<std::pair<int, Complex>> terms;
    for (long s = 0; s < count; ++s)
        if (std::abs(coefs[std::size_t(s)]) > 1e-11 * cmax)
            terms.emplace_back(int(lo_sum + s), coefs[std::size_t(s)]);
    const LaurentPoly det = LaurentPoly::from_terms(std::move(terms));

    for (double th : {0.7345, 2.9173}) { // fresh probes not used in the reconstruction
        const Complex z = std::polar(1.0, th);
        const Complex diff = det.eval(z) - eval_at(m, z).determinant();
        if (std::abs(diff) > 1e-8 * std::max(1.0, scale))
            throw InterpolationError(
                "determinant reconstruction failed its verification probe");
    }
    return det;
}

FkResult fk_det_square_poly(const LaurentMatrix& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("square-determinant path requires a square matrix");
    if (m.rows() == 0) return {1.0, 0, true};
    const LaurentPoly det = laurent_determinant(m);
    if (det.is_zero()) return {0.0, generic_rank(m), false};
    return {mahler_jensen(det), m.rows(), true};
}

} // namespace torsionlab
