#include "torsionlab/chain.hpp"

#include "torsionlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace torsionlab {

namespace {

// The composability residual A_i * A_{i-1} is compared against this fraction
// of the product of coefficient norms.
constexpr double kComposeTol = 1e-9;

LaurentPoly monomial_value(const Monomial& g, double t) {
    return LaurentPoly::monomial(g.exponent, double(g.sign) * std::pow(t, double(g.exponent)));
}

void check_monomial(const Monomial& g) {
    if (g.sign != 1 && g.sign != -1)
        throw std::invalid_argument("monomial sign must be +1 or -1");
}

} // namespace

Monomial monomial_mul(const Monomial& a, const Monomial& b) {
    return {a.sign * b.sign, a.exponent + b.exponent};
}

Monomial monomial_inverse(const Monomial& a) {
    return {a.sign, -a.exponent};
}

BasedChainComplex BasedChainComplex::create(std::vector<int> ranks,
                                            std::vector<LaurentMatrix> boundaries,
                                            std::vector<std::vector<Monomial>> lifts,
                                            double t) {
    if (ranks.empty()) throw InvariantViolation("a chain complex needs at least degree zero");
    for (int n : ranks)
        if (n < 0) throw InvariantViolation("negative rank in chain complex");
    if (!(t > 0.0)) throw std::invalid_argument("chain parameter t must be positive");
    const std::size_t m = ranks.size() - 1;
    if (boundaries.size() != m)
        throw InvariantViolation("boundary count does not match the number of degrees");
    for (std::size_t i = 0; i < m; ++i) {
        const LaurentMatrix& a = boundaries[i];
        if (a.rows() != ranks[i + 1] || a.cols() != ranks[i])
            throw InvariantViolation("boundary A_" + std::to_string(i + 1) +
                                     " has shape " + std::to_string(a.rows()) + "x" +
                                     std::to_string(a.cols()) + ", expected " +
                                     std::to_string(ranks[i + 1]) + "x" +
                                     std::to_string(ranks[i]));
    }
    if (lifts.empty()) {
        lifts.resize(ranks.size());
        for (std::size_t i = 0; i < ranks.size(); ++i)
            lifts[i].assign(std::size_t(ranks[i]), Monomial{});
    }
    if (lifts.size() != ranks.size())
        throw InvariantViolation("lift count does not match the number of degrees");
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        if (lifts[i].size() != std::size_t(ranks[i]))
            throw InvariantViolation("lifts in degree " + std::to_string(i) +
                                     " do not match its rank");
        for (const Monomial& g : lifts[i]) check_monomial(g);
    }
    for (std::size_t i = 1; i < m; ++i) {
        if (boundaries[i].empty() || boundaries[i - 1].empty()) continue;
        const double residual = max_coeff(boundaries[i] * boundaries[i - 1]);
        const double scale = std::max(1.0, coeff_l1(boundaries[i]) * coeff_l1(boundaries[i - 1]));
        if (residual > kComposeTol * scale)
            throw InvariantViolation("boundaries A_" + std::to_string(i + 1) + " and A_" +
                                     std::to_string(i) + " do not compose to zero");
    }
    BasedChainComplex c;
    c.ranks_ = std::move(ranks);
    c.boundaries_ = std::move(boundaries);
    c.lifts_ = std::move(lifts);
    c.t_ = t;
    return c;
}

LaurentMatrix BasedChainComplex::folded_boundary(int i) const {
    if (i < 1 || i > top_degree()) throw std::out_of_range("boundary index out of range");
    LaurentMatrix out = boundary(i);
    const auto& row_lift = lifts_[std::size_t(i)];
    const auto& col_lift = lifts_[std::size_t(i) - 1];
    for (int r = 0; r < out.rows(); ++r) {
        const LaurentPoly f = monomial_value(row_lift[std::size_t(r)], t_);
        for (int c = 0; c < out.cols(); ++c) out.at(r, c) = f * out.at(r, c);
    }
    for (int c = 0; c < out.cols(); ++c) {
        const LaurentPoly f = monomial_value(monomial_inverse(col_lift[std::size_t(c)]), t_);
        for (int r = 0; r < out.rows(); ++r) out.at(r, c) = out.at(r, c) * f;
    }
    return out;
}

std::vector<int> l2_betti_generic(const BasedChainComplex& c) {
    const int m = c.top_degree();
    std::vector<int> rk(std::size_t(m) + 1, 0); // rk[i-1] = rank of A_i
    for (int i = 1; i <= m; ++i) {
        const LaurentMatrix a = c.folded_boundary(i);
        rk[std::size_t(i) - 1] = a.empty() ? 0 : generic_rank(a);
    }
    std::vector<int> betti(std::size_t(m) + 1, 0);
    for (int i = 0; i <= m; ++i) {
        const int out = (i >= 1) ? rk[std::size_t(i) - 1] : 0;
        const int in = (i < m) ? rk[std::size_t(i)] : 0;
        betti[std::size_t(i)] = c.rank(i) - out - in;
    }
    return betti;
}

TorsionValue torsion(const BasedChainComplex& c, const QuadratureSettings& settings) {
    settings.validate();
    const int m = c.top_degree();
    std::vector<LaurentMatrix> folded(static_cast<std::size_t>(m));
    std::vector<int> rk(std::size_t(m), 0);
    for (int i = 1; i <= m; ++i) {
        folded[std::size_t(i) - 1] = c.folded_boundary(i);
        if (!folded[std::size_t(i) - 1].empty())
            rk[std::size_t(i) - 1] = generic_rank(folded[std::size_t(i) - 1]);
    }
    for (int i = 0; i <= m; ++i) {
        const int out = (i >= 1) ? rk[std::size_t(i) - 1] : 0;
        const int in = (i < m) ? rk[std::size_t(i)] : 0;
        if (c.rank(i) - out - in != 0) return {0.0, false, {}};
    }

    std::vector<FkResult> factors(static_cast<std::size_t>(m));
    for (int i = 1; i <= m; ++i) factors[std::size_t(i) - 1] = {1.0, rk[std::size_t(i) - 1], true};
    if (m == 0) return {1.0, true, {}};

    const auto degree_sign = [](int i) { return (i % 2 != 0) ? -1.0 : 1.0; };

    bool all_const = true;
    for (const LaurentMatrix& a : folded)
        for (int r = 0; r < a.rows() && all_const; ++r)
            for (int col = 0; col < a.cols(); ++col) {
                const LaurentPoly& p = a.at(r, col);
                // monomials z^k with k != 0 still rotate with the angle
                if (!p.is_zero() && (p.lo() != 0 || p.hi() != 0)) {
                    all_const = false;
                    break;
                }
            }

    if (all_const) {
        // Constant symbols: a single node is already exact.
        double total = 0.0;
        for (int i = 1; i <= m; ++i) {
            if (rk[std::size_t(i) - 1] == 0) continue;
            const quad::NodeSweep s =
                quad::sweep(folded[std::size_t(i) - 1], rk[std::size_t(i) - 1], 1, 0.0, false);
            const double logdet = 0.5 * s.w[0];
            factors[std::size_t(i) - 1].value = std::exp(logdet);
            total += degree_sign(i) * logdet;
        }
        return {std::exp(total), true, factors};
    }

    // Every boundary is sampled on the same node ladder so that singular
    // factors shared between consecutive degrees cancel in the alternating
    // sum before extrapolation.
    const auto level_logs = [&](long nodes) {
        std::vector<double> logs(std::size_t(m), 0.0);
        for (int i = 1; i <= m; ++i)
            if (rk[std::size_t(i) - 1] > 0)
                logs[std::size_t(i) - 1] =
                    quad::level_estimate(folded[std::size_t(i) - 1], rk[std::size_t(i) - 1],
                                         nodes, settings.parallel)
                        .log_value;
        return logs;
    };
    const auto signed_sum = [&](const std::vector<double>& logs) {
        double s = 0.0;
        for (int i = 1; i <= m; ++i) s += degree_sign(i) * logs[std::size_t(i) - 1];
        return s;
    };

    const long base = settings.node_count;
    std::vector<double> logs_prev = level_logs(base);
    std::vector<double> logs_cur = level_logs(2 * base);
    double rich_prev = 2.0 * signed_sum(logs_cur) - signed_sum(logs_prev);
    for (int k = 2; k <= settings.refinement_limit; ++k) {
        const long nodes = base << k;
        if (nodes > quad::kNodeBudget) break;
        const std::vector<double> logs_next = level_logs(nodes);
        const double rich = 2.0 * signed_sum(logs_next) - signed_sum(logs_cur);
        if (std::abs(rich - rich_prev) <= settings.target_tolerance) {
            for (int i = 1; i <= m; ++i)
                if (rk[std::size_t(i) - 1] > 0)
                    factors[std::size_t(i) - 1].value = std::exp(
                        2.0 * logs_next[std::size_t(i) - 1] - logs_cur[std::size_t(i) - 1]);
            return {std::exp(rich), true, factors};
        }
        logs_cur = logs_next;
        rich_prev = rich;
    }
    throw NonConvergence("torsion quadrature exhausted its refinement budget",
                         std::exp(rich_prev), std::exp(signed_sum(logs_cur)));
}

BasedChainComplex act_euler(const BasedChainComplex& c, int degree, int index,
                            const Monomial& g) {
    check_monomial(g);
    if (degree < 0 || degree > c.top_degree())
        throw std::out_of_range("act_euler degree out of range");
    if (index < 0 || index >= c.rank(degree))
        throw std::out_of_range("act_euler basis index out of range");
    std::vector<std::vector<Monomial>> lifts;
    lifts.reserve(std::size_t(c.top_degree()) + 1);
    for (int i = 0; i <= c.top_degree(); ++i) lifts.push_back(c.lifts(i));
    const Monomial twist = (degree % 2 == 0) ? g : monomial_inverse(g);
    lifts[std::size_t(degree)][std::size_t(index)] =
        monomial_mul(lifts[std::size_t(degree)][std::size_t(index)], twist);
    std::vector<LaurentMatrix> boundaries;
    boundaries.reserve(std::size_t(c.top_degree()));
    for (int i = 1; i <= c.top_degree(); ++i) boundaries.push_back(c.boundary(i));
    return BasedChainComplex::create(c.ranks(), std::move(boundaries), std::move(lifts), c.t());
}

BasedChainComplex dualize(const BasedChainComplex& c) {
    const int m = c.top_degree();
    std::vector<int> ranks(static_cast<std::size_t>(m) + 1);
    for (int j = 0; j <= m; ++j) ranks[std::size_t(j)] = c.rank(m - j);
    std::vector<LaurentMatrix> boundaries;
    boundaries.reserve(std::size_t(m));
    for (int j = 1; j <= m; ++j) {
        LaurentMatrix a = adjoint(c.folded_boundary(m - j + 1));
        const double sign = ((m - j + 1) % 2 == 0) ? 1.0 : -1.0;
        if (sign < 0)
            for (int r = 0; r < a.rows(); ++r)
                for (int col = 0; col < a.cols(); ++col) a.at(r, col) = -a.at(r, col);
        boundaries.push_back(std::move(a));
    }
    return BasedChainComplex::create(std::move(ranks), std::move(boundaries), {}, 1.0 / c.t());
}

LaurentPoly dual_representation(const LaurentPoly& image) {
    if (image.is_zero() || image.terms().size() != 1)
        throw std::invalid_argument("dual_representation expects a nonzero monomial");
    const auto& [k, coef] = image.terms().front();
    return LaurentPoly::monomial(k, Complex(1.0) / std::conj(coef));
}

BasedChainComplex torus_complex(long a, long b, double t) {
    if (a == 0 && b == 0)
        throw NotAdmissible("torus direction (0,0) has no admissible homology class");
    if (!(t > 0.0)) throw std::invalid_argument("chain parameter t must be positive");
    const LaurentPoly one = LaurentPoly::constant(1.0);
    const LaurentPoly x = LaurentPoly::monomial(int(a), std::pow(t, double(a)));
    const LaurentPoly y = LaurentPoly::monomial(int(b), std::pow(t, double(b)));
    LaurentMatrix a2(1, 2);
    a2.at(0, 0) = y - one;
    a2.at(0, 1) = one - x;
    LaurentMatrix a1(2, 1);
    a1.at(0, 0) = one - x;
    a1.at(1, 0) = one - y;
    return BasedChainComplex::create({1, 2, 1}, {std::move(a1), std::move(a2)}, {}, t);
}

BasedChainComplex direct_sum(const BasedChainComplex& a, const BasedChainComplex& b) {
    if (a.t() != b.t())
        throw std::invalid_argument("direct_sum requires matching chain parameters");
    const int m = std::max(a.top_degree(), b.top_degree());
    const auto rank_of = [m](const BasedChainComplex& c, int i) {
        return (i <= c.top_degree()) ? c.rank(i) : 0;
    };
    std::vector<int> ranks(std::size_t(m) + 1, 0);
    std::vector<std::vector<Monomial>> lifts(std::size_t(m) + 1);
    for (int i = 0; i <= m; ++i) {
        ranks[std::size_t(i)] = rank_of(a, i) + rank_of(b, i);
        std::vector<Monomial>& l = lifts[std::size_t(i)];
        if (i <= a.top_degree()) l.insert(l.end(), a.lifts(i).begin(), a.lifts(i).end());
        if (i <= b.top_degree()) l.insert(l.end(), b.lifts(i).begin(), b.lifts(i).end());
    }
    std::vector<LaurentMatrix> boundaries;
    for (int i = 1; i <= m; ++i) {
        LaurentMatrix block(ranks[std::size_t(i)], ranks[std::size_t(i) - 1]);
        const int ra = rank_of(a, i);
        const int ca = rank_of(a, i - 1);
        if (i <= a.top_degree()) {
            const LaurentMatrix& ba = a.boundary(i);
            for (int r = 0; r < ba.rows(); ++r)
                for (int c2 = 0; c2 < ba.cols(); ++c2) block.at(r, c2) = ba.at(r, c2);
        }
        if (i <= b.top_degree()) {
            const LaurentMatrix& bb = b.boundary(i);
            for (int r = 0; r < bb.rows(); ++r)
                for (int c2 = 0; c2 < bb.cols(); ++c2) block.at(ra + r, ca + c2) = bb.at(r, c2);
        }
        boundaries.push_back(std::move(block));
    }
    return BasedChainComplex::create(std::move(ranks), std::move(boundaries), std::move(lifts),
                                     a.t());
}

} // namespace torsionlab
