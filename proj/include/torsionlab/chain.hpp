#pragma once

// Finite based chain complexes of free l^2(Z)-modules, given by Laurent
// boundary matrices acting on row vectors, together with the alternating
// determinant that defines their torsion.  Each basis element carries a
// monomial lift (a sign and a z-power) so that changes of Euler structure
// act on the complex without touching the underlying matrices.

#include "torsionlab/fkdet.hpp"
#include "torsionlab/groupring.hpp"

#include <vector>

namespace torsionlab {

// Decoration +-z^k attached to one basis element.
struct Monomial {
    int sign = 1; // +1 or -1
    int exponent = 0;
    friend bool operator==(const Monomial&, const Monomial&) = default;
};

Monomial monomial_mul(const Monomial& a, const Monomial& b);
Monomial monomial_inverse(const Monomial& a);

struct TorsionValue {
    double value = 0.0;
    bool acyclic = false;
    std::vector<FkResult> factors; // factors[i-1] belongs to the boundary A_i
};

// C_m -> C_{m-1} -> ... -> C_0 with A_i : C_i -> C_{i-1} an n_i x n_{i-1}
// matrix (row-vector convention), so composability reads A_i * A_{i-1} = 0.
class BasedChainComplex {
public:
    // lifts may be empty (all decorations trivial) or must match the ranks.
    // t is the positive parameter at which monomial decorations are folded
    // into the boundaries.  Throws InvariantViolation when shapes mismatch or
    // consecutive boundaries fail to compose to zero.
    static BasedChainComplex create(std::vector<int> ranks,
                                    std::vector<LaurentMatrix> boundaries,
                                    std::vector<std::vector<Monomial>> lifts = {},
                                    double t = 1.0);

    int top_degree() const { return int(ranks_.size()) - 1; }
    int rank(int degree) const { return ranks_.at(std::size_t(degree)); }
    const std::vector<int>& ranks() const { return ranks_; }
    // A_i for 1 <= i <= top_degree().
    const LaurentMatrix& boundary(int i) const { return boundaries_.at(std::size_t(i) - 1); }
    const std::vector<Monomial>& lifts(int degree) const {
        return lifts_.at(std::size_t(degree));
    }
    double t() const { return t_; }

    // A_i with the degree-i lifts folded into its rows and the degree-(i-1)
    // lifts divided out of its columns, both evaluated at the stored t.
    LaurentMatrix folded_boundary(int i) const;

private:
    std::vector<int> ranks_;
    std::vector<LaurentMatrix> boundaries_;
    std::vector<std::vector<Monomial>> lifts_;
    double t_ = 1.0;
};

// b_i = n_i - rank(A_i) - rank(A_{i+1}) from generic symbol ranks.
std::vector<int> l2_betti_generic(const BasedChainComplex& c);

// prod_i det(A_i)^{(-1)^i} over the folded boundaries, or value 0 with
// acyclic=false when some generic Betti number is nonzero.  All boundaries
// share their quadrature node sets level by level, so common singular factors
// cancel exactly in the alternating sum before extrapolation.
TorsionValue torsion(const BasedChainComplex& c, const QuadratureSettings& settings = {});

// Multiplies the lift of the given basis element by g^{(-1)^degree}.
BasedChainComplex act_euler(const BasedChainComplex& c, int degree, int index,
                            const Monomial& g);

// The dual complex: degree j has rank n_{m-j} and boundary
// A?_j = (-1)^{m-j+1} * adjoint(A_{m-j+1}) over the folded matrices.  The
// result carries trivial lifts and parameter 1/t.
BasedChainComplex dualize(const BasedChainComplex& c);

// Image of a monomial c*z^k under the dual representation: (1/conj(c))*z^k.
LaurentPoly dual_representation(const LaurentPoly& image);

// The cellular complex of the exterior of a torus knot-space circle with
// homology direction (a, b): ranks (1, 2, 1), boundaries built from
// x = t^a z^a and y = t^b z^b.  (0, 0) is rejected as non-admissible.
BasedChainComplex torus_complex(long a, long b, double t);

// Degreewise direct sum (block-diagonal boundaries).  Complexes of different
// length are padded with zero ranks at the top; parameters t must agree.
BasedChainComplex direct_sum(const BasedChainComplex& a, const BasedChainComplex& b);

} // namespace torsionlab
