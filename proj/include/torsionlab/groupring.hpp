#pragma once

// Words in a finitely generated free group, finite complex group-ring
// elements, and Laurent polynomials in one variable.  These are the raw
// materials for Fox matrices and their specializations.

#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace torsionlab {

using Complex = std::complex<double>;

// Coefficients with magnitude below this are dropped during canonicalization.
inline constexpr double kCoeffEps = 1e-14;

// One syllable g_i^e of a word, e != 0.
struct Letter {
    int gen;
    int exp;
    friend bool operator==(const Letter&, const Letter&) = default;
    friend auto operator<=>(const Letter&, const Letter&) = default;
};

// Freely reduced word in generators g_0, g_1, ...  Immutable after build.
class GroupWord {
public:
    GroupWord() = default; // identity

    static GroupWord generator(int gen, int exp = 1);
    // Free reduction: merge adjacent syllables with equal generator, drop
    // syllables whose exponents cancel.
    static GroupWord reduce(std::vector<Letter> raw);

    bool is_identity() const { return letters_.empty(); }
    const std::vector<Letter>& letters() const { return letters_; }

    GroupWord inverse() const;
    GroupWord operator*(const GroupWord& rhs) const;

    friend bool operator==(const GroupWord&, const GroupWord&) = default;
    friend auto operator<=>(const GroupWord&, const GroupWord&) = default;

    std::string str() const; // e.g. "g0.g1^-2", "1" for the identity

private:
    std::vector<Letter> letters_;
};

// Finite formal sum  sum_w c_w * w  with complex coefficients.
class RingElement {
public:
    RingElement() = default; // zero

    static RingElement zero() { return {}; }
    static RingElement one() { return word(GroupWord{}); }
    static RingElement word(const GroupWord& w, Complex c = 1.0);

    bool is_zero() const { return terms_.empty(); }
    const std::map<GroupWord, Complex>& terms() const { return terms_; }

    RingElement operator+(const RingElement& rhs) const;
    RingElement operator-(const RingElement& rhs) const;
    RingElement operator*(const RingElement& rhs) const;
    RingElement operator*(Complex c) const;
    RingElement operator-() const { return *this * Complex(-1.0); }

    // Anti-automorphism: conjugate coefficients and invert each word.
    RingElement involve() const;

    std::string str() const;

private:
    void add_term(const GroupWord& w, Complex c);
    std::map<GroupWord, Complex> terms_;
};

// Element of C[z, z^-1], kept sorted by exponent with near-zero coefficients
// stripped.  The zero polynomial has an empty support.
class LaurentPoly {
public:
    LaurentPoly() = default; // zero

    static LaurentPoly zero() { return {}; }
    static LaurentPoly constant(Complex c) { return monomial(0, c); }
    static LaurentPoly monomial(int k, Complex c = 1.0);
    static LaurentPoly from_terms(std::vector<std::pair<int, Complex>> terms);

    bool is_zero() const { return terms_.empty(); }
    // Lowest / highest exponent of the support; require a nonzero polynomial.
    int lo() const;
    int hi() const;
    // hi - lo for nonzero polynomials, 0 for the zero polynomial.
    int span() const { return terms_.empty() ? 0 : hi() - lo(); }
    Complex coeff(int k) const;
    const std::vector<std::pair<int, Complex>>& terms() const { return terms_; }

    LaurentPoly operator+(const LaurentPoly& rhs) const;
    LaurentPoly operator-(const LaurentPoly& rhs) const;
    LaurentPoly operator*(const LaurentPoly& rhs) const;
    LaurentPoly operator*(Complex c) const;
    LaurentPoly operator-() const { return *this * Complex(-1.0); }

    // z^k |-> z^-k with conjugated coefficients.
    LaurentPoly involve() const;
    // Multiply by z^k.
    LaurentPoly shifted(int k) const;

    Complex eval(Complex z) const;
    // Sum of coefficient magnitudes; bounds |eval| on the unit circle.
    double coeff_l1() const;

    std::string str() const;

private:
    void canonicalize();
    std::vector<std::pair<int, Complex>> terms_; // sorted by exponent
};

// Homomorphism F -> Z recorded by generator images.
struct AbelianizationMap {
    std::vector<long> images;
    long of(const GroupWord& w) const;
};

// Ring homomorphism determined by g |-> t^phi(g) z^phi(g) for real t > 0.
// With scalar_only the z factor is dropped, i.e. z is evaluated at 1.
LaurentPoly specialize(const RingElement& a, const AbelianizationMap& phi, double t,
                       bool scalar_only = false);

// Dense row-major matrix over an arbitrary coefficient type.  Row vectors act
// on the left: a map C^r -> C^c is an r x c matrix.
template <typename T>
class RingMatrix {
public:
    RingMatrix() : rows_(0), cols_(0) {}
    RingMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    T& at(int r, int c) { return data_[std::size_t(r) * cols_ + c]; }
    const T& at(int r, int c) const { return data_[std::size_t(r) * cols_ + c]; }

    RingMatrix<T> transpose() const {
        RingMatrix<T> out(cols_, rows_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c) out.at(c, r) = at(r, c);
        return out;
    }

    RingMatrix<T> operator*(const RingMatrix<T>& rhs) const {
        RingMatrix<T> out(rows_, rhs.cols());
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < rhs.cols(); ++c) {
                T acc{};
                for (int k = 0; k < cols_; ++k) acc = acc + at(r, k) * rhs.at(k, c);
                out.at(r, c) = acc;
            }
        return out;
    }

private:
    int rows_, cols_;
    std::vector<T> data_;
};

using LaurentMatrix = RingMatrix<LaurentPoly>;
using GroupMatrix = RingMatrix<RingElement>;

// Entrywise specialization of a group-ring matrix.
LaurentMatrix specialize(const GroupMatrix& m, const AbelianizationMap& phi, double t,
                         bool scalar_only = false);

// Entrywise involution combined with transpose: (A^*)_{ij} = involve(A_{ji}).
LaurentMatrix adjoint(const LaurentMatrix& m);

// Largest coefficient magnitude over all entries (0 for empty matrices).
double max_coeff(const LaurentMatrix& m);
// Sum over entries of coefficient L1 norms.
double coeff_l1(const LaurentMatrix& m);

} // namespace torsionlab
