#include "torsionlab/groupring.hpp"

#include "torsionlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace torsionlab {

namespace {

// z^n for integer n of either sign.
Complex ipow(Complex z, long n) {
    if (n < 0) return Complex(1.0) / ipow(z, -n);
    Complex acc = 1.0, base = z;
    while (n > 0) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

} // namespace

GroupWord GroupWord::generator(int gen, int exp) {
    return reduce({Letter{gen, exp}});
}

GroupWord GroupWord::reduce(std::vector<Letter> raw) {
    GroupWord w;
    for (const Letter& l : raw) {
        if (l.exp == 0) continue;
        if (!w.letters_.empty() && w.letters_.back().gen == l.gen) {
            w.letters_.back().exp += l.exp;
            if (w.letters_.back().exp == 0) w.letters_.pop_back();
        } else {
            w.letters_.push_back(l);
        }
    }
    return w;
}

GroupWord GroupWord::inverse() const {
    std::vector<Letter> rev(letters_.rbegin(), letters_.rend());
    for (Letter& l : rev) l.exp = -l.exp;
    GroupWord w;
    w.letters_ = std::move(rev); // reversal of a reduced word is reduced
    return w;
}

GroupWord GroupWord::operator*(const GroupWord& rhs) const {
    std::vector<Letter> cat = letters_;
    cat.insert(cat.end(), rhs.letters_.begin(), rhs.letters_.end());
    return reduce(std::move(cat));
}

std::string GroupWord::str() const {
    if (letters_.empty()) return "1";
    std::ostringstream os;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (i) os << ".";
        os << "g" << letters_[i].gen;
        if (letters_[i].exp != 1) os << "^" << letters_[i].exp;
    }
    return os.str();
}

RingElement RingElement::word(const GroupWord& w, Complex c) {
    RingElement e;
    e.add_term(w, c);
    return e;
}

void RingElement::add_term(const GroupWord& w, Complex c) {
    auto it = terms_.find(w);
    if (it == terms_.end()) {
        if (std::abs(c) >= kCoeffEps) terms_.emplace(w, c);
        return;
    }
    it->second += c;
    if (std::abs(it->second) < kCoeffEps) terms_.erase(it);
}

RingElement RingElement::operator+(const RingElement& rhs) const {
    RingElement out = *this;
    for (const auto& [w, c] : rhs.terms_) out.add_term(w, c);
    return out;
}

RingElement RingElement::operator-(const RingElement& rhs) const {
    RingElement out = *this;
    for (const auto& [w, c] : rhs.terms_) out.add_term(w, -c);
    return out;
}

RingElement RingElement::operator*(const RingElement& rhs) const {
    RingElement out;
    for (const auto& [w1, c1] : terms_)
        for (const auto& [w2, c2] : rhs.terms_) out.add_term(w1 * w2, c1 * c2);
    return out;
}

RingElement RingElement::operator*(Complex c) const {
    RingElement out;
    for (const auto& [w, cw] : terms_) out.add_term(w, cw * c);
    return out;
}

RingElement RingElement::involve() const {
    RingElement out;
    for (const auto& [w, c] : terms_) out.add_term(w.inverse(), std::conj(c));
    return out;
}

std::string RingElement::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : terms_) {
        if (!first) os << " + ";
        os << "(" << c.real();
        if (c.imag() != 0.0) os << (c.imag() > 0 ? "+" : "") << c.imag() << "i";
        os << ")*" << w.str();
        first = false;
    }
    return os.str();
}

LaurentPoly LaurentPoly::monomial(int k, Complex c) {
    return from_terms({{k, c}});
}

LaurentPoly LaurentPoly::from_terms(std::vector<std::pair<int, Complex>> terms) {
    LaurentPoly p;
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [k, c] : terms) {
        if (!p.terms_.empty() && p.terms_.back().first == k)
            p.terms_.back().second += c;
        else
            p.terms_.emplace_back(k, c);
    }
    p.canonicalize();
    return p;
}

void LaurentPoly::canonicalize() {
    std::erase_if(terms_, [](const auto& t) { return std::abs(t.second) < kCoeffEps; });
}

int LaurentPoly::lo() const {
    if (terms_.empty()) throw InvariantViolation("lo() of zero polynomial");
    return terms_.front().first;
}

int LaurentPoly::hi() const {
    if (terms_.empty()) throw InvariantViolation("hi() of zero polynomial");
    return terms_.back().first;
}

Complex LaurentPoly::coeff(int k) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), k,
                               [](const auto& t, int key) { return t.first < key; });
    if (it != terms_.end() && it->first == k) return it->second;
    return 0.0;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& rhs) const {
    std::vector<std::pair<int, Complex>> merged = terms_;
    merged.insert(merged.end(), rhs.terms_.begin(), rhs.terms_.end());
    return from_terms(std::move(merged));
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& rhs) const {
    return *this + rhs * Complex(-1.0);
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& rhs) const {
    std::vector<std::pair<int, Complex>> prod;
    prod.reserve(terms_.size() * rhs.terms_.size());
    for (const auto& [k1, c1] : terms_)
        for (const auto& [k2, c2] : rhs.terms_) prod.emplace_back(k1 + k2, c1 * c2);
    return from_terms(std::move(prod));
}

LaurentPoly LaurentPoly::operator*(Complex c) const {
    LaurentPoly out = *this;
    for (auto& [k, ck] : out.terms_) ck *= c;
    out.canonicalize();
    return out;
}

LaurentPoly LaurentPoly::involve() const {
    LaurentPoly out;
    out.terms_.assign(terms_.rbegin(), terms_.rend());
    for (auto& [k, c] : out.terms_) {
        k = -k;
        c = std::conj(c);
    }
    return out;
}

LaurentPoly LaurentPoly::shifted(int k) const {
    LaurentPoly out = *this;
    for (auto& [e, c] : out.terms_) e += k;
    return out;
}

Complex LaurentPoly::eval(Complex z) const {
    if (terms_.empty()) return 0.0;
    // Sparse Horner scheme walking the support from the top exponent down.
    Complex acc = 0.0;
    int prev = terms_.back().first;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        acc *= ipow(z, prev - it->first);
        acc += it->second;
        prev = it->first;
    }
    return acc * ipow(z, prev);
}

double LaurentPoly::coeff_l1() const {
    double s = 0.0;
    for (const auto& [k, c] : terms_) s += std::abs(c);
    return s;
}

std::string LaurentPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first) os << " + ";
        os << "(" << c.real();
        if (c.imag() != 0.0) os << (c.imag() > 0 ? "+" : "") << c.imag() << "i";
        os << ")";
        if (k != 0) os << "*z^" << k;
        first = false;
    }
    return os.str();
}

long AbelianizationMap::of(const GroupWord& w) const {
    long total = 0;
    for (const Letter& l : w.letters()) {
        if (l.gen < 0 || std::size_t(l.gen) >= images.size())
            throw InvariantViolation("abelianization image missing for generator g" +
                                     std::to_string(l.gen));
        total += images[l.gen] * long(l.exp);
    }
    return total;
}

LaurentPoly specialize(const RingElement& a, const AbelianizationMap& phi, double t,
                       bool scalar_only) {
    if (!(t > 0.0)) throw std::invalid_argument("specialization parameter t must be positive");
    std::vector<std::pair<int, Complex>> terms;
    for (const auto& [w, c] : a.terms()) {
        long k = phi.of(w);
        Complex scaled = c * std::pow(t, double(k));
        terms.emplace_back(scalar_only ? 0 : int(k), scaled);
    }
    return LaurentPoly::from_terms(std::move(terms));
}

LaurentMatrix specialize(const GroupMatrix& m, const AbelianizationMap& phi, double t,
                         bool scalar_only) {
    LaurentMatrix out(m.rows(), m.cols());
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            out.at(r, c) = specialize(m.at(r, c), phi, t, scalar_only);
    return out;
}

LaurentMatrix adjoint(const LaurentMatrix& m) {
    LaurentMatrix out(m.cols(), m.rows());
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) out.at(c, r) = m.at(r, c).involve();
    return out;
}

double max_coeff(const LaurentMatrix& m) {
    double mx = 0.0;
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            for (const auto& [k, coef] : m.at(r, c).terms())
                mx = std::max(mx, std::abs(coef));
    return mx;
}

double coeff_l1(const LaurentMatrix& m) {
    double s = 0.0;
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) s += m.at(r, c).coeff_l1();
    return s;
}

} // namespace torsionlab
