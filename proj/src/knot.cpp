#include "torsionlab/knot.hpp"

#include "torsionlab/errors.hpp"
#include "torsionlab/fkdet.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace torsionlab {

namespace {

struct Scanner {
    const std::string& text;
    std::size_t pos = 0;

    void skip() {
        while (pos < text.size() &&
               (std::isspace(static_cast<unsigned char>(text[pos])) || text[pos] == ','))
            ++pos;
    }
    bool eof() {
        skip();
        return pos >= text.size();
    }
    char peek() {
        skip();
        return pos < text.size() ? text[pos] : '\0';
    }
    void expect(char ch) {
        skip();
        if (pos >= text.size() || text[pos] != ch)
            fail(std::string("expected '") + ch + "'");
        ++pos;
    }
    bool try_consume(char ch) {
        skip();
        if (pos < text.size() && text[pos] == ch) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect_word(const char* w) {
        skip();
        for (const char* p = w; *p; ++p, ++pos)
            if (pos >= text.size() ||
                std::tolower(static_cast<unsigned char>(text[pos])) !=
                    std::tolower(static_cast<unsigned char>(*p)))
                fail(std::string("expected '") + w + "'");
    }
    long integer() {
        skip();
        const std::size_t start = pos;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
        std::size_t digits = 0;
        long value = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            value = value * 10 + (text[pos] - '0');
            if (value > 1000000) fail("integer literal too large");
            ++pos;
            ++digits;
        }
        if (digits == 0) fail("expected an integer");
        return text[start] == '-' ? -value : value;
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError(msg + " at position " + std::to_string(pos), pos);
    }
};

void check_braid(const BraidWord& b) {
    if (b.strands < 1) throw ParseError("braid needs at least one strand");
    for (int k : b.letters) {
        if (k == 0 || std::abs(k) > b.strands - 1)
            throw ParseError("braid letter s" + std::to_string(std::abs(k)) +
                             " out of range for " + std::to_string(b.strands) + " strands");
    }
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(std::size_t(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[std::size_t(x)] != x) {
            parent[std::size_t(x)] = parent[std::size_t(parent[std::size_t(x)])];
            x = parent[std::size_t(x)];
        }
        return x;
    }
    void unite(int a, int b) { parent[std::size_t(find(a))] = find(b); }
};

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    return s;
}

} // namespace

BraidWord parse_braid(const std::string& text) {
    Scanner sc{text};
    sc.expect_word("strands");
    sc.expect('=');
    const long n = sc.integer();
    if (n < 1 || n > 64) sc.fail("strand count out of range");
    sc.expect(';');
    BraidWord b;
    b.strands = int(n);
    while (!sc.eof()) {
        sc.expect_word("s");
        const long idx = sc.integer();
        if (idx < 1) sc.fail("braid generator index must be positive");
        if (idx > n - 1)
            sc.fail("braid letter s" + std::to_string(idx) + " out of range for " +
                    std::to_string(n) + " strands");
        int letter = int(idx);
        if (sc.try_consume('^')) {
            const long e = sc.integer();
            if (e == -1)
                letter = -letter;
            else if (e != 1)
                sc.fail("braid generator exponent must be 1 or -1");
        }
        b.letters.push_back(letter);
    }
    check_braid(b);
    return b;
}

std::string print_braid(const BraidWord& b) {
    std::ostringstream os;
    os << "strands=" << b.strands << ";";
    for (int k : b.letters) {
        os << " s" << std::abs(k);
        if (k < 0) os << "^-1";
    }
    return os.str();
}

PDCode parse_pd(const std::string& text) {
    Scanner sc{text};
    sc.expect_word("PD");
    sc.expect('[');
    PDCode pd;
    if (!sc.try_consume(']')) {
        for (;;) {
            sc.expect_word("X");
            sc.expect('[');
            Crossing x;
            for (int i = 0; i < 4; ++i) {
                const long v = sc.integer();
                if (v < 1) sc.fail("edge labels must be positive");
                x.slots[std::size_t(i)] = int(v);
            }
            sc.expect(']');
            pd.crossings.push_back(x);
            if (sc.try_consume(']')) break;
            if (sc.eof()) sc.fail("unterminated PD code");
        }
    }
    if (!sc.eof()) sc.fail("trailing input after PD code");

    const int c = int(pd.crossings.size());
    pd.edges = 2 * c;
    std::vector<int> uses(std::size_t(pd.edges) + 1, 0);
    for (const Crossing& x : pd.crossings)
        for (int v : x.slots) {
            if (v > pd.edges)
                throw ParseError("edge label " + std::to_string(v) + " exceeds " +
                                 std::to_string(pd.edges));
            ++uses[std::size_t(v)];
        }
    for (int e = 1; e <= pd.edges; ++e)
        if (uses[std::size_t(e)] != 2)
            throw ParseError("edge label " + std::to_string(e) + " used " +
                             std::to_string(uses[std::size_t(e)]) + " times, expected 2");
    return pd;
}

std::string print_pd(const PDCode& pd) {
    std::ostringstream os;
    os << "PD[";
    for (std::size_t i = 0; i < pd.crossings.size(); ++i) {
        if (i) os << ",";
        const auto& s = pd.crossings[i].slots;
        os << "X[" << s[0] << "," << s[1] << "," << s[2] << "," << s[3] << "]";
    }
    os << "]";
    return os.str();
}

PDCode braid_to_pd(const BraidWord& b) {
    check_braid(b);
    const int c = int(b.letters.size());
    if (c == 0) {
        // An empty word closes to disjoint circles; after destabilizing the
        // unused strands the diagram is the 0-crossing unknot.
        return PDCode{0, {}};
    }

    // The closure permutation must be a single cycle, otherwise this is a link.
    std::vector<int> perm(std::size_t(b.strands));
    std::iota(perm.begin(), perm.end(), 0);
    for (int k : b.letters) {
        const int s = std::abs(k) - 1;
        std::swap(perm[std::size_t(s)], perm[std::size_t(s) + 1]);
    }
    {
        std::vector<bool> seen(std::size_t(b.strands), false);
        int cycles = 0;
        for (int start = 0; start < b.strands; ++start) {
            if (seen[std::size_t(start)]) continue;
            ++cycles;
            int p = start;
            while (!seen[std::size_t(p)]) {
                seen[std::size_t(p)] = true;
                // perm maps entry positions left-to-right; follow the strand
                p = int(std::find(perm.begin(), perm.end(), p) - perm.begin());
            }
        }
        if (cycles != 1)
            throw NotAdmissible("braid closure has " + std::to_string(cycles) +
                                " components; a knot is required");
    }

    // Walk the closure once, labelling the 2c diagram edges in traversal
    // order.  Each crossing is visited once on its over-strand and once on
    // its under-strand.
    PDCode pd;
    pd.edges = 2 * c;
    pd.crossings.assign(std::size_t(c), Crossing{});
    int pos = 1;
    int edge = 1;
    int visits = 0;
    int idx = 0;
    long guard = 0;
    while (visits < 2 * c) {
        if (++guard > long(2 * c + 2) * (c + 2) + 16)
            throw InvariantViolation("braid walk failed to close up");
        const int k = b.letters[std::size_t(idx)];
        const int s = std::abs(k);
        if (pos == s || pos == s + 1) {
            const bool over = (k > 0 && pos == s) || (k < 0 && pos == s + 1);
            const int in = edge;
            const int out = (edge == 2 * c) ? 1 : edge + 1;
            auto& slots = pd.crossings[std::size_t(idx)].slots;
            if (over) {
                if (k > 0) { // positive: over-strand occupies b -> d
                    slots[1] = in;
                    slots[3] = out;
                } else { // negative: over-strand occupies d -> b
                    slots[3] = in;
                    slots[1] = out;
                }
            } else {
                slots[0] = in;
                slots[2] = out;
            }
            pos = (pos == s) ? s + 1 : s;
            edge = out;
            ++visits;
        }
        idx = (idx + 1) % c; // wrapping is the closure arc; the edge continues
    }
    return pd;
}

WirtingerPresentation wirtinger(const PDCode& pd) {
    const int c = int(pd.crossings.size());
    WirtingerPresentation w;
    if (c == 0) {
        w.generators = 1;
        w.meridian = 0;
        w.phi.images = {1};
        return w;
    }
    const int edges = 2 * c;
    if (pd.edges != edges) throw InvariantViolation("PD edge count must be twice the crossings");

    UnionFind arcs(edges + 1);
    for (const Crossing& x : pd.crossings) arcs.unite(x.slots[1], x.slots[3]);

    // Arc identifiers ordered by the smallest edge they contain; e ascends,
    // so the first edge seen for a root is its minimum.
    std::map<int, int> min_edge; // root -> smallest member
    for (int e = 1; e <= edges; ++e) min_edge.try_emplace(arcs.find(e), e);
    std::vector<std::pair<int, int>> ordered(min_edge.begin(), min_edge.end());
    std::sort(ordered.begin(), ordered.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    if (int(ordered.size()) != c)
        throw InvariantViolation("diagram has " + std::to_string(ordered.size()) +
                                 " arcs for " + std::to_string(c) + " crossings");
    std::map<int, int> arc_id;
    for (std::size_t i = 0; i < ordered.size(); ++i) arc_id[ordered[i].first] = int(i);
    const auto arc_of = [&](int e) { return arc_id.at(arcs.find(e)); };

    std::vector<GroupWord> relators;
    for (const Crossing& x : pd.crossings) {
        const int a = x.slots[0], bb = x.slots[1], cc = x.slots[2], dd = x.slots[3];
        if (cc != a % edges + 1)
            throw InvariantViolation("under-strand labels of X[" + std::to_string(a) + "," +
                                     std::to_string(bb) + "," + std::to_string(cc) + "," +
                                     std::to_string(dd) + "] are not consecutive");
        const bool pos_type = dd == bb % edges + 1;
        const bool neg_type = bb == dd % edges + 1;
        if (!pos_type && !neg_type)
            throw InvariantViolation("over-strand labels of a crossing are not consecutive");
        const int sign = (pos_type || c == 1) ? 1 : -1; // one-crossing codes default positive
        const int over = arc_of(bb);
        const int in_arc = arc_of(a);
        const int out_arc = arc_of(cc);
        relators.push_back(GroupWord::reduce({Letter{over, sign}, Letter{in_arc, 1},
                                              Letter{over, -sign}, Letter{out_arc, -1}}));
    }
    relators.pop_back(); // the last relator follows from the others

    w.generators = c;
    w.relators = std::move(relators);
    w.meridian = arc_of(1);
    w.phi.images.assign(std::size_t(c), 1);
    return w;
}

RingElement fox_derivative(const GroupWord& w, int gen) {
    RingElement result;
    GroupWord prefix;
    for (const Letter& l : w.letters()) {
        if (l.gen == gen) {
            RingElement partial;
            if (l.exp > 0) {
                for (int j = 0; j < l.exp; ++j)
                    partial = partial + RingElement::word(GroupWord::generator(gen, j));
            } else {
                for (int j = 1; j <= -l.exp; ++j)
                    partial = partial - RingElement::word(GroupWord::generator(gen, -j));
            }
            result = result + RingElement::word(prefix) * partial;
        }
        prefix = prefix * GroupWord::generator(l.gen, l.exp);
    }
    return result;
}

BasedChainComplex presentation_complex(const WirtingerPresentation& p, double t) {
    const int n = p.generators;
    const int r = int(p.relators.size());
    GroupMatrix fox(r, n);
    for (int i = 0; i < r; ++i)
        for (int g = 0; g < n; ++g) fox.at(i, g) = fox_derivative(p.relators[std::size_t(i)], g);
    LaurentMatrix a2 = specialize(fox, p.phi, t);
    LaurentMatrix a1(n, 1);
    const LaurentPoly meridian_minus_one =
        LaurentPoly::monomial(1, t) - LaurentPoly::constant(1.0);
    for (int g = 0; g < n; ++g) a1.at(g, 0) = meridian_minus_one;
    return BasedChainComplex::create({1, n, r}, {std::move(a1), std::move(a2)}, {}, t);
}

LaurentPoly alexander_polynomial(const WirtingerPresentation& p) {
    const int n = p.generators;
    const int r = int(p.relators.size());
    if (r != n - 1)
        throw InvariantViolation("presentation is not deficiency one");
    if (p.meridian < 0 || p.meridian >= n)
        throw InvariantViolation("meridian index out of range");
    GroupMatrix fox(r, n);
    for (int i = 0; i < r; ++i)
        for (int g = 0; g < n; ++g) fox.at(i, g) = fox_derivative(p.relators[std::size_t(i)], g);
    const LaurentMatrix full = specialize(fox, p.phi, 1.0);
    LaurentMatrix minor(r, r);
    for (int i = 0; i < r; ++i) {
        int cc = 0;
        for (int g = 0; g < n; ++g) {
            if (g == p.meridian) continue;
            minor.at(i, cc++) = full.at(i, g);
        }
    }
    LaurentPoly det = laurent_determinant(minor);
    if (det.is_zero())
        throw InvariantViolation("Alexander determinant vanishes for this presentation");

    // Normalize: support starting at zero, real positive leading coefficient,
    // near-integer coefficients rounded.
    det = det.shifted(-det.lo());
    const Complex lead = det.coeff(det.hi());
    det = det * (std::abs(lead) / lead);
    std::vector<std::pair<int, Complex>> terms;
    for (const auto& [k, coef] : det.terms()) {
        const double re = std::round(coef.real());
        if (std::abs(coef - Complex(re)) < 1e-6)
            terms.emplace_back(k, Complex(re));
        else
            terms.emplace_back(k, coef);
    }
    return LaurentPoly::from_terms(std::move(terms));
}

const std::vector<KnotRecord>& knot_registry() {
    static const std::vector<KnotRecord> registry = [] {
        const auto build = [](std::string name, std::vector<std::string> aliases,
                              const std::string& braid_text) {
            KnotRecord k;
            k.name = std::move(name);
            k.aliases = std::move(aliases);
            k.braid = parse_braid(braid_text);
            k.alexander = alexander_polynomial(wirtinger(braid_to_pd(k.braid)));
            if (k.alexander.span() % 2 != 0)
                throw InvariantViolation("registry knot " + k.name +
                                         " has an odd Alexander span");
            k.genus = k.alexander.span() / 2;
            k.fibered = std::abs(std::abs(k.alexander.coeff(k.alexander.hi())) - 1.0) < 1e-9;
            return k;
        };
        std::vector<KnotRecord> reg;
        reg.push_back(build("trefoil", {"3_1"}, "strands=2; s1 s1 s1"));
        reg.push_back(build("figure-eight", {"4_1", "figure8"}, "strands=3; s1 s2^-1 s1 s2^-1"));
        return reg;
    }();
    return registry;
}

const KnotRecord* find_knot(const std::string& name) {
    const std::string key = lowercase(name);
    for (const KnotRecord& k : knot_registry()) {
        if (lowercase(k.name) == key) return &k;
        for (const std::string& a : k.aliases)
            if (lowercase(a) == key) return &k;
    }
    return nullptr;
}

} // namespace torsionlab
