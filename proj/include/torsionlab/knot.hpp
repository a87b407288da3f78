#pragma once

// Knot input handling: braid words, planar diagram codes, Wirtinger
// presentations and their Fox matrices, and the two-step chain complex of a
// knot exterior built from a deficiency-one presentation.

#include "torsionlab/chain.hpp"
#include "torsionlab/groupring.hpp"

#include <array>
#include <string>
#include <vector>

namespace torsionlab {

// Word in the braid group B_n: positive k stands for sigma_k, negative k for
// its inverse, 1 <= |k| <= strands-1.
struct BraidWord {
    int strands = 1;
    std::vector<int> letters;
};

// Text form: "strands=<n>; s1 s2^-1 ..." (commas optional).
BraidWord parse_braid(const std::string& text);
std::string print_braid(const BraidWord& b);

// One crossing X[a,b,c,d]: a -> c is the under-strand (c follows a along the
// orientation); b and d lie on the over-strand.
struct Crossing {
    std::array<int, 4> slots{};
};

struct PDCode {
    int edges = 0; // labels run 1..edges
    std::vector<Crossing> crossings;
};

// Text form: "PD[X[4,1,5,2],X[2,5,3,6],X[6,3,1,4]]".
PDCode parse_pd(const std::string& text);
std::string print_pd(const PDCode& pd);

// Diagram of the braid closure.  Rejects closures with more than one
// component (NotAdmissible).
PDCode braid_to_pd(const BraidWord& b);

struct WirtingerPresentation {
    int generators = 0;            // one per arc, indexed by increasing first edge
    std::vector<GroupWord> relators; // one per crossing, with the last one dropped
    int meridian = 0;              // generator of the arc through edge 1
    AbelianizationMap phi;         // every meridian maps to 1
};

// Arc generators and conjugation relators of the diagram.  The relator of the
// highest-indexed crossing is omitted (it is a consequence of the others).
WirtingerPresentation wirtinger(const PDCode& pd);

// Free differential d(w)/d(g) in the group ring of the free group.
RingElement fox_derivative(const GroupWord& w, int gen);

// 0 -> C^(n-1) -> C^n -> C -> 0 with the specialized Fox matrix in degree two
// and the column (t z - 1, ..., t z - 1) in degree one.
BasedChainComplex presentation_complex(const WirtingerPresentation& p, double t);

// Alexander polynomial from the Fox matrix with the meridian column removed,
// normalized to lowest exponent zero, positive leading coefficient, and
// integer-rounded coefficients.
LaurentPoly alexander_polynomial(const WirtingerPresentation& p);

struct KnotRecord {
    std::string name;
    std::vector<std::string> aliases;
    BraidWord braid;
    LaurentPoly alexander; // computed once at registry construction
    int genus = 0;         // half the Alexander span
    bool fibered = false;  // monic Alexander polynomial
};

// Built-in knots (currently the trefoil and the figure-eight knot).
const std::vector<KnotRecord>& knot_registry();
// Case-insensitive lookup by name or alias; nullptr when absent.
const KnotRecord* find_knot(const std::string& name);

} // namespace torsionlab
