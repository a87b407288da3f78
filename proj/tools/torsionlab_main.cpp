// torsionlab command line tool.
//
// Subcommands:
//   alex      normalized Alexander polynomial of a knot input
//   torsion   abelian L2-Alexander torsion values on a t-grid
//   symmetry  fitted symmetry exponent tau(1/t) = t^n * tau(t)
//   verify    seeded property suites for the library invariants
//
// Exit codes: 0 success, 2 usage, 3 parse error, 4 numeric non-convergence,
// 5 invariant failure.

#include "torsionlab/alexl2.hpp"
#include "torsionlab/chain.hpp"
#include "torsionlab/errors.hpp"
#include "torsionlab/knot.hpp"
#include "torsionlab/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace torsionlab;

// ---------------------------------------------------------------------------
// shared option state

struct Options {
    std::string knot;
    std::string braid;
    std::string pd;
    std::string torus;
    std::string t_list;
    std::string backend = "roots";
    int quad_nodes = 256;
    int refinement_limit = 12;
    double tol = 1e-7;
    double real_scale_r = 1.0;
    std::string format = "json";
    std::uint64_t seed = 0;
    bool reproducible = false;
    std::string output;
    std::string suite = "all";
    int cases = 0;
    bool backend_explicit = false;
};

constexpr double kSymmetryPassTolRoots = 1e-9;
constexpr double kSymmetryPassTolQuad = 1e-6;
constexpr double kAlexCheckTol = 1e-6;

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
}

std::string iso8601_now() {
    std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return std::string(buf);
}

// Flag values may name a file with a leading '@'; the file contents replace
// the value (UTF-8 text).
std::string expand_at_file(const std::string& value) {
    if (value.empty() || value[0] != '@') return value;
    const std::string path = value.substr(1);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<double> parse_t_list(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && (text[pos] == ',' || text[pos] == ' ')) ++pos;
        if (pos >= text.size()) break;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(text.substr(pos), &used);
        } catch (const std::exception&) {
            throw ParseError("expected a number in the t-grid list", pos);
        }
        if (!std::isfinite(v)) throw ParseError("non-finite value in the t-grid list", pos);
        out.push_back(v);
        pos += used;
        if (pos < text.size() && text[pos] != ',' && text[pos] != ' ')
            throw ParseError("unexpected character in the t-grid list", pos);
    }
    if (out.empty()) throw ParseError("empty t-grid list", 0);
    for (double v : out)
        if (v <= 0.0) throw std::invalid_argument("grid values must be positive, got " + fmt12(v));
    return out;
}

std::pair<long, long> parse_torus_pair(const std::string& text) {
    std::istringstream ss(text);
    long a = 0, b = 0;
    char comma = 0;
    if (!(ss >> a >> comma >> b) || comma != ',')
        throw ParseError("torus direction must be two integers 'a,b'", 0);
    std::string rest;
    if (ss >> rest) throw ParseError("trailing text after the torus direction", 0);
    return {a, b};
}

struct ResolvedInput {
    std::string kind;
    std::string text;
    WirtingerPresentation presentation;
    std::optional<int> genus;
};

int count_sources(const Options& o, bool allow_torus) {
    int n = 0;
    if (!o.knot.empty()) ++n;
    if (!o.braid.empty()) ++n;
    if (!o.pd.empty()) ++n;
    if (allow_torus && !o.torus.empty()) ++n;
    return n;
}

ResolvedInput resolve_input(const Options& o) {
    ResolvedInput r;
    if (!o.knot.empty()) {
        const KnotRecord* rec = find_knot(o.knot);
        if (rec == nullptr) throw std::invalid_argument("unknown knot name: " + o.knot);
        r.kind = "knot";
        r.text = rec->name;
        r.presentation = wirtinger(braid_to_pd(rec->braid));
        r.genus = rec->genus;
    } else if (!o.braid.empty()) {
        r.kind = "braid";
        r.text = expand_at_file(o.braid);
        r.presentation = wirtinger(braid_to_pd(parse_braid(r.text)));
    } else if (!o.pd.empty()) {
        r.kind = "pd";
        r.text = expand_at_file(o.pd);
        r.presentation = wirtinger(parse_pd(r.text));
    } else {
        throw std::invalid_argument("exactly one input source is required");
    }
    return r;
}

QuadratureSettings make_settings(const Options& o) {
    QuadratureSettings s;
    s.node_count = o.quad_nodes;
    s.refinement_limit = o.refinement_limit;
    s.target_tolerance = o.tol;
    s.parallel = true;
    s.validate();
    return s;
}

std::vector<Backend> requested_backends(const std::string& name) {
    if (name == "roots") return {Backend::Roots};
    if (name == "quadrature") return {Backend::Quadrature};
    if (name == "both") return {Backend::Roots, Backend::Quadrature};
    throw std::invalid_argument("unknown backend: " + name);
}

std::string normalization_tag(Backend b) {
    return b == Backend::Roots ? "canonical" : "cellular";
}

json make_meta(const Options& o) {
    json meta;
    meta["seed"] = o.seed;
    meta["settings"] = {{"quad_nodes", o.quad_nodes},
                        {"refinement_limit", o.refinement_limit},
                        {"tolerance", o.tol}};
    if (!o.reproducible) meta["generated_at"] = iso8601_now();
    return meta;
}

void emit(const Options& o, const std::string& text) {
    if (o.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(o.output, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + o.output);
    out << text;
}

std::string csv_header() { return "t,value,backend,normalization\n"; }

// ---------------------------------------------------------------------------
// alex

int cmd_alex(const Options& o) {
    if (count_sources(o, false) != 1)
        throw std::invalid_argument("exactly one of --knot, --braid, --pd is required");
    const ResolvedInput in = resolve_input(o);
    const LaurentPoly delta = alexander_polynomial(in.presentation);

    const int span = delta.span();
    std::vector<long> coeffs;
    coeffs.reserve(std::size_t(span) + 1);
    for (int k = 0; k <= span; ++k) coeffs.push_back(std::lround(delta.coeff(k).real()));

    bool pal_plus = true, pal_minus = true;
    for (int k = 0; k <= span; ++k) {
        const long a = coeffs[std::size_t(k)];
        const long b = coeffs[std::size_t(span - k)];
        pal_plus = pal_plus && (a == b);
        pal_minus = pal_minus && (a == -b);
    }
    const bool palindromic = pal_plus || pal_minus;
    const double det_abs = std::abs(delta.eval(Complex(1.0, 0.0)));
    const bool det_one = std::abs(det_abs - 1.0) <= kAlexCheckTol;
    const bool pass = palindromic && det_one;

    if (o.format == "csv") {
        std::string text = csv_header();
        for (int k = 0; k <= span; ++k)
            text += fmt12(double(k)) + "," + fmt12(double(coeffs[std::size_t(k)])) +
                    ",alex,canonical\n";
        emit(o, text);
    } else {
        json out;
        out["command"] = "alex";
        out["input"] = {{"kind", in.kind}, {"value", in.text}};
        out["coefficients"] = coeffs;
        out["degree_span"] = span;
        out["symmetry"] = {{"palindromic", palindromic},
                           {"determinant_abs", det_abs},
                           {"check", pass ? "pass" : "fail"}};
        out["meta"] = make_meta(o);
        emit(o, out.dump(2) + "\n");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// torsion

struct Row {
    double t = 0.0;
    double value = 0.0;
    bool converged = true;
    std::string backend;
    std::string normalization;
};

int cmd_torsion(const Options& o) {
    if (count_sources(o, true) != 1)
        throw std::invalid_argument(
            "exactly one of --knot, --braid, --pd, --torus is required");
    const QuadratureSettings settings = make_settings(o);
    const std::vector<double> grid =
        o.t_list.empty() ? std::vector<double>{0.5, 1.0, 2.0} : parse_t_list(o.t_list);

    std::vector<Row> rows;
    json out;
    out["command"] = "torsion";

    if (!o.torus.empty()) {
        // Torus complexes carry no Alexander polynomial, so the quadrature
        // backend is the only one and is selected by default.
        if (o.backend_explicit && o.backend != "quadrature")
            throw std::invalid_argument(
                "torus complexes have no roots backend; use --backend quadrature");
        if (o.real_scale_r != 1.0)
            throw std::invalid_argument("--real-scale applies to knot inputs only");
        const auto [a, b] = parse_torus_pair(o.torus);
        out["input"] = {{"kind", "torus"}, {"value", o.torus}};
        for (double t : grid) {
            Row row;
            row.t = t;
            row.backend = "quadrature";
            row.normalization = "cellular";
            try {
                const BasedChainComplex c = torus_complex(a, b, t);
                row.value = torsion(c, settings).value;
            } catch (const NonConvergence&) {
                row.converged = false;
            }
            rows.push_back(row);
        }
        out["normalization"] = {{"quadrature", "cellular"}};
    } else {
        const ResolvedInput in = resolve_input(o);
        AdmissibleTripleAbelian triple =
            AdmissibleTripleAbelian::from_presentation(in.presentation, in.genus);
        if (o.real_scale_r != 1.0) triple = real_scale(triple, o.real_scale_r);
        const std::vector<Backend> backends = requested_backends(o.backend);
        out["input"] = {{"kind", in.kind}, {"value", in.text}};

        for (Backend b : backends) {
            for (double t : grid) {
                Row row;
                row.t = t;
                row.backend = backend_name(b);
                row.normalization = normalization_tag(b);
                try {
                    row.value = torsion_value(triple, t, b, settings);
                } catch (const NonConvergence&) {
                    row.converged = false;
                }
                rows.push_back(row);
            }
        }

        json norms;
        for (Backend b : backends) norms[backend_name(b)] = normalization_tag(b);
        out["normalization"] = norms;

        if (backends.size() == 2) {
            // Fitted integer m with tau_quadrature = t^m * tau_roots.
            std::optional<long> fitted;
            double residual = 0.0;
            for (double t : grid) {
                if (std::abs(std::log(t)) < 1e-9) continue;
                const Row* rr = nullptr;
                const Row* rq = nullptr;
                for (const Row& row : rows)
                    if (row.t == t) {
                        if (row.backend == "roots") rr = &row;
                        if (row.backend == "quadrature") rq = &row;
                    }
                if (rr == nullptr || rq == nullptr || !rq->converged) continue;
                if (rr->value <= 0.0 || rq->value <= 0.0) continue;
                const double m_raw = (std::log(rq->value) - std::log(rr->value)) / std::log(t);
                fitted = std::lround(m_raw);
                residual = std::abs(m_raw - double(*fitted));
                break;
            }
            if (fitted) {
                out["monomial_offset"] = *fitted;
                out["monomial_offset_residual"] = residual;
            }
        }
    }

    bool any_failed = false;
    json jrows = json::array();
    for (const Row& row : rows) {
        json jr;
        jr["t"] = row.t;
        if (row.converged)
            jr["value"] = row.value;
        else
            jr["value"] = nullptr;
        jr["backend"] = row.backend;
        jr["normalization"] = row.normalization;
        jr["converged"] = row.converged;
        any_failed = any_failed || !row.converged;
        jrows.push_back(jr);
    }
    out["rows"] = jrows;
    out["meta"] = make_meta(o);

    if (o.format == "csv") {
        std::string text = csv_header();
        for (const Row& row : rows)
            text += fmt12(row.t) + "," + (row.converged ? fmt12(row.value) : "nan") + "," +
                    row.backend + "," + row.normalization + "\n";
        emit(o, text);
    } else {
        emit(o, out.dump(2) + "\n");
    }
    if (any_failed) {
        std::cerr << "torsionlab: quadrature failed to converge on "
                  << "one or more grid points (rows flagged)\n";
        return 4;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// symmetry

json report_to_json(const SymmetryReport& rep, double pass_tol) {
    json jr;
    jr["backend"] = backend_name(rep.backend);
    jr["grid"] = rep.grid;
    jr["values"] = rep.values;
    jr["mirror_values"] = rep.mirror_values;
    jr["exponents"] = rep.exponents;
    jr["fitted_exponent"] = rep.exponent;
    jr["constancy_residual"] = rep.constancy_residual;
    jr["integral_expected"] = rep.integral_expected;
    bool pass = rep.constancy_residual <= pass_tol;
    if (rep.integral_expected) {
        jr["integrality_residual"] = rep.integrality_residual;
        jr["rounded_exponent"] = rep.rounded_exponent;
        jr["parity"] = (std::abs(rep.rounded_exponent) % 2 == 1) ? "odd" : "even";
        if (rep.expected_norm) {
            jr["expected_norm"] = *rep.expected_norm;
            jr["expected_parity"] = (std::abs(*rep.expected_norm) % 2 == 1) ? "odd" : "even";
            jr["parity_matches"] = rep.parity_matches;
            pass = pass && rep.parity_matches;
        }
        pass = pass && rep.integrality_residual <= pass_tol;
    } else {
        jr["integrality"] = "skipped (real class)";
    }
    jr["check"] = pass ? "PASS" : "FAIL";
    return jr;
}

int cmd_symmetry(const Options& o) {
    if (count_sources(o, false) != 1)
        throw std::invalid_argument("exactly one of --knot, --braid, --pd is required");
    const QuadratureSettings settings = make_settings(o);
    const std::vector<double> grid =
        o.t_list.empty() ? default_symmetry_grid() : parse_t_list(o.t_list);
    int usable = 0;
    for (double t : grid)
        if (std::abs(t - 1.0) > 1e-12) ++usable;
    if (usable < 3)
        throw std::invalid_argument("symmetry fitting needs at least 3 grid points != 1");

    const ResolvedInput in = resolve_input(o);
    AdmissibleTripleAbelian triple =
        AdmissibleTripleAbelian::from_presentation(in.presentation, in.genus);
    if (o.real_scale_r != 1.0) triple = real_scale(triple, o.real_scale_r);

    json out;
    out["command"] = "symmetry";
    out["input"] = {{"kind", in.kind}, {"value", in.text}};
    json jreports = json::array();
    std::vector<SymmetryReport> reports;
    bool vacuous = false;
    for (Backend b : requested_backends(o.backend)) {
        const double tol =
            (b == Backend::Roots) ? kSymmetryPassTolRoots : kSymmetryPassTolQuad;
        try {
            SymmetryReport rep = symmetry_report(triple, grid, b, settings);
            jreports.push_back(report_to_json(rep, tol));
            reports.push_back(std::move(rep));
        } catch (const VacuousSymmetry& e) {
            json jr;
            jr["backend"] = backend_name(b);
            jr["vacuous"] = true;
            jr["message"] = e.what();
            jr["check"] = "PASS";
            jreports.push_back(jr);
            vacuous = true;
        }
    }
    out["reports"] = jreports;
    out["vacuous"] = vacuous;
    out["meta"] = make_meta(o);

    if (o.format == "csv") {
        std::string text = csv_header();
        for (const SymmetryReport& rep : reports)
            for (std::size_t i = 0; i < rep.grid.size(); ++i)
                text += fmt12(rep.grid[i]) + "," + fmt12(rep.exponents[i]) + "," +
                        backend_name(rep.backend) + ",exponent\n";
        emit(o, text);
    } else {
        emit(o, out.dump(2) + "\n");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(const Options& o) {
    const QuadratureSettings settings = make_settings(o);
    const std::string& suite = o.suite;
    const bool all = suite == "all";
    if (!all && suite != "fkdet" && suite != "duality" && suite != "torus" &&
        suite != "euler" && suite != "symmetry")
        throw std::invalid_argument("unknown suite: " + suite);
    if (o.cases < 0) throw std::invalid_argument("--cases must be nonnegative");

    std::vector<SuiteResult> results;
    if (all || suite == "fkdet") {
        const int per_item = o.cases > 0 ? std::max(1, o.cases / 4) : 100;
        results.push_back(run_fkdet_suite(o.seed, per_item, settings));
    }
    if (all || suite == "duality") {
        const int laurent = o.cases > 0 ? std::max(1, o.cases / 5) : 50;
        const int scalar = o.cases > 0 ? std::max(1, o.cases - laurent) : 200;
        results.push_back(run_duality_suite(o.seed + 1, scalar, laurent, settings));
    }
    if (all || suite == "torus") {
        results.push_back(run_torus_suite({0.5, 1.0, 1.7, 5.0}, settings));
    }
    if (all || suite == "euler") {
        const int cases = o.cases > 0 ? o.cases : 10;
        results.push_back(run_euler_suite(o.seed + 2, cases, settings));
    }
    if (all || suite == "symmetry") {
        const int cases = o.cases > 0 ? o.cases : 20;
        results.push_back(run_symmetry_suite(o.seed + 3, cases, settings));
    }

    bool all_ok = true;
    json jsuites = json::array();
    for (const SuiteResult& r : results) {
        json js;
        js["suite"] = r.suite;
        js["cases"] = r.cases;
        js["passed"] = r.passed;
        js["ok"] = r.ok();
        js["failures"] = r.failures;
        jsuites.push_back(js);
        all_ok = all_ok && r.ok();
        std::cerr << r.suite << ": " << r.passed << "/" << r.cases << " "
                  << (r.ok() ? "PASS" : "FAIL") << "\n";
    }

    json out;
    out["command"] = "verify";
    out["seed"] = o.seed;
    out["suites"] = jsuites;
    out["pass"] = all_ok;
    out["meta"] = make_meta(o);
    emit(o, out.dump(2) + "\n");

    if (!all_ok) {
        std::cerr << "torsionlab: invariant failure under seed " << o.seed
                  << "; counterexamples listed in the JSON output\n";
        return 5;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// wiring

void add_input_flags(CLI::App* cmd, Options& o, bool with_torus) {
    cmd->add_option("--knot", o.knot, "named knot from the registry (trefoil, figure-eight)");
    cmd->add_option("--braid", o.braid, "braid word 'strands=<n>; s1 s2^-1 ...' or @file");
    cmd->add_option("--pd", o.pd, "planar diagram 'PD[X[a,b,c,d],...]' or @file");
    if (with_torus)
        cmd->add_option("--torus", o.torus, "torus direction 'a,b' (quadrature backend only)");
}

void add_numeric_flags(CLI::App* cmd, Options& o, bool with_backend) {
    if (with_backend)
        cmd->add_option("--backend", o.backend, "roots | quadrature | both")
            ->check(CLI::IsMember({"roots", "quadrature", "both"}));
    cmd->add_option("--quad-nodes", o.quad_nodes, "starting quadrature node count (power of two >= 16)");
    cmd->add_option("--tol", o.tol, "quadrature convergence tolerance");
    cmd->add_option("--real-scale", o.real_scale_r, "replace phi by r*phi (r != 0)");
}

void add_io_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--format", o.format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--seed", o.seed, "seed for randomized suites")
        ->envname("TORSIONLAB_SEED");
    cmd->add_flag("--reproducible", o.reproducible, "suppress timestamps in the output");
    cmd->add_option("-o,--output", o.output, "write the report to a file instead of stdout");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"abelian L2-Alexander torsion of knot exteriors"};
    app.require_subcommand(1);

    Options alex_o, torsion_o, symmetry_o, verify_o;

    CLI::App* alex = app.add_subcommand("alex", "normalized Alexander polynomial");
    add_input_flags(alex, alex_o, false);
    add_io_flags(alex, alex_o);

    CLI::App* torsion = app.add_subcommand("torsion", "torsion values on a t-grid");
    add_input_flags(torsion, torsion_o, true);
    torsion->add_option("--t", torsion_o.t_list, "comma-separated evaluation points (t > 0)");
    add_numeric_flags(torsion, torsion_o, true);
    add_io_flags(torsion, torsion_o);

    CLI::App* symmetry = app.add_subcommand("symmetry", "symmetry exponent report");
    add_input_flags(symmetry, symmetry_o, false);
    symmetry->add_option("--t", symmetry_o.t_list,
                         "comma-separated grid (>= 3 points != 1)");
    add_numeric_flags(symmetry, symmetry_o, true);
    add_io_flags(symmetry, symmetry_o);

    CLI::App* verify = app.add_subcommand("verify", "seeded property suites");
    verify->add_option("--suite", verify_o.suite,
                       "fkdet | duality | torus | euler | symmetry | all")
        ->check(CLI::IsMember({"fkdet", "duality", "torus", "euler", "symmetry", "all"}));
    verify->add_option("--cases", verify_o.cases, "total case budget per suite (0 = default)");
    add_numeric_flags(verify, verify_o, false);
    add_io_flags(verify, verify_o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    torsion_o.backend_explicit = torsion->count("--backend") > 0;

    try {
        if (alex->parsed()) return cmd_alex(alex_o);
        if (torsion->parsed()) return cmd_torsion(torsion_o);
        if (symmetry->parsed()) return cmd_symmetry(symmetry_o);
        if (verify->parsed()) return cmd_verify(verify_o);
        std::cerr << "torsionlab: no subcommand\n";
        return 2;
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        std::cerr << "torsionlab: parse error: " << msg;
        if (msg.find("position") == std::string::npos)
            std::cerr << " (position " << e.position << ")";
        std::cerr << "\n";
        return 3;
    } catch (const NonConvergence& e) {
        std::cerr << "torsionlab: non-convergence: " << e.what()
                  << " (last=" << e.last_estimate << ", previous=" << e.previous_estimate
                  << ")\n";
        return 4;
    } catch (const InterpolationError& e) {
        std::cerr << "torsionlab: " << e.what() << "\n";
        return 4;
    } catch (const InvariantViolation& e) {
        std::cerr << "torsionlab: invariant violation: " << e.what() << "\n";
        return 5;
    } catch (const NotAdmissible& e) {
        std::cerr << "torsionlab: not admissible: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "torsionlab: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "torsionlab: " << e.what() << "\n";
        return 5;
    }
}
