// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bec/plot.hpp"
#include "bec/report.hpp"
#include "bec/tables.hpp"
#include "support.hpp"

using namespace bec;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

int sgn(double x) { return x > 0 ? 1 : -1; }

ModelBC bc_of(const ModelDescriptor& d, const std::string& spec) { return d.boundary(BoundarySpec::parse(spec)); }

int flow(const ModelDescriptor& d, const ModelBC& bc, std::string* note = nullptr) {
    const FlowResult f = flow_of(d, bc, resolve(Options{}, d));
    if (note && f.flagged) *note = " (flagged: " + f.note + ")";
    return f.value;
}

void table_rows(Outcome& out, const TableReport& t) {
    for (const TableRow& r : t.rows)
        out.require(r.match, r.label + " [" + r.condition + "]: expected " + r.expected + ", computed " + r.computed);
}

Outcome criterion_laplacian() {
    Outcome out;
    table_rows(out, table_laplacian(Options{}));
    return out;
}

Outcome criterion_dirac() {
    Outcome out;
    const TableReport t = table_dirac(Options{});
    out.require(t.rows.size() == 10, std::to_string(t.rows.size()) + " table rows");
    table_rows(out, t);
    int bad = 0;
    for (double m : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0}) {
        const ModelDescriptor d = dirac(m);
        for (double a : {-3.0, -1.0, -0.3, 0.3, 1.0, 3.0}) {
            std::string note;
            const int sf = flow(d, bc_of(d, "a:a=" + fmt("%g", a)), &note);
            const int want = (sgn(m) + sgn(a)) / 2;
            if (sf != want || !note.empty()) {
                ++bad;
                out.notes.push_back("     m = " + fmt("%g", m) + ", a = " + fmt("%g", a) + ": SF " + std::to_string(sf) +
                                    ", want " + std::to_string(want) + note);
            }
        }
    }
    out.require(bad == 0, "SF = (sgn m + sgn a)/2 on the 6x6 grid, " + std::to_string(bad) + " misses");
    return out;
}

Outcome criterion_regdirac() {
    Outcome out;
    table_rows(out, table_regdirac(Options{}));
    for (double m : {-1.0, 1.0}) {
        const ModelDescriptor d = regularized_dirac(m, 0.1);
        for (double a : {-1.1, -0.9, 0.9, 1.1}) {
            const ModelBC b = bc_of(d, "a:a=" + fmt("%g", a));
            out.require(affiliation_check(b.bc, d.setup(b.setup)).affiliated(),
                        "m = " + fmt("%g", m) + ", a = " + fmt("%g", a) + " affiliated");
        }
    }
    return out;
}

Outcome criterion_regdirac_chern(double m, double eps) {
    Outcome out;
    const ChernResult c = chern(regularized_dirac_symbol(m, eps), 0.0);
    const double want = 0.5 * (sgn(m) - sgn(eps));
    out.require(std::abs(c.value - want) < 1e-3, "(m, eps) = (" + fmt("%g", m) + ", " + fmt("%g", eps) + "): chern " +
                                                      fmt("%.6f", c.value) + ", want " + fmt("%g", want));
    return out;
}

Outcome criterion_dirac_relative() {
    Outcome out;
    for (auto [m1, m2] : {std::pair{1.0, -1.0}, std::pair{1.0, 2.0}, std::pair{-1.0, -3.0}}) {
        const ChernResult c = relative_chern(dirac_symbol(m1), dirac_symbol(m2), 0.0);
        const double want = 0.5 * (sgn(m1) - sgn(m2));
        out.require(std::abs(c.value - want) < 1e-3, "relative (" + fmt("%g", m1) + ", " + fmt("%g", m2) + ") = " +
                                                          fmt("%.6f", c.value) + ", want " + fmt("%g", want));
    }
    for (double m : {1.0, -1.0}) {
        const ChernResult c = chern(dirac_symbol(m), 0.0);
        out.require(std::abs(std::abs(c.value) - 0.5) < 1e-3 && !c.warnings.empty(),
                    "bare Dirac m = " + fmt("%g", m) + ": chern " + fmt("%.6f", c.value) +
                        (c.warnings.empty() ? ", no warning" : ", warning: " + c.warnings.front()));
    }
    return out;
}

Outcome criterion_shallow_water() {
    Outcome out;
    for (double f : {1.0, -1.0}) {
        for (double nu : {0.1, -0.1}) {
            const ModelDescriptor d = shallow_water(f, nu);
            const ChernResult c = chern(d.symbol, d.chern_level);
            out.require(std::abs(c.value + sgn(f) + sgn(nu)) < 1e-3, "(f, nu) = (" + fmt("%g", f) + ", " +
                                                                         fmt("%g", nu) + "): " + fmt("%.6f", c.value));
        }
    }
    for (auto [f1, f2] : {std::pair{-1.0, 1.0}, std::pair{1.0, -1.0}}) {
        const ModelDescriptor d1 = shallow_water(f1, 0.0), d2 = shallow_water(f2, 0.0);
        // pairing(P1) - pairing(P2) at a common level
        const ChernResult c = relative_chern(d1.symbol, d2.symbol, d1.chern_level);
        const double want = sgn(f2) - sgn(f1);
        out.require(std::abs(c.value - want) < 1e-3, "nu = 0, f: " + fmt("%g", f1) + " -> " + fmt("%g", f2) + ": " +
                                                          fmt("%.6f", c.value) + ", want " + fmt("%g", want));
    }
    return out;
}

Outcome criterion_correspondence() {
    Outcome out;
    struct Family {
        ModelDescriptor d;
        std::vector<std::string> specs;
    };
    const std::vector<Family> families = {
        {laplacian(),
         {"dirichlet", "klm:K=1,l=0.5,M=1", "klm:K=1,l=2,M=1", "klm:K=1,l=-2,M=1", "klm:K=1,l=1,M=1",
          "klm:K=1,l=-1,M=1", "klm:K=-1,l=1,M=1", "klm:K=0,l=1,M=1"}},
        {dirac(1.0), {"a:a=1", "a:a=2", "a:a=0.5", "a:a=-0.5", "a:a=-2", "a:a=0"}},
        {dirac(-1.0), {"a:a=-1", "a:a=0.5", "a:a=2", "a:a=-2"}},
        {regularized_dirac(1.0, 0.1), {"dirichlet", "a:a=2", "a:a=0", "a:a=-2", "a:a=1"}},
        {regularized_dirac(-1.0, 0.1), {"dirichlet", "a:a=2", "a:a=0", "a:a=-2"}},
    };
    int pairs = 0;
    for (const Family& fam : families) {
        std::vector<std::pair<ModelBC, int>> good;
        for (const std::string& s : fam.specs) {
            const ModelBC b = bc_of(fam.d, s);
            if (!affiliation_check(b.bc, fam.d.setup(b.setup)).affiliated()) continue;
            std::string note;
            good.push_back({b, flow(fam.d, b, &note)});
            if (!note.empty()) out.require(false, model_label(fam.d) + " " + s + note);
        }
        for (size_t i = 0; i < good.size(); ++i) {
            for (size_t j = i + 1; j < good.size(); ++j) {
                const auto& [b1, sf1] = good[i];
                const auto& [b2, sf2] = good[j];
                const int w = relative_winding(b1.bc, b2.bc, fam.d.setup(b1.setup)).value;
                ++pairs;
                if (w != sf1 - sf2)
                    out.require(false, model_label(fam.d) + " " + b1.bc.label + " vs " + b2.bc.label + ": SF diff " +
                                           std::to_string(sf1 - sf2) + ", winding " + std::to_string(w));
            }
        }
    }
    out.require(pairs >= 12, std::to_string(pairs) + " affiliated pairs checked");
    for (auto [mp, mm] : {std::pair{1.0, -1.0}, std::pair{-1.0, 1.0}, std::pair{1.0, 2.0}, std::pair{-2.0, -1.0}}) {
        const ModelDescriptor d = dirac_interface(mp, mm);
        const int sf = flow(d, bc_of(d, "transparent"));
        const int want = (sgn(mp) - sgn(mm)) / 2;
        out.require(sf == want, "transparent (m+, m-) = (" + fmt("%g", mp) + ", " + fmt("%g", mm) + "): SF " +
                                    std::to_string(sf) + ", want " + std::to_string(want));
    }
    return out;
}

Outcome criterion_properties() {
    using testing::uniform;
    Outcome out;
    struct Case {
        EdgeSetup setup;
        std::vector<BoundaryCondition> bcs;
    };
    const ModelDescriptor lap = laplacian(), dir = dirac(1.0), itf = dirac_interface(1.0, -1.0),
                          reg = regularized_dirac(-1.0, 0.1);
    const std::vector<Case> cases = {
        {lap.setup("halfline"), {laplacian_klm(1, 2, 1), laplacian_klm(-1, 1, 1), laplacian_klm(2, 0.5, 1)}},
        {dir.setup("halfline"), {dirac_halfline_a(2.0), dirac_halfline_a(-0.5)}},
        {itf.setup("interface"), {dirac_transparent(), dirac_decoupled(2.0, -0.5)}},
        {reg.setup("halfline"), {regularized_dirac_a(2.0, 0.1), regularized_dirac_a(-2.0, 0.1)}},
    };
    double unimodular = 0, green = 0, basis = 0, adjoint = 0;
    for (const Case& c : cases) {
        for (int t = 0; t < 40; ++t) {
            const double k = uniform(-20, 20);
            for (const auto& bc : c.bcs)
                for (cplx ev : eigenvalues(vn_unitary(bc, c.setup, k)))
                    unimodular = std::max(unimodular, std::abs(std::abs(ev) - 1.0));
            green = std::max(green, green_identity_residual(c.setup.triple, c.setup, k));
            const cplx z{uniform(-2, 2), uniform(0.1, 3)};
            const DeficiencySpace ds = deficiency_space(c.setup, k, z);
            const int d = static_cast<int>(ds.J.cols());
            const CMatrix g = testing::random_matrix(d, d) + 2.0 * identity(d);
            const CMatrix q = krein_Q(c.setup.triple, k, ds.J);
            basis = std::max(basis, testing::max_abs(krein_Q(c.setup.triple, k, ds.J * g) - q) / (1 + testing::max_abs(q)));
            adjoint = std::max(adjoint, testing::max_abs(krein_Q(c.setup, k, std::conj(z)) - krein_Q(c.setup, k, z).adjoint()));
        }
    }
    out.require(unimodular < 1e-8, "vn_unitary eigenvalues unimodular, max dev " + fmt("%.1e", unimodular));
    out.require(green < 1e-8, "Green identity, max residual " + fmt("%.1e", green));
    out.require(basis < 1e-9, "Q basis independence, max rel diff " + fmt("%.1e", basis));
    out.require(adjoint < 1e-10, "Q(conj z) = Q(z)^dagger, max diff " + fmt("%.1e", adjoint));

    // Winding additivity and antisymmetry on the Dirac a-family.
    const EdgeSetup& s = dir.setup("halfline");
    bool additive = true, antisymmetric = true;
    const std::vector<double> as = {-3.0, -0.4, 0.7, 2.5};
    for (double a1 : as) {
        for (double a2 : as) {
            const int w12 = relative_winding(dirac_halfline_a(a1), dirac_halfline_a(a2), s).value;
            const int w21 = relative_winding(dirac_halfline_a(a2), dirac_halfline_a(a1), s).value;
            antisymmetric = antisymmetric && w12 == -w21;
            for (double a3 : as) {
                const int w23 = relative_winding(dirac_halfline_a(a2), dirac_halfline_a(a3), s).value;
                const int w13 = relative_winding(dirac_halfline_a(a1), dirac_halfline_a(a3), s).value;
                additive = additive && w13 == w12 + w23;
            }
        }
    }
    out.require(antisymmetric, "winding antisymmetry");
    out.require(additive, "winding additivity");

    // Numerics oracles: Hermitian eigenvalues, polynomial roots, plane quadrature.
    double eig = 0, roots = 0;
    for (int t = 0; t < 50; ++t) {
        const CMatrix h = testing::random_hermitian(5);
        const HermEig e = herm_eig(h);
        eig = std::max(eig, (h * e.vectors - e.vectors * e.values.asDiagonal()).norm());
        std::vector<cplx> rs;
        for (int j = 0; j < 4; ++j) rs.push_back({uniform(-2, 2), uniform(-2, 2)});
        const ScalarPolynomial p = ScalarPolynomial::from_roots(rs);
        for (cplx r : poly_roots(p)) {
            double best = 1e300;
            for (cplx x : rs) best = std::min(best, std::abs(r - x));
            roots = std::max(roots, best);
        }
    }
    out.require(eig < 1e-10, "herm_eig residual " + fmt("%.1e", eig));
    out.require(roots < 1e-6, "poly_roots recovery " + fmt("%.1e", roots));
    const QuadResult g = quad_2d([](double x, double y) { return cplx(std::exp(-(x * x + y * y))); }, 1e-10);
    out.require(std::abs(g.value - std::numbers::pi) < 1e-8, "Gaussian integral " + fmt("%.12f", g.value.real()));
    return out;
}

// Signed crossings of E read back from a CSV written by the spectrum command path.
int csv_flow(const std::string& path, double E) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    std::map<int, std::vector<double>> bands;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string id, k, lambda;
        std::getline(row, id, ',');
        std::getline(row, k, ',');
        std::getline(row, lambda, ',');
        bands[std::stoi(id)].push_back(std::stod(lambda));
    }
    int total = 0;
    for (const auto& [id, ls] : bands)
        for (size_t i = 1; i < ls.size(); ++i) total += (ls[i] >= E) - (ls[i - 1] >= E);
    return total;
}

Outcome criterion_figure(const std::string& dir) {
    Outcome out;
    const std::map<std::pair<int, int>, int> table = {{{-1, -2}, 0}, {{-1, 0}, -1}, {{-1, 2}, -2},
                                                      {{1, -2}, 1},  {{1, 0}, 0},   {{1, 2}, -1}};
    for (const auto& [key, want] : table) {
        const auto [m, a] = key;
        const ModelDescriptor d = regularized_dirac(m, 0.1);
        const SpectrumResult s = task_edge_spectrum(d, bc_of(d, "a:a=" + std::to_string(a)), Options{});
        const std::string path = dir + "/regdirac_m" + std::to_string(m) + "_a" + std::to_string(a) + ".csv";
        write_text_file(path, bands_csv(s.bands));
        const int got = csv_flow(path, s.numerics.E);
        out.require(got == want, "(m, a) = (" + std::to_string(m) + ", " + std::to_string(a) + "): CSV crossings " +
                                     std::to_string(got) + ", table " + std::to_string(want));
    }
    // Touch point of the a = e^t branch: the band is a straight line, so extrapolate
    // two in-gap eigenvalues to k*.
    const double m = 1.0;
    const ModelDescriptor d = dirac(m);
    const EdgeSetup& s = d.setup("halfline");
    for (double t : {0.5, -0.5, 1.0, -1.0}) {
        const double a = std::exp(t), ks = m / std::sinh(t);
        std::vector<std::pair<double, double>> pts;
        for (double dk : {-0.3, -0.2, 0.2, 0.3}) {
            const double k = ks + dk, edge = std::sqrt(m * m + k * k);
            const auto ev = edge_eigenvalues(dirac_halfline_a(a), s, k, GapWindow{-edge, edge, false});
            if (ev.size() == 1) pts.push_back({k, ev[0]});
        }
        if (pts.size() < 2) {
            out.require(false, "t = " + fmt("%g", t) + ": branch not found near k*");
            continue;
        }
        const double slope = (pts[1].second - pts[0].second) / (pts[1].first - pts[0].first);
        const double at = pts[0].second + slope * (ks - pts[0].first);
        const double want = m * std::sqrt(1 + ks * ks / (m * m));
        out.require(std::abs(at - want) < 1e-6, "t = " + fmt("%g", t) + ", k* = " + fmt("%.6f", ks) + ": lambda(k*) = " +
                                                    fmt("%.9f", at) + ", m sqrt(1 + k*^2/m^2) = " + fmt("%.9f", want) +
                                                    ", m coth t = " + fmt("%.9f", m / std::tanh(t)));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "acceptance_csv";
    std::filesystem::create_directories(dir);

    struct Criterion {
        std::string id;
        std::string name;
        double budget;  // seconds
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"1", "Laplacian half-space table", 60, criterion_laplacian},
        {"2", "Dirac half-space table and SF grid", 120, criterion_dirac},
        {"3", "regularized Dirac table", 300, criterion_regdirac},
        {"4a", "regularized Dirac chern (-1, 0.1)", 60, [] { return criterion_regdirac_chern(-1, 0.1); }},
        {"4b", "regularized Dirac chern (1, 0.1)", 60, [] { return criterion_regdirac_chern(1, 0.1); }},
        {"4c", "regularized Dirac chern (1, -0.1)", 60, [] { return criterion_regdirac_chern(1, -0.1); }},
        {"4d", "regularized Dirac chern (-1, -0.1)", 60, [] { return criterion_regdirac_chern(-1, -0.1); }},
        {"5", "Dirac relative Chern numbers", 0, criterion_dirac_relative},
        {"6", "shallow-water pairings", 0, criterion_shallow_water},
        {"7", "correspondence identity", 0, criterion_correspondence},
        {"8", "property suites", 0, criterion_properties},
        {"9", "edge spectrum CSV and Dirac touch point", 0, [&] { return criterion_figure(dir); }},
    };

    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.require(false, std::string("error: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget > 0) o.require(secs < c.budget, "runtime " + fmt("%.1f", secs) + " s < " + fmt("%g", c.budget) + " s");
        failed += !o.pass;
        std::printf("%s criterion %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id.c_str(), c.name.c_str(), secs);
        for (const auto& n : o.notes)
            if (!o.pass || n.rfind("FAIL", 0) == 0) std::printf("    %s\n", n.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed ? 1 : 0;
}
