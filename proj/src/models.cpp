#include "bec/models.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace bec {

namespace {

const CMatrix& sx() {
    static const CMatrix m = matrix(2, 2, {0, 1, 1, 0});
    return m;
}
const CMatrix& sy_code() {
    // sigma_y with the normal coordinate reversed (k2 -> -k2).
    static const CMatrix m = matrix(2, 2, {0, I, -I, 0});
    return m;
}
const CMatrix& sz() {
    static const CMatrix m = matrix(2, 2, {1, 0, 0, -1});
    return m;
}
const CMatrix& Ymat() {
    static const CMatrix m = matrix(2, 2, {0, 1, -1, 0});
    return m;
}

CMatrix hcat(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows(), a.cols() + b.cols());
    out << a, b;
    return out;
}

CMatrix scalar(cplx v) { return matrix(1, 1, {v}); }

double param(const std::map<std::string, double>& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

double require_param(const BoundarySpec& s, const std::string& key) {
    auto it = s.params.find(key);
    if (it == s.params.end()) fail(ErrorKind::input, "boundary family '" + s.family + "' needs parameter '" + key + "'");
    return it->second;
}

void check_keys(const BoundarySpec& s, std::initializer_list<const char*> allowed) {
    for (const auto& [k, v] : s.params) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || k == a;
        if (!ok) fail(ErrorKind::input, "boundary family '" + s.family + "' has no parameter '" + k + "'");
    }
}

void check_model_keys(const std::string& name, const std::map<std::string, double>& p,
                      std::initializer_list<const char*> allowed) {
    for (const auto& [k, v] : p) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || k == a;
        if (!ok) fail(ErrorKind::input, "model '" + name + "' has no parameter '" + k + "'");
    }
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

BoundarySpec BoundarySpec::parse(const std::string& text) {
    BoundarySpec s;
    const auto colon = text.find(':');
    s.family = text.substr(0, colon);
    if (s.family.empty()) fail(ErrorKind::input, "boundary spec '" + text + "' has no family name");
    if (colon == std::string::npos) return s;
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) fail(ErrorKind::input, "boundary parameter '" + item + "' is not key=value");
        const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
        double v;
        try {
            size_t used = 0;
            v = std::stod(val, &used);
            if (used != val.size()) throw std::invalid_argument(val);
        } catch (const std::exception&) {
            fail(ErrorKind::input, "boundary parameter '" + key + "' has non-numeric value '" + val + "'");
        }
        if (!s.params.emplace(key, v).second) fail(ErrorKind::input, "boundary parameter '" + key + "' given twice");
    }
    return s;
}

std::string BoundarySpec::text() const {
    std::string out = family;
    char sep = ':';
    for (const auto& [k, v] : params) {
        out += sep + k + "=" + fmt(v);
        sep = ',';
    }
    return out;
}

const EdgeSetup& ModelDescriptor::setup(const std::string& key) const {
    auto it = setups.find(key);
    if (it == setups.end()) fail(ErrorKind::unsupported, "model '" + name + "' has no '" + key + "' boundary setup");
    return it->second;
}

ModelBC ModelDescriptor::boundary(const BoundarySpec& spec) const {
    if (!bc_factory) fail(ErrorKind::unsupported, "model '" + name + "' has no boundary-condition families");
    ModelBC out = bc_factory(spec);
    setup(out.setup);
    return out;
}

ModelBC ModelDescriptor::reference(const std::string& setup_key) const {
    return {setup_key, reference_condition(setup(setup_key).triple)};
}

std::string ModelDescriptor::default_setup() const {
    if (setups.empty()) fail(ErrorKind::unsupported, "model '" + name + "' has no boundary triple");
    return setups.count("halfline") ? "halfline" : setups.begin()->first;
}

double ModelDescriptor::default_k_window() const {
    double scale = 1.0;
    if (declared_gap) scale = std::max({scale, std::abs(declared_gap->lo), std::abs(declared_gap->hi)});
    return 20.0 * scale;
}

// ---- symbols ---------------------------------------------------------------

Symbol laplacian_symbol() {
    Symbol s(1);
    s.add_term(2, 0, scalar(1.0));
    s.add_term(0, 2, scalar(1.0));
    return s;
}

Symbol dirac_symbol(double m) {
    Symbol s(2);
    s.add_term(1, 0, sx());
    s.add_term(0, 1, sy_code());
    s.add_term(0, 0, m * sz());
    return s;
}

Symbol regularized_dirac_symbol(double m, double eps_reg) {
    Symbol s = dirac_symbol(m);
    s.add_term(2, 0, eps_reg * sz());
    s.add_term(0, 2, eps_reg * sz());
    return s;
}

Symbol shallow_water_symbol(double f, double nu) {
    CMatrix e12 = CMatrix::Zero(3, 3), e13 = CMatrix::Zero(3, 3), rot = CMatrix::Zero(3, 3);
    e12(0, 1) = e12(1, 0) = 1.0;
    e13(0, 2) = e13(2, 0) = -1.0;
    rot(1, 2) = I;
    rot(2, 1) = -I;
    Symbol s(3);
    s.add_term(1, 0, e12);
    s.add_term(0, 1, e13);
    s.add_term(0, 0, f * rot);
    if (nu != 0.0) {
        s.add_term(2, 0, -nu * rot);
        s.add_term(0, 2, -nu * rot);
    }
    return s;
}

// ---- triples ---------------------------------------------------------------

BoundaryTriple laplacian_triple() {
    return {"laplacian", TripleKind::halfline, 1, {matrix(1, 2, {1, 0})}, {matrix(1, 2, {0, 1})}};
}

BoundaryTriple dirac_halfline_triple() {
    const double r = 1.0 / std::numbers::sqrt2;
    return {"dirac-halfline", TripleKind::halfline, 1, {matrix(1, 2, {r, -r})}, {matrix(1, 2, {-r, -r})}};
}

BoundaryTriple dirac_interface_triple() {
    const CMatrix id = identity(2);
    return {"dirac-interface", TripleKind::interface, 2, {hcat(-id, id)}, {hcat(0.5 * Ymat(), 0.5 * Ymat())}};
}

BoundaryTriple regularized_dirac_triple(double eps_reg) {
    return {"regdirac", TripleKind::halfline, 2, {hcat(identity(2), CMatrix::Zero(2, 2))},
            {hcat(-0.5 * Ymat(), eps_reg * sz())}};
}

// ---- condition families ----------------------------------------------------

BoundaryCondition laplacian_klm(double K, double ell, double M) {
    BoundaryCondition bc;
    std::ostringstream os;
    os << "klm(K=" << K << ",l=" << ell << ",M=" << M << ")";
    bc.label = os.str();
    bc.triple = "laplacian";
    bc.a = {scalar(K), scalar(ell)};
    bc.b = {scalar(-M)};
    bc.local = LocalKLM{scalar(K), scalar(-I * ell), scalar(M)};
    return bc;
}

BoundaryCondition dirac_halfline_a(double a) {
    BoundaryCondition bc;
    bc.triple = "dirac-halfline";
    if (std::isinf(a)) {
        bc.label = "a=inf";
        bc.a = {scalar(1.0)};
        bc.b = {scalar(-1.0)};
        return bc;
    }
    bc.label = "a=" + fmt(a);
    bc.a = {scalar(1.0 + a)};
    bc.b = {scalar(1.0 - a)};
    return bc;
}

BoundaryCondition dirac_transparent() {
    return {"transparent", "dirac-interface", {identity(2)}, {CMatrix::Zero(2, 2)}, std::nullopt};
}

BoundaryCondition dirac_decoupled(double a_plus, double a_minus) {
    BoundaryCondition bc;
    bc.label = "decoupled(a+=" + fmt(a_plus) + ",a-=" + fmt(a_minus) + ")";
    bc.triple = "dirac-interface";
    bc.a = {0.5 * matrix(2, 2, {-1, a_plus, 1, -a_minus})};
    bc.b = {matrix(2, 2, {a_plus, 1, a_minus, 1})};
    return bc;
}

BoundaryCondition regularized_dirac_a(double a, double eps_reg) {
    if (eps_reg == 0.0) fail(ErrorKind::domain, "regularized Dirac: eps must be nonzero");
    BoundaryCondition bc;
    bc.label = "a=" + fmt(a);
    bc.triple = "regdirac";
    bc.a = {matrix(2, 2, {1, 0, 1.0 / (2.0 * eps_reg), 0}), matrix(2, 2, {0, 0, 0, -a})};
    bc.b = {matrix(2, 2, {0, 0, 0, 1.0 / eps_reg})};
    bc.local = LocalKLM{matrix(2, 2, {1, 0, 0, 0}), matrix(2, 2, {0, 0, 0, -I * a}), matrix(2, 2, {0, 0, 0, 1})};
    return bc;
}

BoundaryCondition regularized_dirac_klm(const CMatrix& K, const CMatrix& L, const CMatrix& M, double eps_reg) {
    const ABPair at0 = klm_to_ab(TripleTag::regularized_dirac, K, CMatrix::Zero(2, 2), M, 0.0, eps_reg);
    BoundaryCondition bc;
    bc.label = "klm";
    bc.triple = "regdirac";
    bc.a = {at0.A, I * L};
    bc.b = {at0.B};
    bc.local = LocalKLM{K, L, M};
    return bc;
}

// ---- models ----------------------------------------------------------------

ModelDescriptor laplacian() {
    ModelDescriptor d;
    d.name = "laplacian";
    d.symbol = laplacian_symbol();
    d.setups["halfline"] = EdgeSetup{laplacian_triple(), d.symbol, std::nullopt};
    d.declared_gap = GapWindow{-10.0, 0.0, false};
    d.fiducial_E = -1.0;
    d.chern_level = -1.0;
    d.bc_factory = [](const BoundarySpec& s) -> ModelBC {
        if (s.family == "dirichlet") {
            check_keys(s, {});
            BoundaryCondition bc = laplacian_klm(1.0, 0.0, 0.0);
            bc.label = "dirichlet";
            return {"halfline", bc};
        }
        if (s.family == "neumann") {
            check_keys(s, {});
            BoundaryCondition bc = laplacian_klm(0.0, 0.0, 1.0);
            bc.label = "neumann";
            return {"halfline", bc};
        }
        if (s.family == "klm") {
            check_keys(s, {"K", "l", "M"});
            return {"halfline", laplacian_klm(require_param(s, "K"), param(s.params, "l", 0.0), param(s.params, "M", 1.0))};
        }
        fail(ErrorKind::input, "laplacian has no boundary family '" + s.family + "' (dirichlet, neumann, klm)");
    };
    return d;
}

ModelDescriptor dirac(double m) {
    if (m == 0.0 || !std::isfinite(m)) fail(ErrorKind::domain, "dirac: the mass must be nonzero");
    ModelDescriptor d;
    d.name = "dirac";
    d.params = {{"m", m}};
    d.symbol = dirac_symbol(m);
    d.setups["halfline"] = EdgeSetup{dirac_halfline_triple(), d.symbol, std::nullopt};
    d.setups["interface"] = EdgeSetup{dirac_interface_triple(), d.symbol, d.symbol};
    d.declared_gap = GapWindow{-std::abs(m), std::abs(m), false};
    d.fiducial_E = 0.0;
    d.chern_level = 0.0;
    d.bc_factory = [](const BoundarySpec& s) -> ModelBC {
        if (s.family == "a") {
            check_keys(s, {"a"});
            return {"halfline", dirac_halfline_a(require_param(s, "a"))};
        }
        if (s.family == "transparent") {
            check_keys(s, {});
            return {"interface", dirac_transparent()};
        }
        if (s.family == "decoupled") {
            check_keys(s, {"a_plus", "a_minus"});
            return {"interface", dirac_decoupled(require_param(s, "a_plus"), require_param(s, "a_minus"))};
        }
        fail(ErrorKind::input, "dirac has no boundary family '" + s.family + "' (a, transparent, decoupled)");
    };
    return d;
}

ModelDescriptor dirac_interface(double m_plus, double m_minus) {
    if (m_plus == 0.0 || m_minus == 0.0) fail(ErrorKind::domain, "dirac-interface: masses must be nonzero");
    ModelDescriptor d = dirac(m_plus);
    d.name = "dirac-interface";
    d.params = {{"m_plus", m_plus}, {"m_minus", m_minus}};
    d.setups.erase("halfline");
    d.setups["interface"].left = dirac_symbol(m_minus);
    const double g = std::min(std::abs(m_plus), std::abs(m_minus));
    d.declared_gap = GapWindow{-g, g, false};
    return d;
}

ModelDescriptor regularized_dirac(double m, double eps_reg) {
    if (m == 0.0 || eps_reg == 0.0 || !(std::abs(eps_reg) < 0.5 * std::abs(m)))
        fail(ErrorKind::domain, "regdirac: need m != 0 and 0 < |eps| < |m|/2");
    ModelDescriptor d;
    d.name = "regdirac";
    d.params = {{"m", m}, {"eps", eps_reg}};
    d.symbol = regularized_dirac_symbol(m, eps_reg);
    d.setups["halfline"] = EdgeSetup{regularized_dirac_triple(eps_reg), d.symbol, std::nullopt};
    d.declared_gap = GapWindow{-std::abs(m), std::abs(m), false};
    d.fiducial_E = 0.0;
    d.chern_level = 0.0;
    d.bc_factory = [eps_reg](const BoundarySpec& s) -> ModelBC {
        if (s.family == "dirichlet") {
            check_keys(s, {});
            return {"halfline", {"dirichlet", "regdirac", {identity(2)}, {CMatrix::Zero(2, 2)}, std::nullopt}};
        }
        if (s.family == "a") {
            check_keys(s, {"a"});
            return {"halfline", regularized_dirac_a(require_param(s, "a"), eps_reg)};
        }
        if (s.family == "klm") {
            // Diagonal (K, L, M): K1,K2,L1,L2,M1,M2.
            check_keys(s, {"K1", "K2", "L1", "L2", "M1", "M2"});
            auto diag = [&](const char* a, const char* b) {
                return matrix(2, 2, {param(s.params, a, 0.0), 0, 0, param(s.params, b, 0.0)});
            };
            BoundaryCondition bc = regularized_dirac_klm(diag("K1", "K2"), diag("L1", "L2"), diag("M1", "M2"), eps_reg);
            bc.label = s.text();
            return {"halfline", bc};
        }
        fail(ErrorKind::input, "regdirac has no boundary family '" + s.family + "' (dirichlet, a, klm)");
    };
    return d;
}

ModelDescriptor shallow_water(double f, double nu) {
    if (f == 0.0) fail(ErrorKind::domain, "shallow-water: f must be nonzero");
    ModelDescriptor d;
    d.name = "shallow-water";
    d.params = {{"f", f}, {"nu", nu}};
    d.symbol = shallow_water_symbol(f, nu);
    d.declared_gap = GapWindow{0.0, std::abs(f), false};
    d.fiducial_E = 0.5 * std::abs(f);
    d.chern_level = 0.5 * std::abs(f);
    return d;
}

ModelDescriptor builtin_model(const std::string& name, const std::map<std::string, double>& p) {
    if (name == "laplacian") {
        check_model_keys(name, p, {});
        return laplacian();
    }
    if (name == "dirac") {
        check_model_keys(name, p, {"m"});
        return dirac(param(p, "m", 1.0));
    }
    if (name == "dirac-interface") {
        check_model_keys(name, p, {"m_plus", "m_minus"});
        return dirac_interface(param(p, "m_plus", 1.0), param(p, "m_minus", -1.0));
    }
    if (name == "regdirac") {
        check_model_keys(name, p, {"m", "eps"});
        return regularized_dirac(param(p, "m", -1.0), param(p, "eps", 0.1));
    }
    if (name == "shallow-water") {
        check_model_keys(name, p, {"f", "nu"});
        return shallow_water(param(p, "f", 1.0), param(p, "nu", 0.1));
    }
    fail(ErrorKind::input,
         "unknown model '" + name + "' (laplacian, dirac, dirac-interface, regdirac, shallow-water)");
}

}  // namespace bec
