#include "bec/modelfile.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace bec {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        const size_t j = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
        if (i > j) out.push_back(s.substr(j, i - j));
    }
    return out;
}

bool to_double(std::string_view s, double& out) {
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    if (s == "inf" || s == "Inf") {
        out = std::numeric_limits<double>::infinity();
        return true;
    }
    if (s == "-inf" || s == "-Inf") {
        out = -std::numeric_limits<double>::infinity();
        return true;
    }
    const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double number(std::string_view s, const std::string& where) {
    double v;
    if (!to_double(trim(s), v)) fail(ErrorKind::input, where + ": '" + std::string(s) + "' is not a number");
    return v;
}

int integer(std::string_view s, const std::string& where) {
    s = trim(s);
    int v;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        fail(ErrorKind::input, where + ": '" + std::string(s) + "' is not an integer");
    return v;
}

// "p : rows cols : entries"
MatrixTerm parse_term(std::string_view text, const std::string& where) {
    const auto c = text.find(':');
    if (c == std::string_view::npos) fail(ErrorKind::input, where + ": expected 'power : rows cols : entries'");
    MatrixTerm t;
    t.power = integer(text.substr(0, c), where);
    if (t.power < 0) fail(ErrorKind::input, where + ": negative power");
    try {
        t.value = parse_matrix_literal(text.substr(c + 1));
    } catch (const Error& e) {
        fail(ErrorKind::input, where + ": " + e.what());
    }
    return t;
}

std::string format_term(const MatrixTerm& t) {
    return std::to_string(t.power) + " : " + format_matrix_literal(t.value);
}

std::vector<CMatrix> to_poly(const std::vector<MatrixTerm>& terms, int rows, int cols, const std::string& what) {
    int top = 0;
    for (const auto& t : terms) top = std::max(top, t.power);
    std::vector<CMatrix> out(top + 1, CMatrix::Zero(rows, cols));
    for (const auto& t : terms) {
        if (t.value.rows() != rows || t.value.cols() != cols) {
            std::ostringstream os;
            os << what << ": term of power " << t.power << " is " << t.value.rows() << "x" << t.value.cols()
               << ", expected " << rows << "x" << cols;
            fail(ErrorKind::input, os.str());
        }
        out[t.power] += t.value;
    }
    return out;
}

std::vector<MatrixTerm> from_poly(const std::vector<CMatrix>& p) {
    std::vector<MatrixTerm> out;
    for (size_t j = 0; j < p.size(); ++j) out.push_back({static_cast<int>(j), p[j]});
    return out;
}

}  // namespace

cplx parse_complex(std::string_view text) {
    std::string_view s = trim(text);
    const std::string where = "complex literal '" + std::string(s) + "'";
    if (s.empty()) fail(ErrorKind::input, "empty complex literal");
    if (s.back() != 'i') {
        double re;
        if (!to_double(s, re)) fail(ErrorKind::input, where + " is malformed");
        return {re, 0.0};
    }
    s.remove_suffix(1);
    // Split at the last sign that is not an exponent sign.
    size_t split = std::string_view::npos;
    for (size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    const std::string_view re_part = split == std::string_view::npos ? std::string_view{} : s.substr(0, split);
    std::string_view im_part = split == std::string_view::npos ? s : s.substr(split);
    double re = 0.0, im;
    if (!re_part.empty() && !to_double(re_part, re)) fail(ErrorKind::input, where + " is malformed");
    if (im_part.empty() || im_part == "+") {
        im = 1.0;
    } else if (im_part == "-") {
        im = -1.0;
    } else if (!to_double(im_part, im)) {
        fail(ErrorKind::input, where + " is malformed");
    }
    return {re, im};
}

std::string format_complex(cplx v) {
    if (v.imag() == 0.0) return fmt_double(v.real());
    std::string im = fmt_double(v.imag());
    if (im.front() != '-') im = "+" + im;
    return fmt_double(v.real()) + im + "i";
}

CMatrix parse_matrix_literal(std::string_view text) {
    const auto c = text.find(':');
    if (c == std::string_view::npos) fail(ErrorKind::input, "matrix literal needs 'rows cols : entries'");
    const auto dims = split_ws(text.substr(0, c));
    if (dims.size() != 2) fail(ErrorKind::input, "matrix literal needs exactly two dimensions");
    const int r = integer(dims[0], "matrix rows"), cc = integer(dims[1], "matrix cols");
    if (r < 1 || cc < 1 || r > max_matrix_size || cc > max_matrix_size)
        fail(ErrorKind::input, "matrix dimensions out of range");
    const auto entries = split_ws(text.substr(c + 1));
    if (static_cast<int>(entries.size()) != r * cc) {
        std::ostringstream os;
        os << "matrix literal has " << entries.size() << " entries, expected " << r * cc;
        fail(ErrorKind::input, os.str());
    }
    CMatrix m(r, cc);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < cc; ++j) m(i, j) = parse_complex(entries[i * cc + j]);
    return m;
}

std::string format_matrix_literal(const CMatrix& m) {
    std::string out = std::to_string(m.rows()) + " " + std::to_string(m.cols()) + " :";
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out += " " + format_complex(m(i, j));
    return out;
}

ModelFile parse_model_file(std::string_view text) {
    ModelFile f;
    std::string section;
    std::optional<int> symbol_n;
    struct RawTerm {
        int a, b;
        CMatrix c;
        std::string where;
    };
    std::vector<RawTerm> raw_terms;
    std::vector<MatrixTerm> g1, g2;
    std::optional<TripleKind> tkind;
    std::optional<int> dim_v;
    std::string tname;
    BoundarySection* cur = nullptr;
    bool seen_model = false;

    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (const auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(line_no);
        if (line.front() == '[') {
            if (line.back() != ']') fail(ErrorKind::input, where + ": unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section == "model") {
                seen_model = true;
            } else if (section == "boundary") {
                if (f.boundary) fail(ErrorKind::input, where + ": duplicate [boundary]");
                f.boundary.emplace();
                cur = &*f.boundary;
            } else if (section == "reference") {
                if (f.reference) fail(ErrorKind::input, where + ": duplicate [reference]");
                f.reference.emplace();
                cur = &*f.reference;
            } else if (section != "symbol" && section != "triple" && section != "numerics" && section != "task") {
                fail(ErrorKind::input, where + ": unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(ErrorKind::input, where + ": expected key = value");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view val = trim(line.substr(eq + 1));
        const std::string kw = where + " (" + key + ")";
        auto unknown = [&] { fail(ErrorKind::input, where + ": unknown key '" + key + "' in [" + section + "]"); };

        if (section.empty()) {
            fail(ErrorKind::input, where + ": key outside of any section");
        } else if (section == "model") {
            if (key == "builtin") {
                f.builtin = std::string(val);
            } else if (key == "name") {
                f.name = std::string(val);
            } else {
                if (!f.params.emplace(key, number(val, kw)).second)
                    fail(ErrorKind::input, where + ": duplicate model parameter '" + key + "'");
            }
        } else if (section == "symbol") {
            if (key == "N") {
                symbol_n = integer(val, kw);
            } else if (key == "term") {
                const auto c = val.find(':');
                if (c == std::string_view::npos) fail(ErrorKind::input, kw + ": expected 'a b : entries'");
                const auto ab = split_ws(val.substr(0, c));
                if (ab.size() != 2) fail(ErrorKind::input, kw + ": expected two powers before ':'");
                if (!symbol_n) fail(ErrorKind::input, kw + ": N must be given before the first term");
                const std::string lit = std::to_string(*symbol_n) + " " + std::to_string(*symbol_n) + " :" +
                                        std::string(val.substr(c + 1));
                CMatrix m;
                try {
                    m = parse_matrix_literal(lit);
                } catch (const Error& e) {
                    fail(ErrorKind::input, kw + ": " + e.what());
                }
                raw_terms.push_back({integer(ab[0], kw), integer(ab[1], kw), m, kw});
            } else {
                unknown();
            }
        } else if (section == "triple") {
            if (key == "name") {
                tname = std::string(val);
            } else if (key == "kind") {
                if (val == "halfline") tkind = TripleKind::halfline;
                else if (val == "interface") tkind = TripleKind::interface;
                else fail(ErrorKind::input, kw + ": kind must be halfline or interface");
            } else if (key == "dim_v") {
                dim_v = integer(val, kw);
            } else if (key == "g1") {
                g1.push_back(parse_term(val, kw));
            } else if (key == "g2") {
                g2.push_back(parse_term(val, kw));
            } else {
                unknown();
            }
        } else if (section == "boundary" || section == "reference") {
            if (key == "label") {
                cur->label = std::string(val);
            } else if (key == "family") {
                if (cur->family) fail(ErrorKind::input, kw + ": duplicate family");
                cur->family = BoundarySpec{std::string(val), {}};
            } else if (key == "A") {
                cur->A.push_back(parse_term(val, kw));
            } else if (key == "B") {
                cur->B.push_back(parse_term(val, kw));
            } else if (key == "K" || key == "L" || key == "M") {
                CMatrix m;
                try {
                    m = parse_matrix_literal(val);
                } catch (const Error& e) {
                    fail(ErrorKind::input, kw + ": " + e.what());
                }
                auto& slot = key == "K" ? cur->K : key == "L" ? cur->L : cur->M;
                if (slot) fail(ErrorKind::input, kw + ": duplicate key");
                slot = m;
            } else {
                if (!cur->family) fail(ErrorKind::input, where + ": parameter '" + key + "' before 'family ='");
                if (!cur->family->params.emplace(key, number(val, kw)).second)
                    fail(ErrorKind::input, where + ": duplicate parameter '" + key + "'");
            }
        } else if (section == "numerics") {
            if (key == "tol") f.numerics.tol = number(val, kw);
            else if (key == "k_window") f.numerics.k_window = number(val, kw);
            else if (key == "k_resolution") f.numerics.k_resolution = integer(val, kw);
            else if (key == "lambda_resolution") f.numerics.lambda_resolution = integer(val, kw);
            else if (key == "max_halvings") f.numerics.max_halvings = integer(val, kw);
            else unknown();
        } else if (section == "task") {
            if (key == "E") f.task.E = number(val, kw);
            else if (key == "level") f.task.level = number(val, kw);
            else if (key == "gap_lo") f.task.gap_lo = number(val, kw);
            else if (key == "gap_hi") f.task.gap_hi = number(val, kw);
            else unknown();
        }
    }

    if (!seen_model) fail(ErrorKind::input, "model file has no [model] section");
    if (!f.builtin.empty() && symbol_n)
        fail(ErrorKind::input, "a built-in model cannot also carry a [symbol] section");
    if (f.builtin.empty()) {
        if (!symbol_n) fail(ErrorKind::input, "model file needs 'builtin =' in [model] or a [symbol] section");
        if (!f.params.empty()) fail(ErrorKind::input, "inline symbols take no [model] parameters");
        Symbol s(*symbol_n);
        for (const auto& t : raw_terms) {
            try {
                s.add_term(t.a, t.b, t.c);
            } catch (const Error& e) {
                fail(ErrorKind::input, t.where + ": " + e.what());
            }
        }
        f.symbol = s;
    }
    if (tkind || dim_v || !g1.empty() || !g2.empty() || !tname.empty()) {
        if (!f.builtin.empty()) fail(ErrorKind::input, "built-in models ship their own [triple]");
        if (!tkind || !dim_v || g1.empty() || g2.empty())
            fail(ErrorKind::input, "[triple] needs kind, dim_v, g1 and g2");
        BoundaryTriple t;
        t.name = tname.empty() ? "custom" : tname;
        t.kind = *tkind;
        t.dim_v = *dim_v;
        const int jet_rows = f.symbol->size() * f.symbol->normal_order() * (t.kind == TripleKind::interface ? 2 : 1);
        t.g1 = to_poly(g1, t.dim_v, jet_rows, "[triple] g1");
        t.g2 = to_poly(g2, t.dim_v, jet_rows, "[triple] g2");
        f.triple = t;
    }
    return f;
}

ModelFile load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::input, "cannot open model file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model_file(ss.str());
}

namespace {

void emit_boundary(std::ostringstream& os, const char* header, const BoundarySection& b) {
    os << "\n[" << header << "]\n";
    if (!b.label.empty()) os << "label = " << b.label << "\n";
    if (b.family) {
        os << "family = " << b.family->family << "\n";
        for (const auto& [k, v] : b.family->params) os << k << " = " << fmt_double(v) << "\n";
    }
    for (const auto& t : b.A) os << "A = " << format_term(t) << "\n";
    for (const auto& t : b.B) os << "B = " << format_term(t) << "\n";
    if (b.K) os << "K = " << format_matrix_literal(*b.K) << "\n";
    if (b.L) os << "L = " << format_matrix_literal(*b.L) << "\n";
    if (b.M) os << "M = " << format_matrix_literal(*b.M) << "\n";
}

}  // namespace

std::string emit_model_file(const ModelFile& f) {
    std::ostringstream os;
    os << "[model]\n";
    if (!f.builtin.empty()) os << "builtin = " << f.builtin << "\n";
    if (!f.name.empty()) os << "name = " << f.name << "\n";
    for (const auto& [k, v] : f.params) os << k << " = " << fmt_double(v) << "\n";
    if (f.symbol) {
        os << "\n[symbol]\nN = " << f.symbol->size() << "\n";
        for (const auto& [ab, c] : f.symbol->terms()) {
            std::string lit = format_matrix_literal(c);
            lit = lit.substr(lit.find(':') + 1);
            os << "term = " << ab.first << " " << ab.second << " :" << lit << "\n";
        }
    }
    if (f.triple) {
        os << "\n[triple]\nname = " << f.triple->name << "\nkind = "
           << (f.triple->kind == TripleKind::halfline ? "halfline" : "interface") << "\ndim_v = " << f.triple->dim_v
           << "\n";
        for (const auto& t : from_poly(f.triple->g1)) os << "g1 = " << format_term(t) << "\n";
        for (const auto& t : from_poly(f.triple->g2)) os << "g2 = " << format_term(t) << "\n";
    }
    if (f.boundary) emit_boundary(os, "boundary", *f.boundary);
    if (f.reference) emit_boundary(os, "reference", *f.reference);
    const auto& n = f.numerics;
    if (n.tol || n.k_window || n.k_resolution || n.lambda_resolution || n.max_halvings) {
        os << "\n[numerics]\n";
        if (n.tol) os << "tol = " << fmt_double(*n.tol) << "\n";
        if (n.k_window) os << "k_window = " << fmt_double(*n.k_window) << "\n";
        if (n.k_resolution) os << "k_resolution = " << *n.k_resolution << "\n";
        if (n.lambda_resolution) os << "lambda_resolution = " << *n.lambda_resolution << "\n";
        if (n.max_halvings) os << "max_halvings = " << *n.max_halvings << "\n";
    }
    const auto& t = f.task;
    if (t.E || t.level || t.gap_lo || t.gap_hi) {
        os << "\n[task]\n";
        if (t.E) os << "E = " << fmt_double(*t.E) << "\n";
        if (t.level) os << "level = " << fmt_double(*t.level) << "\n";
        if (t.gap_lo) os << "gap_lo = " << fmt_double(*t.gap_lo) << "\n";
        if (t.gap_hi) os << "gap_hi = " << fmt_double(*t.gap_hi) << "\n";
    }
    return os.str();
}

ModelDescriptor build_model(const ModelFile& f) {
    if (!f.builtin.empty()) {
        if (!f.name.empty()) fail(ErrorKind::input, "'name' is only used for inline symbols");
        return builtin_model(f.builtin, f.params);
    }
    ModelDescriptor d;
    d.name = f.name.empty() ? "custom" : f.name;
    d.symbol = *f.symbol;
    d.fiducial_E = f.task.E.value_or(0.0);
    d.chern_level = f.task.level.value_or(d.fiducial_E);
    if (f.task.gap_lo && f.task.gap_hi) d.declared_gap = GapWindow{*f.task.gap_lo, *f.task.gap_hi, false};
    if (f.triple) {
        const std::string key = f.triple->kind == TripleKind::halfline ? "halfline" : "interface";
        EdgeSetup setup{*f.triple, d.symbol, std::nullopt};
        if (f.triple->kind == TripleKind::interface) setup.left = d.symbol;
        d.setups[key] = setup;
        d.bc_factory = [](const BoundarySpec& s) -> ModelBC {
            fail(ErrorKind::input, "custom models have no named boundary family '" + s.family +
                                       "'; give A/B matrices in [boundary] instead");
        };
    }
    return d;
}

ModelBC build_boundary(const ModelDescriptor& d, const BoundarySection& s) {
    const bool explicit_ab = !s.A.empty() || !s.B.empty();
    const bool local = s.K || s.L || s.M;
    if (static_cast<int>(s.family.has_value()) + static_cast<int>(explicit_ab) + static_cast<int>(local) != 1)
        fail(ErrorKind::input, "a boundary section needs exactly one of: family, A/B matrices, K/L/M matrices");
    ModelBC out;
    if (s.family) {
        out = d.boundary(*s.family);
    } else if (explicit_ab) {
        if (s.A.empty() || s.B.empty()) fail(ErrorKind::input, "explicit boundary conditions need both A and B");
        out.setup = d.default_setup();
        const BoundaryTriple& t = d.setup(out.setup).triple;
        out.bc.triple = t.name;
        out.bc.label = "A/B";
        out.bc.a = to_poly(s.A, t.dim_v, t.dim_v, "[boundary] A");
        out.bc.b = to_poly(s.B, t.dim_v, t.dim_v, "[boundary] B");
    } else {
        const int n = d.has_edge() ? d.setup(d.default_setup()).triple.dim_v : 0;
        const CMatrix zero = CMatrix::Zero(std::max(n, 1), std::max(n, 1));
        const CMatrix K = s.K.value_or(zero), L = s.L.value_or(zero), M = s.M.value_or(zero);
        if (K.rows() != n || L.rows() != n || M.rows() != n || K.cols() != n || L.cols() != n || M.cols() != n)
            fail(ErrorKind::input, "K, L, M must be square of size dim V");
        out.setup = "halfline";
        if (d.name == "laplacian") {
            out.bc.triple = "laplacian";
            out.bc.a = {K, I * L};
            out.bc.b = {-M};
            out.bc.local = LocalKLM{K, L, M};
        } else if (d.name == "regdirac") {
            out.bc = regularized_dirac_klm(K, L, M, d.params.at("eps"));
        } else {
            fail(ErrorKind::unsupported, "model '" + d.name + "' has no (K, L, M) converter");
        }
        out.bc.label = "klm";
        d.setup(out.setup);
    }
    if (!s.label.empty()) out.bc.label = s.label;
    return out;
}

}  // namespace bec
