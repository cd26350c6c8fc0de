#include "bec/report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace bec {

namespace {

std::string num(double v, int prec = 6) {
    std::ostringstream os;
    os << std::setprecision(prec) << v;
    return os.str();
}

std::string fixed3(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << (std::abs(v) < 5e-4 ? 0.0 : v);
    return os.str();
}

std::string sci(double v) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(0) << v;
    return os.str();
}

void add_provenance(InvariantReport& r, const Options& o, const Resolved& n, bool edge) {
    r.provenance.push_back({"tol", num(n.tol) + " (" + o.origin("tol") + ")"});
    if (!edge) {
        r.provenance.push_back({"level", num(n.level) + " (" + o.origin("level") + ")"});
        return;
    }
    r.provenance.push_back({"k_window", num(n.k_window) + " (" + o.origin("k_window") + ")"});
    r.provenance.push_back({"k_resolution", std::to_string(n.k_resolution) + " (" + o.origin("k_resolution") + ")"});
    r.provenance.push_back(
        {"lambda_resolution", std::to_string(n.lambda_resolution) + " (" + o.origin("lambda_resolution") + ")"});
    r.provenance.push_back({"max_halvings", std::to_string(n.max_halvings) + " (" + o.origin("max_halvings") + ")"});
    r.provenance.push_back({"E", num(n.E) + " (" + o.origin("E") + ")"});
    r.provenance.push_back({"gap", "(" + num(n.gap.lo) + ", " + num(n.gap.hi) + ") (" + o.origin("gap") + ")"});
    r.provenance.push_back({"edge acceptance", "sigma_min ratio < 1e-06 (default)"});
    r.provenance.push_back({"winding k_max", "1e+04 (default)"});
}

std::string flow_text(const FlowResult& f) {
    std::ostringstream os;
    os << f.value;
    if (f.flagged) os << " (FLAGGED: " << f.note << ")";
    return os.str();
}

std::string crossings_text(const FlowResult& f) {
    std::ostringstream os;
    os << f.crossings.size() << " crossing(s)";
    for (const auto& c : f.crossings) os << " [k=" << num(c.k, 5) << (c.sign > 0 ? " up]" : " down]");
    return os.str();
}

bool same_condition(const BoundaryCondition& a, const BoundaryCondition& b) {
    if (a.a.size() != b.a.size() || a.b.size() != b.b.size()) return false;
    for (size_t j = 0; j < a.a.size(); ++j)
        if ((a.a[j] - b.a[j]).norm() > 1e-14) return false;
    for (size_t j = 0; j < a.b.size(); ++j)
        if ((a.b[j] - b.b[j]).norm() > 1e-14) return false;
    return true;
}

}  // namespace

void Options::apply(const ModelFile& f) {
    const auto& n = f.numerics;
    if (n.tol) tol = *n.tol, source["tol"] = "file";
    if (n.k_window) k_window = *n.k_window, source["k_window"] = "file";
    if (n.k_resolution) k_resolution = *n.k_resolution, source["k_resolution"] = "file";
    if (n.lambda_resolution) lambda_resolution = *n.lambda_resolution, source["lambda_resolution"] = "file";
    if (n.max_halvings) max_halvings = *n.max_halvings, source["max_halvings"] = "file";
    const auto& t = f.task;
    if (t.E) E = *t.E, source["E"] = "file";
    if (t.level) level = *t.level, source["level"] = "file";
    if (t.gap_lo) gap_lo = *t.gap_lo, source["gap"] = "file";
    if (t.gap_hi) gap_hi = *t.gap_hi, source["gap"] = "file";
}

std::string Options::origin(const std::string& key) const {
    auto it = source.find(key);
    return it == source.end() ? "default" : it->second;
}

Resolved resolve(const Options& o, const ModelDescriptor& d) {
    if (!(o.tol > 0.0)) fail(ErrorKind::input, "tol must be positive");
    if (o.k_resolution < 3) fail(ErrorKind::input, "k_resolution must be at least 3");
    if (o.lambda_resolution < 8) fail(ErrorKind::input, "lambda_resolution must be at least 8");
    if (o.max_halvings < 0) fail(ErrorKind::input, "max_halvings must be non-negative");
    Resolved r;
    r.tol = o.tol;
    r.k_window = o.k_window.value_or(d.default_k_window());
    if (!(r.k_window > 0.0)) fail(ErrorKind::input, "k_window must be positive");
    r.k_resolution = o.k_resolution;
    r.lambda_resolution = o.lambda_resolution;
    r.max_halvings = o.max_halvings;
    r.E = o.E.value_or(d.fiducial_E);
    r.level = o.level.value_or(o.E.value_or(d.chern_level));
    if (o.gap_lo.has_value() != o.gap_hi.has_value()) fail(ErrorKind::input, "give both gap_lo and gap_hi");
    if (o.gap_lo) {
        r.gap = GapWindow{*o.gap_lo, *o.gap_hi, false};
    } else if (d.declared_gap) {
        r.gap = *d.declared_gap;
    } else {
        r.gap = find_gap(d.symbol, r.E, r.k_window, 256);
    }
    if (!(r.gap.hi > r.gap.lo)) fail(ErrorKind::input, "gap window is empty");
    if (!r.gap.contains(r.E)) {
        std::ostringstream os;
        os << "fiducial energy " << r.E << " is outside the gap window (" << r.gap.lo << ", " << r.gap.hi << ")";
        fail(ErrorKind::no_gap, os.str());
    }
    return r;
}

EdgeOptions edge_options(const Resolved& r) {
    EdgeOptions e;
    e.k_min = -r.k_window;
    e.k_max = r.k_window;
    e.k_resolution = r.k_resolution;
    e.lambda_resolution = r.lambda_resolution;
    e.gap = r.gap;
    e.max_halvings = r.max_halvings;
    return e;
}

const char* to_string(Check c) {
    switch (c) {
    case Check::none: return "-";
    case Check::pass: return "PASS";
    case Check::fail: return "FAIL";
    case Check::skipped: return "SKIPPED";
    }
    return "?";
}

std::string InvariantReport::render() const {
    std::ostringstream os;
    os << "model: " << model << "\n";
    os << "task: " << task << "\n";
    for (const auto& v : values) {
        os << v.name << " = " << v.value;
        if (!v.detail.empty()) os << " (" << v.detail << ")";
        os << "\n";
    }
    for (const auto& a : affiliation) os << "affiliation: " << a << "\n";
    for (const auto& w : warnings) os << "WARN: " << w << "\n";
    if (status != Check::none) {
        os << "status: " << to_string(status);
        if (!reason.empty()) os << " (" << reason << ")";
        os << "\n";
    }
    for (const auto& [k, v] : provenance) os << "numerics: " << k << " = " << v << "\n";
    return os.str();
}

std::string model_label(const ModelDescriptor& d) {
    std::string out = d.name;
    if (!d.params.empty()) {
        out += "(";
        bool first = true;
        for (const auto& [k, v] : d.params) {
            out += (first ? "" : ", ") + k + "=" + num(v, 10);
            first = false;
        }
        out += ")";
    }
    return out;
}

InvariantReport task_bulk(const ModelDescriptor& d, const Options& o) {
    InvariantReport r;
    r.model = model_label(d);
    r.task = "bulk";
    const double level = o.level.value_or(o.E.value_or(d.chern_level));
    if (!(o.tol > 0.0)) fail(ErrorKind::input, "tol must be positive");
    find_gap(d.symbol, level, 20.0, 256);
    const ChernResult c = chern(d.symbol, level, o.tol);
    if (!c.converged) fail(ErrorKind::numerical, "chern quadrature did not converge (error " + num(c.quad_error) + ")");
    const bool integral = c.residual < 1e-3;
    r.values.push_back({"chern", fixed3(c.value),
                        integral ? "resid " + sci(c.residual)
                                 : "NON-INTEGER: not strongly affiliated, resid " + num(c.residual, 3)});
    r.values.push_back({"quadrature error", sci(c.quad_error), std::to_string(c.cells) + " cells"});
    for (const auto& w : c.warnings) r.warnings.push_back(w);
    r.provenance.push_back({"tol", num(o.tol) + " (" + o.origin("tol") + ")"});
    r.provenance.push_back({"level", num(level) + " (" + o.origin(o.level ? "level" : "E") + ")"});
    r.provenance.push_back({"integer threshold", "1e-03 (default)"});
    return r;
}

InvariantReport task_relative_chern(const ModelDescriptor& d1, const ModelDescriptor& d2, const Options& o) {
    InvariantReport r;
    r.model = model_label(d1) + " vs " + model_label(d2);
    r.task = "relative-chern";
    const double level = o.level.value_or(o.E.value_or(d1.chern_level));
    find_gap(d1.symbol, level, 20.0, 256);
    find_gap(d2.symbol, level, 20.0, 256);
    const ChernResult c = relative_chern(d1.symbol, d2.symbol, level, o.tol);
    if (!c.converged) fail(ErrorKind::numerical, "relative chern quadrature did not converge");
    r.values.push_back({"relative chern", fixed3(c.value),
                        c.residual < 1e-3 ? "resid " + sci(c.residual) : "NON-INTEGER, resid " + num(c.residual, 3)});
    r.values.push_back({"quadrature error", sci(c.quad_error), std::to_string(c.cells) + " cells"});
    for (const auto& w : c.warnings) r.warnings.push_back(w);
    r.provenance.push_back({"tol", num(o.tol) + " (" + o.origin("tol") + ")"});
    r.provenance.push_back({"level", num(level) + " (" + o.origin(o.level ? "level" : "E") + ")"});
    return r;
}

FlowResult flow_of(const ModelDescriptor& d, const ModelBC& bc, const Resolved& r) {
    const auto bands = track_bands(bc.bc, d.setup(bc.setup), edge_options(r));
    return spectral_flow(bands, r.E);
}

SpectrumResult task_edge_spectrum(const ModelDescriptor& d, const ModelBC& bc, const Options& o) {
    SpectrumResult out;
    out.numerics = resolve(o, d);
    InvariantReport& r = out.report;
    r.model = model_label(d);
    r.task = "edge spectrum " + bc.bc.label;
    const AffiliationVerdict av = affiliation_check(bc.bc, d.setup(bc.setup));
    r.affiliation.push_back(bc.bc.label + ": " + av.describe());
    if (!av.affiliated()) r.warnings.push_back("condition is not resolvent affiliated; edge invariants are not defined");
    out.bands = track_bands(bc.bc, d.setup(bc.setup), edge_options(out.numerics));
    r.values.push_back({"bands", std::to_string(out.bands.size()), ""});
    for (size_t i = 0; i < out.bands.size(); ++i) {
        const auto& b = out.bands[i];
        std::ostringstream os;
        os << b.samples.size() << " samples, k in [" << num(b.samples.front().k, 5) << ", "
           << num(b.samples.back().k, 5) << "], start " << to_string(b.start.kind) << ", end " << to_string(b.end.kind);
        if (b.flat) os << ", FLAT";
        r.values.push_back({"band " + std::to_string(i), os.str(), ""});
    }
    const FlowResult f = spectral_flow(out.bands, out.numerics.E);
    r.values.push_back({"SF", flow_text(f), crossings_text(f)});
    add_provenance(r, o, out.numerics, true);
    return out;
}

InvariantReport task_edge_flow(const ModelDescriptor& d, const ModelBC& bc, const Options& o) {
    SpectrumResult s = task_edge_spectrum(d, bc, o);
    s.report.task = "edge flow " + bc.bc.label;
    std::vector<ReportValue> kept;
    for (auto& v : s.report.values)
        if (v.name.rfind("band ", 0) != 0) kept.push_back(std::move(v));
    s.report.values = std::move(kept);
    return s.report;
}

InvariantReport task_winding(const ModelDescriptor& d, const ModelBC& bc, const std::optional<ModelBC>& ref,
                             const Options& o) {
    const ModelBC rb = ref ? *ref : d.reference(bc.setup);
    if (rb.setup != bc.setup) fail(ErrorKind::input, "conditions belong to different boundary setups");
    InvariantReport r;
    r.model = model_label(d);
    r.task = "winding " + bc.bc.label + " vs " + rb.bc.label;
    const EdgeSetup& setup = d.setup(bc.setup);
    for (const ModelBC* m : {&bc, &rb}) r.affiliation.push_back(m->bc.label + ": " + affiliation_check(m->bc, setup).describe());
    const WindingResult w = relative_winding(bc.bc, rb.bc, setup);
    r.values.push_back({"winding", std::to_string(w.value),
                        "raw " + num(w.raw, 8) + ", resid " + sci(std::max(w.residual, 1e-16)) + ", " +
                            std::to_string(w.samples) + " samples"});
    r.provenance.push_back({"k_max", "1e+04 (default)"});
    r.provenance.push_back({"phase step", "pi/4 (default)"});
    return r;
}

std::optional<int> bulk_invariant(const ModelDescriptor& d, const std::string& setup, const Resolved& r,
                                  std::string& note) {
    const EdgeSetup& s = d.setup(setup);
    ChernResult c;
    if (s.triple.kind == TripleKind::interface) {
        c = relative_chern(s.right, s.left_symbol(), r.E, 1e-6);
        note = "relative chern(right, left) = " + num(c.value, 6);
    } else {
        c = chern(s.right, r.E, 1e-6);
        note = "chern = " + num(c.value, 6);
    }
    if (!c.converged || c.residual >= 1e-3) {
        note += " is not an integer";
        return std::nullopt;
    }
    return static_cast<int>(std::lround(c.value));
}

InvariantReport task_verify(const ModelDescriptor& d, const ModelBC& bc, const ModelBC& ref, const Options& o) {
    if (bc.setup != ref.setup) fail(ErrorKind::input, "conditions belong to different boundary setups");
    const Resolved n = resolve(o, d);
    InvariantReport r;
    r.model = model_label(d);
    r.task = "verify " + bc.bc.label + " vs " + ref.bc.label;
    const EdgeSetup& setup = d.setup(bc.setup);
    bool affiliated = true;
    for (const ModelBC* m : {&bc, &ref}) {
        const AffiliationVerdict v = affiliation_check(m->bc, setup);
        r.affiliation.push_back(m->bc.label + ": " + v.describe());
        affiliated = affiliated && v.affiliated();
    }
    add_provenance(r, o, n, true);
    if (!affiliated) {
        r.status = Check::skipped;
        r.reason = "not resolvent affiliated";
        return r;
    }
    const FlowResult f1 = flow_of(d, bc, n);
    const FlowResult f2 = flow_of(d, ref, n);
    r.values.push_back({"SF(" + bc.bc.label + ")", flow_text(f1), crossings_text(f1)});
    r.values.push_back({"SF(" + ref.bc.label + ")", flow_text(f2), crossings_text(f2)});
    if (f1.flagged || f2.flagged) {
        r.status = Check::skipped;
        r.reason = "spectral flow flagged";
        return r;
    }
    const WindingResult w = relative_winding(bc.bc, ref.bc, setup);
    r.values.push_back({"relative winding", std::to_string(w.value), "resid " + sci(std::max(w.residual, 1e-16))});
    const bool identity = f1.value - f2.value == w.value;
    r.values.push_back({"SF difference = winding", identity ? "PASS" : "FAIL",
                        std::to_string(f1.value - f2.value) + " vs " + std::to_string(w.value)});
    bool ok = identity;

    if (same_condition(ref.bc, reference_condition(setup.triple))) {
        std::string note;
        const std::optional<int> sb = bulk_invariant(d, bc.setup, n, note);
        if (sb) {
            const bool corrected = f1.value == *sb + w.value;
            r.values.push_back({"SF = bulk + winding", corrected ? "PASS" : "FAIL",
                                std::to_string(f1.value) + " vs " + std::to_string(*sb) + " + " +
                                    std::to_string(w.value) + "; " + note});
            ok = ok && corrected;
        } else {
            r.values.push_back({"SF = bulk + winding", "SKIPPED", note});
        }
    } else {
        r.values.push_back({"SF = bulk + winding", "SKIPPED", "reference is not the triple's (1, 0) condition"});
    }
    r.status = ok ? Check::pass : Check::fail;
    if (!ok) r.reason = "identity violated";
    return r;
}

}  // namespace bec
