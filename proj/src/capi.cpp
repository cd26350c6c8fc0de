#include "bec/bec.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <string>

#include "bec/plot.hpp"
#include "bec/report.hpp"
#include "bec/tables.hpp"

struct bec_model {
    bec::ModelFile file;
    bec::ModelDescriptor model;
};

struct bec_bc {
    bec::ModelBC bc;
};

struct bec_bands {
    std::vector<bec::DispersionBand> bands;
};

namespace {

thread_local std::string last_error;

bec_status to_status(bec::ErrorKind k) {
    using bec::ErrorKind;
    switch (k) {
    case ErrorKind::contract: return BEC_ERR_CONTRACT;
    case ErrorKind::domain: return BEC_ERR_DOMAIN;
    case ErrorKind::input: return BEC_ERR_INPUT;
    case ErrorKind::inadmissible: return BEC_ERR_INADMISSIBLE;
    case ErrorKind::not_affiliated: return BEC_ERR_NOT_AFFILIATED;
    case ErrorKind::numerical: return BEC_ERR_NUMERICAL;
    case ErrorKind::insufficient_resolution: return BEC_ERR_INSUFFICIENT_RESOLUTION;
    case ErrorKind::gapless: return BEC_ERR_GAPLESS;
    case ErrorKind::no_gap: return BEC_ERR_NO_GAP;
    case ErrorKind::band_edge: return BEC_ERR_BAND_EDGE;
    case ErrorKind::degenerate_exponent: return BEC_ERR_DEGENERATE_EXPONENT;
    case ErrorKind::triple_degeneracy: return BEC_ERR_TRIPLE_DEGENERACY;
    case ErrorKind::not_comparable: return BEC_ERR_NOT_COMPARABLE;
    case ErrorKind::lost_band: return BEC_ERR_LOST_BAND;
    case ErrorKind::unsupported: return BEC_ERR_UNSUPPORTED;
    }
    return BEC_ERR_INTERNAL;
}

template <class F>
bec_status guarded(F&& body) {
    try {
        last_error.clear();
        body();
        return BEC_OK;
    } catch (const bec::Error& e) {
        last_error = e.what();
        return to_status(e.kind());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return BEC_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return BEC_ERR_INTERNAL;
    }
}

void need(const void* p, const char* what) {
    if (!p) bec::fail(bec::ErrorKind::contract, std::string(what) + " is NULL");
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::map<std::string, double> parse_params(const char* params) {
    if (!params || !*params) return {};
    return bec::BoundarySpec::parse(std::string("p:") + params).params;
}

const char* source_name(int s) { return s == BEC_SRC_FILE ? "file" : s == BEC_SRC_FLAG ? "flag" : "default"; }

bec::Options to_options(const bec_options* o) {
    bec::Options out;
    if (!o) return out;
    static const char* keys[8] = {"tol", "k_window", "k_resolution", "lambda_resolution", "max_halvings",
                                  "E", "level", "gap"};
    out.tol = o->tol;
    if (!std::isnan(o->k_window)) out.k_window = o->k_window;
    out.k_resolution = o->k_resolution;
    out.lambda_resolution = o->lambda_resolution;
    out.max_halvings = o->max_halvings;
    if (!std::isnan(o->E)) out.E = o->E;
    if (!std::isnan(o->level)) out.level = o->level;
    if (!std::isnan(o->gap_lo)) out.gap_lo = o->gap_lo;
    if (!std::isnan(o->gap_hi)) out.gap_hi = o->gap_hi;
    for (int i = 0; i < 8; ++i)
        if (o->source[i] != BEC_SRC_DEFAULT) out.source[keys[i]] = source_name(o->source[i]);
    return out;
}

void put_report(const bec::InvariantReport& r, char** text, int* outcome) {
    if (text) *text = dup(r.render());
    if (outcome) *outcome = r.outcome();
}

bec_model* make_model(bec::ModelFile f) {
    auto m = std::make_unique<bec_model>();
    m->model = bec::build_model(f);
    m->file = std::move(f);
    return m.release();
}

}  // namespace

extern "C" {

const char* bec_last_error(void) { return last_error.c_str(); }

const char* bec_status_name(bec_status s) {
    switch (s) {
    case BEC_OK: return "ok";
    case BEC_ERR_INTERNAL: return "internal";
    default: return bec::to_string(static_cast<bec::ErrorKind>(static_cast<int>(s) - 1));
    }
}

int bec_status_exit_code(bec_status s) {
    if (s == BEC_OK) return 0;
    if (s == BEC_ERR_INTERNAL) return 3;
    return bec::exit_code(static_cast<bec::ErrorKind>(static_cast<int>(s) - 1));
}

void bec_options_default(bec_options* opt) {
    if (!opt) return;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const bec::Options d;
    *opt = bec_options{d.tol, nan, d.k_resolution, d.lambda_resolution, d.max_halvings, nan, nan, nan, nan, {}};
}

bec_status bec_model_builtin(const char* name, const char* params, bec_model** out) {
    return guarded([&] {
        need(name, "name");
        need(out, "out");
        bec::ModelFile f;
        f.builtin = name;
        f.params = parse_params(params);
        *out = make_model(std::move(f));
    });
}

bec_status bec_model_from_text(const char* text, bec_model** out) {
    return guarded([&] {
        need(text, "text");
        need(out, "out");
        *out = make_model(bec::parse_model_file(text));
    });
}

bec_status bec_model_from_file(const char* path, bec_model** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = make_model(bec::load_model_file(path));
    });
}

void bec_model_free(bec_model* m) { delete m; }

bec_status bec_model_emit(const bec_model* m, char** text) {
    return guarded([&] {
        need(m, "model");
        need(text, "text");
        *text = dup(bec::emit_model_file(m->file));
    });
}

bec_status bec_model_apply_options(const bec_model* m, bec_options* opt) {
    return guarded([&] {
        need(m, "model");
        need(opt, "opt");
        const auto& n = m->file.numerics;
        const auto& t = m->file.task;
        if (n.tol) opt->tol = *n.tol, opt->source[0] = BEC_SRC_FILE;
        if (n.k_window) opt->k_window = *n.k_window, opt->source[1] = BEC_SRC_FILE;
        if (n.k_resolution) opt->k_resolution = *n.k_resolution, opt->source[2] = BEC_SRC_FILE;
        if (n.lambda_resolution) opt->lambda_resolution = *n.lambda_resolution, opt->source[3] = BEC_SRC_FILE;
        if (n.max_halvings) opt->max_halvings = *n.max_halvings, opt->source[4] = BEC_SRC_FILE;
        if (t.E) opt->E = *t.E, opt->source[5] = BEC_SRC_FILE;
        if (t.level) opt->level = *t.level, opt->source[6] = BEC_SRC_FILE;
        if (t.gap_lo) opt->gap_lo = *t.gap_lo, opt->source[7] = BEC_SRC_FILE;
        if (t.gap_hi) opt->gap_hi = *t.gap_hi, opt->source[7] = BEC_SRC_FILE;
    });
}

bec_status bec_bc_create(const bec_model* m, const char* spec, bec_bc** out) {
    return guarded([&] {
        need(m, "model");
        need(spec, "spec");
        need(out, "out");
        const bec::BoundarySpec s = bec::BoundarySpec::parse(spec);
        bec::ModelBC bc = s.family == "reference" && s.params.empty() ? m->model.reference(m->model.default_setup())
                                                                      : m->model.boundary(s);
        *out = new bec_bc{std::move(bc)};
    });
}

bec_status bec_bc_from_model(const bec_model* m, int which, bec_bc** out) {
    return guarded([&] {
        need(m, "model");
        need(out, "out");
        const auto& sec = which == 0 ? m->file.boundary : m->file.reference;
        if (!sec)
            bec::fail(bec::ErrorKind::input,
                      std::string("model file has no [") + (which == 0 ? "boundary" : "reference") + "] section");
        *out = new bec_bc{bec::build_boundary(m->model, *sec)};
    });
}

bec_status bec_bc_reference(const bec_model* m, const bec_bc* bc, bec_bc** out) {
    return guarded([&] {
        need(m, "model");
        need(out, "out");
        const std::string setup = bc ? bc->bc.setup : m->model.default_setup();
        *out = new bec_bc{m->model.reference(setup)};
    });
}

void bec_bc_free(bec_bc* bc) { delete bc; }

bec_status bec_chern(const bec_model* m, double level, double tol, double* value, double* residual) {
    return guarded([&] {
        need(m, "model");
        const bec::ChernResult c = bec::chern(m->model.symbol, level, tol);
        if (!c.converged) bec::fail(bec::ErrorKind::numerical, "chern quadrature did not converge");
        if (value) *value = c.value;
        if (residual) *residual = c.residual;
    });
}

bec_status bec_relative_chern(const bec_model* m1, const bec_model* m2, double level, double tol, double* value,
                              double* residual) {
    return guarded([&] {
        need(m1, "model 1");
        need(m2, "model 2");
        const bec::ChernResult c = bec::relative_chern(m1->model.symbol, m2->model.symbol, level, tol);
        if (!c.converged) bec::fail(bec::ErrorKind::numerical, "relative chern quadrature did not converge");
        if (value) *value = c.value;
        if (residual) *residual = c.residual;
    });
}

bec_status bec_affiliation(const bec_model* m, const bec_bc* bc, int* verdict, int* direction) {
    return guarded([&] {
        need(m, "model");
        need(bc, "bc");
        const bec::AffiliationVerdict v = bec::affiliation_check(bc->bc.bc, m->model.setup(bc->bc.setup));
        if (verdict) *verdict = static_cast<int>(v.verdict);
        if (direction) *direction = v.direction;
    });
}

bec_status bec_winding(const bec_model* m, const bec_bc* bc, const bec_bc* ref, int* value, double* residual) {
    return guarded([&] {
        need(m, "model");
        need(bc, "bc");
        const bec::ModelBC r = ref ? ref->bc : m->model.reference(bc->bc.setup);
        if (r.setup != bc->bc.setup) bec::fail(bec::ErrorKind::input, "conditions belong to different setups");
        const bec::WindingResult w = bec::relative_winding(bc->bc.bc, r.bc, m->model.setup(bc->bc.setup));
        if (value) *value = w.value;
        if (residual) *residual = w.residual;
    });
}

bec_status bec_edge_eigenvalues(const bec_model* m, const bec_bc* bc, double k, double gap_lo, double gap_hi,
                                int lambda_resolution, double* out, size_t capacity, size_t* count) {
    return guarded([&] {
        need(m, "model");
        need(bc, "bc");
        need(count, "count");
        const auto ev = bec::edge_eigenvalues(bc->bc.bc, m->model.setup(bc->bc.setup), k,
                                              bec::GapWindow{gap_lo, gap_hi, false}, lambda_resolution);
        *count = ev.size();
        if (ev.size() > capacity) bec::fail(bec::ErrorKind::contract, "output buffer too small");
        if (!ev.empty()) need(out, "out");
        for (size_t i = 0; i < ev.size(); ++i) out[i] = ev[i];
    });
}

bec_status bec_track_bands(const bec_model* m, const bec_bc* bc, const bec_options* opt, bec_bands** out) {
    return guarded([&] {
        need(m, "model");
        need(bc, "bc");
        need(out, "out");
        const bec::Resolved n = bec::resolve(to_options(opt), m->model);
        auto b = std::make_unique<bec_bands>();
        b->bands = bec::track_bands(bc->bc.bc, m->model.setup(bc->bc.setup), bec::edge_options(n));
        *out = b.release();
    });
}

size_t bec_bands_count(const bec_bands* b) { return b ? b->bands.size() : 0; }

size_t bec_band_samples(const bec_bands* b, size_t band) {
    return b && band < b->bands.size() ? b->bands[band].samples.size() : 0;
}

bec_status bec_band_sample(const bec_bands* b, size_t band, size_t i, double* k, double* lambda) {
    return guarded([&] {
        need(b, "bands");
        if (band >= b->bands.size() || i >= b->bands[band].samples.size())
            bec::fail(bec::ErrorKind::contract, "band or sample index out of range");
        if (k) *k = b->bands[band].samples[i].k;
        if (lambda) *lambda = b->bands[band].samples[i].lambda;
    });
}

int bec_band_flat(const bec_bands* b, size_t band) {
    return b && band < b->bands.size() && b->bands[band].flat ? 1 : 0;
}

bec_status bec_spectral_flow(const bec_bands* b, double E, int* value, int* flagged) {
    return guarded([&] {
        need(b, "bands");
        const bec::FlowResult f = bec::spectral_flow(b->bands, E);
        if (value) *value = f.value;
        if (flagged) *flagged = f.flagged ? 1 : 0;
    });
}

bec_status bec_bands_csv(const bec_bands* b, char** text) {
    return guarded([&] {
        need(b, "bands");
        need(text, "text");
        *text = dup(bec::bands_csv(b->bands));
    });
}

void bec_bands_free(bec_bands* b) { delete b; }

bec_status bec_report_bulk(const bec_model* m, const bec_options* opt, char** text, int* outcome) {
    return guarded([&] {
        need(m, "model");
        put_report(bec::task_bulk(m->model, to_options(opt)), text, outcome);
    });
}

bec_status bec_report_relative_chern(const bec_model* m1, const bec_model* m2, const bec_options* opt, char** text,
                                     int* outcome) {
    return guarded([&] {
        need(m1, "model 1");
        need(m2, "model 2");
        put_report(bec::task_relative_chern(m1->model, m2->model, to_options(opt)), text, outcome);
    });
}

bec_status bec_report_edge_spectrum(const bec_model* m, const bec_bc* bc, const bec_options* opt,
                                    const char* csv_path, const char* svg_path, char** text, int* outcome) {
    return guarded([&] {
        need(m, "model");
        need(bc, "bc");
        bec::SpectrumResult s = bec::task_edge_spectrum(m->model, bc->bc, to_options(opt));
        if (csv_path) {
            bec::write_text_file(csv_path, bec::bands_csv(s.bands));
            s.report.values.push_back({"csv", csv_path, ""});
        }
        if (svg_path) {
            const bec::GapWindow& g = s.numerics.gap;
            const double w = g.width();
            const bec::PlotFrame frame{-s.numerics.k_window, s.numerics.k_window, g.lo - 0.25 * w,
                                       g.hi + 0.25 * w,    s.numerics.E,         s.report.model + ", " + bc->bc.bc.label};
            bec::write_text_file(svg_path, bec::bands_svg(s.bands, m->model.setup(bc->bc.setup).right, frame));
            s.report.values.push_back({"svg", svg_path, ""});
        }
        put_report(s.report, text, outcome);
    });
}

bec_status bec_report_edge_flow(const bec_model* m, const bec_bc* bc, const bec_options* opt, char** text,
                                int* outcome) {
    return guarded([&] {
        need(m, "model");
        need(bc, "bc");
        put_report(bec::task_edge_flow(m->model, bc->bc, to_options(opt)), text, outcome);
    });
}

bec_status bec_report_winding(const bec_model* m, const bec_bc* bc, const bec_bc* ref, const bec_options* opt,
                              char** text, int* outcome) {
    return guarded([&] {
        need(m, "model");
        need(bc, "bc");
        std::optional<bec::ModelBC> r;
        if (ref) r = ref->bc;
        put_report(bec::task_winding(m->model, bc->bc, r, to_options(opt)), text, outcome);
    });
}

bec_status bec_report_verify(const bec_model* m, const bec_bc* bc, const bec_bc* ref, const bec_options* opt,
                             char** text, int* outcome) {
    return guarded([&] {
        need(m, "model");
        need(bc, "bc");
        const bec::ModelBC r = ref ? ref->bc : m->model.reference(bc->bc.setup);
        put_report(bec::task_verify(m->model, bc->bc, r, to_options(opt)), text, outcome);
    });
}

bec_status bec_report_table(const char* which, const bec_options* opt, char** text, int* outcome) {
    return guarded([&] {
        need(which, "which");
        const bec::TableReport t = bec::run_table(which, to_options(opt));
        if (text) *text = dup(t.render());
        if (outcome) *outcome = t.mismatches;
    });
}

void bec_string_free(char* s) { std::free(s); }

}  // extern "C"
