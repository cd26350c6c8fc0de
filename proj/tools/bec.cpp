// bec: command-line front end over the C API.
#include <bec/bec.h>

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

struct Failure {
    int code;
};

void check(bec_status s, const std::string& context) {
    if (s == BEC_OK) return;
    std::fprintf(stderr, "bec: %s: %s: %s\n", context.c_str(), bec_status_name(s), bec_last_error());
    throw Failure{bec_status_exit_code(s)};
}

void input_error(const std::string& msg) {
    std::fprintf(stderr, "bec: %s\n", msg.c_str());
    throw Failure{2};
}

using ModelPtr = std::unique_ptr<bec_model, decltype(&bec_model_free)>;
using BcPtr = std::unique_ptr<bec_bc, decltype(&bec_bc_free)>;

struct Common {
    std::string model;
    std::vector<std::string> params;
    std::optional<double> tol, k_window, E, level;
    std::optional<int> k_resolution, lambda_resolution, max_halvings;
    std::optional<std::pair<double, double>> gap;
    std::optional<unsigned> seed;
};

struct Edge {
    std::string bc, ref;
};

void add_common(CLI::App* app, Common& c, bool with_model = true) {
    if (with_model)
        app->add_option("--model", c.model, "model file, or builtin name[:key=val,...]")->required();
    app->add_option("--param", c.params, "builtin parameter key=val (repeatable)");
    app->add_option("--tol", c.tol, "quadrature tolerance");
    app->add_option("--k-window", c.k_window, "edge sweep covers k in [-w, w]");
    app->add_option("--k-resolution", c.k_resolution, "initial k samples");
    app->add_option("--lambda-resolution", c.lambda_resolution, "spectral parameter scan points");
    app->add_option("--max-halvings", c.max_halvings, "k step refinement depth");
    app->add_option("--E", c.E, "fiducial energy for spectral flow");
    app->add_option("--level", c.level, "spectral projection level for Chern numbers");
    app->add_option("--gap", c.gap, "gap window lo hi")->expected(2);
    app->add_option("--seed", c.seed, "random seed (accepted for scripting; all commands are deterministic)");
}

ModelPtr load_model(const std::string& spec, const std::vector<std::string>& params) {
    bec_model* m = nullptr;
    if (std::filesystem::is_regular_file(spec)) {
        if (!params.empty()) input_error("--param applies to builtin models; edit the [model] section of " + spec);
        check(bec_model_from_file(spec.c_str(), &m), "model '" + spec + "'");
        return ModelPtr(m, bec_model_free);
    }
    std::string name = spec, joined;
    if (const auto colon = spec.find(':'); colon != std::string::npos) {
        name = spec.substr(0, colon);
        joined = spec.substr(colon + 1);
    }
    for (const auto& p : params) {
        if (p.find('=') == std::string::npos) input_error("--param expects key=val, got '" + p + "'");
        joined += (joined.empty() ? "" : ",") + p;
    }
    check(bec_model_builtin(name.c_str(), joined.c_str(), &m), "model '" + spec + "'");
    return ModelPtr(m, bec_model_free);
}

bec_options make_options(const bec_model* m, const Common& c) {
    bec_options o;
    bec_options_default(&o);
    if (m) check(bec_model_apply_options(m, &o), "model options");
    auto set = [&](auto& field, const auto& v, int slot) {
        if (v) field = *v, o.source[slot] = BEC_SRC_FLAG;
    };
    set(o.tol, c.tol, 0);
    set(o.k_window, c.k_window, 1);
    set(o.k_resolution, c.k_resolution, 2);
    set(o.lambda_resolution, c.lambda_resolution, 3);
    set(o.max_halvings, c.max_halvings, 4);
    set(o.E, c.E, 5);
    set(o.level, c.level, 6);
    if (c.gap) {
        o.gap_lo = c.gap->first;
        o.gap_hi = c.gap->second;
        o.source[7] = BEC_SRC_FLAG;
    }
    return o;
}

// Explicit spec, else the model file's section (which = 0 boundary, 1 reference).
BcPtr load_bc(const bec_model* m, const std::string& spec, int which, bool required) {
    bec_bc* bc = nullptr;
    if (!spec.empty()) {
        check(bec_bc_create(m, spec.c_str(), &bc), "condition '" + spec + "'");
        return BcPtr(bc, bec_bc_free);
    }
    const bec_status s = bec_bc_from_model(m, which, &bc);
    if (s == BEC_OK) return BcPtr(bc, bec_bc_free);
    if (required) check(s, which == 0 ? "--bc" : "--ref");
    return BcPtr(nullptr, bec_bc_free);
}

// Runs one report call and prints its text; returns the report outcome.
template <class F>
int emit(F&& call, const std::string& context) {
    char* text = nullptr;
    int outcome = 0;
    check(call(&text, &outcome), context);
    std::fputs(text, stdout);
    bec_string_free(text);
    return outcome;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bulk, edge and interface invariants of 2D continuum Hamiltonians"};
    app.require_subcommand(1);

    Common bulk_c, rel_c, spec_c, flow_c, wind_c, ver_c, tab_c, show_c;
    Edge spec_e, flow_e, wind_e, ver_e;
    std::string against, out_csv, out_svg, table;

    auto* bulk = app.add_subcommand("bulk", "Chern number of the bulk symbol");
    add_common(bulk, bulk_c);

    auto* rel = app.add_subcommand("relative-chern", "relative Chern number of two symbols");
    add_common(rel, rel_c);
    rel->add_option("--against", against, "second model (file or builtin spec)")->required();

    auto* edge = app.add_subcommand("edge", "edge spectrum and spectral flow");
    edge->require_subcommand(1);
    auto* spectrum = edge->add_subcommand("spectrum", "track edge bands; optional CSV and SVG output");
    add_common(spectrum, spec_c);
    spectrum->add_option("--bc", spec_e.bc, "boundary condition family:key=val,...");
    spectrum->add_option("--out", out_csv, "CSV output path");
    spectrum->add_option("--plot", out_svg, "SVG output path");
    auto* flow = edge->add_subcommand("flow", "spectral flow through the fiducial energy");
    add_common(flow, flow_c);
    flow->add_option("--bc", flow_e.bc, "boundary condition family:key=val,...");

    auto* wind = app.add_subcommand("winding", "relative winding number of two conditions");
    add_common(wind, wind_c);
    wind->add_option("--bc", wind_e.bc, "boundary condition family:key=val,...");
    wind->add_option("--ref", wind_e.ref, "reference condition (default: the triple's (1, 0) condition)");

    auto* verify = app.add_subcommand("verify", "check SF(bc) - SF(ref) against the relative winding");
    add_common(verify, ver_c);
    verify->add_option("--bc", ver_e.bc, "boundary condition family:key=val,...");
    verify->add_option("--ref", ver_e.ref, "reference condition (default: the triple's (1, 0) condition)");

    auto* tables = app.add_subcommand("tables", "recompute a reference table");
    add_common(tables, tab_c, false);
    tables->add_option("which", table, "laplacian, dirac or regdirac")->required();

    auto* show = app.add_subcommand("model", "print the normalized model file");
    add_common(show, show_c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*bulk) {
            const ModelPtr m = load_model(bulk_c.model, bulk_c.params);
            const bec_options o = make_options(m.get(), bulk_c);
            return emit([&](char** t, int* r) { return bec_report_bulk(m.get(), &o, t, r); }, "bulk");
        }
        if (*rel) {
            const ModelPtr m1 = load_model(rel_c.model, rel_c.params);
            const ModelPtr m2 = load_model(against, {});
            const bec_options o = make_options(m1.get(), rel_c);
            return emit([&](char** t, int* r) { return bec_report_relative_chern(m1.get(), m2.get(), &o, t, r); }, "relative-chern");
        }
        if (*spectrum) {
            const ModelPtr m = load_model(spec_c.model, spec_c.params);
            const BcPtr bc = load_bc(m.get(), spec_e.bc, 0, true);
            const bec_options o = make_options(m.get(), spec_c);
            return emit([&](char** t, int* r) { return bec_report_edge_spectrum(m.get(), bc.get(), &o, out_csv.empty() ? nullptr : out_csv.c_str(),
                                                 out_svg.empty() ? nullptr : out_svg.c_str(), t, r); }, "edge spectrum");
        }
        if (*flow) {
            const ModelPtr m = load_model(flow_c.model, flow_c.params);
            const BcPtr bc = load_bc(m.get(), flow_e.bc, 0, true);
            const bec_options o = make_options(m.get(), flow_c);
            return emit([&](char** t, int* r) { return bec_report_edge_flow(m.get(), bc.get(), &o, t, r); }, "edge flow");
        }
        if (*wind) {
            const ModelPtr m = load_model(wind_c.model, wind_c.params);
            const BcPtr bc = load_bc(m.get(), wind_e.bc, 0, true);
            const BcPtr ref = load_bc(m.get(), wind_e.ref, 1, false);
            const bec_options o = make_options(m.get(), wind_c);
            return emit([&](char** t, int* r) { return bec_report_winding(m.get(), bc.get(), ref.get(), &o, t, r); }, "winding");
        }
        if (*verify) {
            const ModelPtr m = load_model(ver_c.model, ver_c.params);
            const BcPtr bc = load_bc(m.get(), ver_e.bc, 0, true);
            const BcPtr ref = load_bc(m.get(), ver_e.ref, 1, false);
            const bec_options o = make_options(m.get(), ver_c);
            return emit([&](char** t, int* r) { return bec_report_verify(m.get(), bc.get(), ref.get(), &o, t, r); }, "verify");
        }
        if (*tables) {
            if (!tab_c.params.empty()) input_error("tables take no --param");
            const bec_options o = make_options(nullptr, tab_c);
            return emit([&](char** t, int* r) { return bec_report_table(table.c_str(), &o, t, r); }, "tables");
        }
        if (*show) {
            const ModelPtr m = load_model(show_c.model, show_c.params);
            return emit([&](char** t, int*) { return bec_model_emit(m.get(), t); }, "model");
        }
    } catch (const Failure& f) {
        return f.code;
    }
    return 2;
}
