#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bec/modelfile.hpp"

namespace bec {

// Tunable numerics for one command. Unset optionals take model defaults;
// `source` records where every value came from ("default", "file", "flag").
struct Options {
    double tol = 1e-6;
    std::optional<double> k_window;
    int k_resolution = 801;
    int lambda_resolution = 400;
    int max_halvings = 8;
    std::optional<double> E, level, gap_lo, gap_hi;
    std::map<std::string, std::string> source;

    // Overlay the [numerics] and [task] sections of a model file.
    void apply(const ModelFile& f);
    std::string origin(const std::string& key) const;
};

// Options with model defaults filled in.
struct Resolved {
    double tol, k_window, E, level;
    int k_resolution, lambda_resolution, max_halvings;
    GapWindow gap;
};

Resolved resolve(const Options& o, const ModelDescriptor& d);
EdgeOptions edge_options(const Resolved& r);

enum class Check { none, pass, fail, skipped };
const char* to_string(Check c);

struct ReportValue {
    std::string name;
    std::string value;
    std::string detail;
};

struct InvariantReport {
    std::string model;
    std::string task;
    std::vector<ReportValue> values;
    std::vector<std::string> affiliation;
    std::vector<std::string> warnings;
    std::vector<std::pair<std::string, std::string>> provenance;
    Check status = Check::none;
    std::string reason;

    std::string render() const;
    // Exit status: 1 for FAIL, 2 for SKIPPED, else 0.
    int outcome() const { return status == Check::fail ? 1 : status == Check::skipped ? 2 : 0; }
};

std::string model_label(const ModelDescriptor& d);

InvariantReport task_bulk(const ModelDescriptor& d, const Options& o);
InvariantReport task_relative_chern(const ModelDescriptor& d1, const ModelDescriptor& d2, const Options& o);

struct SpectrumResult {
    InvariantReport report;
    std::vector<DispersionBand> bands;
    Resolved numerics;
};

SpectrumResult task_edge_spectrum(const ModelDescriptor& d, const ModelBC& bc, const Options& o);
InvariantReport task_edge_flow(const ModelDescriptor& d, const ModelBC& bc, const Options& o);
// Winding of bc relative to ref, or to the triple's reference when ref is empty.
InvariantReport task_winding(const ModelDescriptor& d, const ModelBC& bc, const std::optional<ModelBC>& ref,
                             const Options& o);
InvariantReport task_verify(const ModelDescriptor& d, const ModelBC& bc, const ModelBC& ref, const Options& o);

// Spectral flow of one condition with the resolved numerics.
FlowResult flow_of(const ModelDescriptor& d, const ModelBC& bc, const Resolved& r);

// Bulk invariant that the reference condition's spectral flow should equal:
// the Chern number for a half-line, the relative Chern number of the two
// sides for an interface. Empty when it is not an integer.
std::optional<int> bulk_invariant(const ModelDescriptor& d, const std::string& setup, const Resolved& r,
                                  std::string& note);

}  // namespace bec
