#pragma once

#include <string>
#include <vector>

#include "bec/report.hpp"

namespace bec {

struct TableRow {
    std::string label;       // parameter class label
    std::string condition;   // representative condition used
    std::string expected;
    std::string computed;
    std::string note;
    bool match = false;
};

struct TableReport {
    std::string title;
    std::vector<TableRow> rows;
    int mismatches = 0;
    double seconds = 0.0;

    std::string render() const;
};

// Outcome of one condition: affiliation verdict, spectral flow, and winding
// relative to `ref`. Missing values are reported as "n.a.".
struct RowOutcome {
    AffiliationVerdict affiliation;
    std::optional<int> sf, wind;
    bool flagged = false;
    std::string error;
};

RowOutcome evaluate_condition(const ModelDescriptor& d, const ModelBC& bc, const ModelBC& ref, const Resolved& n,
                              bool want_wind = true);

TableReport table_laplacian(const Options& o);
TableReport table_dirac(const Options& o);
TableReport table_regdirac(const Options& o);
// which: laplacian, dirac, regdirac.
TableReport run_table(const std::string& which, const Options& o);

}  // namespace bec
