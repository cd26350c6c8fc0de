#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bec/models.hpp"

namespace bec {

// Complex literals: "1.5", "-2", "0.5+2i", "1-i", "3i".
cplx parse_complex(std::string_view text);
std::string format_complex(cplx v);

// Matrix literal "rows cols : e11 e12 ... " (row-major).
CMatrix parse_matrix_literal(std::string_view text);
std::string format_matrix_literal(const CMatrix& m);

struct MatrixTerm {
    int power = 0;
    CMatrix value;
};

struct BoundarySection {
    std::string label;
    std::optional<BoundarySpec> family;  // "family = ..." plus numeric keys
    std::vector<MatrixTerm> A, B;        // explicit A(k), B(k)
    std::optional<CMatrix> K, L, M;      // local form C(k) = K + i k L
};

struct NumericsSection {
    std::optional<double> tol, k_window;
    std::optional<int> k_resolution, lambda_resolution, max_halvings;
};

struct TaskSection {
    std::optional<double> E, level, gap_lo, gap_hi;
};

struct ModelFile {
    std::string builtin;  // empty for an inline symbol
    std::string name;
    std::map<std::string, double> params;
    std::optional<Symbol> symbol;
    std::optional<BoundaryTriple> triple;
    std::optional<BoundarySection> boundary, reference;
    NumericsSection numerics;
    TaskSection task;
};

// Sections: [model] [symbol] [triple] [boundary] [reference] [numerics] [task].
// Unknown sections and keys are input errors carrying the line number.
ModelFile parse_model_file(std::string_view text);
ModelFile load_model_file(const std::string& path);
// Normalized text; parse_model_file(emit_model_file(f)) reproduces f.
std::string emit_model_file(const ModelFile& f);

ModelDescriptor build_model(const ModelFile& f);
ModelBC build_boundary(const ModelDescriptor& d, const BoundarySection& s);

}  // namespace bec
