#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "bec/edge.hpp"

namespace bec {

// "family:key=val,key=val" as typed on the command line or in a model file.
struct BoundarySpec {
    std::string family;
    std::map<std::string, double> params;

    static BoundarySpec parse(const std::string& text);
    std::string text() const;
};

struct ModelBC {
    std::string setup;  // key into ModelDescriptor::setups
    BoundaryCondition bc;
};

struct ModelDescriptor {
    std::string name;
    std::map<std::string, double> params;
    Symbol symbol;
    std::map<std::string, EdgeSetup> setups;  // "halfline" and/or "interface"
    std::optional<GapWindow> declared_gap;
    double fiducial_E = 0.0;
    double chern_level = 0.0;
    std::function<ModelBC(const BoundarySpec&)> bc_factory;

    bool has_edge() const { return !setups.empty(); }
    const EdgeSetup& setup(const std::string& key) const;
    ModelBC boundary(const BoundarySpec& spec) const;
    // Reference condition (A, B) = (1, 0) of the setup's triple.
    ModelBC reference(const std::string& setup_key) const;
    // Setup used when a command names no condition.
    std::string default_setup() const;
    // Default k window: 20 max(1, gap scale).
    double default_k_window() const;
};

ModelDescriptor laplacian();
ModelDescriptor dirac(double m);
ModelDescriptor dirac_interface(double m_plus, double m_minus);
ModelDescriptor regularized_dirac(double m, double eps_reg);
ModelDescriptor shallow_water(double f, double nu);

// Built-in by name: laplacian, dirac(m), dirac-interface(m_plus, m_minus),
// regdirac(m, eps), shallow-water(f, nu). Missing params take defaults.
ModelDescriptor builtin_model(const std::string& name, const std::map<std::string, double>& params);

// Bulk symbols, exposed for tests.
Symbol laplacian_symbol();
Symbol dirac_symbol(double m);
Symbol regularized_dirac_symbol(double m, double eps_reg);
Symbol shallow_water_symbol(double f, double nu);

// Triples.
BoundaryTriple laplacian_triple();
BoundaryTriple dirac_halfline_triple();
BoundaryTriple dirac_interface_triple();
BoundaryTriple regularized_dirac_triple(double eps_reg);

// Condition families.
BoundaryCondition laplacian_klm(double K, double ell, double M);
BoundaryCondition dirac_halfline_a(double a);  // a = inf allowed
BoundaryCondition dirac_transparent();
BoundaryCondition dirac_decoupled(double a_plus, double a_minus);
BoundaryCondition regularized_dirac_a(double a, double eps_reg);
BoundaryCondition regularized_dirac_klm(const CMatrix& K, const CMatrix& L, const CMatrix& M, double eps_reg);

}  // namespace bec
