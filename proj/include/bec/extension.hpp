#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bec/symbol.hpp"

namespace bec {

enum class Side { right, left };

struct DeficiencyEntry {
    cplx mu;       // decay exponent, solution phi * exp(-mu y)
    CVector phi;   // unit amplitude
};

struct DeficiencyBasis {
    double k = 0.0;
    cplx z;
    Side side = Side::right;
    int order = 0;  // fiber order n
    std::vector<DeficiencyEntry> entries;

    // (n*N) x d jet matrix with columns (phi, -mu phi, mu^2 phi, ...).
    CMatrix jet() const;
};

// Exponential solutions of (H(k) - z) psi = 0 decaying on `side`. Requires Im z != 0.
DeficiencyBasis deficiency_basis(const FiberOperator& f, cplx z, Side side);
// Same selection without the Im z check; used on the real axis inside gaps.
DeficiencyBasis decaying_solutions(const FiberOperator& f, cplx z, Side side);

enum class TripleKind { halfline, interface };

// Trace maps acting on boundary jets; G1(k) = sum_j g1[j] k^j, likewise G2.
struct BoundaryTriple {
    std::string name;
    TripleKind kind = TripleKind::halfline;
    int dim_v = 0;
    std::vector<CMatrix> g1;
    std::vector<CMatrix> g2;

    CMatrix G1(double k) const;
    CMatrix G2(double k) const;
};

// Local condition C(k) psi(0) + M psi'(0) = 0 with C(k) = K + i k L, kept for
// provenance when a condition came from the (K, L, M) form.
struct LocalKLM {
    CMatrix K, L, M;
};

struct BoundaryCondition {
    std::string label;
    std::string triple;          // name of the triple this condition refers to
    std::vector<CMatrix> a;      // A(k) = sum_j a[j] k^j
    std::vector<CMatrix> b;
    std::optional<LocalKLM> local;

    CMatrix A(double k) const;
    CMatrix B(double k) const;
};

BoundaryCondition reference_condition(const BoundaryTriple& t);

struct Admissibility {
    bool ok = true;
    double min_sv = 0.0;        // smallest singular value of iA + B
    double hermiticity = 0.0;   // ||AB* - BA*||
};

Admissibility admissibility(const BoundaryCondition& bc, double k);
void require_admissible(const BoundaryCondition& bc, double k);

// Everything needed to pose the boundary problem at a given k: the bulk
// symbol on each side and the triple.
struct EdgeSetup {
    BoundaryTriple triple;
    Symbol right;
    std::optional<Symbol> left;  // interface only; defaults to `right`

    const Symbol& left_symbol() const { return left ? *left : right; }
};

// Jet matrix of the full deficiency space at (k, z): right solutions for a
// half-line, block-diagonal (0+ block, 0- block) for an interface.
struct DeficiencySpace {
    std::vector<DeficiencyBasis> parts;
    CMatrix J;
};

DeficiencySpace deficiency_space(const EdgeSetup& setup, double k, cplx z, bool real_axis = false);

CMatrix krein_Q(const BoundaryTriple& t, double k, const CMatrix& J);
CMatrix krein_Q(const EdgeSetup& setup, double k, cplx z);

CMatrix weyl_W(const BoundaryCondition& bc, const CMatrix& Q, double k);

CMatrix vn_unitary(const BoundaryCondition& bc, const EdgeSetup& setup, double k);

enum class TripleTag { laplacian, regularized_dirac };

struct ABPair {
    CMatrix A, B;
};

ABPair klm_to_ab(TripleTag tag, const CMatrix& K, const CMatrix& L, const CMatrix& M, double k,
                 double eps_reg = 0.0);

enum class Affiliation { affiliated, not_affiliated, inconclusive };

struct AffiliationVerdict {
    Affiliation verdict = Affiliation::inconclusive;
    int direction = 0;  // +1 / -1 for the failing side, 2 for both, 0 otherwise
    std::vector<double> kappa;
    std::vector<double> r_plus;
    std::vector<double> r_minus;

    bool affiliated() const { return verdict == Affiliation::affiliated; }
    std::string describe() const;
};

AffiliationVerdict affiliation_check(const BoundaryCondition& bc, const EdgeSetup& setup);

// Max over basis pairs of |<psi, H phi> - <H psi, phi> - (<G1 psi, G2 phi> - <G2 psi, G1 phi>)|,
// relative to the size of the terms, using N_i and N_{-i}.
double green_identity_residual(const BoundaryTriple& t, const EdgeSetup& setup, double k);

}  // namespace bec
