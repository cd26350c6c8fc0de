#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bec/numerics.hpp"

namespace bec {

// Matrix polynomial H(k1,k2) = sum c_ab k1^a k2^b with Hermitian coefficients.
class Symbol {
public:
    Symbol() = default;
    explicit Symbol(int n);

    // Adds c to the (a,b) coefficient. Coefficients must be Hermitian and the
    // total degree a+b at most 4.
    Symbol& add_term(int a, int b, const CMatrix& c);

    int size() const { return n_; }
    const std::map<std::pair<int, int>, CMatrix>& terms() const { return terms_; }
    int degree() const;
    int normal_order() const;  // highest power of k2 with a nonzero coefficient

    CMatrix operator()(double k1, double k2) const;

private:
    int n_ = 0;
    std::map<std::pair<int, int>, CMatrix> terms_;
};

CMatrix eval_symbol(const Symbol& s, double k1, double k2);

// H(k) = sum_j D_j d_y^j after k2 -> -i d_y.
struct FiberOperator {
    double k = 0.0;
    int n = 0;               // matrix size N
    std::vector<CMatrix> D;  // D[j], j = 0..order
    int order() const { return static_cast<int>(D.size()) - 1; }
    // sum_j D_j (-mu)^j - z
    CMatrix pencil(cplx mu, cplx z) const;
};

FiberOperator fiberize(const Symbol& s, double k);

// Sorted eigenvalues of H(k, ky) for each ky; result[band][i].
std::vector<std::vector<double>> bulk_bands(const Symbol& s, double k, const std::vector<double>& ky_grid);

struct GapWindow {
    double lo = 0.0;
    double hi = 0.0;
    bool computed = false;
    double width() const { return hi - lo; }
    bool contains(double e) const { return e > lo && e < hi; }
};

GapWindow find_gap(const Symbol& s, double around, double k_window, int resolution);

CMatrix fermi_projection(const Symbol& s, double k1, double k2, double level);

struct ChernResult {
    double value = 0.0;
    double residual = 0.0;   // distance to the nearest integer
    double quad_error = 0.0;
    int cells = 0;
    bool converged = true;
    std::vector<std::string> warnings;
};

// (1/2 pi i) integral of Tr(P [d1 P, d2 P]) for the projection below `level`.
ChernResult chern(const Symbol& s, double level, double tol = 1e-6);

// Same pairing for the pointwise difference of the two integrands.
ChernResult relative_chern(const Symbol& s1, const Symbol& s2, double level, double tol = 1e-6);

// Chern integrand density at k (already divided by 2 pi i).
double chern_density(const Symbol& s, double k1, double k2, double level);

}  // namespace bec
