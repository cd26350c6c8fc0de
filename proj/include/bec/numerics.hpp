#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bec/errors.hpp"

namespace bec {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr int max_matrix_size = 64;
inline constexpr cplx I{0.0, 1.0};

double norm_inf(const CMatrix& m);
bool is_hermitian(const CMatrix& m, double tol = 1e-12);
// Throws a contract error for NaN/Inf entries or sizes outside 1..64.
void require_valid(const CMatrix& m, const char* what);

CMatrix identity(int n);
// Row-major construction, handy for tests and model tables.
CMatrix matrix(int rows, int cols, std::initializer_list<cplx> entries);

struct HermEig {
    Eigen::VectorXd values;  // ascending
    CMatrix vectors;         // columns, unitary
};

HermEig herm_eig(const CMatrix& m);

struct Eigenpair {
    cplx value;
    CVector vector;
};

std::vector<Eigenpair> complex_eig(const CMatrix& m);
std::vector<cplx> eigenvalues(const CMatrix& m);

double min_singular(const CMatrix& m);
// Unit right singular vector belonging to the smallest singular value.
CVector null_vector(const CMatrix& m);
// Orthonormal basis of the column space of a full-column-rank matrix.
CMatrix orthonormal_columns(const CMatrix& m);

class ScalarPolynomial {
public:
    ScalarPolynomial() = default;
    explicit ScalarPolynomial(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {}

    static ScalarPolynomial from_roots(std::span<const cplx> roots);

    const std::vector<cplx>& coeffs() const { return c_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    cplx operator()(cplx x) const;
    cplx derivative(cplx x) const;
    // Drops leading coefficients below 1e-12 relative to the largest one.
    ScalarPolynomial trimmed(double rel_tol = 1e-12) const;

private:
    std::vector<cplx> c_;
};

// Roots of the trimmed polynomial (companion eigenvalues, Newton-polished).
std::vector<cplx> poly_roots(const ScalarPolynomial& p);

struct QuadResult {
    cplx value{0.0, 0.0};
    double error = 0.0;
    bool converged = true;
    int cells = 0;
};

using Integrand2D = std::function<cplx(double, double)>;

// Integral over R^2 using k_i = tan(pi s_i / 2) and adaptive Gauss-Legendre
// cells on (-1,1)^2. Absolute tolerance on the integral.
QuadResult quad_2d(const Integrand2D& f, double tol, int max_cells = 6000);

// Same cell scheme directly on the square [x0,x1] x [y0,y1].
QuadResult quad_rect(const Integrand2D& f, double x0, double x1, double y0, double y1,
                     double tol, int max_cells = 6000);

// Total winding (1/2pi) sum of principal phase increments. Throws
// insufficient_resolution when a step reaches pi/2.
double unwind_phase(std::span<const cplx> samples);

}  // namespace bec
