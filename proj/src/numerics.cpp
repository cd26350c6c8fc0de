#include "bec/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

namespace bec {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::contract: return "contract violation";
    case ErrorKind::domain: return "domain error";
    case ErrorKind::input: return "input error";
    case ErrorKind::inadmissible: return "inadmissible condition";
    case ErrorKind::not_affiliated: return "not resolvent-affiliated";
    case ErrorKind::numerical: return "numerical failure";
    case ErrorKind::insufficient_resolution: return "insufficient resolution";
    case ErrorKind::gapless: return "gapless point";
    case ErrorKind::no_gap: return "no gap";
    case ErrorKind::band_edge: return "band edge";
    case ErrorKind::degenerate_exponent: return "degenerate decay exponent";
    case ErrorKind::triple_degeneracy: return "triple degeneracy";
    case ErrorKind::not_comparable: return "not comparable";
    case ErrorKind::lost_band: return "lost band";
    case ErrorKind::unsupported: return "unsupported";
    }
    return "error";
}

int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::contract:
    case ErrorKind::domain:
    case ErrorKind::input:
    case ErrorKind::inadmissible:
    case ErrorKind::not_affiliated:
    case ErrorKind::no_gap:
    case ErrorKind::not_comparable:
    case ErrorKind::unsupported:
        return 2;
    default:
        return 3;
    }
}

double norm_inf(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

bool is_hermitian(const CMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return norm_inf(m - m.adjoint()) < tol * (1.0 + norm_inf(m));
}

void require_valid(const CMatrix& m, const char* what) {
    if (m.rows() < 1 || m.cols() < 1 || m.rows() > max_matrix_size || m.cols() > max_matrix_size)
        fail(ErrorKind::contract, std::string(what) + ": matrix size out of range");
    if (!m.allFinite()) fail(ErrorKind::contract, std::string(what) + ": non-finite entry");
}

CMatrix identity(int n) { return CMatrix::Identity(n, n); }

CMatrix matrix(int rows, int cols, std::initializer_list<cplx> entries) {
    if (static_cast<int>(entries.size()) != rows * cols)
        fail(ErrorKind::contract, "matrix: entry count does not match shape");
    CMatrix m(rows, cols);
    auto it = entries.begin();
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = *it++;
    return m;
}

HermEig herm_eig(const CMatrix& m) {
    require_valid(m, "herm_eig");
    if (!is_hermitian(m)) fail(ErrorKind::contract, "herm_eig: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
    if (es.info() != Eigen::Success) fail(ErrorKind::numerical, "herm_eig: no convergence");
    return {es.eigenvalues(), es.eigenvectors()};
}

std::vector<Eigenpair> complex_eig(const CMatrix& m) {
    require_valid(m, "complex_eig");
    if (m.rows() != m.cols()) fail(ErrorKind::contract, "complex_eig: matrix not square");
    Eigen::ComplexEigenSolver<CMatrix> es(m, true);
    if (es.info() != Eigen::Success) {
        std::ostringstream os;
        os << "complex_eig: QR iteration did not converge for\n" << m;
        fail(ErrorKind::numerical, os.str());
    }
    std::vector<Eigenpair> out;
    out.reserve(m.rows());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        out.push_back({es.eigenvalues()(i), es.eigenvectors().col(i)});
    return out;
}

std::vector<cplx> eigenvalues(const CMatrix& m) {
    require_valid(m, "eigenvalues");
    Eigen::ComplexEigenSolver<CMatrix> es(m, false);
    if (es.info() != Eigen::Success) fail(ErrorKind::numerical, "eigenvalues: no convergence");
    return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

double min_singular(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues().minCoeff();
}

CVector null_vector(const CMatrix& m) {
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
    CVector v = svd.matrixV().col(svd.matrixV().cols() - 1);
    // Fix the phase so the largest component is real and positive.
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    v *= std::conj(v(imax)) / std::abs(v(imax));
    return v;
}

CMatrix orthonormal_columns(const CMatrix& m) {
    Eigen::HouseholderQR<CMatrix> qr(m);
    return qr.householderQ() * CMatrix::Identity(m.rows(), m.cols());
}

ScalarPolynomial ScalarPolynomial::from_roots(std::span<const cplx> roots) {
    std::vector<cplx> c{1.0};
    for (cplx r : roots) {
        std::vector<cplx> next(c.size() + 1, 0.0);
        for (size_t j = 0; j < c.size(); ++j) {
            next[j + 1] += c[j];
            next[j] -= r * c[j];
        }
        c = std::move(next);
    }
    return ScalarPolynomial(std::move(c));
}

cplx ScalarPolynomial::operator()(cplx x) const {
    cplx acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

cplx ScalarPolynomial::derivative(cplx x) const {
    cplx acc = 0.0;
    for (int j = degree(); j >= 1; --j) acc = acc * x + static_cast<double>(j) * c_[j];
    return acc;
}

ScalarPolynomial ScalarPolynomial::trimmed(double rel_tol) const {
    double big = 0.0;
    for (cplx v : c_) big = std::max(big, std::abs(v));
    std::vector<cplx> c = c_;
    while (!c.empty() && std::abs(c.back()) <= rel_tol * big) c.pop_back();
    return ScalarPolynomial(std::move(c));
}

std::vector<cplx> poly_roots(const ScalarPolynomial& p) {
    ScalarPolynomial q = p.trimmed();
    if (q.coeffs().empty()) fail(ErrorKind::domain, "poly_roots: zero polynomial");
    const int n = q.degree();
    if (n < 1) fail(ErrorKind::domain, "poly_roots: constant polynomial has no roots");
    const auto& c = q.coeffs();
    std::vector<cplx> roots;
    if (n == 1) {
        roots.push_back(-c[0] / c[1]);
        return roots;
    }
    CMatrix comp = CMatrix::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[i] / c[n];
    roots = eigenvalues(comp);
    for (cplx& r : roots) {
        for (int it = 0; it < 3; ++it) {
            cplx d = q.derivative(r);
            if (d == 0.0) break;
            cplx cand = r - q(r) / d;
            if (std::abs(q(cand)) < std::abs(q(r))) r = cand;
            else break;
        }
    }
    return roots;
}

namespace {

constexpr int gl_order = 8;

struct GaussRule {
    std::array<double, gl_order> x{};
    std::array<double, gl_order> w{};
    GaussRule() {
        using G = boost::math::quadrature::gauss<double, gl_order>;
        const auto& a = G::abscissa();
        const auto& wt = G::weights();
        // Boost stores the non-negative half; gl_order is even.
        for (int i = 0; i < gl_order / 2; ++i) {
            x[gl_order / 2 + i] = a[i];
            w[gl_order / 2 + i] = wt[i];
            x[gl_order / 2 - 1 - i] = -a[i];
            w[gl_order / 2 - 1 - i] = wt[i];
        }
    }
};

const GaussRule& rule() {
    static const GaussRule r;
    return r;
}

cplx gauss_cell(const Integrand2D& f, double x0, double x1, double y0, double y1) {
    const auto& g = rule();
    const double hx = 0.5 * (x1 - x0), cx = 0.5 * (x1 + x0);
    const double hy = 0.5 * (y1 - y0), cy = 0.5 * (y1 + y0);
    cplx acc = 0.0;
    for (int i = 0; i < gl_order; ++i) {
        cplx row = 0.0;
        for (int j = 0; j < gl_order; ++j) row += g.w[j] * f(cx + hx * g.x[i], cy + hy * g.x[j]);
        acc += g.w[i] * row;
    }
    return acc * hx * hy;
}

struct Cell {
    double x0, x1, y0, y1;
    cplx coarse;                 // one rule on the whole cell
    std::array<cplx, 4> fine{};  // one rule on each quarter
    double err = 0.0;
    long id = 0;
    cplx refined() const { return fine[0] + fine[1] + fine[2] + fine[3]; }
};

void refine_cell(const Integrand2D& f, Cell& c) {
    const double xm = 0.5 * (c.x0 + c.x1), ym = 0.5 * (c.y0 + c.y1);
    c.fine[0] = gauss_cell(f, c.x0, xm, c.y0, ym);
    c.fine[1] = gauss_cell(f, xm, c.x1, c.y0, ym);
    c.fine[2] = gauss_cell(f, c.x0, xm, ym, c.y1);
    c.fine[3] = gauss_cell(f, xm, c.x1, ym, c.y1);
    c.err = std::abs(c.coarse - c.refined());
}

struct ByError {
    bool operator()(const Cell& a, const Cell& b) const {
        if (a.err != b.err) return a.err < b.err;
        return a.id > b.id;
    }
};

}  // namespace

QuadResult quad_rect(const Integrand2D& f, double x0, double x1, double y0, double y1, double tol,
                     int max_cells) {
    std::priority_queue<Cell, std::vector<Cell>, ByError> heap;
    long next_id = 0;
    const int pre = 4;
    double total_err = 0.0;
    for (int i = 0; i < pre; ++i) {
        for (int j = 0; j < pre; ++j) {
            Cell c{x0 + (x1 - x0) * i / pre, x0 + (x1 - x0) * (i + 1) / pre,
                   y0 + (y1 - y0) * j / pre, y0 + (y1 - y0) * (j + 1) / pre};
            c.coarse = gauss_cell(f, c.x0, c.x1, c.y0, c.y1);
            refine_cell(f, c);
            c.id = next_id++;
            total_err += c.err;
            heap.push(c);
        }
    }
    int cells = pre * pre;
    while (total_err > tol && cells < max_cells) {
        Cell c = heap.top();
        heap.pop();
        total_err -= c.err;
        const double xm = 0.5 * (c.x0 + c.x1), ym = 0.5 * (c.y0 + c.y1);
        const std::array<std::array<double, 4>, 4> boxes{{{c.x0, xm, c.y0, ym},
                                                          {xm, c.x1, c.y0, ym},
                                                          {c.x0, xm, ym, c.y1},
                                                          {xm, c.x1, ym, c.y1}}};
        for (int q = 0; q < 4; ++q) {
            Cell child{boxes[q][0], boxes[q][1], boxes[q][2], boxes[q][3]};
            child.coarse = c.fine[q];
            refine_cell(f, child);
            child.id = next_id++;
            total_err += child.err;
            heap.push(child);
        }
        cells += 3;
        // Guard against drift of the running sum.
        if (total_err < 0.0) total_err = 0.0;
    }
    std::vector<Cell> leaves;
    leaves.reserve(heap.size());
    while (!heap.empty()) {
        leaves.push_back(heap.top());
        heap.pop();
    }
    std::sort(leaves.begin(), leaves.end(), [](const Cell& a, const Cell& b) { return a.id < b.id; });
    QuadResult out;
    double err = 0.0;
    for (const Cell& c : leaves) {
        out.value += c.refined();
        err += c.err;
    }
    out.error = err;
    out.cells = cells;
    out.converged = err <= tol;
    return out;
}

QuadResult quad_2d(const Integrand2D& f, double tol, int max_cells) {
    constexpr double h = std::numbers::pi / 2.0;
    auto g = [&f](double s1, double s2) -> cplx {
        const double k1 = std::tan(h * s1), k2 = std::tan(h * s2);
        const cplx v = f(k1, k2);
        if (v == 0.0) return 0.0;
        return v * (h * (1.0 + k1 * k1)) * (h * (1.0 + k2 * k2));
    };
    return quad_rect(g, -1.0, 1.0, -1.0, 1.0, tol, max_cells);
}

double unwind_phase(std::span<const cplx> samples) {
    double total = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        const double r = std::abs(samples[i]);
        if (!(r > 0.5 && r < 2.0)) fail(ErrorKind::contract, "unwind_phase: sample off the unit circle");
        if (i == 0) continue;
        const double step = std::arg(samples[i] / samples[i - 1]);
        if (std::abs(step) >= std::numbers::pi / 2.0) {
            std::ostringstream os;
            os << "unwind_phase: phase jump " << step << " at sample " << i << "; refine the sampling";
            fail(ErrorKind::insufficient_resolution, os.str());
        }
        total += step;
    }
    return total / (2.0 * std::numbers::pi);
}

}  // namespace bec
