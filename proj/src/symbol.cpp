#include "bec/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace bec {

Symbol::Symbol(int n) : n_(n) {
    if (n < 1 || n > max_matrix_size) fail(ErrorKind::contract, "Symbol: matrix size out of range");
}

Symbol& Symbol::add_term(int a, int b, const CMatrix& c) {
    if (a < 0 || b < 0 || a + b > 4) fail(ErrorKind::contract, "Symbol: term degree must be 0..4");
    require_valid(c, "Symbol term");
    if (c.rows() != n_ || c.cols() != n_) fail(ErrorKind::contract, "Symbol: coefficient has wrong size");
    if (!is_hermitian(c)) fail(ErrorKind::contract, "Symbol: coefficient is not Hermitian");
    auto [it, inserted] = terms_.try_emplace({a, b}, c);
    if (!inserted) it->second += c;
    return *this;
}

int Symbol::degree() const {
    int d = 0;
    for (const auto& [ab, c] : terms_)
        if (c.norm() > 0.0) d = std::max(d, ab.first + ab.second);
    return d;
}

int Symbol::normal_order() const {
    int d = 0;
    for (const auto& [ab, c] : terms_)
        if (c.norm() > 0.0) d = std::max(d, ab.second);
    return d;
}

CMatrix Symbol::operator()(double k1, double k2) const {
    CMatrix h = CMatrix::Zero(n_, n_);
    for (const auto& [ab, c] : terms_) h += std::pow(k1, ab.first) * std::pow(k2, ab.second) * c;
    return h;
}

CMatrix eval_symbol(const Symbol& s, double k1, double k2) { return s(k1, k2); }

CMatrix FiberOperator::pencil(cplx mu, cplx z) const {
    CMatrix p = -z * CMatrix::Identity(n, n);
    cplx w = 1.0;
    for (const CMatrix& d : D) {
        p += w * d;
        w *= -mu;
    }
    return p;
}

FiberOperator fiberize(const Symbol& s, double k) {
    FiberOperator f;
    f.k = k;
    f.n = s.size();
    const int order = std::max(s.normal_order(), 0);
    f.D.assign(order + 1, CMatrix::Zero(s.size(), s.size()));
    cplx phase = 1.0;
    std::vector<cplx> mi(order + 1);
    for (int j = 0; j <= order; ++j) {
        mi[j] = phase;
        phase *= -I;
    }
    for (const auto& [ab, c] : s.terms()) {
        if (ab.second > order) continue;
        f.D[ab.second] += mi[ab.second] * std::pow(k, ab.first) * c;
    }
    return f;
}

std::vector<std::vector<double>> bulk_bands(const Symbol& s, double k, const std::vector<double>& ky_grid) {
    if (ky_grid.empty()) fail(ErrorKind::contract, "bulk_bands: empty ky grid");
    std::vector<std::vector<double>> bands(s.size(), std::vector<double>(ky_grid.size()));
    for (size_t i = 0; i < ky_grid.size(); ++i) {
        HermEig e = herm_eig(s(k, ky_grid[i]));
        for (int b = 0; b < s.size(); ++b) bands[b][i] = e.values(b);
    }
    return bands;
}

GapWindow find_gap(const Symbol& s, double around, double k_window, int resolution) {
    if (resolution < 64) fail(ErrorKind::contract, "find_gap: resolution must be at least 64");
    std::vector<double> grid;
    for (int i = 0; i < resolution; ++i) grid.push_back(-k_window + 2.0 * k_window * i / (resolution - 1));
    if (resolution % 2 == 0) grid.push_back(0.0);
    std::sort(grid.begin(), grid.end());

    const int n = s.size();
    std::vector<double> bmin(n, std::numeric_limits<double>::infinity());
    std::vector<double> bmax(n, -std::numeric_limits<double>::infinity());
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    double scale = 1.0;
    for (double k1 : grid) {
        for (double k2 : grid) {
            HermEig e = herm_eig(s(k1, k2));
            for (int b = 0; b < n; ++b) {
                const double v = e.values(b);
                bmin[b] = std::min(bmin[b], v);
                bmax[b] = std::max(bmax[b], v);
                scale = std::max(scale, std::abs(v));
                if (v < around) lo = std::max(lo, v);
                else hi = std::min(hi, v);
            }
        }
    }
    for (int b = 0; b < n; ++b) {
        if (bmin[b] <= around + 1e-9 * scale && bmax[b] >= around - 1e-9 * scale) {
            std::ostringstream os;
            os << "find_gap: energy " << around << " lies inside bulk band " << b << " ["
               << bmin[b] << ", " << bmax[b] << "]";
            fail(ErrorKind::no_gap, os.str());
        }
    }
    // Unbounded sides are clipped to the sampled energy range.
    if (!std::isfinite(lo)) lo = around - 2.0 * scale;
    if (!std::isfinite(hi)) hi = around + 2.0 * scale;
    return {lo, hi, true};
}

CMatrix fermi_projection(const Symbol& s, double k1, double k2, double level) {
    HermEig e = herm_eig(s(k1, k2));
    const int n = s.size();
    CMatrix p = CMatrix::Zero(n, n);
    for (int b = 0; b < n; ++b) {
        const double v = e.values(b);
        if (std::abs(v - level) < 1e-8) {
            std::ostringstream os;
            os << "fermi_projection: eigenvalue " << v << " at level " << level << " for k = (" << k1
               << ", " << k2 << ")";
            fail(ErrorKind::gapless, os.str());
        }
        if (v < level) p += e.vectors.col(b) * e.vectors.col(b).adjoint();
    }
    return p;
}

double chern_density(const Symbol& s, double k1, double k2, double level) {
    auto proj = [&](double a, double b) { return fermi_projection(s, a, b, level); };
    const double h = 1e-4 * (1.0 + std::hypot(k1, k2));
    auto deriv = [&](double dx, double dy) {
        auto central = [&](double step) {
            return CMatrix((proj(k1 + step * dx, k2 + step * dy) - proj(k1 - step * dx, k2 - step * dy)) /
                           (2.0 * step));
        };
        return CMatrix((4.0 * central(0.5 * h) - central(h)) / 3.0);
    };
    const CMatrix p = proj(k1, k2);
    const CMatrix d1 = deriv(1.0, 0.0);
    const CMatrix d2 = deriv(0.0, 1.0);
    const cplx tr = (p * (d1 * d2 - d2 * d1)).trace();
    return (tr / (2.0 * std::numbers::pi * I)).real();
}

namespace {

ChernResult finish(const QuadResult& q) {
    ChernResult r;
    r.value = q.value.real();
    r.residual = std::abs(r.value - std::round(r.value));
    r.quad_error = q.error;
    r.cells = q.cells;
    r.converged = q.converged;
    if (!q.converged) r.warnings.push_back("quadrature did not reach the requested tolerance");
    if (r.residual > 1e-3) r.warnings.push_back("non-integer pairing (projection not regular at infinity)");
    return r;
}

}  // namespace

ChernResult chern(const Symbol& s, double level, double tol) {
    auto f = [&](double k1, double k2) -> cplx { return chern_density(s, k1, k2, level); };
    return finish(quad_2d(f, tol));
}

ChernResult relative_chern(const Symbol& s1, const Symbol& s2, double level, double tol) {
    if (s1.size() != s2.size()) fail(ErrorKind::domain, "relative_chern: symbols have different sizes");
    double gap_at_infinity = 0.0;
    const double r = 1e3;
    for (int i = 0; i < 8; ++i) {
        const double th = 2.0 * std::numbers::pi * i / 8.0;
        const double k1 = r * std::cos(th), k2 = r * std::sin(th);
        gap_at_infinity = std::max(
            gap_at_infinity, norm_inf(fermi_projection(s1, k1, k2, level) - fermi_projection(s2, k1, k2, level)));
    }
    auto f = [&](double k1, double k2) -> cplx {
        return chern_density(s1, k1, k2, level) - chern_density(s2, k1, k2, level);
    };
    ChernResult res = finish(quad_2d(f, tol));
    if (gap_at_infinity > 0.1)
        res.warnings.push_back("projections differ at |k| = 1e3; symbols may not be comparable");
    return res;
}

}  // namespace bec
