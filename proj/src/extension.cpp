#include "bec/extension.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace bec {

namespace {

CMatrix eval_poly(const std::vector<CMatrix>& coeffs, double k) {
    CMatrix out = coeffs.at(0);
    double w = k;
    for (size_t j = 1; j < coeffs.size(); ++j) {
        out += w * coeffs[j];
        w *= k;
    }
    return out;
}

double spectral_norm(const CMatrix& m) {
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()(0);
}

}  // namespace

CMatrix DeficiencyBasis::jet() const {
    const int d = static_cast<int>(entries.size());
    if (d == 0) return CMatrix(0, 0);
    const int nn = static_cast<int>(entries[0].phi.size());
    CMatrix j(order * nn, d);
    for (int c = 0; c < d; ++c) {
        cplx w = 1.0;
        for (int r = 0; r < order; ++r) {
            j.block(r * nn, c, nn, 1) = w * entries[c].phi;
            w *= -entries[c].mu;
        }
    }
    return j;
}

namespace {

struct ChebyshevFit {
    std::vector<double> nodes;
    Eigen::PartialPivLU<CMatrix> lu;  // monomial Vandermonde matrix at the nodes
};

const ChebyshevFit& chebyshev_fit(int deg) {
    thread_local std::map<int, ChebyshevFit> cache;
    auto it = cache.find(deg);
    if (it != cache.end()) return it->second;
    ChebyshevFit fit;
    CMatrix vander(deg + 1, deg + 1);
    for (int i = 0; i <= deg; ++i) {
        const double t = std::cos(std::numbers::pi * (2.0 * i + 1.0) / (2.0 * (deg + 1)));
        fit.nodes.push_back(t);
        double w = 1.0;
        for (int j = 0; j <= deg; ++j) {
            vander(i, j) = w;
            w *= t;
        }
    }
    fit.lu.compute(vander);
    return cache.emplace(deg, std::move(fit)).first->second;
}

cplx small_det(const CMatrix& m) {
    if (m.rows() == 1) return m(0, 0);
    if (m.rows() == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    return m.determinant();
}

}  // namespace

DeficiencyBasis decaying_solutions(const FiberOperator& f, cplx z, Side side) {
    const int n = f.order();
    if (n < 1) fail(ErrorKind::contract, "deficiency basis: fiber operator has order 0");
    const int deg = n * f.n;

    // Interpolate p(R t) = det(pencil(R t, z)) at Chebyshev nodes in t.
    const double R = 1.0 + std::abs(f.k) + std::sqrt(std::abs(z));
    const ChebyshevFit& fit = chebyshev_fit(deg);
    Eigen::VectorXcd vals(deg + 1);
    for (int i = 0; i <= deg; ++i) vals(i) = small_det(f.pencil(R * fit.nodes[i], z));
    Eigen::VectorXcd coef = fit.lu.solve(vals);
    ScalarPolynomial q(std::vector<cplx>(coef.data(), coef.data() + coef.size()));
    std::vector<cplx> troots = poly_roots(q);
    ScalarPolynomial qt = q.trimmed();

    std::vector<cplx> roots;
    for (cplx t : troots) {
        cplx mu = R * t;
        // Newton polish on the exact determinant.
        for (int it = 0; it < 3; ++it) {
            const cplx p = small_det(f.pencil(mu, z));
            const cplx dp = qt.derivative(mu / R) / R;
            if (dp == 0.0) break;
            const cplx cand = mu - p / dp;
            if (std::abs(small_det(f.pencil(cand, z))) < std::abs(p)) mu = cand;
            else break;
        }
        roots.push_back(mu);
    }

    DeficiencyBasis basis;
    basis.k = f.k;
    basis.z = z;
    basis.side = side;
    basis.order = n;
    for (cplx mu : roots) {
        if (std::abs(mu.real()) <= 1e-8) {
            std::ostringstream os;
            os << "decay exponent " << mu << " on the imaginary axis at k = " << f.k << ", z = " << z;
            fail(ErrorKind::band_edge, os.str());
        }
        const bool keep = side == Side::right ? mu.real() > 0.0 : mu.real() < 0.0;
        if (!keep) continue;
        for (const auto& e : basis.entries) {
            if (std::abs(e.mu - mu) < 1e-6) {
                std::ostringstream os;
                os << "repeated decay exponent " << mu << " at k = " << f.k << ", z = " << z;
                fail(ErrorKind::degenerate_exponent, os.str());
            }
        }
        const CMatrix p = f.pencil(mu, z);
        CVector phi = null_vector(p);
        double scale = std::abs(z);
        double w = 1.0;
        for (const CMatrix& d : f.D) {
            scale += norm_inf(d) * w;
            w *= std::abs(mu);
        }
        const double res = (p * phi).norm();
        if (res > 1e-9 * std::max(1.0, scale)) {
            std::ostringstream os;
            os << "deficiency vector residual " << res << " at mu = " << mu << ", k = " << f.k;
            fail(ErrorKind::numerical, os.str());
        }
        basis.entries.push_back({mu, std::move(phi)});
    }
    std::sort(basis.entries.begin(), basis.entries.end(), [](const auto& a, const auto& b) {
        if (a.mu.real() != b.mu.real()) return a.mu.real() < b.mu.real();
        return a.mu.imag() < b.mu.imag();
    });
    return basis;
}

DeficiencyBasis deficiency_basis(const FiberOperator& f, cplx z, Side side) {
    if (z.imag() == 0.0) fail(ErrorKind::contract, "deficiency_basis: z must be non-real");
    return decaying_solutions(f, z, side);
}

CMatrix BoundaryTriple::G1(double k) const { return eval_poly(g1, k); }
CMatrix BoundaryTriple::G2(double k) const { return eval_poly(g2, k); }

CMatrix BoundaryCondition::A(double k) const { return eval_poly(a, k); }
CMatrix BoundaryCondition::B(double k) const { return eval_poly(b, k); }

BoundaryCondition reference_condition(const BoundaryTriple& t) {
    BoundaryCondition bc;
    bc.label = "reference";
    bc.triple = t.name;
    bc.a = {identity(t.dim_v)};
    bc.b = {CMatrix::Zero(t.dim_v, t.dim_v)};
    return bc;
}

Admissibility admissibility(const BoundaryCondition& bc, double k) {
    const CMatrix A = bc.A(k), B = bc.B(k);
    Admissibility out;
    const CMatrix m = I * A + B;
    out.min_sv = min_singular(m);
    const CMatrix ab = A * B.adjoint();
    out.hermiticity = norm_inf(ab - ab.adjoint());
    out.ok = out.min_sv > 1e-10 * std::max(1.0, norm_inf(m)) && out.hermiticity <= 1e-10 * (1.0 + norm_inf(ab));
    return out;
}

void require_admissible(const BoundaryCondition& bc, double k) {
    const Admissibility a = admissibility(bc, k);
    if (!a.ok) {
        std::ostringstream os;
        os << "condition '" << bc.label << "' is not admissible at k = " << k << " (min sv of iA+B "
           << a.min_sv << ", ||AB*-BA*|| " << a.hermiticity << ")";
        fail(ErrorKind::inadmissible, os.str());
    }
}

DeficiencySpace deficiency_space(const EdgeSetup& setup, double k, cplx z, bool real_axis) {
    auto solve = [&](const Symbol& s, Side side) {
        const FiberOperator f = fiberize(s, k);
        return real_axis ? decaying_solutions(f, z, side) : deficiency_basis(f, z, side);
    };
    DeficiencySpace out;
    if (setup.triple.kind == TripleKind::halfline) {
        out.parts.push_back(solve(setup.right, Side::right));
        out.J = out.parts[0].jet();
        return out;
    }
    out.parts.push_back(solve(setup.right, Side::right));
    out.parts.push_back(solve(setup.left_symbol(), Side::left));
    const CMatrix jr = out.parts[0].jet(), jl = out.parts[1].jet();
    out.J = CMatrix::Zero(jr.rows() + jl.rows(), jr.cols() + jl.cols());
    out.J.topLeftCorner(jr.rows(), jr.cols()) = jr;
    out.J.bottomRightCorner(jl.rows(), jl.cols()) = jl;
    return out;
}

CMatrix krein_Q(const BoundaryTriple& t, double k, const CMatrix& J) {
    const CMatrix g1j = t.G1(k) * J;
    const CMatrix g2j = t.G2(k) * J;
    if (g1j.rows() != g1j.cols()) {
        std::ostringstream os;
        os << "krein_Q: deficiency dimension " << J.cols() << " does not match dim V = " << t.dim_v;
        fail(ErrorKind::triple_degeneracy, os.str());
    }
    const double s = min_singular(g1j);
    if (s <= 1e-10 * std::max(1e-300, spectral_norm(g1j))) {
        std::ostringstream os;
        os << "krein_Q: Gamma_1 is singular on the deficiency space at k = " << k;
        fail(ErrorKind::triple_degeneracy, os.str());
    }
    return g1j.transpose().partialPivLu().solve(g2j.transpose()).transpose();
}

CMatrix krein_Q(const EdgeSetup& setup, double k, cplx z) {
    return krein_Q(setup.triple, k, deficiency_space(setup, k, z).J);
}

CMatrix weyl_W(const BoundaryCondition& bc, const CMatrix& Q, double k) {
    require_admissible(bc, k);
    return bc.A(k) - bc.B(k) * Q;
}

CMatrix vn_unitary(const BoundaryCondition& bc, const EdgeSetup& setup, double k) {
    const CMatrix wp = weyl_W(bc, krein_Q(setup, k, I), k);
    const CMatrix wm = bc.A(k) - bc.B(k) * krein_Q(setup, k, -I);
    if (min_singular(wp) <= 1e-12 * std::max(1.0, norm_inf(wp))) {
        std::ostringstream os;
        os << "W(i) is singular for '" << bc.label << "' at k = " << k;
        fail(ErrorKind::inadmissible, os.str());
    }
    return wp.partialPivLu().solve(wm);
}

ABPair klm_to_ab(TripleTag tag, const CMatrix& K, const CMatrix& L, const CMatrix& M, double k,
                 double eps_reg) {
    const CMatrix C = K + I * k * L;
    switch (tag) {
    case TripleTag::laplacian:
        return {C, -M};
    case TripleTag::regularized_dirac: {
        if (eps_reg == 0.0) fail(ErrorKind::domain, "klm_to_ab: regularization must be nonzero");
        const CMatrix sz = matrix(2, 2, {1, 0, 0, -1});
        const CMatrix Y = matrix(2, 2, {0, 1, -1, 0});
        const CMatrix B = -(1.0 / eps_reg) * M * sz;
        return {C - 0.5 * B * Y, B};
    }
    }
    fail(ErrorKind::unsupported, "klm_to_ab: no converter for this triple");
}

std::string AffiliationVerdict::describe() const {
    std::ostringstream os;
    switch (verdict) {
    case Affiliation::affiliated: os << "affiliated"; break;
    case Affiliation::not_affiliated:
        os << "not-affiliated(" << (direction == 2 ? "both" : direction > 0 ? "+" : "-") << ")";
        break;
    case Affiliation::inconclusive: os << "inconclusive"; break;
    }
    return os.str();
}

AffiliationVerdict affiliation_check(const BoundaryCondition& bc, const EdgeSetup& setup) {
    AffiliationVerdict v;
    v.kappa = {1e2, 1e3, 1e4};
    const CMatrix one = identity(setup.triple.dim_v);
    auto r_at = [&](double k) {
        try {
            return spectral_norm(vn_unitary(bc, setup, k) - one);
        } catch (const Error&) {
            return std::nan("");
        }
    };
    for (double kap : v.kappa) {
        v.r_plus.push_back(r_at(kap));
        v.r_minus.push_back(r_at(-kap));
    }
    // +1 affiliated side, -1 not affiliated, 0 inconclusive
    auto side = [](const std::vector<double>& r) {
        for (double x : r)
            if (std::isnan(x)) return 0;
        const bool decreasing = r[1] <= r[0] * (1.0 + 1e-6) + 1e-12 && r[2] <= r[1] * (1.0 + 1e-6) + 1e-12;
        const bool to_zero = r[2] < 0.5 * r[0] || r[2] < 1e-8;
        if (decreasing && to_zero && r[2] < 0.05) return 1;
        // Plateau: the last decade changes r by less than a factor 2 and r stays away from 0.
        if (r[2] >= 0.5 * r[1] && std::min(r[1], r[2]) > 1e-3) return -1;
        return 0;
    };
    const int p = side(v.r_plus), m = side(v.r_minus);
    if (p == 1 && m == 1) {
        v.verdict = Affiliation::affiliated;
    } else if (p == -1 || m == -1) {
        v.verdict = Affiliation::not_affiliated;
        v.direction = (p == -1 && m == -1) ? 2 : (p == -1 ? 1 : -1);
    }
    return v;
}

double green_identity_residual(const BoundaryTriple& t, const EdgeSetup& setup, double k) {
    const DeficiencySpace s1 = deficiency_space(setup, k, I);
    double worst = 0.0, scale = 0.0;
    for (cplx z2 : {I, -I}) {
        const DeficiencySpace s2 = deficiency_space(setup, k, z2);
        const CMatrix g1a = t.G1(k) * s1.J, g2a = t.G2(k) * s1.J;
        const CMatrix g1b = t.G1(k) * s2.J, g2b = t.G2(k) * s2.J;
        const CMatrix rhs = g1a.adjoint() * g2b - g2a.adjoint() * g1b;
        CMatrix inner = CMatrix::Zero(s1.J.cols(), s2.J.cols());
        int ca = 0;
        for (size_t pa = 0; pa < s1.parts.size(); ++pa) {
            const auto& ea = s1.parts[pa].entries;
            int cb = 0;
            for (size_t pb = 0; pb < s2.parts.size(); ++pb) {
                const auto& eb = s2.parts[pb].entries;
                if (pa == pb) {
                    const double sign = s1.parts[pa].side == Side::right ? 1.0 : -1.0;
                    for (size_t i = 0; i < ea.size(); ++i)
                        for (size_t j = 0; j < eb.size(); ++j)
                            inner(ca + i, cb + j) = sign * ea[i].phi.dot(eb[j].phi) /
                                                    (std::conj(ea[i].mu) + eb[j].mu);
                }
                cb += static_cast<int>(eb.size());
            }
            ca += static_cast<int>(ea.size());
        }
        const CMatrix lhs = (z2 - std::conj(I)) * inner;
        worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
        scale = std::max({scale, lhs.cwiseAbs().maxCoeff(), rhs.cwiseAbs().maxCoeff()});
    }
    return worst / std::max(scale, 1e-300);
}

}  // namespace bec
