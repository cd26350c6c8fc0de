#include "bec/edge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bec/parallel.hpp"

namespace bec {

namespace {

double spectral_norm(const CMatrix& m) {
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()(0);
}

// Boundary operator A G1 - B G2 at fixed k, reused across the lambda scan.
struct BoundaryRow {
    CMatrix op;
    double norm = 1.0;
};

BoundaryRow boundary_row(const BoundaryCondition& bc, const EdgeSetup& setup, double k) {
    BoundaryRow r;
    r.op = bc.A(k) * setup.triple.G1(k) - bc.B(k) * setup.triple.G2(k);
    r.norm = std::max(spectral_norm(r.op), 1e-300);
    return r;
}

double singularity(const BoundaryRow& row, const EdgeSetup& setup, double k, double lambda) {
    const DeficiencySpace ds = deficiency_space(setup, k, cplx(lambda, 0.0), true);
    if (ds.J.cols() != row.op.rows()) {
        std::ostringstream os;
        os << "edge: deficiency dimension " << ds.J.cols() << " differs from dim V = " << row.op.rows()
           << " at k = " << k << ", lambda = " << lambda;
        fail(ErrorKind::triple_degeneracy, os.str());
    }
    return min_singular(row.op * orthonormal_columns(ds.J)) / row.norm;
}

constexpr double accept_threshold = 1e-6;
constexpr double lambda_tol = 1e-10;

// Golden-section minimisation of f on [a, b].
std::pair<double, double> golden_min(const std::function<double(double)>& f, double a, double b) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > lambda_tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

}  // namespace

double boundary_singularity(const BoundaryCondition& bc, const EdgeSetup& setup, double k, double lambda) {
    return singularity(boundary_row(bc, setup, k), setup, k, lambda);
}

std::vector<double> edge_eigenvalues(const BoundaryCondition& bc, const EdgeSetup& setup, double k,
                                     const GapWindow& gap, int lambda_resolution) {
    if (!(gap.hi > gap.lo)) fail(ErrorKind::contract, "edge_eigenvalues: empty gap window");
    if (lambda_resolution < 8) fail(ErrorKind::contract, "edge_eigenvalues: lambda resolution below 8");
    const BoundaryRow row = boundary_row(bc, setup, k);
    const double margin = 1e-6 * gap.width();
    const double lo = gap.lo + margin, hi = gap.hi - margin;
    const int n = lambda_resolution;

    auto s_at = [&](double lam) {
        try {
            return singularity(row, setup, k, lam);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::band_edge || e.kind() == ErrorKind::degenerate_exponent)
                return std::numeric_limits<double>::infinity();
            throw;
        }
    };

    std::vector<double> lam(n), s(n);
    for (int i = 0; i < n; ++i) {
        lam[i] = lo + (hi - lo) * i / (n - 1);
        s[i] = s_at(lam[i]);
    }

    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(s[i])) continue;
        const double left = i > 0 ? s[i - 1] : std::numeric_limits<double>::infinity();
        const double right = i + 1 < n ? s[i + 1] : std::numeric_limits<double>::infinity();
        if (!(s[i] <= left && s[i] < right)) continue;
        const double a = i > 0 ? lam[i - 1] : lam[i];
        const double b = i + 1 < n ? lam[i + 1] : lam[i];
        const auto [x, fx] = golden_min(s_at, a, b);
        // A minimum pinned to the end of the scan is a mode on or beyond the gap edge.
        const double pinned = 1e-3 * (hi - lo) / (n - 1);
        if (fx < accept_threshold && x - lo > pinned && hi - x > pinned) {
            if (out.empty() || x - out.back() > 1e-7) out.push_back(x);
        }
    }
    return out;
}

const char* to_string(Endpoint e) {
    switch (e) {
    case Endpoint::exits_gap_low: return "exits-gap-low";
    case Endpoint::exits_gap_high: return "exits-gap-high";
    case Endpoint::exits_k_window: return "exits-k-window";
    case Endpoint::touches_bulk: return "touches-bulk";
    }
    return "?";
}

namespace {

struct Node {
    double k;
    std::vector<double> ev;
};

bool smooth_step(const Node& a, const Node& b, double width) {
    if (a.ev.size() != b.ev.size()) return false;
    const double close = 2e-3 * width;
    for (size_t j = 0; j < a.ev.size(); ++j) {
        const double d = std::abs(a.ev[j] - b.ev[j]);
        if (d > width / 50.0) return false;
        if (j > 0) {
            // Near-touching bands are only trusted once the step is small next to their separation.
            const double sep = std::min(a.ev[j] - a.ev[j - 1], b.ev[j] - b.ev[j - 1]);
            if (sep < close && d > 0.25 * sep) return false;
        }
    }
    return true;
}

void refine(const Node& a, const Node& b, int depth, int max_depth, const std::function<Node(double)>& eval,
            double width, std::vector<Node>& out) {
    if (depth >= max_depth || smooth_step(a, b, width)) {
        out.push_back(b);
        return;
    }
    const Node mid = eval(0.5 * (a.k + b.k));
    refine(a, mid, depth + 1, max_depth, eval, width, out);
    refine(mid, b, depth + 1, max_depth, eval, width, out);
}

// match[i] = index in b linked to a.ev[i], or -1.
std::vector<int> link(const Node& a, const Node& b, double width) {
    std::vector<int> match(a.ev.size(), -1);
    if (smooth_step(a, b, width)) {
        for (size_t i = 0; i < a.ev.size(); ++i) match[i] = static_cast<int>(i);
        return match;
    }
    struct Cand {
        double d;
        int i, j;
    };
    std::vector<Cand> cands;
    for (size_t i = 0; i < a.ev.size(); ++i)
        for (size_t j = 0; j < b.ev.size(); ++j) {
            const double d = std::abs(a.ev[i] - b.ev[j]);
            if (d <= width / 50.0) cands.push_back({d, static_cast<int>(i), static_cast<int>(j)});
        }
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
        return x.d != y.d ? x.d < y.d : (x.i != y.i ? x.i < y.i : x.j < y.j);
    });
    std::vector<bool> used(b.ev.size(), false);
    for (const auto& c : cands) {
        if (match[c.i] >= 0 || used[c.j]) continue;
        match[c.i] = c.j;
        used[c.j] = true;
    }
    return match;
}

Endpoint classify(double k, double lambda, const EdgeOptions& opt, bool at_window_edge) {
    if (at_window_edge) return Endpoint::exits_k_window;
    const double w = opt.gap.width();
    if (lambda - opt.gap.lo < 0.02 * w) return Endpoint::exits_gap_low;
    if (opt.gap.hi - lambda < 0.02 * w) return Endpoint::exits_gap_high;
    (void)k;
    return Endpoint::touches_bulk;
}

}  // namespace

std::vector<DispersionBand> track_bands(const BoundaryCondition& bc, const EdgeSetup& setup,
                                        const EdgeOptions& opt) {
    if (!(opt.k_max > opt.k_min)) fail(ErrorKind::contract, "track_bands: empty k window");
    if (opt.k_resolution < 3) fail(ErrorKind::contract, "track_bands: k resolution below 3");
    if (!(opt.gap.hi > opt.gap.lo)) fail(ErrorKind::contract, "track_bands: empty gap window");
    for (double k : {opt.k_min, 0.5 * (opt.k_min + opt.k_max), opt.k_max}) require_admissible(bc, k);

    const double width = opt.gap.width();
    auto eval = [&](double k) { return Node{k, edge_eigenvalues(bc, setup, k, opt.gap, opt.lambda_resolution)}; };

    const int n = opt.k_resolution;
    std::vector<Node> grid(n);
    parallel_for(static_cast<size_t>(n), [&](size_t i) {
        const double k = opt.k_min + (opt.k_max - opt.k_min) * static_cast<double>(i) / (n - 1);
        grid[i] = eval(k);
    });

    std::vector<Node> nodes{grid[0]};
    for (int i = 0; i + 1 < n; ++i) refine(grid[i], grid[i + 1], 0, opt.max_halvings, eval, width, nodes);

    std::vector<DispersionBand> bands;
    // Band ids riding on each eigenvalue of the current node; two or more when
    // bands cross and the scan resolves a single merged eigenvalue.
    std::vector<std::vector<int>> active;
    auto start_band = [&](double k, double lambda, bool at_edge) {
        DispersionBand b;
        b.gap = opt.gap;
        b.start = {classify(k, lambda, opt, at_edge), k};
        b.samples.push_back({k, lambda});
        bands.push_back(std::move(b));
        return static_cast<int>(bands.size()) - 1;
    };
    auto predict = [&](int id, double k) {
        const auto& sm = bands[id].samples;
        if (sm.size() < 2) return sm.back().lambda;
        const BandSample& p = sm[sm.size() - 2];
        const BandSample& q = sm.back();
        return q.lambda + (q.lambda - p.lambda) / (q.k - p.k) * (k - q.k);
    };
    for (double l : nodes[0].ev) active.push_back({start_band(nodes[0].k, l, true)});

    for (size_t s = 0; s + 1 < nodes.size(); ++s) {
        const Node& a = nodes[s];
        const Node& b = nodes[s + 1];
        const std::vector<int> m = link(a, b, width);
        std::vector<std::vector<int>> next(b.ev.size());
        std::vector<bool> taken(b.ev.size(), false);
        for (int j : m)
            if (j >= 0) taken[j] = true;
        auto nearest = [&](double lambda, bool free_only) {
            int best = -1;
            for (size_t j = 0; j < b.ev.size(); ++j) {
                if (free_only && taken[j]) continue;
                const double d = std::abs(b.ev[j] - lambda);
                if (d <= width / 50.0 && (best < 0 || d < std::abs(b.ev[best] - lambda))) best = static_cast<int>(j);
            }
            return best;
        };
        auto extend = [&](int id, int j) {
            bands[id].samples.push_back({b.k, b.ev[j]});
            next[j].push_back(id);
        };
        for (size_t i = 0; i < a.ev.size(); ++i) {
            std::vector<int> ids = active[i];
            if (m[i] < 0) {
                // Two bands meeting at a crossing resolve as one eigenvalue.
                const int j = b.ev.size() < a.ev.size() ? nearest(a.ev[i], false) : -1;
                for (int id : ids) {
                    if (j >= 0) extend(id, j);
                    else bands[id].end = {classify(a.k, a.ev[i], opt, false), a.k};
                }
                continue;
            }
            if (ids.size() == 1) {
                extend(ids[0], m[i]);
                continue;
            }
            // A merged eigenvalue splits again: hand the free neighbours out by predicted value.
            std::vector<int> targets{m[i]};
            while (targets.size() < ids.size()) {
                const int j = nearest(a.ev[i], true);
                if (j < 0) break;
                taken[j] = true;
                targets.push_back(j);
            }
            std::sort(targets.begin(), targets.end(), [&](int x, int y) { return b.ev[x] < b.ev[y]; });
            std::sort(ids.begin(), ids.end(), [&](int x, int y) { return predict(x, b.k) < predict(y, b.k); });
            if (targets.size() == ids.size()) {
                for (size_t q = 0; q < ids.size(); ++q) extend(ids[q], targets[q]);
            } else {
                for (int id : ids) {
                    const double want = predict(id, b.k);
                    const int j = *std::min_element(targets.begin(), targets.end(), [&](int x, int y) {
                        return std::abs(b.ev[x] - want) < std::abs(b.ev[y] - want);
                    });
                    extend(id, j);
                }
            }
        }
        for (size_t j = 0; j < b.ev.size(); ++j)
            if (next[j].empty() && !taken[j]) next[j].push_back(start_band(b.k, b.ev[j], false));
        active = std::move(next);
    }
    for (const auto& ids : active)
        for (int id : ids) bands[id].end = {Endpoint::exits_k_window, nodes.back().k};

    const double window = opt.k_max - opt.k_min;
    for (auto& band : bands) {
        const auto& sm = band.samples;
        if (sm.size() < 2) continue;
        if (sm.back().k - sm.front().k < 0.1 * window) continue;
        double tv = 0.0;
        for (size_t i = 1; i < sm.size(); ++i) tv += std::abs(sm[i].lambda - sm[i - 1].lambda);
        band.flat = tv < 1e-6 * width;
    }
    return bands;
}

FlowResult spectral_flow(const std::vector<DispersionBand>& bands, double E) {
    FlowResult r;
    std::ostringstream note;
    for (const auto& band : bands) {
        const auto& sm = band.samples;
        if (band.flat && !sm.empty() && std::abs(sm.front().lambda - E) < 1e-6 * std::max(1.0, band.gap.width())) {
            r.flagged = true;
            note << "flat band at the fiducial level; ";
            continue;
        }
        for (size_t i = 0; i + 1 < sm.size(); ++i) {
            const bool above0 = sm[i].lambda >= E, above1 = sm[i + 1].lambda >= E;
            if (above0 == above1) continue;
            const double dk = sm[i + 1].k - sm[i].k;
            const double dl = sm[i + 1].lambda - sm[i].lambda;
            const double t = (E - sm[i].lambda) / dl;
            const double kc = sm[i].k + t * dk;
            const double slope = dl / dk;
            if (std::abs(slope) < 1e-7) {
                r.flagged = true;
                note << "tangential crossing near k = " << kc << "; ";
                continue;
            }
            const int sign = dl > 0 ? 1 : -1;
            r.crossings.push_back({kc, sign});
            r.value += sign;
        }
    }
    std::sort(r.crossings.begin(), r.crossings.end(), [](const Crossing& a, const Crossing& b) { return a.k < b.k; });
    r.note = note.str();
    return r;
}

namespace {

// Q(i) and Q(-i) at k, shared by several boundary conditions.
struct QPair {
    CMatrix qp, qm;
};

QPair q_pair(const EdgeSetup& setup, double k) {
    return {krein_Q(setup, k, I), krein_Q(setup, k, -I)};
}

cplx det_u(const BoundaryCondition& bc, const QPair& q, double k) {
    const CMatrix A = bc.A(k), B = bc.B(k);
    const cplx dp = (A - B * q.qp).determinant();
    const cplx dm = (A - B * q.qm).determinant();
    if (std::abs(dp) <= 1e-300) {
        std::ostringstream os;
        os << "W(i) is singular for '" << bc.label << "' at k = " << k;
        fail(ErrorKind::inadmissible, os.str());
    }
    return dm / dp;
}

}  // namespace

WindingResult winding(const std::function<cplx(double)>& f, double k_max) {
    if (!(k_max > 0.0)) fail(ErrorKind::contract, "winding: k_max must be positive");
    const double s_max = 2.0 / std::numbers::pi * std::atan(k_max);
    auto k_of = [](double s) { return std::tan(0.5 * std::numbers::pi * s); };
    auto value = [&](double s) {
        const cplx d = f(k_of(s));
        if (!(std::abs(std::abs(d) - 1.0) < 1e-6)) {
            std::ostringstream os;
            os << "winding: |det U| = " << std::abs(d) << " at k = " << k_of(s) << " is not 1";
            fail(ErrorKind::contract, os.str());
        }
        return d;
    };

    const int n0 = 1025;
    std::vector<double> s(n0);
    for (int i = 0; i < n0; ++i) s[i] = -s_max + 2.0 * s_max * i / (n0 - 1);
    std::vector<cplx> d(n0);
    parallel_for(static_cast<size_t>(n0), [&](size_t i) { d[i] = value(s[i]); });

    if (std::abs(d.front() - d.back()) > 0.05) {
        std::ostringstream os;
        os << "winding: det U does not close up at |k| = " << k_max << " (ends " << d.front() << ", " << d.back()
           << ")";
        fail(ErrorKind::not_comparable, os.str());
    }

    const size_t max_samples = 200000;
    for (;;) {
        std::vector<double> s2{s[0]};
        std::vector<cplx> d2{d[0]};
        bool refined = false;
        for (size_t i = 0; i + 1 < s.size(); ++i) {
            if (std::abs(std::arg(d[i + 1] / d[i])) > std::numbers::pi / 4.0) {
                const double sm = 0.5 * (s[i] + s[i + 1]);
                if (sm <= s[i] || sm >= s[i + 1])
                    fail(ErrorKind::insufficient_resolution, "winding: phase jump unresolved at machine precision");
                s2.push_back(sm);
                d2.push_back(value(sm));
                refined = true;
            }
            s2.push_back(s[i + 1]);
            d2.push_back(d[i + 1]);
        }
        s = std::move(s2);
        d = std::move(d2);
        if (!refined) break;
        if (s.size() > max_samples)
            fail(ErrorKind::insufficient_resolution, "winding: refinement exceeded the sample budget");
    }

    WindingResult r;
    r.raw = unwind_phase(d);
    const double rounded = std::round(r.raw);
    r.residual = std::abs(r.raw - rounded);
    r.value = winding_sign * static_cast<int>(rounded);
    r.samples = static_cast<int>(s.size());
    if (r.residual >= 0.05) {
        std::ostringstream os;
        os << "winding: raw value " << r.raw << " is not close to an integer";
        fail(ErrorKind::insufficient_resolution, os.str());
    }
    return r;
}

WindingResult winding(const BoundaryCondition& bc, const EdgeSetup& setup) {
    return relative_winding(bc, reference_condition(setup.triple), setup);
}

WindingResult relative_winding(const BoundaryCondition& bc1, const BoundaryCondition& bc2, const EdgeSetup& setup,
                               double k_max) {
    for (double k : {-k_max, 0.0, k_max}) {
        require_admissible(bc1, k);
        require_admissible(bc2, k);
    }
    return winding(
        [&](double k) {
            const QPair q = q_pair(setup, k);
            return det_u(bc1, q, k) / det_u(bc2, q, k);
        },
        k_max);
}

}  // namespace bec
