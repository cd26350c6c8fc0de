#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bec/extension.hpp"

namespace bec {

// Relation between the raw winding of det U, U = W(i)^{-1} W(-i), and the
// spectral-flow difference SF(bc) - SF(reference). Frozen after calibration
// on the Laplacian Robin family.
inline constexpr int winding_sign = -1;

// sigma_min of (A G1 - B G2) Q_J at real lambda, Q_J an orthonormal basis of
// the decaying jets, divided by ||A G1 - B G2||. Zero exactly at eigenvalues
// of the extension.
double boundary_singularity(const BoundaryCondition& bc, const EdgeSetup& setup, double k, double lambda);

std::vector<double> edge_eigenvalues(const BoundaryCondition& bc, const EdgeSetup& setup, double k,
                                     const GapWindow& gap, int lambda_resolution = 400);

enum class Endpoint { exits_gap_low, exits_gap_high, exits_k_window, touches_bulk };

const char* to_string(Endpoint e);

struct BandEnd {
    Endpoint kind = Endpoint::exits_k_window;
    double k = 0.0;
};

struct BandSample {
    double k;
    double lambda;
};

struct DispersionBand {
    std::vector<BandSample> samples;
    GapWindow gap;
    BandEnd start, end;
    bool flat = false;
};

struct EdgeOptions {
    double k_min = -20.0;
    double k_max = 20.0;
    int k_resolution = 801;
    int lambda_resolution = 400;
    GapWindow gap;
    int max_halvings = 8;
};

std::vector<DispersionBand> track_bands(const BoundaryCondition& bc, const EdgeSetup& setup,
                                        const EdgeOptions& opt);

struct Crossing {
    double k;
    int sign;
};

struct FlowResult {
    int value = 0;
    std::vector<Crossing> crossings;
    bool flagged = false;
    std::string note;
};

FlowResult spectral_flow(const std::vector<DispersionBand>& bands, double E);

struct WindingResult {
    int value = 0;       // calibrated: equals SF(bc1) - SF(bc2)
    double raw = 0.0;    // unrounded winding of the determinant
    double residual = 0.0;
    int samples = 0;
};

// Winding of k -> det U(k) over k in [-k_max, k_max] through the tangent
// compactification, refined until every phase step is below pi/4.
WindingResult winding(const std::function<cplx(double)>& det_u, double k_max = 1e4);

// Winding of det U for bc relative to the triple's reference condition.
WindingResult winding(const BoundaryCondition& bc, const EdgeSetup& setup);

// Winding of det(U1 U2^{-1}); value is SF(bc1) - SF(bc2) by the calibration.
WindingResult relative_winding(const BoundaryCondition& bc1, const BoundaryCondition& bc2,
                               const EdgeSetup& setup, double k_max = 1e4);

}  // namespace bec
