#pragma once

#include <cmath>

#include "biglide/mechanism.hpp"

namespace biglide {

// Equivalent slender-beam description of a leg: axial, two bending planes,
// torsion, plus mass per unit length. Rigidities are cross-section
// properties and stay fixed under length scaling.
struct BeamParams {
    double EA = 0.0;
    double EIy = 0.0;
    double EIz = 0.0;
    double GJ = 0.0;
    double L = 0.0;
    double mass_per_length = 0.0;
};

// Tip compliance of a cantilever of length L, local x along the beam:
// free-end deflection per unit tip load, Euler-Bernoulli (no shear).
inline Mat6 beam_end_compliance(double ea, double eiy, double eiz, double gj,
                                double l) {
    Mat6 c = Mat6::Zero();
    c(0, 0) = l / ea;
    c(1, 1) = l * l * l / (3.0 * eiz);
    c(2, 2) = l * l * l / (3.0 * eiy);
    c(3, 3) = l / gj;
    c(4, 4) = l / eiy;
    c(5, 5) = l / eiz;
    c(1, 5) = c(5, 1) = l * l / (2.0 * eiz);
    c(2, 4) = c(4, 2) = -l * l / (2.0 * eiy);
    return c;
}

inline Mat6 beam_end_compliance(const BeamParams& b) {
    return beam_end_compliance(b.EA, b.EIy, b.EIz, b.GJ, b.L);
}

// Inverts the diagonal of the cantilever formulas: the beam whose tip
// compliance diagonal matches a measured 6x6 compliance. Off-diagonal
// couplings of the source matrix are dropped by construction.
inline BeamParams fit_equivalent_beam(const Mat6& compliance, double l,
                                      double mass) {
    if (!(l > 0.0) || !(mass > 0.0))
        throw NonPositiveCompliance("fit_equivalent_beam: length and mass must be > 0");
    const Mat6 c = symmetrized_compliance(compliance);
    for (int i = 0; i < 4; ++i)
        if (!(c(i, i) > 0.0))
            throw NonPositiveCompliance(
                "fit_equivalent_beam: compliance diagonal must be > 0");
    BeamParams b;
    b.EA = l / c(0, 0);
    b.EIz = l * l * l / (3.0 * c(1, 1));
    b.EIy = l * l * l / (3.0 * c(2, 2));
    b.GJ = l / c(3, 3);
    b.L = l;
    b.mass_per_length = mass / l;
    return b;
}

struct ScaledMechanism {
    Geometry geometry;
    double m_leg1 = 0.0;
    double m_leg2 = 0.0;
};

// Uniform leg-length scaling with the rail spacing adjusted so the usable
// stroke stays that of the unscaled machine; masses scale linearly
// (constant cross-section). The spacing is nudged by ulps so the stroke
// recomputed through workspace_bounds lands as close to the original as
// double rounding permits: exact whenever representable, otherwise within
// one ulp (near the reference dimensions the spacing grid is twice as
// coarse as the stroke grid, so some targets fall between achievable
// values).
inline ScaledMechanism scale_geometry(const Geometry& g0, double m_leg1,
                                      double m_leg2, double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw InvalidAlpha("scale_geometry: alpha must be positive and finite");
    const double d0 = workspace_bounds(g0).stroke();

    Geometry g = g0;
    g.L1 = alpha * g0.L1;
    g.L2 = alpha * g0.L2;
    g.a = (g.L1 + g.L2) - d0;
    if (!(g.a > 0.0))
        throw InvalidAlpha("scale_geometry: scaled rail spacing is not positive");

    auto stroke_err = [&](double a) {
        Geometry gt = g;
        gt.a = a;
        return workspace_bounds(gt).stroke() - d0;
    };
    double best = g.a;
    double best_err = std::abs(stroke_err(best));
    for (int dir = -1; dir <= 1 && best_err != 0.0; dir += 2) {
        double a = g.a;
        for (int i = 0; i < 8 && best_err != 0.0; ++i) {
            a = std::nextafter(a, dir < 0 ? 0.0 : g.a + 1.0);
            const double err = std::abs(stroke_err(a));
            if (err < best_err) {
                best = a;
                best_err = err;
            }
        }
    }
    g.a = best;
    return {g, alpha * m_leg1, alpha * m_leg2};
}

} // namespace biglide
